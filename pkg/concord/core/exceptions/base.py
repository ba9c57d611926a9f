"""
Базовый класс исключений библиотеки.
"""
from typing import Any, Dict, Optional


class ConcordError(Exception):
    """
    Базовый класс для всех исключений библиотеки.

    Атрибуты:
        message (str): Сообщение об ошибке
        code (Optional[str]): Код ошибки
        details (Dict[str, Any]): Дополнительные детали об ошибке
        cause (Optional[Exception]): Исходное исключение, вызвавшее эту ошибку
    """

    default_code: Optional[str] = None

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None
    ):
        self.message = message
        self.code = code or self.default_code
        self.details = details or {}
        self.cause = cause
        super().__init__(self.format_message())

    def format_message(self) -> str:
        parts = [self.message]

        if self.code:
            parts.append(f"[Код: {self.code}]")

        if self.details:
            details_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            parts.append(f"[Детали: {details_str}]")

        if self.cause:
            parts.append(f"[Первопричина: {type(self.cause).__name__}: {self.cause}]")

        return " ".join(parts)

    def to_dict(self) -> Dict[str, Any]:
        """
        Преобразует исключение в словарь для сериализации в отчет.
        """
        error_dict: Dict[str, Any] = {
            "error_type": self.__class__.__name__,
            "message": self.message,
        }

        if self.code:
            error_dict["code"] = self.code

        if self.details:
            error_dict["details"] = self.details

        if self.cause:
            error_dict["cause"] = {
                "type": type(self.cause).__name__,
                "message": str(self.cause)
            }

        return error_dict

    @classmethod
    def from_exception(cls, exception: Exception, message: Optional[str] = None, **kwargs) -> 'ConcordError':
        return cls(message=message or str(exception), cause=exception, **kwargs)


class ConfigurationError(ConcordError):
    """
    Исключение при недопустимых параметрах оценивания.

    Атрибуты:
        parameter (Optional[str]): Имя параметра
        value (Any): Переданное значение
    """

    default_code = "configuration"

    def __init__(self, message: str, parameter: Optional[str] = None, value: Any = None, **kwargs):
        self.parameter = parameter
        self.value = value

        details = kwargs.pop('details', None) or {}
        if parameter:
            details['parameter'] = parameter
        if value is not None:
            details['value'] = value

        super().__init__(message, details=details, **kwargs)
