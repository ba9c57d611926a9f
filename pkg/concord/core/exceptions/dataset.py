"""
Модуль, содержащий иерархию исключений для загрузки и проверки наборов данных.
"""
from typing import Any, Dict, List, Optional, Sequence

from concord.core.exceptions.base import ConcordError


class DatasetError(ConcordError):
    """
    Базовый класс ошибок, связанных с набором данных.

    Атрибуты:
        path (Optional[str]): Путь к исходному файлу
    """

    default_code = "dataset"

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        self.path = path
        details = kwargs.pop('details', None) or {}
        if path:
            details['path'] = path
        super().__init__(message, details=details, **kwargs)


class DatasetNotFoundError(DatasetError):
    """
    Исключение, возникающее, когда входной файл не найден.
    """

    default_code = "file_not_found"


class MissingColumnError(DatasetError):
    """
    Исключение, возникающее при отсутствии обязательной колонки.

    Атрибуты:
        missing (List[str]): Отсутствующие колонки
        available (List[str]): Колонки, найденные в заголовке
    """

    default_code = "missing_column"

    def __init__(
        self,
        message: str,
        missing: Sequence[str] = (),
        available: Sequence[str] = (),
        **kwargs
    ):
        self.missing = list(missing)
        self.available = list(available)
        details = kwargs.pop('details', None) or {}
        details['missing'] = self.missing
        details['available'] = self.available
        super().__init__(message, details=details, **kwargs)


class AllRowsRejectedError(DatasetError):
    """
    Исключение, возникающее, когда ни одна строка файла не прошла проверку.

    Атрибуты:
        row_count (int): Число строк данных
        reasons (List[str]): Первые причины отклонения
    """

    default_code = "all_rows_rejected"

    def __init__(self, message: str, row_count: int = 0, reasons: Sequence[str] = (), **kwargs):
        self.row_count = row_count
        self.reasons = list(reasons)
        details = kwargs.pop('details', None) or {}
        details['row_count'] = row_count
        if self.reasons:
            details['reasons'] = self.reasons[:5]
        super().__init__(message, details=details, **kwargs)


class RecordValidationError(DatasetError):
    """
    Исключение при нарушении инвариантов записи или столбцового набора.

    Атрибуты:
        field_errors (Dict[str, List[str]]): Ошибки по полям
    """

    default_code = "record_validation"

    def __init__(self, message: str, field_errors: Optional[Dict[str, List[str]]] = None, **kwargs):
        self.field_errors = field_errors or {}
        details = kwargs.pop('details', None) or {}
        if self.field_errors:
            details['field_errors'] = self.field_errors
        super().__init__(message, details=details, **kwargs)

    def format_message(self) -> str:
        base_message = super().format_message()
        if not self.field_errors:
            return base_message
        field_errors_str = "; ".join(
            f"{field}: {', '.join(errors)}" for field, errors in self.field_errors.items()
        )
        return f"{base_message} Ошибки полей: {field_errors_str}"
