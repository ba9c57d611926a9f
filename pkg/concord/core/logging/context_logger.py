"""
Модуль, содержащий классы для контекстно-зависимого логирования.

Контекст запуска (идентификатор запуска, подкоманда CLI) хранится в ContextVar
и добавляется ко всем записям, созданным через ContextLoggerAdapter.
"""
import logging
import threading
from contextvars import ContextVar
from logging import LoggerAdapter
from typing import Any, Dict, Optional


# Контекстная переменная для хранения информации о текущем запуске
_run_context: ContextVar[Dict[str, Any]] = ContextVar('run_context', default={})


class ContextLoggerAdapter(LoggerAdapter):
    """
    Адаптер логгера, добавляющий контекстную информацию к записям лога.
    """

    def process(self, msg: str, kwargs: Dict[str, Any]) -> tuple[str, Dict[str, Any]]:
        extra = dict(kwargs.get('extra') or {})

        # Контекст адаптера имеет приоритет над глобальным контекстом запуска
        for key, value in (self.extra or {}).items():
            extra.setdefault(key, value)
        for key, value in _run_context.get().items():
            extra.setdefault(key, value)

        kwargs['extra'] = extra
        return msg, kwargs


class ContextLogger:
    """
    Логгер с поддержкой контекста запуска (Singleton).
    """

    _instance: Optional['ContextLogger'] = None
    _lock = threading.Lock()

    def __new__(cls, *args, **kwargs) -> 'ContextLogger':
        with cls._lock:
            if cls._instance is None:
                cls._instance = super(ContextLogger, cls).__new__(cls)
            return cls._instance

    def __init__(self, logger_name: str = "concord", level: int = logging.WARNING):
        """
        Args:
            logger_name: Имя базового логгера
            level: Уровень логгирования
        """
        # Инициализируем только один раз для паттерна Singleton
        if not hasattr(self, '_initialized'):
            self.logger = logging.getLogger(logger_name)
            self.logger.setLevel(level)
            self._initialized = True

    @classmethod
    def get_instance(cls, logger_name: str = "concord", level: int = logging.WARNING) -> 'ContextLogger':
        return cls(logger_name, level)

    @classmethod
    def set_context(cls, **context) -> None:
        """
        Устанавливает глобальный контекст запуска для всех логгеров.
        """
        current_context = _run_context.get().copy()
        current_context.update(context)
        _run_context.set(current_context)

    @classmethod
    def clear_context(cls) -> None:
        _run_context.set({})

    @classmethod
    def current_context(cls) -> Dict[str, Any]:
        return dict(_run_context.get())

    def with_context(self, name: Optional[str] = None, **context) -> LoggerAdapter:
        """
        Создает адаптер логгера с дополнительным контекстом.

        Args:
            name: Имя логгера (по умолчанию - базовый логгер)
            **context: Ключи и значения контекста
        """
        logger = logging.getLogger(name) if name else self.logger
        return ContextLoggerAdapter(logger, context)

    def set_level(self, level: int) -> None:
        self.logger.setLevel(level)
