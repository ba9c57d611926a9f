"""
Пакет для структурированного логирования в формате JSON и с поддержкой контекста.
"""
from concord.core.logging.json_formatter import JsonFormatter
from concord.core.logging.context_logger import (
    ContextLogger, ContextLoggerAdapter
)
from concord.core.logging.setup import (
    configure_logging, get_logger, configure_from_settings
)

__all__ = [
    "JsonFormatter",
    "ContextLogger",
    "ContextLoggerAdapter",
    "configure_logging",
    "get_logger",
    "configure_from_settings",
]
