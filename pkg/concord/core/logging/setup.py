"""
Модуль для настройки и инициализации системы логирования.
"""
import logging
import os
import sys
from typing import Any, Dict, List, Optional

from concord.config import settings
from concord.core.logging.json_formatter import JsonFormatter
from concord.core.logging.context_logger import ContextLogger

_TEXT_FORMAT = "%(asctime)s [%(levelname)s] %(name)s:%(lineno)d - %(message)s"


def _build_formatter(json_format: bool, additional_fields: Optional[Dict[str, Any]]) -> logging.Formatter:
    if json_format:
        return JsonFormatter(
            additional_fields=additional_fields or {
                "app_name": settings.APP_NAME,
                "app_version": settings.APP_VERSION,
            }
        )
    return logging.Formatter(_TEXT_FORMAT)


def configure_logging(
    log_level: str = "WARNING",
    json_format: bool = True,
    log_file: Optional[str] = None,
    console_output: bool = True,
    additional_fields: Optional[Dict[str, Any]] = None
) -> None:
    """
    Настраивает систему логирования с указанными параметрами.

    Консольный обработчик пишет в stderr: stdout занят отчетами CLI.

    Args:
        log_level: Уровень логирования (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_format: Использовать ли JSON формат для логов
        log_file: Путь к файлу лога (если None, запись в файл не выполняется)
        console_output: Выводить ли логи в консоль
        additional_fields: Дополнительные поля для всех логов
    """
    level = getattr(logging, log_level.upper())
    package_logger = logging.getLogger("concord")
    package_logger.setLevel(level)

    for handler in package_logger.handlers[:]:
        package_logger.removeHandler(handler)
        handler.close()

    handlers: List[logging.Handler] = []

    if console_output:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setFormatter(_build_formatter(json_format, additional_fields))
        handlers.append(console_handler)

    if log_file:
        log_dir = os.path.dirname(log_file)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(_build_formatter(json_format, additional_fields))
        handlers.append(file_handler)

    for handler in handlers:
        package_logger.addHandler(handler)

    ContextLogger.get_instance().set_level(level)

    package_logger.debug(
        f"Система логирования инициализирована с уровнем {log_level}"
        f", формат {'JSON' if json_format else 'TEXT'}"
    )


def get_logger(name: str, **context) -> logging.LoggerAdapter:
    """
    Создает и возвращает логгер с указанным именем и контекстом.

    Args:
        name: Имя логгера
        **context: Контекстные данные для логгера

    Returns:
        LoggerAdapter, добавляющий контекст запуска и переданный контекст
    """
    return ContextLogger.get_instance().with_context(name, **context)


def configure_from_settings(level_override: Optional[str] = None) -> None:
    """
    Настраивает систему логирования из настроек библиотеки.
    """
    log_settings = settings.logging
    configure_logging(
        log_level=level_override or log_settings.LEVEL,
        json_format=log_settings.FORMAT == "json",
        log_file=log_settings.FILE,
        console_output=True,
    )
