"""
Модуль, содержащий форматтер для структурированного логирования в формате JSON.
"""
import datetime
import json
import logging
import traceback
from typing import Any, Dict, List, Optional

import numpy as np


# Стандартные атрибуты LogRecord, которые не попадают в extra
_STANDARD_ATTRS = {
    'args', 'asctime', 'created', 'exc_info', 'exc_text', 'filename',
    'funcName', 'levelname', 'levelno', 'lineno', 'module', 'msecs',
    'message', 'msg', 'name', 'pathname', 'process', 'processName',
    'relativeCreated', 'stack_info', 'thread', 'threadName', 'taskName'
}


def _to_jsonable(value: Any) -> Any:
    """
    Приводит значение к типу, сериализуемому в JSON.

    Скаляры и массивы numpy переводятся в числа и списки Python,
    прочие несериализуемые объекты - в строку.
    """
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_to_jsonable(v) for v in value]
    try:
        json.dumps(value)
        return value
    except (TypeError, ValueError):
        return str(value)


class JsonFormatter(logging.Formatter):
    """
    Форматтер для вывода логов в формате JSON.

    Каждая запись лога преобразуется в JSON-объект со стандартными полями:
    timestamp, level, logger, message, module, line, function, process, thread.
    Статические поля (app_name, app_version) добавляются ко всем записям,
    поля из extra собираются в отдельный объект "extra".
    """

    def __init__(
        self,
        include_traceback: bool = True,
        exclude_fields: Optional[List[str]] = None,
        additional_fields: Optional[Dict[str, Any]] = None,
        timestamp_format: str = "%Y-%m-%dT%H:%M:%S.%fZ",
    ):
        """
        Args:
            include_traceback: Включать ли трассировку стека при исключениях
            exclude_fields: Список полей, которые не должны включаться в вывод
            additional_fields: Дополнительные статические поля для всех логов
            timestamp_format: Формат временной метки
        """
        super().__init__()
        self.include_traceback = include_traceback
        self.exclude_fields = exclude_fields or []
        self.additional_fields = additional_fields or {}
        self.timestamp_format = timestamp_format

    def format(self, record: logging.LogRecord) -> str:
        log_data: Dict[str, Any] = {
            "timestamp": datetime.datetime.fromtimestamp(
                record.created, tz=datetime.timezone.utc
            ).strftime(self.timestamp_format),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "line": record.lineno,
            "function": record.funcName,
            "process": record.process,
            "thread": record.thread,
        }
        log_data.update(self.additional_fields)

        extra = {
            attr: _to_jsonable(value)
            for attr, value in record.__dict__.items()
            if attr not in _STANDARD_ATTRS
        }
        if extra:
            log_data["extra"] = extra

        if record.exc_info:
            exc_type, exc_value, exc_tb = record.exc_info
            exception_data = {
                "exception": exc_type.__name__,
                "exception_message": str(exc_value),
            }
            if self.include_traceback and exc_tb:
                tb_lines = traceback.format_exception(exc_type, exc_value, exc_tb)
                exception_data["traceback"] = "".join(tb_lines).strip()
            log_data["exception_data"] = exception_data

        for field in self.exclude_fields:
            log_data.pop(field, None)

        try:
            return json.dumps(log_data, ensure_ascii=False)
        except (TypeError, ValueError) as e:
            return json.dumps({
                "timestamp": log_data["timestamp"],
                "level": "ERROR",
                "message": f"Ошибка форматирования лога: {e}",
                "original_message": str(record.getMessage()),
            })
