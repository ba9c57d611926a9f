"""
Пакет исключений библиотеки concord.

Содержит иерархию классов исключений для оценивания, конфигурации
и работы с наборами данных.
"""
from concord.core.exceptions.base import ConcordError, ConfigurationError
from concord.core.exceptions.estimation import (
    EstimationError,
    NoComparablePairsError,
    DegenerateVarianceError,
    EmptyInputError,
    EmptyGroupError,
)
from concord.core.exceptions.dataset import (
    DatasetError,
    DatasetNotFoundError,
    MissingColumnError,
    AllRowsRejectedError,
    RecordValidationError,
)

__all__ = [
    "ConcordError",
    "ConfigurationError",
    "EstimationError",
    "NoComparablePairsError",
    "DegenerateVarianceError",
    "EmptyInputError",
    "EmptyGroupError",
    "DatasetError",
    "DatasetNotFoundError",
    "MissingColumnError",
    "AllRowsRejectedError",
    "RecordValidationError",
]
