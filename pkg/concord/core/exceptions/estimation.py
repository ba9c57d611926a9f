"""
Модуль, содержащий исключения, возникающие при оценивании вероятности согласованности.
"""
from typing import Any, Dict, Optional

from concord.core.exceptions.base import ConcordError


class EstimationError(ConcordError):
    """
    Базовый класс ошибок оценивания.
    """

    default_code = "estimation"


class NoComparablePairsError(EstimationError):
    """
    Исключение, возникающее, когда нет ни одной сопоставимой пары (n_t = 0).

    Атрибуты:
        pair_spec (Optional[str]): Описание определения пар (контраст, допуск, порог v)
        counts (Optional[Dict[str, int]]): Подсчитанные пары на момент ошибки
    """

    default_code = "no_comparable_pairs"

    def __init__(
        self,
        message: str = "Нет сопоставимых пар",
        pair_spec: Optional[str] = None,
        counts: Optional[Dict[str, Any]] = None,
        **kwargs
    ):
        self.pair_spec = pair_spec
        self.counts = counts

        details = kwargs.pop('details', None) or {}
        if pair_spec:
            details['pair_spec'] = pair_spec
        if counts:
            details['counts'] = counts

        super().__init__(message, details=details, **kwargs)


class DegenerateVarianceError(EstimationError):
    """
    Исключение, возникающее, когда дисперсию оценки нельзя вычислить:
    меньше двух наблюдений выборки имеют сопоставимые пары.
    """

    default_code = "degenerate_variance"

    def __init__(
        self,
        message: str = "Недостаточно наблюдений для оценки дисперсии",
        contributing: int = 0,
        **kwargs
    ):
        self.contributing = contributing
        details = kwargs.pop('details', None) or {}
        details['contributing'] = contributing
        super().__init__(message, details=details, **kwargs)


class EmptyInputError(EstimationError):
    """
    Исключение при пустом наборе наблюдений.
    """

    default_code = "empty_input"


class EmptyGroupError(EstimationError):
    """
    Исключение, возникающее, когда одна из групп определения пуста.

    Атрибуты:
        group (Optional[str]): Метка группы ("A" или "B")
    """

    default_code = "empty_group"

    def __init__(self, message: str, group: Optional[str] = None, **kwargs):
        self.group = group
        details = kwargs.pop('details', None) or {}
        if group:
            details['group'] = group
        super().__init__(message, details=details, **kwargs)
