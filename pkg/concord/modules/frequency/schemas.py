"""
Pydantic модели для частотных вероятностей согласованности и локальных кривых.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from concord.config import settings
from concord.modules.pairs.schemas import ConcordanceEstimate, FrequencyContrast


def default_lambda_grid(points: Optional[int] = None) -> Tuple[float, ...]:
    """Равномерная сетка {1/p, 2/p, ..., 1} (по умолчанию 0.05, 0.10, ..., 1.00)"""
    points = points or settings.curve.GRID_POINTS
    return tuple(round((i + 1) / points, 10) for i in range(points))


CurveStatus = Literal["ok", "insufficient-pairs", "no-comparable-pairs"]


class LocalCurveConfig(BaseModel):
    """Сетка λ, полуширина окна и минимальное число сопоставимых пар в точке"""
    model_config = ConfigDict(frozen=True)

    lambda_grid: Tuple[float, ...] = Field(default_factory=default_lambda_grid, min_length=1)
    window: float = Field(default_factory=lambda: settings.curve.WINDOW, gt=0.0)
    min_pairs: int = Field(default_factory=lambda: settings.curve.MIN_PAIRS, ge=1)

    @field_validator('lambda_grid')
    @classmethod
    def grid_ascending(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not (0.0 < x <= 1.0) for x in v):
            raise ValueError('grid points must lie in (0, 1]')
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError('grid must be strictly ascending')
        return v


class CurvePoint(BaseModel):
    """
    Точка кривой (λ, C(λ)) или (v, C(v)).

    Без оценки точка несет маркер insufficient-pairs или no-comparable-pairs.
    """
    model_config = ConfigDict(frozen=True)

    x: float
    status: CurveStatus = "ok"
    estimate: Optional[ConcordanceEstimate] = None
    n_pairs: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def estimate_matches_status(self) -> 'CurvePoint':
        if (self.status == "ok") != (self.estimate is not None):
            raise ValueError('a point carries an estimate exactly when its status is ok')
        return self

    @property
    def value(self) -> Optional[float]:
        return self.estimate.value if self.estimate is not None else None


class ContrastResult(BaseModel):
    """Строка сводной таблицы контрастов"""
    model_config = ConfigDict(frozen=True)

    contrast: FrequencyContrast
    status: CurveStatus = "ok"
    estimate: Optional[ConcordanceEstimate] = None
    message: Optional[str] = None


class ModelComparison(BaseModel):
    """Две модели на одних и тех же полисах с общими выборками; difference = C_alt - C_base"""
    model_config = ConfigDict(frozen=True)

    contrast: FrequencyContrast
    baseline: ConcordanceEstimate
    alternative: ConcordanceEstimate
    difference: float


FrequencyCurve = List[CurvePoint]
