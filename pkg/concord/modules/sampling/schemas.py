"""
Модели выборочного алгоритма: конфигурация, сводка выборки, компоненты дисперсии.
"""
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from concord.config import settings


class SamplingConfig(BaseModel):
    """Параметры выборочной оценки: S, зерно генератора, уровень α"""
    model_config = ConfigDict(frozen=True)

    sample_size: int = Field(default_factory=lambda: settings.sampling.FREQUENCY_SIZE, ge=1)
    seed: int = Field(default_factory=lambda: settings.sampling.SEED, ge=0, lt=2 ** 64)
    alpha: float = Field(default_factory=lambda: settings.sampling.ALPHA, gt=0.0, lt=1.0)

    @classmethod
    def for_severity(cls, **overrides) -> 'SamplingConfig':
        values = {"sample_size": settings.sampling.SEVERITY_SIZE, **overrides}
        return cls(**values)


@dataclass(frozen=True, eq=False)
class SampleTally:
    """
    Счетчики n*_{c,i}, n*_{t,i} для каждого выбранного наблюдения в порядке выбора.

    Наблюдения без сопоставимых пар сохраняются с нулевыми счетчиками.
    """
    concordant: np.ndarray
    comparable: np.ndarray
    tied: np.ndarray
    draws: Optional[np.ndarray] = None
    requested_size: Optional[int] = None

    def __post_init__(self):
        for name in ("concordant", "comparable", "tied"):
            array = np.array(getattr(self, name), dtype=np.int64, copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)
        if not (self.concordant.shape == self.comparable.shape == self.tied.shape):
            raise ValueError("tally arrays must have equal length")
        if np.any(self.concordant < 0) or np.any(self.concordant > self.comparable):
            raise ValueError("every entry must satisfy 0 <= concordant <= comparable")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> 'SampleTally':
        pairs = list(pairs)
        concordant = [c for c, _ in pairs]
        comparable = [t for _, t in pairs]
        return cls(concordant=concordant, comparable=comparable, tied=[0] * len(pairs))

    def __len__(self) -> int:
        return int(self.comparable.shape[0])

    @property
    def per_observation(self) -> List[Tuple[int, int]]:
        return list(zip(self.concordant.tolist(), self.comparable.tolist()))

    @property
    def total_concordant(self) -> int:
        return int(self.concordant.sum())

    @property
    def total_comparable(self) -> int:
        return int(self.comparable.sum())

    @property
    def total_tied(self) -> int:
        return int(self.tied.sum())

    @property
    def contributing(self) -> int:
        """Число наблюдений выборки с хотя бы одной сопоставимой парой"""
        return int(np.count_nonzero(self.comparable))


class VarianceComponents(BaseModel):
    """Оценки π̂_c, π̂_d, π̂_cc, π̂_dd, π̂_cd по сводке выборки"""
    model_config = ConfigDict(frozen=True)

    pi_c: float = Field(..., ge=0.0, le=1.0)
    pi_d: float = Field(..., ge=0.0, le=1.0)
    pi_cc: float = Field(..., ge=0.0, le=1.0)
    pi_dd: float = Field(..., ge=0.0, le=1.0)
    pi_cd: float = Field(..., ge=0.0, le=1.0)

    @property
    def variance(self) -> float:
        """4(π̂_d² π̂_cc − 2 π̂_c π̂_d π̂_cd + π̂_c² π̂_dd) / (π̂_c + π̂_d)²"""
        numerator = 4.0 * (
            self.pi_d ** 2 * self.pi_cc
            - 2.0 * self.pi_c * self.pi_d * self.pi_cd
            + self.pi_c ** 2 * self.pi_dd
        )
        return max(0.0, numerator / (self.pi_c + self.pi_d) ** 2)
