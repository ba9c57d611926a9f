"""
Модели аппроксимации центроидами: конфигурация k-means и сводки кластеров по корзинам экспозиции.
"""
from dataclasses import dataclass
from typing import List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from concord.config import settings


class KMeansConfig(BaseModel):
    """
    Параметры кластерной аппроксимации.

    - k: число кластеров в каждой группе
    - exposure_bins: число корзин распределения экспозиции (1 - без разбиения)
    - reruns: число перезапусков Lloyd с разными зернами
    - algorithm: lloyd (k-means++ и итерации Lloyd) или exact (динамическое программирование)
    - bin_mode: quantile (равные доли наблюдений) или width (равная ширина)
    - tie_mode: strict (совпавшие центроиды дают 0), half (1/2), exclude (исключаются из знаменателя)
    """
    model_config = ConfigDict(frozen=True)

    k: int = Field(default_factory=lambda: settings.cluster.K, ge=1)
    exposure_bins: int = Field(default_factory=lambda: settings.cluster.EXPOSURE_BINS, ge=1)
    reruns: int = Field(default_factory=lambda: settings.cluster.RERUNS, ge=1)
    max_iter: int = Field(default_factory=lambda: settings.cluster.MAX_ITER, ge=1)
    tol: float = Field(default_factory=lambda: settings.cluster.TOL, gt=0.0)
    seed: int = Field(default_factory=lambda: settings.sampling.SEED, ge=0, lt=2 ** 64)
    algorithm: Literal["lloyd", "exact"] = Field(default_factory=lambda: settings.cluster.ALGORITHM)
    bin_mode: Literal["quantile", "width"] = Field(default_factory=lambda: settings.cluster.BIN_MODE)
    tie_mode: Literal["strict", "half", "exclude"] = Field(default_factory=lambda: settings.cluster.TIE_MODE)


@dataclass(frozen=True, eq=False)
class Clustering:
    """Центроиды одной группы (по возрастанию) с весами w^l = n_l / n"""
    centroids: np.ndarray
    weights: np.ndarray
    sizes: np.ndarray
    wcss: float = 0.0
    rerun: int = 0

    def __post_init__(self):
        for name, dtype in (("centroids", np.float64), ("weights", np.float64), ("sizes", np.int64)):
            array = np.array(getattr(self, name), dtype=dtype, copy=True)
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    def __len__(self) -> int:
        return int(self.centroids.shape[0])

    @property
    def pairs(self) -> List[Tuple[float, float]]:
        """Пары (центроид, вес)"""
        return list(zip(self.centroids.tolist(), self.weights.tolist()))

    @property
    def size(self) -> int:
        return int(self.sizes.sum())


@dataclass(frozen=True, eq=False)
class ClusterSummary:
    """Кластеры групп A и B в одной корзине экспозиции"""
    bin_index: int
    exposure_low: float
    exposure_high: float
    group_a: Clustering
    group_b: Clustering

    @property
    def pair_count(self) -> int:
        """Число пар A x B в корзине, вес корзины при объединении"""
        return self.group_a.size * self.group_b.size
