"""
Сервис сравнения движков по точности и времени.
Строит таблицу "корзины экспозиции x число кластеров" для кластерной
аппроксимации и строку выборочной оценки с ДИ.
"""
import time
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import BaseModel, ConfigDict

from concord.core.exceptions import ConcordError, ConfigurationError
from concord.core.logging import get_logger
from concord.modules.cluster.schemas import KMeansConfig
from concord.modules.cluster.service import clustered_concordance
from concord.modules.pairs.frames import FrequencyInput, as_frequency_frame
from concord.modules.pairs.schemas import FrequencyContrast, FrequencyPairSpec
from concord.modules.sampling.schemas import SamplingConfig
from concord.modules.sampling.service import sampled_concordance

logger = get_logger(__name__)

METHODS = ("sample", "kmeans")


class BenchmarkCell(BaseModel):
    """Ячейка таблицы: оценка и время в секундах"""
    model_config = ConfigDict(frozen=True)

    method: str
    k: Optional[int] = None
    bins: Optional[int] = None
    reruns: Optional[int] = None
    sample_size: Optional[int] = None
    value: Optional[float] = None
    ci_lower: Optional[float] = None
    ci_upper: Optional[float] = None
    seconds: float
    status: str = "ok"


def align_reruns(ks: Sequence[int], reruns: Sequence[int]) -> List[int]:
    """Одно значение reruns применяется ко всем k, список сопоставляется с k по позиции"""
    if len(reruns) == 1:
        return [reruns[0]] * len(ks)
    if len(reruns) != len(ks):
        raise ConfigurationError(
            "Список --reruns должен содержать одно значение или по значению на каждое k",
            parameter="reruns",
            value=list(reruns),
        )
    return list(reruns)


class BenchmarkService:
    """Прогон движков на одном наборе полисов"""

    def __init__(
        self,
        records: FrequencyInput,
        contrast: FrequencyContrast,
        exposure_tol: float,
        workers: Optional[int] = None,
    ):
        self.frame = as_frequency_frame(records)
        self.spec = FrequencyPairSpec(contrast=FrequencyContrast(contrast), exposure_tol=exposure_tol)
        self.workers = workers

    def run_sampled(self, config: SamplingConfig) -> BenchmarkCell:
        started = time.perf_counter()
        try:
            result = sampled_concordance(self.frame, self.spec, config, self.workers)
        except ConcordError as e:
            logger.warning("sampled benchmark cell failed", extra={"reason": e.message})
            return BenchmarkCell(method="sample", sample_size=config.sample_size,
                                 seconds=time.perf_counter() - started, status=e.code or "error")
        lower, upper = result.ci_bounds
        return BenchmarkCell(
            method="sample",
            sample_size=config.sample_size,
            value=result.value,
            ci_lower=lower,
            ci_upper=upper,
            seconds=time.perf_counter() - started,
        )

    def run_clustered(self, config: KMeansConfig) -> BenchmarkCell:
        started = time.perf_counter()
        try:
            result = clustered_concordance(self.frame, self.spec, config, self.workers)
        except ConcordError as e:
            logger.warning("clustered benchmark cell failed", extra={"reason": e.message, "k": config.k})
            return BenchmarkCell(method="kmeans", k=config.k, bins=config.exposure_bins, reruns=config.reruns,
                                 seconds=time.perf_counter() - started, status=e.code or "error")
        return BenchmarkCell(
            method="kmeans",
            k=config.k,
            bins=config.exposure_bins,
            reruns=config.reruns,
            value=result.value,
            seconds=time.perf_counter() - started,
        )

    def run(
        self,
        methods: Sequence[str],
        ks: Sequence[int],
        bins: Sequence[int],
        reruns: Sequence[int],
        sampling: SamplingConfig,
        cluster: KMeansConfig,
    ) -> List[BenchmarkCell]:
        """
        Выполняет выборочную оценку и/или все сочетания (корзины, k) кластерной.

        Raises:
            ConfigurationError: Неизвестный метод или несогласованный список reruns
        """
        unknown = [m for m in methods if m not in METHODS]
        if unknown:
            raise ConfigurationError("Неизвестный метод бенчмарка", parameter="methods", value=unknown)

        cells: List[BenchmarkCell] = []
        if "sample" in methods:
            cells.append(self.run_sampled(sampling))
        if "kmeans" in methods:
            aligned = align_reruns(ks, reruns)
            for n_bins in bins:
                for k, k_reruns in zip(ks, aligned):
                    config = cluster.model_copy(update={"k": k, "exposure_bins": n_bins, "reruns": k_reruns})
                    cells.append(self.run_clustered(config))
        logger.info("benchmark finished", extra={"cells": len(cells), "contrast": self.spec.contrast.value})
        return cells


def pivot_table(cells: Sequence[BenchmarkCell]) -> pd.DataFrame:
    """
    Таблица "корзины x k" с ячейками вида "0.626 (1.2)".
    """
    clustered = [c for c in cells if c.method == "kmeans"]
    if not clustered:
        return pd.DataFrame()
    data = pd.DataFrame([c.model_dump() for c in clustered])
    data["cell"] = [
        f"{v:.3f} ({s:.1f})" if v is not None and v == v else f"{st} ({s:.1f})"
        for v, s, st in zip(data["value"], data["seconds"], data["status"])
    ]
    return data.pivot(index="bins", columns="k", values="cell")


def cells_as_rows(cells: Sequence[BenchmarkCell]) -> List[Dict[str, Any]]:
    return [c.model_dump() for c in cells]
