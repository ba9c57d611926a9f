"""
Аппроксимация вероятности согласованности центроидами кластеров.

Прогнозы каждой группы (в каждой корзине экспозиции) заменяются центроидами
одномерного k-means с весами-долями; согласованность считается по всем k x k
парам центроидов, а корзины объединяются с весами n_A,b * n_B,b.
"""
import bisect
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from concord.core.exceptions import ConfigurationError, EmptyGroupError, EmptyInputError, NoComparablePairsError
from concord.core.logging import get_logger
from concord.core.workers import run_partitioned
from concord.modules.cluster.schemas import ClusterSummary, Clustering, KMeansConfig
from concord.modules.pairs.frames import FrequencyInput, as_frequency_frame
from concord.modules.pairs.kernel import contrast_masks
from concord.modules.pairs.schemas import (
    ClusterMass, ConcordanceEstimate, EstimationMethod, FrequencyPairSpec, PairSpec,
)
from concord.modules.pairs.service import spec_meta

logger = get_logger(__name__)

GROUP_A = 0
GROUP_B = 1


class _Prefix:
    """Префиксные суммы отсортированных значений для сумм по отрезкам"""

    def __init__(self, x: np.ndarray):
        self.x = x
        self.s1 = np.concatenate(([0.0], np.cumsum(x)))
        self.s2 = np.concatenate(([0.0], np.cumsum(x * x)))

    def segments(self, splits: np.ndarray, fallback: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
        """
        Центроиды, размеры и WCSS отрезков [splits[l], splits[l+1]).

        Пустой отрезок сохраняет прежний центроид из fallback.
        """
        start, stop = splits[:-1], splits[1:]
        sizes = stop - start
        sums = self.s1[stop] - self.s1[start]
        occupied = sizes > 0
        centroids = np.where(occupied, sums / np.maximum(sizes, 1), fallback)

        # Отрезок из одинаковых значений получает это значение без ошибки округления
        last = np.clip(stop - 1, 0, self.x.shape[0] - 1)
        constant = occupied & (self.x[np.clip(start, 0, self.x.shape[0] - 1)] == self.x[last])
        centroids[constant] = self.x[start[constant]]

        squares = self.s2[stop] - self.s2[start]
        spread = np.where(occupied, squares - sums * sums / np.maximum(sizes, 1), 0.0)
        spread[constant] = 0.0
        return centroids, sizes, float(np.maximum(spread, 0.0).sum())


def _kmeanspp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Начальные центроиды k-means++: каждый следующий выбирается с вероятностью ~ D^2"""
    n = x.shape[0]
    chosen = [float(x[int(rng.integers(n))])]
    distance = (x - chosen[0]) ** 2
    for _ in range(1, k):
        cumulative = np.cumsum(distance)
        total = cumulative[-1]
        if total <= 0.0:
            break
        pick = int(np.searchsorted(cumulative, rng.random() * total, side="right"))
        center = float(x[min(pick, n - 1)])
        # В одномерном случае новый центроид меняет расстояния только внутри своей ячейки Вороного
        pos = bisect.bisect_left(chosen, center)
        lo = 0 if pos == 0 else int(np.searchsorted(x, (chosen[pos - 1] + center) / 2.0, side="left"))
        hi = n if pos == len(chosen) else int(np.searchsorted(x, (center + chosen[pos]) / 2.0, side="right"))
        distance[lo:hi] = np.minimum(distance[lo:hi], (x[lo:hi] - center) ** 2)
        chosen.insert(pos, center)
    return np.asarray(chosen, dtype=np.float64)


def _assign(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Границы отрезков для отсортированных x: середины между соседними центроидами"""
    bounds = (centroids[:-1] + centroids[1:]) / 2.0
    inner = np.searchsorted(x, bounds, side="right")
    return np.concatenate(([0], inner, [x.shape[0]])).astype(np.int64)


def _lloyd(prefix: _Prefix, k: int, max_iter: int, tol: float, rng: np.random.Generator):
    x = prefix.x
    centroids = _kmeanspp(x, k, rng)
    previous = None
    for _ in range(max_iter):
        splits = _assign(x, centroids)
        if previous is not None and np.array_equal(splits, previous):
            break
        sizes = splits[1:] - splits[:-1]
        sums = prefix.s1[splits[1:]] - prefix.s1[splits[:-1]]
        updated = np.sort(np.where(sizes > 0, sums / np.maximum(sizes, 1), centroids))
        shift = float(np.max(np.abs(updated - centroids)))
        centroids = updated
        previous = splits
        if shift <= tol:
            break
    splits = _assign(x, centroids)
    return prefix.segments(splits, centroids)


def _optimal_splits(values: np.ndarray, counts: np.ndarray, k: int) -> np.ndarray:
    """
    Оптимальное разбиение отсортированных различных значений на k отрезков.

    Динамическое программирование с оптимизацией "разделяй и властвуй" по
    монотонности точки разбиения.
    """
    m = values.shape[0]
    w = np.concatenate(([0.0], np.cumsum(counts.astype(np.float64))))
    s1 = np.concatenate(([0.0], np.cumsum(values * counts)))
    s2 = np.concatenate(([0.0], np.cumsum(values * values * counts)))

    def cost(i: np.ndarray, j: int) -> np.ndarray:
        size = w[j] - w[i]
        total = s1[j] - s1[i]
        return np.maximum((s2[j] - s2[i]) - total * total / size, 0.0)

    previous = np.full(m + 1, np.inf)
    previous[1:] = cost(np.zeros(m, dtype=np.int64), np.arange(1, m + 1))
    argmins = []

    for layer in range(1, k):
        current = np.full(m + 1, np.inf)
        arg = np.zeros(m + 1, dtype=np.int64)
        stack = [(layer + 1, m, layer, m - 1)]
        while stack:
            lo, hi, opt_lo, opt_hi = stack.pop()
            if lo > hi:
                continue
            mid = (lo + hi) // 2
            candidates = np.arange(max(opt_lo, layer), min(mid - 1, opt_hi) + 1)
            scores = previous[candidates] + cost(candidates, mid)
            best = int(candidates[int(np.argmin(scores))])
            current[mid] = float(scores.min())
            arg[mid] = best
            stack.append((lo, mid - 1, opt_lo, best))
            stack.append((mid + 1, hi, best, opt_hi))
        argmins.append(arg)
        previous = current

    cuts = [m]
    j = m
    for arg in reversed(argmins):
        j = int(arg[j])
        cuts.append(j)
    cuts.append(0)
    return np.asarray(cuts[::-1], dtype=np.int64)


def _rerun_rng(seed: int, stream: Sequence[int], rerun: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), *[int(s) for s in stream], int(rerun)]))


def kmeans_1d(
    values: Union[Sequence[float], np.ndarray],
    k: int,
    config: Optional[KMeansConfig] = None,
    stream: Sequence[int] = (),
) -> Clustering:
    """
    Одномерный k-means по прогнозам группы.

    Lloyd запускается reruns раз с зернами SeedSequence([seed, *stream, rerun]);
    выбирается запуск с наименьшей WCSS, при равенстве - с меньшим номером.
    При k не меньше числа различных значений центроиды совпадают со значениями.

    Raises:
        EmptyGroupError: Пустой набор значений
    """
    config = config or KMeansConfig()
    if k < 1:
        raise ConfigurationError("Число кластеров должно быть не меньше 1", parameter="k", value=k)
    x = np.sort(np.asarray(values, dtype=np.float64))
    n = x.shape[0]
    if n == 0:
        raise EmptyGroupError("Пустая группа для кластеризации")

    n_distinct = 1 + int(np.count_nonzero(x[1:] != x[:-1]))
    k_eff = min(int(k), n_distinct)
    if k_eff == n_distinct:
        distinct, counts = np.unique(x, return_counts=True)
        return Clustering(centroids=distinct, weights=counts / n, sizes=counts, wcss=0.0)

    prefix = _Prefix(x)
    if config.algorithm == "exact":
        distinct, counts = np.unique(x, return_counts=True)
        cuts = _optimal_splits(distinct, counts, k_eff)
        splits = np.searchsorted(x, np.concatenate((distinct, [np.inf]))[cuts], side="left")
        centroids, sizes, wcss = prefix.segments(splits, np.zeros(k_eff))
        rerun = 0
    else:
        best = None
        for rerun_index in range(config.reruns):
            rng = _rerun_rng(config.seed, stream, rerun_index)
            result = _lloyd(prefix, k_eff, config.max_iter, config.tol, rng)
            if best is None or result[2] < best[0][2]:
                best = (result, rerun_index)
        (centroids, sizes, wcss), rerun = best

    occupied = sizes > 0
    return Clustering(
        centroids=centroids[occupied],
        weights=sizes[occupied] / n,
        sizes=sizes[occupied],
        wcss=wcss,
        rerun=rerun,
    )


def exposure_edges(exposure: np.ndarray, n_bins: int, mode: str = "quantile") -> np.ndarray:
    """
    Границы корзин экспозиции; совпадающие границы объединяются.
    """
    if exposure.shape[0] == 0:
        return np.zeros(0)
    if mode == "quantile":
        edges = np.quantile(exposure, np.linspace(0.0, 1.0, n_bins + 1))
    elif mode == "width":
        edges = np.linspace(float(exposure.min()), float(exposure.max()), n_bins + 1)
    else:
        raise ConfigurationError("Неизвестный режим корзин", parameter="bin_mode", value=mode)
    return np.unique(edges)


def assign_bins(exposure: np.ndarray, edges: np.ndarray) -> np.ndarray:
    """Номер корзины для каждой экспозиции; значение на внутренней границе уходит в верхнюю корзину"""
    if edges.shape[0] <= 2:
        return np.zeros(exposure.shape[0], dtype=np.int64)
    return np.searchsorted(edges[1:-1], exposure, side="right").astype(np.int64)


def _require_frequency(spec: PairSpec) -> FrequencyPairSpec:
    if not isinstance(spec, FrequencyPairSpec):
        raise ConfigurationError(
            "Кластерная аппроксимация определена только для контрастов частоты",
            parameter="engine",
            value="clustered",
        )
    return spec


def cluster_summaries(
    records: FrequencyInput,
    spec: PairSpec,
    config: Optional[KMeansConfig] = None,
    workers: Optional[int] = None,
) -> List[ClusterSummary]:
    """
    Кластеризует прогнозы групп A и B отдельно в каждой корзине экспозиции.

    Корзины, где одна из групп пуста, пропускаются.

    Raises:
        ConfigurationError: Определение пар тяжести
        EmptyInputError: Пустой набор записей
        EmptyGroupError: Группа A или B пуста во всем наборе
    """
    spec = _require_frequency(spec)
    config = config or KMeansConfig()
    frame = as_frequency_frame(records)
    if len(frame) == 0:
        raise EmptyInputError("Набор записей пуст")

    a_mask, b_mask = contrast_masks(frame.claim_count, spec.contrast)
    if not a_mask.any():
        raise EmptyGroupError(f"Группа A пуста для контраста {spec.contrast.value}", group="A")
    if not b_mask.any():
        raise EmptyGroupError(f"Группа B пуста для контраста {spec.contrast.value}", group="B")

    pooled = a_mask | b_mask
    edges = exposure_edges(frame.exposure[pooled], config.exposure_bins, config.bin_mode)
    bins = assign_bins(frame.exposure, edges)
    n_bins = max(1, edges.shape[0] - 1)

    def grouped(mask: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        member_bins = bins[mask]
        order = np.argsort(member_bins, kind="stable")
        bounds = np.searchsorted(member_bins[order], np.arange(n_bins + 1), side="left")
        return frame.prediction[mask][order], bounds

    predictions_a, bounds_a = grouped(a_mask)
    predictions_b, bounds_b = grouped(b_mask)

    def summarize(start: int, stop: int) -> List[ClusterSummary]:
        summaries = []
        for b in range(start, stop):
            values_a = predictions_a[bounds_a[b]:bounds_a[b + 1]]
            values_b = predictions_b[bounds_b[b]:bounds_b[b + 1]]
            if values_a.shape[0] == 0 or values_b.shape[0] == 0:
                logger.debug("exposure bin skipped", extra={"bin": b, "size_a": values_a.shape[0],
                                                            "size_b": values_b.shape[0]})
                continue
            low = float(edges[b])
            high = float(edges[min(b + 1, edges.shape[0] - 1)])
            summaries.append(ClusterSummary(
                bin_index=b,
                exposure_low=low,
                exposure_high=high,
                group_a=kmeans_1d(values_a, config.k, config, stream=(b, GROUP_A)),
                group_b=kmeans_1d(values_b, config.k, config, stream=(b, GROUP_B)),
            ))
        return summaries

    parts = run_partitioned(summarize, n_bins, 1, workers)
    return [summary for part in parts for summary in part]


def centroid_mass(group_a: Clustering, group_b: Clustering) -> Tuple[float, float, float]:
    """
    Массы Σ_i Σ_j I(π_B^i > π_A^j) w_B^i w_A^j и аналогичные для < и =.
    """
    cumulative = np.concatenate(([0.0], np.cumsum(group_a.weights)))
    total = cumulative[-1]
    below = cumulative[np.searchsorted(group_a.centroids, group_b.centroids, side="left")]
    at_or_below = cumulative[np.searchsorted(group_a.centroids, group_b.centroids, side="right")]
    concordant = float(np.dot(group_b.weights, below))
    tied = float(np.dot(group_b.weights, at_or_below - below))
    discordant = float(np.dot(group_b.weights, np.maximum(total - at_or_below, 0.0)))
    return concordant, discordant, tied


def clustered_concordance(
    records: FrequencyInput,
    spec: PairSpec,
    config: Optional[KMeansConfig] = None,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    Оценка по центроидам кластеров.

    Args:
        records: Записи полисов или кадр
        spec: Контраст частоты (допуск по экспозиции заменяется корзинами)
        config: Параметры k-means
        workers: Число потоков для обработки корзин

    Raises:
        ConfigurationError: Определение пар тяжести
        EmptyGroupError: Группа A или B пуста
        NoComparablePairsError: Нет корзины с обеими группами, либо все центроиды совпадают
    """
    config = config or KMeansConfig()
    summaries = cluster_summaries(records, spec, config, workers)
    pair_count = sum(s.pair_count for s in summaries)
    if pair_count == 0:
        raise NoComparablePairsError(pair_spec=spec.describe())

    concordant = discordant = tied = 0.0
    for summary in summaries:
        weight = summary.pair_count / pair_count
        c, d, t = centroid_mass(summary.group_a, summary.group_b)
        concordant += weight * c
        discordant += weight * d
        tied += weight * t

    if concordant + discordant <= 0.0:
        raise NoComparablePairsError(
            "Все пары центроидов совпадают",
            pair_spec=spec.describe(),
        )

    if config.tie_mode == "half":
        value = concordant + 0.5 * tied
    elif config.tie_mode == "exclude":
        value = concordant / (concordant + discordant)
    else:
        value = concordant

    logger.debug(
        "clustered estimate finished",
        extra={"pair_spec": spec.describe(), "bins_used": len(summaries), "k": config.k,
               "reruns": config.reruns, "algorithm": config.algorithm},
    )
    return ConcordanceEstimate(
        value=min(1.0, max(0.0, value)),
        method=EstimationMethod.CLUSTERED,
        mass=ClusterMass(
            concordant=max(0.0, concordant),
            discordant=max(0.0, discordant),
            tied=max(0.0, tied),
            pair_count=pair_count,
        ),
        meta={
            **spec_meta(spec),
            "k": config.k,
            "exposure_bins": config.exposure_bins,
            "bins_used": len(summaries),
            "reruns": config.reruns,
            "seed": config.seed,
            "algorithm": config.algorithm,
            "bin_mode": config.bin_mode,
            "tie_mode": config.tie_mode,
        },
    )
