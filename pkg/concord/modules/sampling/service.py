"""
Выборочный алгоритм оценки вероятности согласованности с удалением выбранных наблюдений
и доверительный интервал по компонентам π̂_cc, π̂_dd, π̂_cd.
"""
from typing import Optional, Union

import numpy as np
from scipy import stats

from concord.config import settings
from concord.core.exceptions import (
    DegenerateVarianceError, EmptyInputError, NoComparablePairsError,
)
from concord.core.logging import get_logger
from concord.modules.pairs.frames import FrequencyInput, SeverityInput
from concord.modules.pairs.schemas import (
    ConcordanceEstimate, ConfidenceInterval, EstimationMethod, PairCounts, PairSpec,
)
from concord.modules.pairs.service import build_pair_index, frame_for_spec, spec_meta
from concord.modules.sampling.schemas import SampleTally, SamplingConfig, VarianceComponents

logger = get_logger(__name__)


def draw_order(n: int, seed: int) -> np.ndarray:
    """Порядок выбора наблюдений без возвращения, определяемый зерном"""
    rng = np.random.default_rng(seed)
    return rng.permutation(n)


def sample_tally(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
    config: SamplingConfig,
    workers: Optional[int] = None,
) -> SampleTally:
    """
    Выбирает S наблюдений и для каждого считает пары с еще не выбранными записями.

    Выбранное наблюдение удаляется из набора, поэтому ни одна пара не учитывается дважды.

    Raises:
        EmptyInputError: Пустой набор записей
    """
    frame = frame_for_spec(records, spec)
    n = len(frame)
    if n == 0:
        raise EmptyInputError("Набор записей пуст")

    size = config.sample_size
    if size > n:
        logger.warning(
            "sample size exceeds the number of records, clamping",
            extra={"requested": size, "records": n},
        )
        size = n

    order = draw_order(n, config.seed)
    position = np.empty(n, dtype=np.int64)
    position[order] = np.arange(n, dtype=np.int64)
    draws = order[:size]

    index = build_pair_index(frame, spec)
    counts = index.draw_counts(draws, position, settings.CHUNK_SIZE, workers)
    tally = SampleTally(
        concordant=counts.concordant,
        comparable=counts.comparable,
        tied=counts.tied,
        draws=draws,
        requested_size=config.sample_size,
    )
    logger.debug(
        "sample tally finished",
        extra={
            "pair_spec": spec.describe(),
            "sample_size": size,
            "contributing": tally.contributing,
            "comparable": tally.total_comparable,
        },
    )
    return tally


def tally_counts(tally: SampleTally) -> PairCounts:
    concordant = tally.total_concordant
    return PairCounts.of(concordant, tally.total_comparable - concordant, tally.total_tied)


def estimate_from_tally(
    tally: SampleTally,
    spec: Optional[PairSpec] = None,
    meta: Optional[dict] = None,
) -> ConcordanceEstimate:
    """
    Ĉ = Σ n*_{c,i} / Σ n*_{t,i}

    Raises:
        NoComparablePairsError: Σ n*_{t,i} = 0
    """
    counts = tally_counts(tally)
    if counts.comparable == 0:
        raise NoComparablePairsError(
            pair_spec=spec.describe() if spec is not None else None,
            counts=counts.model_dump(),
        )
    echo = spec_meta(spec) if spec is not None else {}
    echo.update({"sample_size": len(tally), "contributing": tally.contributing})
    echo.update(meta or {})
    return ConcordanceEstimate(
        value=counts.concordance(),
        method=EstimationMethod.SAMPLED,
        counts=counts,
        meta=echo,
    )


def variance_components(tally: SampleTally) -> VarianceComponents:
    """
    Компоненты дисперсии; слагаемые с n*_{t,i} = 0 дают 0.

    Raises:
        NoComparablePairsError: Σ n*_{t,i} = 0
    """
    total = tally.total_comparable
    if total == 0:
        raise NoComparablePairsError(counts=tally_counts(tally).model_dump())

    contributing = tally.comparable > 0
    t = tally.comparable[contributing].astype(np.float64)
    c = tally.concordant[contributing].astype(np.float64)
    d = t - c

    pi_c = float(c.sum() / total)
    return VarianceComponents(
        pi_c=pi_c,
        pi_d=1.0 - pi_c,
        pi_cc=float(np.sum(c * c / t) / total),
        pi_dd=float(np.sum(d * d / t) / total),
        pi_cd=float(np.sum(d * c / t) / total),
    )


def confidence_interval(tally: SampleTally, alpha: float = 0.05) -> ConfidenceInterval:
    """
    ДИ Ĉ ± z_{α/2}·√(var̂/S), ограниченный отрезком [0, 1].

    S - число выбранных наблюдений, включая наблюдения без сопоставимых пар.

    Raises:
        NoComparablePairsError: Σ n*_{t,i} = 0
        DegenerateVarianceError: Менее двух наблюдений с n*_{t,i} > 0
    """
    contributing = tally.contributing
    if tally.total_comparable > 0 and contributing < 2:
        raise DegenerateVarianceError(contributing=contributing)

    components = variance_components(tally)
    z = float(stats.norm.ppf(1.0 - alpha / 2.0))
    half_width = z * float(np.sqrt(components.variance / len(tally)))
    value = components.pi_c
    return ConfidenceInterval(
        lower=max(0.0, value - half_width),
        upper=min(1.0, value + half_width),
        alpha=alpha,
    )


def _warn_wide_interval(ci: ConfidenceInterval, spec: PairSpec, size: int) -> None:
    target = settings.sampling.TARGET_WIDTH
    if ci.width > target:
        logger.warning(
            "confidence interval wider than the target width",
            extra={"pair_spec": spec.describe(), "width": ci.width, "target": target, "sample_size": size},
        )


def estimate_with_interval(
    tally: SampleTally,
    spec: PairSpec,
    config: SamplingConfig,
    meta: Optional[dict] = None,
) -> ConcordanceEstimate:
    """Точечная оценка по сводке выборки вместе с ДИ (если дисперсия определена)"""
    echo = {"seed": config.seed, "alpha": config.alpha, "requested_size": config.sample_size}
    echo.update(meta or {})
    estimate = estimate_from_tally(tally, spec, echo)
    try:
        ci = confidence_interval(tally, config.alpha)
    except DegenerateVarianceError as e:
        logger.warning("confidence interval skipped", extra={"reason": e.message, "contributing": e.contributing})
        return estimate
    _warn_wide_interval(ci, spec, len(tally))
    return estimate.model_copy(update={"ci": ci})


def sampled_concordance(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
    config: Optional[SamplingConfig] = None,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    Выборочная оценка с ДИ.

    Args:
        records: Записи или столбцовый кадр
        spec: Определение пар
        config: S, зерно и α (по умолчанию из настроек)
        workers: Число потоков
    """
    if config is None:
        config = SamplingConfig()
    tally = sample_tally(records, spec, config, workers)
    return estimate_with_interval(tally, spec, config)


def adaptive_sampled_concordance(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
    config: Optional[SamplingConfig] = None,
    target_width: Optional[float] = None,
    max_size: Optional[int] = None,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    Удваивает S, пока ширина ДИ больше целевой, либо пока S не достигнет n или max_size.

    При одном зерне выборки разных размеров вложены друг в друга.
    """
    if config is None:
        config = SamplingConfig()
    target_width = target_width if target_width is not None else settings.sampling.TARGET_WIDTH
    max_size = max_size if max_size is not None else settings.sampling.MAX_SIZE

    frame = frame_for_spec(records, spec)
    limit = min(len(frame), max_size)
    size = min(config.sample_size, max(limit, 1))
    steps = 0
    while True:
        steps += 1
        current = config.model_copy(update={"sample_size": size})
        tally = sample_tally(frame, spec, current, workers)
        estimate = estimate_with_interval(
            tally, spec, current, meta={"target_width": target_width, "adaptive_steps": steps},
        )
        if estimate.ci is not None and estimate.ci.width <= target_width:
            return estimate
        if size >= limit:
            logger.info(
                "adaptive sampling stopped at the size limit",
                extra={"sample_size": size, "limit": limit, "steps": steps},
            )
            return estimate
        size = min(2 * size, limit)
