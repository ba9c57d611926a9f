"""
Сервис частотных вероятностей согласованности.

Глобальные оценки C01+, C02+, C12+ с допуском по экспозиции и локальные
кривые (λ, C(λ)), где обе экспозиции пары лежат в окне вокруг λ.
"""
from typing import Iterable, List, Optional, Sequence

import numpy as np

from concord.config import settings
from concord.core.exceptions import ConcordError, EmptyGroupError, NoComparablePairsError
from concord.core.logging import get_logger
from concord.modules.engine.schemas import Engine, ExactEngine
from concord.modules.engine.service import derive_engine, estimate
from concord.modules.frequency.schemas import (
    ContrastResult, CurvePoint, LocalCurveConfig, ModelComparison,
)
from concord.modules.pairs.frames import FrequencyInput, as_frequency_frame
from concord.modules.pairs.kernel import contrast_masks
from concord.modules.pairs.schemas import (
    ConcordanceEstimate, FrequencyContrast, FrequencyPairSpec,
)

logger = get_logger(__name__)

# Экспозиции лежат в (0, 1], поэтому такой допуск не ограничивает пары
_VACUOUS_TOL = 1.0
_WINDOW_SLACK = 1e-12


def _pair_spec(contrast: FrequencyContrast, exposure_tol: Optional[float]) -> FrequencyPairSpec:
    tol = settings.EXPOSURE_TOL if exposure_tol is None else exposure_tol
    return FrequencyPairSpec(contrast=FrequencyContrast(contrast), exposure_tol=tol)


def global_frequency_concordance(
    records: FrequencyInput,
    contrast: FrequencyContrast,
    exposure_tol: Optional[float] = None,
    engine: Optional[Engine] = None,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    Вероятность согласованности контраста по парам с |λ_i - λ_j| <= exposure_tol.

    Raises:
        NoComparablePairsError: Нет сопоставимых пар
    """
    spec = _pair_spec(contrast, exposure_tol)
    result = estimate(as_frequency_frame(records), spec, engine, workers)
    logger.info(
        "frequency concordance estimated",
        extra={"contrast": spec.contrast.value, "method": result.method.value, "value": result.value},
    )
    return result


def _window_mask(exposure: np.ndarray, center: float, window: float) -> np.ndarray:
    return np.abs(exposure - center) <= window + _WINDOW_SLACK


def local_frequency_curve(
    records: FrequencyInput,
    contrast: FrequencyContrast,
    config: Optional[LocalCurveConfig] = None,
    engine: Optional[Engine] = None,
    workers: Optional[int] = None,
) -> List[CurvePoint]:
    """
    Локальная кривая (λ, C(λ)).

    Для каждой точки сетки берутся записи с экспозицией в [λ - window, λ + window];
    окна соседних точек могут перекрываться. Точка, где пар меньше min_pairs,
    получает маркер insufficient-pairs. Зерно движка в точке i равно seed XOR i.
    """
    config = config or LocalCurveConfig()
    engine = engine or ExactEngine()
    frame = as_frequency_frame(records)
    contrast = FrequencyContrast(contrast)
    spec = _pair_spec(contrast, _VACUOUS_TOL)
    a_mask, b_mask = contrast_masks(frame.claim_count, contrast)

    points: List[CurvePoint] = []
    for index, center in enumerate(config.lambda_grid):
        in_window = _window_mask(frame.exposure, center, config.window)
        admissible = int(np.count_nonzero(a_mask & in_window)) * int(np.count_nonzero(b_mask & in_window))
        if admissible < config.min_pairs:
            points.append(CurvePoint(x=center, status="insufficient-pairs", n_pairs=admissible))
            continue
        try:
            result = estimate(frame.subset(in_window), spec, derive_engine(engine, spec, index), workers)
        except (NoComparablePairsError, EmptyGroupError) as e:
            logger.debug("curve point without comparable pairs", extra={"x": center, "reason": e.message})
            points.append(CurvePoint(x=center, status="no-comparable-pairs", n_pairs=0))
            continue

        # точный и выборочный движки сообщают фактическое число сопоставимых пар
        if result.counts is not None and result.counts.comparable < config.min_pairs:
            points.append(CurvePoint(x=center, status="insufficient-pairs", n_pairs=result.counts.comparable))
            continue
        points.append(CurvePoint(
            x=center,
            estimate=result.model_copy(update={"meta": {**result.meta, "window": config.window, "lambda": center}}),
            n_pairs=result.n_pairs,
        ))

    logger.info(
        "local frequency curve computed",
        extra={"contrast": contrast.value, "points": len(points),
               "reported": sum(1 for p in points if p.status == "ok")},
    )
    return points


def frequency_summary(
    records: FrequencyInput,
    exposure_tol: Optional[float] = None,
    engine: Optional[Engine] = None,
    contrasts: Optional[Iterable[FrequencyContrast]] = None,
    workers: Optional[int] = None,
) -> List[ContrastResult]:
    """
    Оценки всех контрастов одним вызовом. Ошибка одного контраста не прерывает остальные.
    """
    frame = as_frequency_frame(records)
    results: List[ContrastResult] = []
    for contrast in contrasts or list(FrequencyContrast):
        try:
            result = global_frequency_concordance(frame, contrast, exposure_tol, engine, workers)
        except (NoComparablePairsError, EmptyGroupError) as e:
            results.append(ContrastResult(contrast=contrast, status="no-comparable-pairs", message=e.message))
            continue
        results.append(ContrastResult(contrast=contrast, estimate=result))
    return results


def compare_frequency_models(
    records: FrequencyInput,
    alternative_predictions: Sequence[float],
    contrast: FrequencyContrast,
    exposure_tol: Optional[float] = None,
    engine: Optional[Engine] = None,
    workers: Optional[int] = None,
) -> ModelComparison:
    """
    Сравнивает два прогноза частоты на одних полисах.

    Порядок выбора наблюдений зависит только от числа записей и зерна, поэтому
    обе модели оцениваются на одних и тех же выборках.

    Raises:
        ConcordError: Ошибки оценивания любой из моделей
    """
    frame = as_frequency_frame(records)
    alternative_frame = frame.with_predictions(alternative_predictions)
    baseline = global_frequency_concordance(frame, contrast, exposure_tol, engine, workers)
    try:
        alternative = global_frequency_concordance(alternative_frame, contrast, exposure_tol, engine, workers)
    except ConcordError:
        logger.error("alternative model could not be evaluated", extra={"contrast": FrequencyContrast(contrast).value})
        raise
    return ModelComparison(
        contrast=FrequencyContrast(contrast),
        baseline=baseline,
        alternative=alternative,
        difference=alternative.value - baseline.value,
    )
