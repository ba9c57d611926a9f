"""
Классификация пар и точная оценка перебором всех сопоставимых пар.

Точная оценка служит эталоном для выборочной и кластерной аппроксимаций.
"""
from typing import Optional, Union

from concord.config import settings
from concord.core.exceptions import EmptyInputError, NoComparablePairsError
from concord.core.logging import get_logger
from concord.modules.pairs.frames import (
    FrequencyFrame, SeverityFrame, FrequencyInput, SeverityInput,
    as_frequency_frame, as_severity_frame,
)
from concord.modules.pairs.kernel import FrequencyPairIndex, SeverityPairIndex
from concord.modules.pairs.schemas import (
    ConcordanceEstimate, EstimationMethod, FrequencyContrast, FrequencyPairSpec,
    FrequencyRecord, PairClass, PairCounts, PairSpec, SeverityPairSpec, SeverityRecord,
)

logger = get_logger(__name__)

PairIndex = Union[FrequencyPairIndex, SeverityPairIndex]


def _order_class(lower_prediction: float, upper_prediction: float) -> PairClass:
    if upper_prediction > lower_prediction:
        return PairClass.CONCORDANT
    if upper_prediction < lower_prediction:
        return PairClass.DISCORDANT
    return PairClass.TIED_PREDICTION


def classify_frequency_pair(
    a: FrequencyRecord,
    b: FrequencyRecord,
    contrast: FrequencyContrast,
    exposure_tol: float,
) -> PairClass:
    """
    Классифицирует упорядоченную пару: a - кандидат группы A, b - кандидат группы B.
    """
    if not (contrast.in_group_a(a.claim_count) and contrast.in_group_b(b.claim_count)):
        return PairClass.NOT_COMPARABLE
    if abs(a.exposure - b.exposure) > exposure_tol:
        return PairClass.NOT_COMPARABLE
    return _order_class(a.prediction, b.prediction)


def classify_severity_pair(a: SeverityRecord, b: SeverityRecord, v: float) -> PairClass:
    """
    Классифицирует пару убытков: a - кандидат с меньшим размером убытка.
    """
    if not (a.claim_size < b.claim_size and (b.claim_size - a.claim_size) >= v):
        return PairClass.NOT_COMPARABLE
    return _order_class(a.prediction, b.prediction)


def frame_for_spec(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
) -> Union[FrequencyFrame, SeverityFrame]:
    if isinstance(spec, FrequencyPairSpec):
        return as_frequency_frame(records)
    return as_severity_frame(records)


def build_pair_index(frame: Union[FrequencyFrame, SeverityFrame], spec: PairSpec) -> PairIndex:
    if isinstance(spec, FrequencyPairSpec):
        return FrequencyPairIndex(frame, spec.contrast, spec.exposure_tol)
    return SeverityPairIndex(frame, spec.v)


def spec_meta(spec: PairSpec) -> dict:
    if isinstance(spec, FrequencyPairSpec):
        return {"contrast": spec.contrast.value, "exposure_tol": spec.exposure_tol}
    return {"v": spec.v}


def estimate_from_counts(
    counts: PairCounts,
    spec: PairSpec,
    method: EstimationMethod,
    meta: Optional[dict] = None,
) -> ConcordanceEstimate:
    if counts.comparable == 0:
        raise NoComparablePairsError(
            pair_spec=spec.describe(),
            counts=counts.model_dump(),
        )
    return ConcordanceEstimate(
        value=counts.concordance(),
        method=method,
        counts=counts,
        meta={**spec_meta(spec), **(meta or {})},
    )


def exact_counts(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
    workers: Optional[int] = None,
) -> PairCounts:
    frame = frame_for_spec(records, spec)
    if len(frame) == 0:
        raise EmptyInputError("Набор записей пуст")
    index = build_pair_index(frame, spec)
    return index.exact_counts(settings.CHUNK_SIZE, workers)


def exact_concordance(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    Точная оценка n_c / n_t перебором всех сопоставимых пар.

    Args:
        records: Записи или столбцовый кадр
        spec: Определение пар (контраст и допуск по экспозиции или порог v)
        workers: Число потоков (по умолчанию CONCORD_THREADS)

    Raises:
        EmptyInputError: Пустой набор записей
        NoComparablePairsError: n_t = 0
    """
    counts = exact_counts(records, spec, workers)
    logger.debug(
        "exact enumeration finished",
        extra={"pair_spec": spec.describe(), "comparable": counts.comparable, "tied": counts.tied},
    )
    return estimate_from_counts(counts, spec, EstimationMethod.EXACT)
