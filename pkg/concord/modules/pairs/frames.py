"""
Столбцовые представления наборов записей на массивах numpy.

Все движки оценивания работают с кадрами; последовательности записей
преобразуются через as_frequency_frame / as_severity_frame.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Union

import numpy as np

from concord.core.exceptions import RecordValidationError
from concord.modules.pairs.schemas import FrequencyRecord, SeverityRecord


def _readonly(values, dtype) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


def _collect(field_errors: Dict[str, List[str]], field: str, bad: np.ndarray, reason: str) -> None:
    count = int(np.count_nonzero(bad))
    if count:
        field_errors.setdefault(field, []).append(f"{count} rows {reason}")


def _non_integral(values) -> np.ndarray:
    """Маска значений, которые нельзя без потерь привести к целому"""
    raw = np.asarray(values)
    if raw.dtype.kind in "iub":
        return np.zeros(raw.shape, dtype=bool)
    try:
        as_float = raw.astype(np.float64)
    except (TypeError, ValueError):
        return np.ones(raw.shape, dtype=bool)
    return ~np.isfinite(as_float) | (as_float != np.floor(as_float))


@dataclass(frozen=True, eq=False)
class FrequencyFrame:
    """Набор полисов: claim_count (Y^N), exposure (λ), prediction (π^N)"""
    claim_count: np.ndarray
    exposure: np.ndarray
    prediction: np.ndarray

    def __post_init__(self):
        field_errors: Dict[str, List[str]] = {}
        _collect(field_errors, "claim_count", _non_integral(self.claim_count), "not an integer")
        if field_errors:
            raise RecordValidationError("Кадр частоты нарушает инварианты записей", field_errors=field_errors)

        object.__setattr__(self, "claim_count", _readonly(self.claim_count, np.int64))
        object.__setattr__(self, "exposure", _readonly(self.exposure, np.float64))
        object.__setattr__(self, "prediction", _readonly(self.prediction, np.float64))

        n = self.claim_count.shape[0]
        if self.exposure.shape != (n,) or self.prediction.shape != (n,) or self.claim_count.ndim != 1:
            raise RecordValidationError("Колонки кадра должны быть одномерными и одной длины")

        field_errors = {}
        _collect(field_errors, "claim_count", self.claim_count < 0, "negative")
        _collect(field_errors, "exposure", ~((self.exposure > 0.0) & (self.exposure <= 1.0)), "outside (0, 1]")
        _collect(field_errors, "prediction", ~((self.prediction > 0.0) & np.isfinite(self.prediction)),
                 "non-positive or non-finite")
        if field_errors:
            raise RecordValidationError("Кадр частоты нарушает инварианты записей", field_errors=field_errors)

    def __len__(self) -> int:
        return int(self.claim_count.shape[0])

    @classmethod
    def from_records(cls, records: Iterable[FrequencyRecord]) -> 'FrequencyFrame':
        records = list(records)
        return cls(
            claim_count=[r.claim_count for r in records],
            exposure=[r.exposure for r in records],
            prediction=[r.prediction for r in records],
        )

    def to_records(self) -> List[FrequencyRecord]:
        return [
            FrequencyRecord(claim_count=int(y), exposure=float(e), prediction=float(p))
            for y, e, p in zip(self.claim_count, self.exposure, self.prediction)
        ]

    def subset(self, mask: np.ndarray) -> 'FrequencyFrame':
        return FrequencyFrame(self.claim_count[mask], self.exposure[mask], self.prediction[mask])

    def with_predictions(self, prediction: Sequence[float]) -> 'FrequencyFrame':
        return FrequencyFrame(self.claim_count, self.exposure, prediction)


@dataclass(frozen=True, eq=False)
class SeverityFrame:
    """Набор убытков: claim_size (Y^S), prediction (π^S)"""
    claim_size: np.ndarray
    prediction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "claim_size", _readonly(self.claim_size, np.float64))
        object.__setattr__(self, "prediction", _readonly(self.prediction, np.float64))

        n = self.claim_size.shape[0]
        if self.prediction.shape != (n,) or self.claim_size.ndim != 1:
            raise RecordValidationError("Колонки кадра должны быть одномерными и одной длины")

        field_errors: Dict[str, List[str]] = {}
        _collect(field_errors, "claim_size", ~((self.claim_size > 0.0) & np.isfinite(self.claim_size)),
                 "non-positive or non-finite")
        _collect(field_errors, "prediction", ~((self.prediction > 0.0) & np.isfinite(self.prediction)),
                 "non-positive or non-finite")
        if field_errors:
            raise RecordValidationError("Кадр тяжести нарушает инварианты записей", field_errors=field_errors)

    def __len__(self) -> int:
        return int(self.claim_size.shape[0])

    @classmethod
    def from_records(cls, records: Iterable[SeverityRecord]) -> 'SeverityFrame':
        records = list(records)
        return cls(
            claim_size=[r.claim_size for r in records],
            prediction=[r.prediction for r in records],
        )

    def to_records(self) -> List[SeverityRecord]:
        return [
            SeverityRecord(claim_size=float(y), prediction=float(p))
            for y, p in zip(self.claim_size, self.prediction)
        ]

    def subset(self, mask: np.ndarray) -> 'SeverityFrame':
        return SeverityFrame(self.claim_size[mask], self.prediction[mask])

    def with_predictions(self, prediction: Sequence[float]) -> 'SeverityFrame':
        return SeverityFrame(self.claim_size, prediction)


FrequencyInput = Union[FrequencyFrame, Sequence[FrequencyRecord]]
SeverityInput = Union[SeverityFrame, Sequence[SeverityRecord]]


def as_frequency_frame(records: FrequencyInput) -> FrequencyFrame:
    if isinstance(records, FrequencyFrame):
        return records
    return FrequencyFrame.from_records(records)


def as_severity_frame(records: SeverityInput) -> SeverityFrame:
    if isinstance(records, SeverityFrame):
        return records
    return SeverityFrame.from_records(records)
