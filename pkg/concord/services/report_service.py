"""
Сервис отчетов запуска.
Собирает оценки, кривые и таблицы в RunReport с полным набором параметров,
версией библиотеки и хешем входных данных и сериализует отчет в JSON или CSV.
"""
import hashlib
import io
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field

from concord import __version__
from concord.modules.dataset.schemas import Dataset, DatasetDescription
from concord.modules.frequency.schemas import CurvePoint
from concord.modules.pairs.frames import FrequencyFrame, SeverityFrame
from concord.modules.pairs.schemas import ConcordanceEstimate

SCHEMA_VERSION = "1.0"

_DIGEST_BLOCK = 1 << 20


class InputInfo(BaseModel):
    """Источник данных запуска"""
    model_config = ConfigDict(frozen=True)

    path: Optional[str] = None
    digest: str
    rows: int
    rejected: int = 0
    scenario: Optional[str] = None
    seed: Optional[int] = None


class EstimateEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str
    status: str = "ok"
    estimate: Optional[ConcordanceEstimate] = None
    message: Optional[str] = None


class CurveRow(BaseModel):
    """Строка кривой: {x, value, ci_lower, ci_upper, n_pairs} и статус точки"""
    model_config = ConfigDict(frozen=True)

    x: float
    value: Optional[float] = None
    ci_lower: Optional[float] = None
    ci_upper: Optional[float] = None
    n_pairs: int = 0
    status: str = "ok"

    @classmethod
    def from_point(cls, point: CurvePoint) -> 'CurveRow':
        lower, upper = point.estimate.ci_bounds if point.estimate is not None else (None, None)
        return cls(
            x=point.x,
            value=point.value,
            ci_lower=lower,
            ci_upper=upper,
            n_pairs=point.n_pairs,
            status=point.status,
        )


class RunReport(BaseModel):
    """
    Отчет запуска. Параметры в parameters достаточны для точного повторения запуска.
    """
    model_config = ConfigDict(frozen=True)

    schema_version: str = SCHEMA_VERSION
    command: str
    library_version: str = __version__
    duration_seconds: float = Field(..., ge=0.0)
    parameters: Dict[str, Any] = Field(default_factory=dict)
    input: Optional[InputInfo] = None
    description: Optional[DatasetDescription] = None
    estimates: List[EstimateEntry] = Field(default_factory=list)
    curves: Dict[str, List[CurveRow]] = Field(default_factory=dict)
    derived: Dict[str, float] = Field(default_factory=dict)
    table: List[Dict[str, Any]] = Field(default_factory=list)


def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 содержимого файла"""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(_DIGEST_BLOCK), b""):
            digest.update(block)
    return f"sha256:{digest.hexdigest()}"


def frame_digest(frame: Union[FrequencyFrame, SeverityFrame]) -> str:
    """SHA-256 колонок кадра (для наборов без файла)"""
    digest = hashlib.sha256()
    if isinstance(frame, FrequencyFrame):
        arrays = (frame.claim_count, frame.exposure, frame.prediction)
    else:
        arrays = (frame.claim_size, frame.prediction)
    for array in arrays:
        digest.update(np.ascontiguousarray(array).tobytes())
    return f"sha256:{digest.hexdigest()}"


class ReportService:
    """Накопитель результатов одного запуска CLI"""

    def __init__(self, command: str, parameters: Optional[Dict[str, Any]] = None):
        self.command = command
        self.parameters = dict(parameters or {})
        self._started = time.perf_counter()
        self._input: Optional[InputInfo] = None
        self._description: Optional[DatasetDescription] = None
        self._estimates: List[EstimateEntry] = []
        self._curves: Dict[str, List[CurveRow]] = {}
        self._derived: Dict[str, float] = {}
        self._table: List[Dict[str, Any]] = []

    def set_dataset(self, dataset: Dataset, description: Optional[DatasetDescription] = None) -> None:
        source = dataset.source
        digest = file_digest(source.path) if source.path else frame_digest(dataset.frame)
        self._input = InputInfo(
            path=source.path,
            digest=digest,
            rows=source.row_count,
            rejected=source.rejected_count,
            scenario=source.scenario.value if source.scenario is not None else None,
            seed=source.seed,
        )
        self._description = description

    def add_estimate(self, label: str, estimate: ConcordanceEstimate) -> None:
        self._estimates.append(EstimateEntry(label=label, estimate=estimate))

    def add_marker(self, label: str, status: str, message: Optional[str] = None) -> None:
        """Строка без оценки (например, контраст без сопоставимых пар)"""
        self._estimates.append(EstimateEntry(label=label, status=status, message=message))

    def add_curve(self, label: str, points: List[CurvePoint]) -> None:
        self._curves[label] = [CurveRow.from_point(p) for p in points]

    def add_derived(self, name: str, value: float) -> None:
        self._derived[name] = float(value)

    def set_table(self, rows: List[Dict[str, Any]]) -> None:
        self._table = list(rows)

    def finish(self) -> RunReport:
        return RunReport(
            command=self.command,
            duration_seconds=time.perf_counter() - self._started,
            parameters=self.parameters,
            input=self._input,
            description=self._description,
            estimates=self._estimates,
            curves=self._curves,
            derived=self._derived,
            table=self._table,
        )


def render_json(report: RunReport) -> str:
    return report.model_dump_json(indent=2)


def _estimate_rows(report: RunReport) -> List[Dict[str, Any]]:
    rows = []
    for entry in report.estimates:
        estimate = entry.estimate
        lower, upper = estimate.ci_bounds if estimate is not None else (None, None)
        rows.append({
            "label": entry.label,
            "status": entry.status,
            "method": estimate.method.value if estimate is not None else None,
            "value": estimate.value if estimate is not None else None,
            "ci_lower": lower,
            "ci_upper": upper,
            "n_pairs": estimate.n_pairs if estimate is not None else 0,
        })
    return rows


def render_csv(report: RunReport) -> str:
    """
    CSV-представление: строки кривых (x, value, ci_lower, ci_upper, n_pairs),
    иначе таблица бенчмарка, иначе строки оценок.
    """
    if report.curves:
        frames = []
        for label, rows in report.curves.items():
            frame = pd.DataFrame([row.model_dump() for row in rows],
                                 columns=["x", "value", "ci_lower", "ci_upper", "n_pairs", "status"])
            if len(report.curves) > 1:
                frame.insert(0, "curve", label)
            frames.append(frame)
        data = pd.concat(frames, ignore_index=True)
    elif report.table:
        data = pd.DataFrame(report.table)
    else:
        data = pd.DataFrame(_estimate_rows(report),
                            columns=["label", "status", "method", "value", "ci_lower", "ci_upper", "n_pairs"])
    buffer = io.StringIO()
    data.to_csv(buffer, index=False)
    return buffer.getvalue()


def render(report: RunReport, output: str = "json") -> str:
    if output == "csv":
        return render_csv(report)
    return render_json(report)
