"""
Модели наборов данных: источник, отклоненные строки, синтетические сценарии и описание набора.
"""
import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from concord.modules.pairs.frames import FrequencyFrame, SeverityFrame


class DatasetKind(str, enum.Enum):
    FREQUENCY = "frequency"
    SEVERITY = "severity"


class SyntheticScenario(str, enum.Enum):
    """
    Сценарии генератора.

    - POISSON_WORLD: экспозиции, латентный риск, прогноз - истинная частота, Y ~ Poisson(λ·rate)
    - GAMMA_WORLD: убытки ~ Gamma со средним, равным прогнозу
    - SEPARABLE: прогнозы групп не пересекаются, C = 1 для всех контрастов
    - DEGENERATE_TIES: все прогнозы равны, сопоставимых пар нет
    """
    POISSON_WORLD = "poisson-world"
    GAMMA_WORLD = "gamma-world"
    SEPARABLE = "separable"
    DEGENERATE_TIES = "degenerate-ties"

    @property
    def kind(self) -> DatasetKind:
        if self is SyntheticScenario.GAMMA_WORLD:
            return DatasetKind.SEVERITY
        return DatasetKind.FREQUENCY


class RowRejection(BaseModel):
    """Отклоненная строка: номер строки файла (заголовок - строка 1) и причина"""
    model_config = ConfigDict(frozen=True)

    row: int = Field(..., ge=1)
    reason: str


class DatasetSource(BaseModel):
    model_config = ConfigDict(frozen=True)

    path: Optional[str] = None
    row_count: int = Field(..., ge=0)
    rejected_count: int = Field(default=0, ge=0)
    scenario: Optional[SyntheticScenario] = None
    seed: Optional[int] = None

    @property
    def accepted_count(self) -> int:
        return self.row_count - self.rejected_count


@dataclass(frozen=True, eq=False)
class Dataset:
    """
    Проверенный набор записей с описанием источника.

    extras - дополнительные числовые колонки принятых строк (например, прогноз другой модели).
    """
    kind: DatasetKind
    frame: Union[FrequencyFrame, SeverityFrame]
    source: DatasetSource
    rejections: List[RowRejection] = field(default_factory=list)
    extras: Dict[str, np.ndarray] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def records(self):
        return self.frame.to_records()


class DatasetDescription(BaseModel):
    """Краткое описание набора: доли классов числа убытков или квантили размеров убытков"""
    model_config = ConfigDict(frozen=True)

    kind: DatasetKind
    rows: int
    class_shares: Optional[Dict[str, float]] = None
    exposure_one_share: Optional[float] = None
    mean_exposure: Optional[float] = None
    claim_size_quantiles: Optional[Dict[str, float]] = None
