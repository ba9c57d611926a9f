"""
Pydantic модели предметной области: записи полисов и убытков, определения пар,
счетчики пар и результат оценивания.
"""
import enum
import math
from typing import Any, Dict, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class FrequencyRecord(BaseModel):
    """Полис: наблюдаемое число убытков Y^N, экспозиция λ, прогноз частоты π^N"""
    model_config = ConfigDict(frozen=True)

    claim_count: int = Field(..., ge=0)
    exposure: float = Field(..., gt=0.0, le=1.0)
    prediction: float = Field(..., gt=0.0)

    @field_validator('prediction')
    @classmethod
    def prediction_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError('prediction must be finite')
        return v


class SeverityRecord(BaseModel):
    """Убыток: наблюдаемый размер Y^S и прогноз размера π^S"""
    model_config = ConfigDict(frozen=True)

    claim_size: float = Field(..., gt=0.0)
    prediction: float = Field(..., gt=0.0)

    @field_validator('claim_size', 'prediction')
    @classmethod
    def value_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError('value must be finite')
        return v


class FrequencyContrast(str, enum.Enum):
    """
    Контрасты групп по числу убытков.

    - ZERO_VS_ONE_PLUS: группа A - Y=0, группа B - Y>=1
    - ZERO_VS_TWO_PLUS: группа A - Y=0, группа B - Y>=2
    - ONE_VS_TWO_PLUS: группа A - Y=1, группа B - Y>=2
    """
    ZERO_VS_ONE_PLUS = "01+"
    ZERO_VS_TWO_PLUS = "02+"
    ONE_VS_TWO_PLUS = "12+"

    @property
    def group_a_count(self) -> int:
        return 1 if self is FrequencyContrast.ONE_VS_TWO_PLUS else 0

    @property
    def group_b_min_count(self) -> int:
        return 1 if self is FrequencyContrast.ZERO_VS_ONE_PLUS else 2

    def in_group_a(self, claim_count: int) -> bool:
        return claim_count == self.group_a_count

    def in_group_b(self, claim_count: int) -> bool:
        return claim_count >= self.group_b_min_count


class PairClass(str, enum.Enum):
    """Класс упорядоченной пары"""
    NOT_COMPARABLE = "not_comparable"
    CONCORDANT = "concordant"
    DISCORDANT = "discordant"
    TIED_PREDICTION = "tied_prediction"


class EstimationMethod(str, enum.Enum):
    EXACT = "exact"
    SAMPLED = "sampled"
    CLUSTERED = "clustered"


class FrequencyPairSpec(BaseModel):
    """Определение сопоставимой пары для данных о частоте"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["frequency"] = "frequency"
    contrast: FrequencyContrast
    exposure_tol: float = Field(default=0.05, ge=0.0)

    def describe(self) -> str:
        return f"frequency contrast={self.contrast.value} exposure_tol={self.exposure_tol}"


class SeverityPairSpec(BaseModel):
    """Определение сопоставимой пары для данных о тяжести (порог v)"""
    model_config = ConfigDict(frozen=True)

    kind: Literal["severity"] = "severity"
    v: float = Field(default=0.0, ge=0.0)

    @field_validator('v')
    @classmethod
    def v_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError('v must be finite')
        return v

    def describe(self) -> str:
        return f"severity v={self.v}"


PairSpec = Union[FrequencyPairSpec, SeverityPairSpec]


class PairCounts(BaseModel):
    """
    Целочисленные счетчики пар.

    Пары с равными прогнозами учитываются в tied и исключаются из comparable (n_t).
    """
    model_config = ConfigDict(frozen=True)

    concordant: int = Field(default=0, ge=0)
    discordant: int = Field(default=0, ge=0)
    tied: int = Field(default=0, ge=0)
    comparable: int = Field(default=0, ge=0)

    @model_validator(mode='after')
    def check_identity(self) -> 'PairCounts':
        if self.comparable != self.concordant + self.discordant:
            raise ValueError('comparable must equal concordant + discordant')
        return self

    @classmethod
    def of(cls, concordant: int, discordant: int, tied: int = 0) -> 'PairCounts':
        return cls(
            concordant=int(concordant),
            discordant=int(discordant),
            tied=int(tied),
            comparable=int(concordant) + int(discordant),
        )

    def __add__(self, other: 'PairCounts') -> 'PairCounts':
        return PairCounts.of(
            self.concordant + other.concordant,
            self.discordant + other.discordant,
            self.tied + other.tied,
        )

    def concordance(self, ties: Literal["exclude", "half"] = "exclude") -> float:
        """
        Отношение n_c / n_t.

        ties="half" пересчитывает значение по соглашению, в котором пары с равными
        прогнозами входят в знаменатель с половинным вкладом.
        """
        if ties == "half":
            total = self.comparable + self.tied
            if total == 0:
                raise ZeroDivisionError("no admissible pairs")
            return (self.concordant + 0.5 * self.tied) / total
        if self.comparable == 0:
            raise ZeroDivisionError("no comparable pairs")
        return self.concordant / self.comparable


class ClusterMass(BaseModel):
    """Массы согласованных, несогласованных и совпавших пар центроидов"""
    model_config = ConfigDict(frozen=True)

    concordant: float = Field(..., ge=0.0)
    discordant: float = Field(..., ge=0.0)
    tied: float = Field(..., ge=0.0)
    pair_count: int = Field(..., ge=0)


class ConfidenceInterval(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    alpha: float = Field(..., gt=0.0, lt=1.0)

    @property
    def width(self) -> float:
        return self.upper - self.lower


class ConcordanceEstimate(BaseModel):
    """
    Точечная оценка вероятности согласованности с ДИ и параметрами запуска.
    """
    model_config = ConfigDict(frozen=True)

    value: float = Field(..., ge=0.0, le=1.0)
    method: EstimationMethod
    counts: Optional[PairCounts] = None
    mass: Optional[ClusterMass] = None
    ci: Optional[ConfidenceInterval] = None
    meta: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode='after')
    def check_interval(self) -> 'ConcordanceEstimate':
        if self.ci is not None and not (self.ci.lower <= self.value <= self.ci.upper):
            raise ValueError('confidence interval must contain the estimate')
        return self

    @property
    def n_pairs(self) -> int:
        """Число сопоставимых пар (для кластерной оценки - число пар в корзинах)"""
        if self.counts is not None:
            return self.counts.comparable
        if self.mass is not None:
            return self.mass.pair_count
        return 0

    @property
    def ci_bounds(self) -> Tuple[Optional[float], Optional[float]]:
        if self.ci is None:
            return None, None
        return self.ci.lower, self.ci.upper
