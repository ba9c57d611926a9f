from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

from concord.modules.engine.schemas import Engine, ExactEngine


class SeverityCurveConfig(BaseModel):
    """
    Сетка порогов v и движок оценивания для кривой (v, C(v)).

    Без v_grid сетка строится по квантилям разностей размеров убытков.
    """
    model_config = ConfigDict(frozen=True)

    v_grid: Optional[Tuple[float, ...]] = Field(default=None, min_length=1)
    engine: Engine = Field(default_factory=ExactEngine)

    @field_validator('v_grid')
    @classmethod
    def grid_ascending(cls, v: Optional[Tuple[float, ...]]) -> Optional[Tuple[float, ...]]:
        if v is None:
            return v
        if any(not (x >= 0.0) or x == float("inf") for x in v):
            raise ValueError('thresholds must be finite and non-negative')
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError('grid must be strictly ascending')
        return v
