"""
Выбор движка оценивания: точный перебор, выборочный алгоритм или центроиды кластеров.
"""
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from concord.modules.cluster.schemas import KMeansConfig
from concord.modules.sampling.schemas import SamplingConfig


class ExactEngine(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["exact"] = "exact"


class SampledEngine(BaseModel):
    """
    Выборочный алгоритм. Без config используется S по умолчанию для типа данных;
    при заданной target_width S удваивается до достижения целевой ширины ДИ.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["sampled"] = "sampled"
    config: Optional[SamplingConfig] = None
    target_width: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    max_size: Optional[int] = Field(default=None, ge=1)


class ClusteredEngine(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["clustered"] = "clustered"
    config: KMeansConfig = Field(default_factory=KMeansConfig)


Engine = Annotated[Union[ExactEngine, SampledEngine, ClusteredEngine], Field(discriminator="kind")]
