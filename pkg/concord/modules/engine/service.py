from typing import Optional, Union

from concord.modules.cluster.service import clustered_concordance
from concord.modules.engine.schemas import ClusteredEngine, Engine, ExactEngine, SampledEngine
from concord.modules.pairs.frames import FrequencyInput, SeverityInput
from concord.modules.pairs.schemas import ConcordanceEstimate, FrequencyPairSpec, PairSpec
from concord.modules.pairs.service import exact_concordance
from concord.modules.sampling.schemas import SamplingConfig
from concord.modules.sampling.service import adaptive_sampled_concordance, sampled_concordance


def sampling_config_for(engine: SampledEngine, spec: PairSpec) -> SamplingConfig:
    """Конфигурация выборки; S по умолчанию зависит от типа данных"""
    if engine.config is not None:
        return engine.config
    if isinstance(spec, FrequencyPairSpec):
        return SamplingConfig()
    return SamplingConfig.for_severity()


def engine_meta(engine: Engine) -> dict:
    return {"engine": engine.kind}


def derive_engine(engine: Engine, spec: PairSpec, index: int) -> Engine:
    """
    Движок для точки сетки с номером index: зерно заменяется на seed XOR index.
    """
    if isinstance(engine, SampledEngine):
        config = sampling_config_for(engine, spec)
        return engine.model_copy(update={"config": config.model_copy(update={"seed": config.seed ^ index})})
    if isinstance(engine, ClusteredEngine):
        return engine.model_copy(update={"config": engine.config.model_copy(update={"seed": engine.config.seed ^ index})})
    return engine


def estimate(
    records: Union[FrequencyInput, SeverityInput],
    spec: PairSpec,
    engine: Optional[Engine] = None,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    Оценка выбранным движком (по умолчанию точный перебор).
    """
    engine = engine or ExactEngine()
    if isinstance(engine, SampledEngine):
        config = sampling_config_for(engine, spec)
        if engine.target_width is not None:
            result = adaptive_sampled_concordance(
                records, spec, config, engine.target_width, engine.max_size, workers,
            )
        else:
            result = sampled_concordance(records, spec, config, workers)
    elif isinstance(engine, ClusteredEngine):
        result = clustered_concordance(records, spec, engine.config, workers)
    else:
        result = exact_concordance(records, spec, workers)
    return result.model_copy(update={"meta": {**result.meta, **engine_meta(engine)}})
