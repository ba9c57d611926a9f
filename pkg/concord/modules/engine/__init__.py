from concord.modules.engine.schemas import ExactEngine, SampledEngine, ClusteredEngine, Engine
from concord.modules.engine.service import estimate, sampling_config_for, derive_engine

__all__ = ["ExactEngine", "SampledEngine", "ClusteredEngine", "Engine", "estimate", "sampling_config_for",
           "derive_engine"]
