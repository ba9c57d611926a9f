from concord.modules.sampling.schemas import SamplingConfig, SampleTally, VarianceComponents
from concord.modules.sampling.service import (
    sample_tally, estimate_from_tally, variance_components, confidence_interval,
    sampled_concordance, adaptive_sampled_concordance,
)

__all__ = [
    "SamplingConfig", "SampleTally", "VarianceComponents",
    "sample_tally", "estimate_from_tally", "variance_components", "confidence_interval",
    "sampled_concordance", "adaptive_sampled_concordance",
]
