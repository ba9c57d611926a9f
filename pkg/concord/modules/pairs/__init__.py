from concord.modules.pairs.schemas import (
    FrequencyRecord, SeverityRecord, FrequencyContrast, PairClass, PairCounts,
    EstimationMethod, FrequencyPairSpec, SeverityPairSpec, PairSpec,
    ClusterMass, ConfidenceInterval, ConcordanceEstimate,
)
from concord.modules.pairs.frames import (
    FrequencyFrame, SeverityFrame, as_frequency_frame, as_severity_frame,
)
from concord.modules.pairs.service import (
    classify_frequency_pair, classify_severity_pair, exact_concordance, exact_counts,
)

__all__ = [
    "FrequencyRecord", "SeverityRecord", "FrequencyContrast", "PairClass", "PairCounts",
    "EstimationMethod", "FrequencyPairSpec", "SeverityPairSpec", "PairSpec",
    "ClusterMass", "ConfidenceInterval", "ConcordanceEstimate",
    "FrequencyFrame", "SeverityFrame", "as_frequency_frame", "as_severity_frame",
    "classify_frequency_pair", "classify_severity_pair", "exact_concordance", "exact_counts",
]
