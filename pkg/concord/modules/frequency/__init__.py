from concord.modules.frequency.schemas import (
    LocalCurveConfig, CurvePoint, ContrastResult, ModelComparison, default_lambda_grid,
)
from concord.modules.frequency.service import (
    global_frequency_concordance, local_frequency_curve, frequency_summary, compare_frequency_models,
)

__all__ = [
    "LocalCurveConfig", "CurvePoint", "ContrastResult", "ModelComparison", "default_lambda_grid",
    "global_frequency_concordance", "local_frequency_curve", "frequency_summary", "compare_frequency_models",
]
