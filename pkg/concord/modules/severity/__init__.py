from concord.modules.severity.schemas import SeverityCurveConfig
from concord.modules.severity.service import severity_concordance, severity_curve, default_v_grid

__all__ = ["SeverityCurveConfig", "severity_concordance", "severity_curve", "default_v_grid"]
