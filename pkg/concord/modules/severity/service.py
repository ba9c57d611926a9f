"""
Сервис вероятности согласованности для моделей тяжести убытков: C(v) и кривая (v, C(v)).
"""
from typing import List, Optional, Tuple

import numpy as np

from concord.config import settings
from concord.core.exceptions import NoComparablePairsError
from concord.core.logging import get_logger
from concord.modules.engine.schemas import Engine
from concord.modules.engine.service import derive_engine, estimate
from concord.modules.frequency.schemas import CurvePoint
from concord.modules.pairs.frames import SeverityInput, as_severity_frame
from concord.modules.pairs.schemas import ConcordanceEstimate, SeverityPairSpec
from concord.modules.severity.schemas import SeverityCurveConfig

logger = get_logger(__name__)

_GRID_QUANTILES = np.linspace(0.0, 0.9, 10)


def severity_concordance(
    records: SeverityInput,
    v: float = 0.0,
    engine: Optional[Engine] = None,
    workers: Optional[int] = None,
) -> ConcordanceEstimate:
    """
    C(v) по парам убытков с Y_i < Y_j и Y_j - Y_i >= v.

    Raises:
        NoComparablePairsError: Нет пары с разностью не меньше v
        ConfigurationError: Кластерный движок
    """
    return estimate(as_severity_frame(records), SeverityPairSpec(v=v), engine, workers)


def default_v_grid(
    records: SeverityInput,
    pairs: Optional[int] = None,
    seed: Optional[int] = None,
) -> Tuple[float, ...]:
    """
    Сетка порогов: 0 и квантили 10%, ..., 90% модулей разностей размеров убытков
    для случайной выборки пар.
    """
    frame = as_severity_frame(records)
    n = len(frame)
    if n < 2:
        return (0.0,)
    pairs = pairs or settings.curve.SEVERITY_GAP_PAIRS
    rng = np.random.default_rng(settings.sampling.SEED if seed is None else seed)
    first = rng.integers(0, n, size=pairs)
    # Второй элемент пары отличается от первого
    second = (first + rng.integers(1, n, size=pairs)) % n
    gaps = np.abs(frame.claim_size[first] - frame.claim_size[second])
    quantiles = np.quantile(gaps, _GRID_QUANTILES[1:])
    grid = np.unique(np.concatenate(([0.0], quantiles)))
    return tuple(float(v) for v in grid)


def severity_curve(
    records: SeverityInput,
    config: Optional[SeverityCurveConfig] = None,
    workers: Optional[int] = None,
) -> List[CurvePoint]:
    """
    Кривая (v, C(v)); для выборочного движка каждая точка несет поточечный ДИ.

    Зерно движка в точке i равно seed XOR i.
    """
    config = config or SeverityCurveConfig()
    frame = as_severity_frame(records)
    grid = config.v_grid if config.v_grid is not None else default_v_grid(frame)

    points: List[CurvePoint] = []
    for index, v in enumerate(grid):
        spec = SeverityPairSpec(v=v)
        try:
            result = estimate(frame, spec, derive_engine(config.engine, spec, index), workers)
        except NoComparablePairsError as e:
            logger.debug("curve point without comparable pairs", extra={"x": v, "reason": e.message})
            points.append(CurvePoint(x=v, status="no-comparable-pairs"))
            continue
        points.append(CurvePoint(x=v, estimate=result, n_pairs=result.n_pairs))

    logger.info(
        "severity curve computed",
        extra={"points": len(points), "engine": config.engine.kind},
    )
    return points
