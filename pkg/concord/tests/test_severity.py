import pytest
from pydantic import ValidationError

from concord.core.exceptions import ConfigurationError, NoComparablePairsError
from concord.modules.cluster.schemas import KMeansConfig
from concord.modules.engine.schemas import ClusteredEngine, SampledEngine
from concord.modules.engine.service import sampling_config_for
from concord.modules.pairs.schemas import SeverityPairSpec
from concord.modules.pairs.service import exact_counts
from concord.modules.sampling.schemas import SamplingConfig
from concord.modules.severity.schemas import SeverityCurveConfig
from concord.modules.severity.service import default_v_grid, severity_concordance, severity_curve


class TestSeverityConcordance:
    """Тесты C(v) для моделей тяжести"""

    def test_all_pairs(self, three_claims):
        """При v = 0 две из трех пар согласованы"""
        result = severity_concordance(three_claims, v=0.0)
        assert result.value == pytest.approx(2 / 3)
        assert result.counts.comparable == 3

    def test_threshold_keeps_large_gaps(self, three_claims):
        result = severity_concordance(three_claims, v=100.0)
        assert result.value == 1.0
        assert result.counts.comparable == 2

    def test_threshold_above_all_gaps(self, three_claims):
        with pytest.raises(NoComparablePairsError):
            severity_concordance(three_claims, v=1e12)

    def test_clustered_engine_rejected(self, three_claims):
        with pytest.raises(ConfigurationError):
            severity_concordance(three_claims, engine=ClusteredEngine(config=KMeansConfig(k=2)))

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValidationError):
            SeverityPairSpec(v=-1.0)

    def test_larger_threshold_never_adds_pairs(self, gamma_claims):
        """Число сопоставимых пар не растет с порогом v"""
        comparable = [
            exact_counts(gamma_claims.frame, SeverityPairSpec(v=v)).comparable
            for v in (0.0, 100.0, 500.0, 2000.0, 10000.0)
        ]
        assert comparable == sorted(comparable, reverse=True)

    def test_sampled_default_size(self):
        """Без явной конфигурации выборочный движок для тяжести использует S по умолчанию для убытков"""
        config = sampling_config_for(SampledEngine(), SeverityPairSpec())
        assert config.sample_size == SamplingConfig.for_severity().sample_size

    def test_sampled_close_to_exact(self, gamma_claims):
        exact = severity_concordance(gamma_claims.frame, v=0.0)
        sampled = severity_concordance(
            gamma_claims.frame, v=0.0, engine=SampledEngine(config=SamplingConfig(sample_size=300, seed=2)),
        )
        assert abs(sampled.value - exact.value) < 0.05
        assert sampled.ci.lower <= sampled.value <= sampled.ci.upper


class TestSeverityCurve:
    """Тесты кривой (v, C(v))"""

    def test_explicit_grid(self, three_claims):
        points = severity_curve(three_claims, SeverityCurveConfig(v_grid=(0.0, 100.0)))
        assert [p.value for p in points] == [pytest.approx(2 / 3), 1.0]
        assert [p.n_pairs for p in points] == [3, 2]

    def test_unreachable_threshold_marked(self, three_claims):
        points = severity_curve(three_claims, SeverityCurveConfig(v_grid=(0.0, 1e6)))
        assert points[1].status == "no-comparable-pairs"
        assert points[1].value is None

    def test_default_grid(self, gamma_claims):
        grid = default_v_grid(gamma_claims.frame)
        assert grid[0] == 0.0
        assert 1 < len(grid) <= 10
        assert all(b > a for a, b in zip(grid, grid[1:]))

    def test_default_grid_single_claim(self):
        from concord.modules.pairs.schemas import SeverityRecord

        assert default_v_grid([SeverityRecord(claim_size=10.0, prediction=5.0)]) == (0.0,)

    def test_sampled_curve_has_intervals(self, gamma_claims):
        """Каждая точка кривой выборочного движка несет поточечный ДИ"""
        engine = SampledEngine(config=SamplingConfig(sample_size=200, seed=3))
        config = SeverityCurveConfig(v_grid=(0.0, 500.0, 1000.0), engine=engine)
        points = severity_curve(gamma_claims.frame, config)
        assert all(p.status == "ok" for p in points)
        assert all(p.estimate.ci is not None for p in points)
        assert [p.estimate.meta["seed"] for p in points] == [3, 2, 1]

    @pytest.mark.parametrize("grid", [(100.0, 50.0), (-1.0,), (0.0, float("inf"))])
    def test_invalid_grid(self, grid):
        with pytest.raises(ValidationError):
            SeverityCurveConfig(v_grid=grid)
