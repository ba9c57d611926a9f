import numpy as np
import pytest
from pydantic import ValidationError

from concord.core.exceptions import NoComparablePairsError
from concord.modules.engine.schemas import ClusteredEngine, ExactEngine, SampledEngine
from concord.modules.cluster.schemas import KMeansConfig
from concord.modules.dataset.service import generate_synthetic
from concord.modules.frequency.schemas import CurvePoint, LocalCurveConfig, default_lambda_grid
from concord.modules.frequency.service import (
    compare_frequency_models, frequency_summary, global_frequency_concordance, local_frequency_curve,
)
from concord.modules.pairs.frames import FrequencyFrame
from concord.modules.pairs.schemas import FrequencyContrast, FrequencyRecord
from concord.modules.sampling.schemas import SamplingConfig


@pytest.fixture
def two_populations():
    """
    Полисы с экспозицией 0.5 ранжированы моделью верно, с экспозицией 1.0 - в обратном порядке.
    """
    return [
        FrequencyRecord(claim_count=0, exposure=0.5, prediction=0.1),
        FrequencyRecord(claim_count=0, exposure=0.5, prediction=0.15),
        FrequencyRecord(claim_count=1, exposure=0.5, prediction=0.3),
        FrequencyRecord(claim_count=1, exposure=0.5, prediction=0.35),
        FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.5),
        FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.6),
        FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.2),
        FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.25),
    ]


class TestGlobalFrequency:
    """Тесты глобальных вероятностей согласованности частоты"""

    def test_four_policies(self, four_policies):
        result = global_frequency_concordance(four_policies, "01+", exposure_tol=0.05, engine=ExactEngine())
        assert result.value == 0.5
        assert result.meta["engine"] == "exact"

    def test_no_claims(self):
        records = [FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.1 + 0.01 * i) for i in range(6)]
        with pytest.raises(NoComparablePairsError):
            global_frequency_concordance(records, FrequencyContrast.ZERO_VS_ONE_PLUS)

    def test_tolerance_excludes_distant_exposures(self, two_populations):
        """С допуском 0.05 пары из разных подгрупп не сравниваются"""
        strict = global_frequency_concordance(two_populations, "01+", exposure_tol=0.05)
        loose = global_frequency_concordance(two_populations, "01+", exposure_tol=1.0)
        assert strict.counts.comparable == 8
        assert strict.value == 0.5
        assert loose.counts.comparable == 16

    def test_sampled_engine(self, poisson_portfolio):
        engine = SampledEngine(config=SamplingConfig(sample_size=500, seed=2))
        result = global_frequency_concordance(poisson_portfolio.frame, "01+", engine=engine)
        assert result.meta["engine"] == "sampled"
        assert result.ci is not None

    def test_clustered_engine(self, poisson_portfolio):
        engine = ClusteredEngine(config=KMeansConfig(k=20, exposure_bins=5))
        result = global_frequency_concordance(poisson_portfolio.frame, "02+", engine=engine)
        assert result.meta["engine"] == "clustered"
        assert 0.0 <= result.value <= 1.0


class TestLocalCurve:
    """Тесты локальной кривой (λ, C(λ))"""

    def test_two_populations(self, two_populations):
        config = LocalCurveConfig(lambda_grid=(0.5, 1.0), window=0.05, min_pairs=1)
        points = local_frequency_curve(two_populations, "01+", config)
        assert [p.value for p in points] == [1.0, 0.0]
        assert [p.n_pairs for p in points] == [4, 4]

    def test_point_without_records(self, two_populations):
        config = LocalCurveConfig(lambda_grid=(0.3, 0.5), window=0.05, min_pairs=1)
        points = local_frequency_curve(two_populations, "01+", config)
        assert points[0].status == "insufficient-pairs"
        assert points[0].value is None
        assert points[1].status == "ok"

    def test_min_pairs_threshold(self, two_populations):
        config = LocalCurveConfig(lambda_grid=(0.5,), window=0.05, min_pairs=5)
        points = local_frequency_curve(two_populations, "01+", config)
        assert points[0].status == "insufficient-pairs"
        assert points[0].n_pairs == 4

    def test_sampled_point_below_min_pairs(self, two_populations):
        """Выборочная точка с числом сопоставимых пар меньше min_pairs помечается insufficient-pairs"""
        engine = SampledEngine(config=SamplingConfig(sample_size=1, seed=0))
        config = LocalCurveConfig(lambda_grid=(0.5,), window=0.05, min_pairs=4)
        points = local_frequency_curve(two_populations, "01+", config, engine)
        assert points[0].status == "insufficient-pairs"
        assert points[0].n_pairs == 2

    def test_tied_window(self):
        """Окно, где все пары имеют равные прогнозы, помечается no-comparable-pairs"""
        records = [
            FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.2),
            FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.2),
        ]
        points = local_frequency_curve(records, "01+", LocalCurveConfig(lambda_grid=(1.0,), min_pairs=1))
        assert points[0].status == "no-comparable-pairs"

    def test_full_exposure_matches_global(self):
        """При экспозиции 1 у всех полисов точка λ = 1 совпадает с глобальной оценкой"""
        rng = np.random.default_rng(4)
        frame = FrequencyFrame(
            claim_count=rng.choice([0, 0, 1, 2], size=300),
            exposure=np.ones(300),
            prediction=rng.uniform(0.01, 1.0, 300),
        )
        points = local_frequency_curve(frame, "01+", LocalCurveConfig(lambda_grid=(1.0,), min_pairs=1))
        assert points[0].value == global_frequency_concordance(frame, "01+").value

    def test_narrow_window_has_fewer_pairs(self, poisson_portfolio):
        """Уменьшение окна не увеличивает число пар в точке"""
        grid = (0.2, 0.5, 0.8, 1.0)
        wide = local_frequency_curve(poisson_portfolio.frame, "01+",
                                     LocalCurveConfig(lambda_grid=grid, window=0.1, min_pairs=1))
        narrow = local_frequency_curve(poisson_portfolio.frame, "01+",
                                       LocalCurveConfig(lambda_grid=grid, window=0.05, min_pairs=1))
        for w, n in zip(wide, narrow):
            assert n.n_pairs <= w.n_pairs

    def test_sampled_points_use_derived_seeds(self, poisson_portfolio):
        engine = SampledEngine(config=SamplingConfig(sample_size=200, seed=8))
        config = LocalCurveConfig(lambda_grid=(0.5, 1.0), window=0.05, min_pairs=1)
        points = local_frequency_curve(poisson_portfolio.frame, "01+", config, engine)
        assert [p.estimate.meta["seed"] for p in points if p.status == "ok"] == [8, 9]

    def test_default_grid(self):
        grid = default_lambda_grid()
        assert len(grid) == 20
        assert grid[0] == 0.05
        assert grid[-1] == 1.0

    @pytest.mark.parametrize("grid", [(0.0, 0.5), (0.5, 0.4), (0.5, 1.2)])
    def test_invalid_grid(self, grid):
        with pytest.raises(ValidationError):
            LocalCurveConfig(lambda_grid=grid)

    def test_point_status_matches_estimate(self):
        with pytest.raises(ValidationError):
            CurvePoint(x=0.5, status="ok")


class TestSummaryAndComparison:
    """Тесты сводной таблицы контрастов и сравнения моделей"""

    def test_summary_marks_missing_contrast(self):
        """Контраст без полисов с 2+ убытками получает маркер, остальные оцениваются"""
        records = [
            FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.1),
            FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.3),
        ]
        rows = frequency_summary(records, exposure_tol=0.05)
        statuses = {row.contrast.value: row.status for row in rows}
        assert statuses == {"01+": "ok", "02+": "no-comparable-pairs", "12+": "no-comparable-pairs"}
        assert rows[0].estimate.value == 1.0

    def test_compare_same_model(self, poisson_portfolio):
        """Сравнение модели с самой собой дает нулевую разность при общих выборках"""
        engine = SampledEngine(config=SamplingConfig(sample_size=300, seed=1))
        comparison = compare_frequency_models(
            poisson_portfolio.frame, poisson_portfolio.frame.prediction, "01+", engine=engine,
        )
        assert comparison.difference == 0.0

    def test_true_rate_beats_partial_signal(self):
        """Истинная частота ранжирует полисы лучше модели, видящей часть латентного риска"""
        portfolio = generate_synthetic(20000, "poisson-world", seed=13)
        comparison = compare_frequency_models(portfolio.frame, portfolio.extras["prediction_alt"], "01+")
        assert comparison.baseline.value > comparison.alternative.value
        assert comparison.difference == pytest.approx(comparison.alternative.value - comparison.baseline.value)
