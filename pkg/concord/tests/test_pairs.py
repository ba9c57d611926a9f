import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pydantic import ValidationError

from concord.core.exceptions import EmptyInputError, NoComparablePairsError, RecordValidationError
from concord.modules.pairs.frames import FrequencyFrame, SeverityFrame
from concord.modules.pairs.kernel import FrequencyPairIndex
from concord.modules.pairs.schemas import (
    FrequencyContrast, FrequencyPairSpec, FrequencyRecord, PairClass, PairCounts,
    SeverityPairSpec, SeverityRecord,
)
from concord.modules.pairs.service import (
    classify_frequency_pair, classify_severity_pair, exact_concordance, exact_counts,
)
from concord.tests.conftest import random_frequency_frame, random_severity_frame

policy_rows = st.lists(
    st.tuples(st.integers(0, 3), st.integers(1, 20), st.integers(1, 60)),
    min_size=2,
    max_size=40,
)


def frame_from_rows(rows):
    return FrequencyFrame(
        claim_count=[y for y, _, _ in rows],
        exposure=[e / 20 for _, e, _ in rows],
        prediction=[p / 64 for _, _, p in rows],
    )


def brute_frequency_counts(frame: FrequencyFrame, contrast: FrequencyContrast, tol: float) -> PairCounts:
    """Перебор всех упорядоченных пар записей через скалярную классификацию"""
    records = frame.to_records()
    classes = [classify_frequency_pair(a, b, contrast, tol) for a, b in itertools.product(records, records)]
    return PairCounts.of(
        classes.count(PairClass.CONCORDANT),
        classes.count(PairClass.DISCORDANT),
        classes.count(PairClass.TIED_PREDICTION),
    )


def brute_severity_counts(frame: SeverityFrame, v: float) -> PairCounts:
    records = frame.to_records()
    classes = [classify_severity_pair(a, b, v) for a, b in itertools.product(records, records)]
    return PairCounts.of(
        classes.count(PairClass.CONCORDANT),
        classes.count(PairClass.DISCORDANT),
        classes.count(PairClass.TIED_PREDICTION),
    )


class TestPairClassification:
    """Тесты классификации упорядоченных пар"""

    @pytest.mark.parametrize("a, b, tol, expected", [
        ((0, 0.50, 0.1), (1, 0.52, 0.3), 0.05, PairClass.CONCORDANT),
        ((0, 0.50, 0.1), (1, 0.60, 0.3), 0.05, PairClass.NOT_COMPARABLE),
        ((0, 0.50, 0.4), (1, 0.50, 0.3), 0.05, PairClass.DISCORDANT),
        ((0, 0.50, 0.3), (1, 0.50, 0.3), 0.05, PairClass.TIED_PREDICTION),
        ((1, 0.50, 0.1), (1, 0.50, 0.3), 0.05, PairClass.NOT_COMPARABLE),
        ((0, 0.50, 0.1), (0, 0.50, 0.3), 0.05, PairClass.NOT_COMPARABLE),
    ])
    def test_frequency_pair(self, a, b, tol, expected):
        """Проверяет классы пар контраста 01+ с допуском по экспозиции"""
        left = FrequencyRecord(claim_count=a[0], exposure=a[1], prediction=a[2])
        right = FrequencyRecord(claim_count=b[0], exposure=b[1], prediction=b[2])
        assert classify_frequency_pair(left, right, FrequencyContrast.ZERO_VS_ONE_PLUS, tol) == expected

    @pytest.mark.parametrize("contrast, a_count, b_count, comparable", [
        (FrequencyContrast.ZERO_VS_ONE_PLUS, 0, 1, True),
        (FrequencyContrast.ZERO_VS_ONE_PLUS, 0, 3, True),
        (FrequencyContrast.ZERO_VS_TWO_PLUS, 0, 1, False),
        (FrequencyContrast.ZERO_VS_TWO_PLUS, 0, 2, True),
        (FrequencyContrast.ONE_VS_TWO_PLUS, 1, 2, True),
        (FrequencyContrast.ONE_VS_TWO_PLUS, 0, 2, False),
        (FrequencyContrast.ONE_VS_TWO_PLUS, 2, 3, False),
    ])
    def test_contrast_groups(self, contrast, a_count, b_count, comparable):
        """Проверяет состав групп A и B для каждого контраста"""
        a = FrequencyRecord(claim_count=a_count, exposure=1.0, prediction=0.1)
        b = FrequencyRecord(claim_count=b_count, exposure=1.0, prediction=0.2)
        result = classify_frequency_pair(a, b, contrast, 0.05)
        assert (result is not PairClass.NOT_COMPARABLE) == comparable

    @pytest.mark.parametrize("a, b, v, expected", [
        ((100.0, 120.0), (150.0, 110.0), 0.0, PairClass.DISCORDANT),
        ((100.0, 120.0), (400.0, 300.0), 100.0, PairClass.CONCORDANT),
        ((100.0, 120.0), (150.0, 110.0), 100.0, PairClass.NOT_COMPARABLE),
        ((150.0, 110.0), (100.0, 120.0), 0.0, PairClass.NOT_COMPARABLE),
        ((100.0, 120.0), (100.0, 130.0), 0.0, PairClass.NOT_COMPARABLE),
        ((100.0, 120.0), (200.0, 120.0), 100.0, PairClass.TIED_PREDICTION),
    ])
    def test_severity_pair(self, a, b, v, expected):
        """Проверяет классы пар убытков с порогом v (граница v включается)"""
        left = SeverityRecord(claim_size=a[0], prediction=a[1])
        right = SeverityRecord(claim_size=b[0], prediction=b[1])
        assert classify_severity_pair(left, right, v) == expected


class TestExactConcordance:
    """Тесты точной оценки перебором"""

    def test_four_policies(self, four_policies):
        """Проверяет пример с двумя согласованными и двумя несогласованными парами"""
        result = exact_concordance(
            four_policies, FrequencyPairSpec(contrast=FrequencyContrast.ZERO_VS_ONE_PLUS, exposure_tol=0.05),
        )
        assert result.value == 0.5
        assert result.counts == PairCounts.of(2, 2, 0)
        assert result.meta["contrast"] == "01+"

    def test_no_claims_raises(self):
        """Проверяет, что набор без убытков не имеет сопоставимых пар"""
        records = [FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.1 * (i + 1)) for i in range(5)]
        with pytest.raises(NoComparablePairsError) as exc_info:
            exact_concordance(records, FrequencyPairSpec(contrast="01+"))
        assert exc_info.value.code == "no_comparable_pairs"

    def test_empty_input_raises(self):
        with pytest.raises(EmptyInputError):
            exact_concordance([], FrequencyPairSpec(contrast="01+"))

    def test_ties_are_counted_separately(self):
        """Проверяет, что пары с равными прогнозами не входят в n_t"""
        records = [
            FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.2),
            FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.2),
            FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.3),
        ]
        result = exact_concordance(records, FrequencyPairSpec(contrast="01+"))
        assert result.counts.tied == 1
        assert result.counts.comparable == 1
        assert result.value == 1.0
        assert result.counts.concordance(ties="half") == 0.75

    @pytest.mark.parametrize("contrast", list(FrequencyContrast))
    @pytest.mark.parametrize("tol", [0.0, 0.05, 0.2, 1.0])
    def test_vectorized_matches_brute_force(self, rng, contrast, tol):
        """Проверяет совпадение векторизованного перебора со скалярной классификацией"""
        frame = random_frequency_frame(rng, 60)
        spec = FrequencyPairSpec(contrast=contrast, exposure_tol=tol)
        assert exact_counts(frame, spec, workers=1) == brute_frequency_counts(frame, contrast, tol)

    @pytest.mark.parametrize("v", [0.0, 10.0, 55.0, 300.0])
    def test_severity_matches_brute_force(self, rng, v):
        frame = random_severity_frame(rng, 50)
        assert exact_counts(frame, SeverityPairSpec(v=v), workers=1) == brute_severity_counts(frame, v)

    @pytest.mark.parametrize("workers, chunk", [(1, 1), (1, 7), (4, 3), (8, 256)])
    def test_result_independent_of_workers(self, rng, workers, chunk):
        """Проверяет, что итог не зависит от числа потоков и размера блока"""
        frame = random_frequency_frame(rng, 300)
        index = FrequencyPairIndex(frame, FrequencyContrast.ZERO_VS_ONE_PLUS, 0.05)
        reference = index.exact_counts(300, workers=1)
        assert index.exact_counts(chunk, workers=workers) == reference


class TestConcordanceInvariants:
    """Свойства точной оценки на случайных наборах"""

    @settings(max_examples=1000, deadline=None)
    @given(rows=policy_rows, contrast=st.sampled_from(list(FrequencyContrast)))
    def test_rank_invariance(self, rows, contrast):
        """Строго возрастающее преобразование прогнозов не меняет счетчики пар"""
        frame = frame_from_rows(rows)
        spec = FrequencyPairSpec(contrast=contrast, exposure_tol=0.05)
        transformed = frame.with_predictions(frame.prediction ** 3 + frame.prediction)
        assert exact_counts(frame, spec, workers=1) == exact_counts(transformed, spec, workers=1)

    @settings(max_examples=1000, deadline=None)
    @given(rows=policy_rows, contrast=st.sampled_from(list(FrequencyContrast)))
    def test_reversed_order_swaps_counts(self, rows, contrast):
        """Убывающее преобразование прогнозов меняет местами согласованные и несогласованные пары"""
        frame = frame_from_rows(rows)
        spec = FrequencyPairSpec(contrast=contrast, exposure_tol=0.05)
        counts = exact_counts(frame, spec, workers=1)
        reversed_counts = exact_counts(frame.with_predictions(1.0 / frame.prediction), spec, workers=1)
        assert reversed_counts.concordant == counts.discordant
        assert reversed_counts.discordant == counts.concordant
        assert reversed_counts.tied == counts.tied
        if counts.comparable:
            assert reversed_counts.concordance() == pytest.approx(1.0 - counts.concordance(), abs=1e-12)

    @settings(max_examples=1000, deadline=None)
    @given(rows=policy_rows, seed=st.integers(0, 2 ** 32 - 1))
    def test_permutation_invariance(self, rows, seed):
        """Перестановка записей не меняет результат"""
        frame = frame_from_rows(rows)
        order = np.random.default_rng(seed).permutation(len(frame))
        shuffled = FrequencyFrame(frame.claim_count[order], frame.exposure[order], frame.prediction[order])
        spec = FrequencyPairSpec(contrast="01+", exposure_tol=0.05)
        assert exact_counts(frame, spec, workers=1) == exact_counts(shuffled, spec, workers=1)

    @settings(max_examples=1000, deadline=None)
    @given(rows=policy_rows, tols=st.tuples(st.integers(0, 20), st.integers(0, 20)))
    def test_tolerance_monotonicity(self, rows, tols):
        """Больший допуск по экспозиции не уменьшает число сопоставимых пар"""
        small, large = sorted(t / 20 for t in tols)
        frame = frame_from_rows(rows)
        narrow = exact_counts(frame, FrequencyPairSpec(contrast="01+", exposure_tol=small), workers=1)
        wide = exact_counts(frame, FrequencyPairSpec(contrast="01+", exposure_tol=large), workers=1)
        assert narrow.comparable <= wide.comparable
        assert narrow.tied <= wide.tied

    @settings(max_examples=1000, deadline=None)
    @given(rows=policy_rows)
    def test_value_within_unit_interval(self, rows):
        frame = frame_from_rows(rows)
        counts = exact_counts(frame, FrequencyPairSpec(contrast="01+"), workers=1)
        assert counts.comparable == counts.concordant + counts.discordant
        if counts.comparable:
            assert 0.0 <= counts.concordance() <= 1.0


class TestRecordValidation:
    """Тесты инвариантов записей и кадров"""

    @pytest.mark.parametrize("values", [
        {"claim_count": -1, "exposure": 0.5, "prediction": 0.1},
        {"claim_count": 0, "exposure": 0.0, "prediction": 0.1},
        {"claim_count": 0, "exposure": 1.2, "prediction": 0.1},
        {"claim_count": 0, "exposure": 0.5, "prediction": 0.0},
        {"claim_count": 0, "exposure": 0.5, "prediction": float("inf")},
    ])
    def test_invalid_frequency_record(self, values):
        with pytest.raises(ValidationError):
            FrequencyRecord(**values)

    def test_frame_collects_field_errors(self):
        """Проверяет, что кадр сообщает обо всех нарушенных полях сразу"""
        with pytest.raises(RecordValidationError) as exc_info:
            FrequencyFrame(claim_count=[0, -1], exposure=[0.5, 1.5], prediction=[0.1, 0.2])
        assert set(exc_info.value.field_errors) == {"claim_count", "exposure"}
        assert "Ошибки полей" in str(exc_info.value)

    @pytest.mark.parametrize("claim_count", [[0, 1.5], [0.0, float("nan")], [1.0, float("inf")]])
    def test_frame_rejects_fractional_claim_count(self, claim_count):
        """Дробное число убытков отклоняется, а не округляется при приведении к целому"""
        with pytest.raises(RecordValidationError) as exc_info:
            FrequencyFrame(claim_count=claim_count, exposure=[0.5, 0.5], prediction=[0.1, 0.2])
        assert exc_info.value.field_errors == {"claim_count": ["1 rows not an integer"]}

    def test_frame_accepts_integral_floats(self):
        frame = FrequencyFrame(claim_count=[0.0, 2.0], exposure=[0.5, 0.5], prediction=[0.1, 0.2])
        assert frame.claim_count.tolist() == [0, 2]

    def test_frame_is_read_only(self):
        frame = FrequencyFrame(claim_count=[0], exposure=[1.0], prediction=[0.1])
        with pytest.raises(ValueError):
            frame.prediction[0] = 0.2

    def test_severity_frame_rejects_zero_size(self):
        with pytest.raises(RecordValidationError):
            SeverityFrame(claim_size=[0.0, 10.0], prediction=[1.0, 2.0])

    def test_pair_counts_identity(self):
        with pytest.raises(ValidationError):
            PairCounts(concordant=1, discordant=1, comparable=3)
