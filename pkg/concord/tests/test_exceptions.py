import pytest

from concord.core.exceptions import (
    AllRowsRejectedError, ConcordError, ConfigurationError, DatasetNotFoundError, DegenerateVarianceError,
    EmptyGroupError, EstimationError, MissingColumnError, NoComparablePairsError, RecordValidationError,
)


class TestConcordError:
    """Тесты базового исключения"""

    def test_format_message(self):
        error = ConcordError("Сбой", code="x", details={"a": 1})
        assert str(error) == "Сбой [Код: x] [Детали: a=1]"

    def test_to_dict(self):
        error = ConcordError("Сбой", code="x", cause=ValueError("внутри"))
        assert error.to_dict() == {
            "error_type": "ConcordError",
            "message": "Сбой",
            "code": "x",
            "cause": {"type": "ValueError", "message": "внутри"},
        }

    def test_from_exception(self):
        original = OSError("диск недоступен")
        error = DatasetNotFoundError.from_exception(original, path="data.csv")
        assert error.cause is original
        assert error.message == "диск недоступен"
        assert error.details == {"path": "data.csv"}
        assert "[Первопричина: OSError: диск недоступен]" in str(error)


class TestErrorCodes:
    """Проверяет коды и детали конкретных исключений"""

    @pytest.mark.parametrize("error, code", [
        (NoComparablePairsError(), "no_comparable_pairs"),
        (DegenerateVarianceError(contributing=1), "degenerate_variance"),
        (EmptyGroupError("пусто", group="A"), "empty_group"),
        (ConfigurationError("плохо", parameter="k", value=0), "configuration"),
        (MissingColumnError("нет", missing=["exposure"]), "missing_column"),
        (AllRowsRejectedError("все", row_count=3), "all_rows_rejected"),
    ])
    def test_default_codes(self, error, code):
        assert error.code == code

    def test_estimation_hierarchy(self):
        assert issubclass(NoComparablePairsError, EstimationError)
        assert issubclass(EstimationError, ConcordError)

    def test_configuration_details(self):
        error = ConfigurationError("k должно быть не меньше 1", parameter="k", value=0)
        assert error.details == {"parameter": "k", "value": 0}

    def test_no_comparable_pairs_details(self):
        error = NoComparablePairsError(pair_spec="01+", counts={"comparable": 0})
        assert error.details == {"pair_spec": "01+", "counts": {"comparable": 0}}

    def test_rejection_reasons_truncated(self):
        error = AllRowsRejectedError("все", row_count=8, reasons=[f"r{i}" for i in range(8)])
        assert error.reasons == [f"r{i}" for i in range(8)]
        assert error.details["reasons"] == ["r0", "r1", "r2", "r3", "r4"]

    def test_record_field_errors(self):
        error = RecordValidationError("запись", field_errors={"exposure": ["exposure exceeds 1"]})
        assert str(error).endswith("Ошибки полей: exposure: exposure exceeds 1")
