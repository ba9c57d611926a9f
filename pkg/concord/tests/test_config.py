import pytest
from pydantic import ValidationError

from concord.config import ClusterSettings, LoggingSettings, SamplingSettings, Settings


class TestSettings:
    """Тесты настроек из переменных окружения"""

    def test_defaults(self):
        sampling = SamplingSettings()
        assert sampling.FREQUENCY_SIZE == 20000
        assert sampling.SEVERITY_SIZE == 5000
        assert sampling.ALPHA == 0.05

    def test_nested_prefix(self, monkeypatch):
        monkeypatch.setenv("CONCORD_SAMPLING_FREQUENCY_SIZE", "1234")
        monkeypatch.setenv("CONCORD_CLUSTER_K", "7")
        assert Settings().sampling.FREQUENCY_SIZE == 1234
        assert ClusterSettings().K == 7

    def test_exposure_tolerance(self, monkeypatch):
        monkeypatch.setenv("CONCORD_EXPOSURE_TOL", "0.1")
        assert Settings().EXPOSURE_TOL == 0.1

    def test_log_level_normalized(self, monkeypatch):
        monkeypatch.setenv("CONCORD_LOG_LEVEL", "debug")
        assert LoggingSettings().LEVEL == "DEBUG"

    @pytest.mark.parametrize("name, value, factory", [
        ("CONCORD_LOG_LEVEL", "loud", LoggingSettings),
        ("CONCORD_THREADS", "0", Settings),
        ("CONCORD_CLUSTER_ALGORITHM", "ward", ClusterSettings),
        ("CONCORD_SAMPLING_ALPHA", "1.5", SamplingSettings),
    ])
    def test_invalid_values(self, monkeypatch, name, value, factory):
        monkeypatch.setenv(name, value)
        with pytest.raises(ValidationError):
            factory()
