import logging

import numpy as np
import pytest

from concord.core.logging import ContextLogger
from concord.modules.dataset.service import generate_synthetic
from concord.modules.pairs.frames import FrequencyFrame, SeverityFrame
from concord.modules.pairs.schemas import FrequencyRecord, SeverityRecord


def random_frequency_frame(rng: np.random.Generator, n: int, exposure_levels: int = 20,
                           prediction_levels: int = 64) -> FrequencyFrame:
    """
    Случайный набор полисов на грубой сетке экспозиций и прогнозов:
    совпадения экспозиций и прогнозов встречаются часто.
    """
    return FrequencyFrame(
        claim_count=rng.choice([0, 0, 0, 1, 1, 2, 3], size=n),
        exposure=rng.integers(1, exposure_levels + 1, size=n) / exposure_levels,
        prediction=rng.integers(1, prediction_levels + 1, size=n) / prediction_levels,
    )


def random_severity_frame(rng: np.random.Generator, n: int, levels: int = 50) -> SeverityFrame:
    return SeverityFrame(
        claim_size=rng.integers(1, levels + 1, size=n) * 10.0,
        prediction=rng.integers(1, levels + 1, size=n) / levels,
    )


@pytest.fixture(autouse=True)
def reset_logging():
    """Снимает обработчики пакетного логгера и очищает контекст запуска после теста"""
    yield
    package_logger = logging.getLogger("concord")
    for handler in package_logger.handlers[:]:
        package_logger.removeHandler(handler)
        handler.close()
    ContextLogger.clear_context()


@pytest.fixture
def four_policies():
    """Два полиса без убытков и два с одним убытком, все с полной экспозицией"""
    return [
        FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.1),
        FrequencyRecord(claim_count=0, exposure=1.0, prediction=0.2),
        FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.3),
        FrequencyRecord(claim_count=1, exposure=1.0, prediction=0.05),
    ]


@pytest.fixture
def three_claims():
    return [
        SeverityRecord(claim_size=100.0, prediction=120.0),
        SeverityRecord(claim_size=150.0, prediction=110.0),
        SeverityRecord(claim_size=400.0, prediction=300.0),
    ]


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


@pytest.fixture(scope="session")
def poisson_portfolio():
    return generate_synthetic(4000, "poisson-world", seed=7)


@pytest.fixture(scope="session")
def gamma_claims():
    return generate_synthetic(600, "gamma-world", seed=11)


@pytest.fixture
def frequency_csv(tmp_path):
    """CSV с частотным набором poisson-world и колонкой альтернативного прогноза"""
    from concord.modules.dataset.service import write_csv

    path = tmp_path / "policies.csv"
    write_csv(generate_synthetic(1500, "poisson-world", seed=3), path)
    return path


@pytest.fixture
def severity_csv(tmp_path):
    from concord.modules.dataset.service import write_csv

    path = tmp_path / "claims.csv"
    write_csv(generate_synthetic(300, "gamma-world", seed=5), path)
    return path
