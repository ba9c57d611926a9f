"""
Сервис наборов данных: загрузка CSV с отбраковкой строк, запись CSV,
калиброванный синтетический генератор и описание набора.
"""
import functools
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy import optimize

from concord.core.exceptions import (
    AllRowsRejectedError, DatasetError, DatasetNotFoundError, MissingColumnError,
)
from concord.core.logging import get_logger
from concord.modules.dataset.schemas import (
    Dataset, DatasetDescription, DatasetKind, DatasetSource, RowRejection, SyntheticScenario,
)
from concord.modules.pairs.frames import FrequencyFrame, SeverityFrame

logger = get_logger(__name__)

REQUIRED_COLUMNS: Dict[DatasetKind, Tuple[str, ...]] = {
    DatasetKind.FREQUENCY: ("claim_count", "exposure", "prediction"),
    DatasetKind.SEVERITY: ("claim_size", "prediction"),
}

# Отклоненные строки сверх этого числа попадают в лог только итоговым сообщением
_LOGGED_REJECTIONS = 20

# Целевая структура портфеля: доли полисов без убытков и с двумя и более убытками,
# доля полисов с полной экспозицией
TARGET_ZERO_SHARE = 0.911
TARGET_TWO_PLUS_SHARE = 0.0085
FULL_EXPOSURE_SHARE = 0.278
MIN_EXPOSURE = 0.05
_FALLBACK_CALIBRATION = (-2.22, 0.76)

# Альтернативная модель в poisson-world видит только часть латентного риска
ALTERNATIVE_SIGNAL = 0.8

GAMMA_SHAPE = 2.0
GAMMA_LOG_MEAN = 7.0
GAMMA_LOG_SD = 0.6


def _resolve_columns(kind: DatasetKind, column_map: Optional[Mapping[str, str]]) -> Dict[str, str]:
    column_map = dict(column_map or {})
    unknown = set(column_map) - set(REQUIRED_COLUMNS[kind])
    if unknown:
        raise DatasetError(
            f"Неизвестные поля в сопоставлении колонок: {', '.join(sorted(unknown))}",
            details={"allowed": list(REQUIRED_COLUMNS[kind])},
        )
    return {name: column_map.get(name, name) for name in REQUIRED_COLUMNS[kind]}


def _numeric(series: pd.Series) -> np.ndarray:
    return pd.to_numeric(series, errors="coerce").to_numpy(dtype=np.float64)


def _positive_finite(values: np.ndarray) -> np.ndarray:
    return np.isfinite(values) & (values > 0.0)


def _validation_rules(kind: DatasetKind, columns: Dict[str, np.ndarray]) -> List[Tuple[np.ndarray, str]]:
    """Правила отбраковки в порядке проверки; строка получает первую нарушенную причину"""
    prediction = columns["prediction"]
    if kind is DatasetKind.FREQUENCY:
        count = columns["claim_count"]
        exposure = columns["exposure"]
        return [
            (np.isnan(count), "claim_count is not a number"),
            (~np.isfinite(count) | (count != np.floor(count)), "claim_count is not an integer"),
            (count < 0, "claim_count is negative"),
            (np.isnan(exposure), "exposure is not a number"),
            (exposure <= 0.0, "exposure is not positive"),
            (exposure > 1.0, "exposure exceeds 1"),
            (np.isnan(prediction), "prediction is not a number"),
            (~_positive_finite(prediction), "prediction is not a positive finite number"),
        ]
    size = columns["claim_size"]
    return [
        (np.isnan(size), "claim_size is not a number"),
        (~_positive_finite(size), "claim_size is not a positive finite number"),
        (np.isnan(prediction), "prediction is not a number"),
        (~_positive_finite(prediction), "prediction is not a positive finite number"),
    ]


def ingest_csv(
    path: Union[str, Path],
    kind: Union[DatasetKind, str],
    column_map: Optional[Mapping[str, str]] = None,
    extra_columns: Sequence[str] = (),
) -> Dataset:
    """
    Загружает CSV (UTF-8, строка заголовка) и проверяет каждую строку.

    Строки, нарушающие инварианты записей, отклоняются и логируются с номером
    строки и причиной; загрузка прерывается, только если отклонены все строки.

    Args:
        path: Путь к файлу
        kind: frequency или severity
        column_map: Сопоставление поле -> имя колонки в файле
        extra_columns: Дополнительные колонки прогнозов (положительные конечные числа)

    Raises:
        DatasetNotFoundError: Файл не найден
        MissingColumnError: В заголовке нет обязательной колонки
        AllRowsRejectedError: Ни одна строка не прошла проверку
    """
    kind = DatasetKind(kind)
    path = Path(path)
    if not path.is_file():
        raise DatasetNotFoundError(f"Файл не найден: {path}", path=str(path))

    columns = _resolve_columns(kind, column_map)
    try:
        df = pd.read_csv(path, encoding="utf-8", float_precision="round_trip")
    except pd.errors.EmptyDataError as e:
        raise MissingColumnError(
            "Файл не содержит строки заголовка", missing=list(columns.values()), path=str(path), cause=e,
        )
    except (pd.errors.ParserError, UnicodeDecodeError) as e:
        raise DatasetError.from_exception(e, message=f"Не удалось разобрать CSV: {path}", path=str(path))

    wanted = list(columns.values()) + list(extra_columns)
    missing = [name for name in wanted if name not in df.columns]
    if missing:
        raise MissingColumnError(
            f"Отсутствуют колонки: {', '.join(missing)}",
            missing=missing,
            available=[str(c) for c in df.columns],
            path=str(path),
        )

    row_count = int(df.shape[0])
    if row_count == 0:
        raise AllRowsRejectedError("Файл не содержит строк данных", row_count=0, path=str(path))

    values = {name: _numeric(df[column]) for name, column in columns.items()}
    extras = {name: _numeric(df[name]) for name in extra_columns}

    rules = _validation_rules(kind, values)
    for name, extra in extras.items():
        rules.append((~_positive_finite(extra), f"{name} is not a positive finite number"))

    rejected = np.zeros(row_count, dtype=bool)
    reasons = np.empty(row_count, dtype=object)
    for bad, reason in rules:
        new = bad & ~rejected
        reasons[new] = reason
        rejected |= new

    rejections = [
        RowRejection(row=int(i) + 2, reason=str(reasons[i]))
        for i in np.flatnonzero(rejected)
    ]
    for rejection in rejections[:_LOGGED_REJECTIONS]:
        logger.warning("row rejected", extra={"path": str(path), "row": rejection.row, "reason": rejection.reason})
    if len(rejections) > _LOGGED_REJECTIONS:
        logger.warning(
            "further rows rejected",
            extra={"path": str(path), "count": len(rejections) - _LOGGED_REJECTIONS},
        )

    if rejected.all():
        raise AllRowsRejectedError(
            f"Все строки файла отклонены: {path}",
            row_count=row_count,
            reasons=[f"row {r.row}: {r.reason}" for r in rejections[:5]],
            path=str(path),
        )

    accepted = ~rejected
    if kind is DatasetKind.FREQUENCY:
        frame = FrequencyFrame(
            claim_count=values["claim_count"][accepted].astype(np.int64),
            exposure=values["exposure"][accepted],
            prediction=values["prediction"][accepted],
        )
    else:
        frame = SeverityFrame(claim_size=values["claim_size"][accepted], prediction=values["prediction"][accepted])

    source = DatasetSource(path=str(path), row_count=row_count, rejected_count=len(rejections))
    logger.info(
        "dataset loaded",
        extra={"path": str(path), "kind": kind.value, "rows": row_count, "rejected": len(rejections)},
    )
    return Dataset(
        kind=kind,
        frame=frame,
        source=source,
        rejections=rejections,
        extras={name: extra[accepted] for name, extra in extras.items()},
    )


def dataset_to_frame(dataset: Dataset) -> pd.DataFrame:
    if dataset.kind is DatasetKind.FREQUENCY:
        data = {
            "claim_count": dataset.frame.claim_count,
            "exposure": dataset.frame.exposure,
            "prediction": dataset.frame.prediction,
        }
    else:
        data = {"claim_size": dataset.frame.claim_size, "prediction": dataset.frame.prediction}
    data.update(dataset.extras)
    return pd.DataFrame(data)


def write_csv(dataset: Dataset, path: Union[str, Path]) -> Path:
    """
    Записывает набор в CSV с колонками по умолчанию; ingest_csv восстанавливает его без потерь.
    """
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    dataset_to_frame(dataset).to_csv(path, index=False, encoding="utf-8")
    logger.info("dataset written", extra={"path": str(path), "rows": len(dataset)})
    return path


def _exposure_quadrature(points: int = 48) -> Tuple[np.ndarray, np.ndarray]:
    """Узлы и веса распределения экспозиции: атом в 1 и равномерная часть на (MIN_EXPOSURE, 1)"""
    nodes, weights = np.polynomial.legendre.leggauss(points)
    half = (1.0 - MIN_EXPOSURE) / 2.0
    uniform_nodes = MIN_EXPOSURE + half * (nodes + 1.0)
    uniform_weights = weights / 2.0 * (1.0 - FULL_EXPOSURE_SHARE)
    return (
        np.concatenate(([1.0], uniform_nodes)),
        np.concatenate(([FULL_EXPOSURE_SHARE], uniform_weights)),
    )


def expected_class_shares(beta0: float, sigma: float) -> Tuple[float, float, float]:
    """Ожидаемые доли полисов с 0, 1 и 2+ убытками в poisson-world"""
    z, wz = np.polynomial.hermite_e.hermegauss(64)
    wz = wz / np.sqrt(2.0 * np.pi)
    exposure, we = _exposure_quadrature()
    mean = exposure[:, None] * np.exp(beta0 + sigma * z)[None, :]
    weight = we[:, None] * wz[None, :]
    zero = float(np.sum(weight * np.exp(-mean)))
    one = float(np.sum(weight * mean * np.exp(-mean)))
    return zero, one, 1.0 - zero - one


@functools.lru_cache(maxsize=1)
def calibrate_poisson_world() -> Tuple[float, float]:
    """
    Подбирает (β0, σ) частоты exp(β0 + σz) под целевые доли 0 и 2+ убытков.
    """
    def residual(params: np.ndarray) -> np.ndarray:
        beta0, log_sigma = params
        zero, _, two_plus = expected_class_shares(beta0, float(np.exp(log_sigma)))
        return np.array([zero - TARGET_ZERO_SHARE, two_plus - TARGET_TWO_PLUS_SHARE])

    start = np.array([_FALLBACK_CALIBRATION[0], np.log(_FALLBACK_CALIBRATION[1])])
    solution = optimize.root(residual, start, method="hybr")
    if not solution.success or not np.all(np.isfinite(solution.x)):
        logger.warning("generator calibration did not converge, using fallback", extra={"reason": solution.message})
        return _FALLBACK_CALIBRATION
    return float(solution.x[0]), float(np.exp(solution.x[1]))


def _poisson_world(n: int, rng: np.random.Generator):
    beta0, sigma = calibrate_poisson_world()
    full = rng.random(n) < FULL_EXPOSURE_SHARE
    exposure = np.where(full, 1.0, rng.uniform(MIN_EXPOSURE, 1.0, n))
    latent = rng.standard_normal(n)
    rate = np.exp(beta0 + sigma * latent)
    claim_count = rng.poisson(exposure * rate)
    noise = rng.standard_normal(n)
    partial = ALTERNATIVE_SIGNAL * latent + np.sqrt(1.0 - ALTERNATIVE_SIGNAL ** 2) * noise
    alternative = np.exp(beta0 + sigma * partial)
    frame = FrequencyFrame(claim_count=claim_count, exposure=exposure, prediction=rate)
    return frame, {"prediction_alt": alternative}


def _gamma_world(n: int, rng: np.random.Generator):
    mean = np.exp(GAMMA_LOG_MEAN + GAMMA_LOG_SD * rng.standard_normal(n))
    claim_size = rng.gamma(GAMMA_SHAPE, mean / GAMMA_SHAPE)
    # Гамма-выборка может дать 0 только при исчезающе малом масштабе
    claim_size = np.maximum(claim_size, np.finfo(np.float64).tiny)
    return SeverityFrame(claim_size=claim_size, prediction=mean), {}


def _separable(n: int, rng: np.random.Generator):
    claim_count = rng.permutation(np.arange(n) % 3)
    prediction = 0.1 * (claim_count + 1) + rng.uniform(0.0, 0.01, n)
    return FrequencyFrame(claim_count=claim_count, exposure=np.ones(n), prediction=prediction), {}


def _degenerate_ties(n: int, rng: np.random.Generator):
    claim_count = np.arange(n) % 3
    return FrequencyFrame(claim_count=claim_count, exposure=np.ones(n), prediction=np.full(n, 0.1)), {}


_GENERATORS = {
    SyntheticScenario.POISSON_WORLD: _poisson_world,
    SyntheticScenario.GAMMA_WORLD: _gamma_world,
    SyntheticScenario.SEPARABLE: _separable,
    SyntheticScenario.DEGENERATE_TIES: _degenerate_ties,
}


def generate_synthetic(n: int, scenario: Union[SyntheticScenario, str], seed: int = 0) -> Dataset:
    """
    Синтетический набор заданного сценария, детерминированный по зерну.
    """
    scenario = SyntheticScenario(scenario)
    if n < 1:
        raise DatasetError("Размер синтетического набора должен быть положительным", details={"n": n})
    rng = np.random.default_rng(seed)
    frame, extras = _GENERATORS[scenario](n, rng)
    logger.debug("synthetic dataset generated", extra={"scenario": scenario.value, "rows": n, "seed": seed})
    return Dataset(
        kind=scenario.kind,
        frame=frame,
        source=DatasetSource(row_count=n, scenario=scenario, seed=seed),
        extras=extras,
    )


def describe_dataset(dataset: Dataset) -> DatasetDescription:
    """Доли классов 0 / 1 / 2+ и экспозиции, равной 1, либо квантили размеров убытков"""
    rows = len(dataset)
    if dataset.kind is DatasetKind.FREQUENCY:
        counts = dataset.frame.claim_count
        exposure = dataset.frame.exposure
        return DatasetDescription(
            kind=dataset.kind,
            rows=rows,
            class_shares={
                "0": float(np.mean(counts == 0)),
                "1": float(np.mean(counts == 1)),
                "2+": float(np.mean(counts >= 2)),
            },
            exposure_one_share=float(np.mean(exposure == 1.0)),
            mean_exposure=float(np.mean(exposure)),
        )
    quantiles = np.quantile(dataset.frame.claim_size, [0.1, 0.5, 0.9])
    return DatasetDescription(
        kind=dataset.kind,
        rows=rows,
        claim_size_quantiles={"q10": float(quantiles[0]), "q50": float(quantiles[1]), "q90": float(quantiles[2])},
    )
