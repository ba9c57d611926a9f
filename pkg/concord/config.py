from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator
from typing import Optional, Literal
from dotenv import load_dotenv

from concord import __version__

# Загружаем переменные окружения из .env файла
load_dotenv(override=False)


class SamplingSettings(BaseSettings):
    """
    Настройки выборочной оценки (алгоритм с удалением наблюдений и ДИ)
    """
    FREQUENCY_SIZE: int = Field(default=20000, ge=1)
    SEVERITY_SIZE: int = Field(default=5000, ge=1)
    ALPHA: float = Field(default=0.05, gt=0.0, lt=1.0)
    SEED: int = Field(default=0, ge=0, lt=2 ** 64)
    # Практически приемлемая ширина ДИ: 0.01 - 0.02
    TARGET_WIDTH: float = Field(default=0.02, gt=0.0, le=1.0)
    MAX_SIZE: int = Field(default=320000, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="CONCORD_SAMPLING_",
        extra="ignore"
    )


class ClusterSettings(BaseSettings):
    """
    Настройки аппроксимации центроидами k-means
    """
    K: int = Field(default=50, ge=1)
    EXPOSURE_BINS: int = Field(default=15, ge=1)
    RERUNS: int = Field(default=1, ge=1)
    MAX_ITER: int = Field(default=100, ge=1)
    TOL: float = Field(default=1e-9, gt=0.0)
    ALGORITHM: Literal["lloyd", "exact"] = Field(default="lloyd")
    BIN_MODE: Literal["quantile", "width"] = Field(default="quantile")
    TIE_MODE: Literal["strict", "half", "exclude"] = Field(default="strict")

    model_config = SettingsConfigDict(
        env_prefix="CONCORD_CLUSTER_",
        extra="ignore"
    )


class CurveSettings(BaseSettings):
    """
    Настройки локальных кривых C(λ) и C(v)
    """
    WINDOW: float = Field(default=0.05, gt=0.0)
    MIN_PAIRS: int = Field(default=100, ge=1)
    GRID_POINTS: int = Field(default=20, ge=1)
    SEVERITY_GAP_PAIRS: int = Field(default=10000, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="CONCORD_CURVE_",
        extra="ignore"
    )


class LoggingSettings(BaseSettings):
    """
    Настройки логирования
    """
    LEVEL: str = Field(default="WARNING")
    FORMAT: Literal["json", "text"] = Field(default="json")
    FILE: Optional[str] = Field(default=None)

    @field_validator("LEVEL")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"неизвестный уровень логирования: {v}")
        return level

    model_config = SettingsConfigDict(
        env_prefix="CONCORD_LOG_",
        extra="ignore"
    )


class Settings(BaseSettings):
    """
    Общие настройки библиотеки
    """
    APP_NAME: str = Field(default="concord")
    APP_VERSION: str = Field(default=__version__)

    # Максимальная абсолютная разница экспозиций в сопоставимой паре
    EXPOSURE_TOL: float = Field(default=0.05, ge=0.0)
    # Ограничение числа потоков (CONCORD_THREADS); None - по числу ядер
    THREADS: Optional[int] = Field(default=None, ge=1)
    # Размер блока при переборе пар
    CHUNK_SIZE: int = Field(default=256, ge=1)

    # Вложенные настройки для различных компонентов
    sampling: SamplingSettings = Field(default_factory=SamplingSettings)
    cluster: ClusterSettings = Field(default_factory=ClusterSettings)
    curve: CurveSettings = Field(default_factory=CurveSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)

    model_config = SettingsConfigDict(
        env_prefix="CONCORD_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )


# Создаем экземпляр настроек
settings = Settings()
