"""Configuration management."""

import json
import logging
import os
import sys
from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class ToleranceConfig(BaseSettings):
    """Numerical tolerances shared by every module."""
    hermitian: float = 1e-12
    unitary: float = 1e-10
    reconstruction: float = 1e-10
    jacobi_off_diagonal: float = 1e-14
    jacobi_max_sweeps: int = 100
    psd: float = 1e-12
    state_trace: float = 1e-12
    density_trace: float = 1e-10
    spectrum_sum: float = 1e-12
    normalization_correction: float = 1e-9
    sas_boundary_slack: float = 1e-12
    separable_negativity: float = 1e-9
    negative_entry: float = 1e-9


class OrbitSearchConfig(BaseSettings):
    """Stochastic orbit search configuration."""
    n_haar_samples: int = Field(default=2000, gt=0)
    n_ascent_restarts: int = Field(default=20, gt=0)
    ascent_step_init: float = Field(default=0.3, gt=0)
    ascent_tolerance: float = Field(default=1e-9, gt=0)
    max_ascent_iters: int = Field(default=25000, gt=0)
    step_grow: float = Field(default=1.5, gt=1)
    step_shrink: float = Field(default=0.5, gt=0, lt=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class EstimatorConfig(BaseSettings):
    """Monte-Carlo estimator of the three-qubit outer SAS radius."""
    n_spectra: int = Field(default=10_000, gt=0)
    n_orbit_samples: int = Field(default=1000, gt=0)
    batch_size: int = Field(default=250, gt=0)
    resolution: float = Field(default=1e-6, gt=0, lt=0.1)


class GridConfig(BaseSettings):
    """Figure grid configuration."""
    fig1_resolution: int = Field(default=400, ge=2)
    fig2_resolution: int = Field(default=400, ge=2)
    fig3_resolution: int = Field(default=600, ge=2)
    boundary_points: int = Field(default=200, ge=2)


class SuiteScale(BaseSettings):
    """Sample counts for one verification scale."""
    n_spectra: int = Field(gt=0)
    n_oracle_spectra: int = Field(gt=0)
    n_haar_samples: int = Field(gt=0)
    n_ascent_restarts: int = Field(gt=0)
    n_estimator_spectra: int = Field(gt=0)
    n_estimator_orbit_samples: int = Field(gt=0)


class VerificationConfig(BaseSettings):
    """Verification suite scales."""
    quick: SuiteScale = SuiteScale(
        n_spectra=200,
        n_oracle_spectra=5,
        n_haar_samples=500,
        n_ascent_restarts=4,
        n_estimator_spectra=1000,
        n_estimator_orbit_samples=200,
    )
    full: SuiteScale = SuiteScale(
        n_spectra=1000,
        n_oracle_spectra=100,
        n_haar_samples=10_000,
        n_ascent_restarts=20,
        n_estimator_spectra=10_000,
        n_estimator_orbit_samples=1000,
    )


class LoggingConfig(BaseSettings):
    """Logging configuration."""
    level: str = "WARNING"
    format: Literal["json", "text"] = "text"
    file: str | None = None


class Settings(BaseSettings):
    """Application settings."""
    model_config = SettingsConfigDict(env_prefix="SAS_", env_nested_delimiter="__", extra="ignore")

    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    orbit_search: OrbitSearchConfig = Field(default_factory=OrbitSearchConfig)
    estimator: EstimatorConfig = Field(default_factory=EstimatorConfig)
    grids: GridConfig = Field(default_factory=GridConfig)
    verification: VerificationConfig = Field(default_factory=VerificationConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)


class JsonLineFormatter(logging.Formatter):
    """One JSON object per record, including anything passed through ``extra``."""

    _RESERVED = frozenset(vars(logging.makeLogRecord({})))

    def format(self, record: logging.LogRecord) -> str:
        payload: dict[str, Any] = {
            "time": self.formatTime(record),
            "level": record.levelname,
            "name": record.name,
            "message": record.getMessage(),
        }
        for key, value in vars(record).items():
            if key not in self._RESERVED and key not in payload:
                payload[key] = value
        return json.dumps(payload, default=str)


def setup_logging(config: LoggingConfig) -> logging.Logger:
    """Setup logging configuration."""
    logger = logging.getLogger("sas_entanglement")
    logger.setLevel(getattr(logging, config.level.upper()))
    logger.handlers.clear()

    # Console handler; stderr keeps stdout free for CSV/JSON output
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(getattr(logging, config.level.upper()))

    if config.format == "json":
        formatter: logging.Formatter = JsonLineFormatter()
    else:
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    # File handler if specified
    if config.file:
        log_file = Path(config.file)

        try:
            log_file.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(config.file)
            file_handler.setLevel(getattr(logging, config.level.upper()))
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)
        except PermissionError:
            logger.warning(f"Cannot write to {config.file}, using console only")

    return logger


@lru_cache
def get_logger(name: str = "sas_entanglement") -> logging.Logger:
    """Get logger instance."""
    return logging.getLogger(name)


def _config_path() -> Path | None:
    """Locate the optional YAML configuration file."""
    explicit = os.getenv("SAS_CONFIG_FILE")
    if explicit:
        path = Path(explicit)
        if not path.exists():
            from sas_entanglement.exceptions import ConfigurationError
            raise ConfigurationError(f"Configuration file not found: {path} (from SAS_CONFIG_FILE)")
        return path

    default = Path("config/config.yaml")
    return default if default.exists() else None


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance.

    Defaults apply when no YAML file is present. Environment variables with the
    ``SAS_`` prefix override defaults for fields the YAML file leaves unset.
    """
    config_path = _config_path()
    if config_path is None:
        return Settings()

    with config_path.open() as f:
        config_dict = yaml.safe_load(f) or {}

    return Settings(**config_dict)


def get_tolerances() -> ToleranceConfig:
    """Shortcut for the tolerance section."""
    return get_settings().tolerances
