"""
SpinXfer Configuration Settings

This module provides centralized configuration management for the SpinXfer toolkit.
All settings are loaded from environment variables (prefixed ``SPINXFER_``) or a .env file.

Pydantic's BaseSettings is used for:
- Automatic environment variable parsing
- Type validation and coercion
- Default value handling

Usage:
    from config.settings import settings
    cap = settings.ENUMERATION_CAP
"""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Toolkit settings loaded from environment variables.

    All fields can be overridden by setting the corresponding
    environment variable with the ``SPINXFER_`` prefix. For example:
        export SPINXFER_ENUMERATION_CAP=1000000

    Or by adding them to a .env file in the project root.
    """

    # =========================================================================
    # Application Metadata
    # =========================================================================
    APP_NAME: str = "SpinXfer"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = Field(default=False)  # Set to True for verbose logging
    LOG_LEVEL: str = Field(default="INFO")

    # =========================================================================
    # Computational Limits
    # =========================================================================
    # Largest number of column subsets the direct Γ evaluator will enumerate.
    # binomial(24, 12) ~ 2.7e6 sits comfortably below the default.
    ENUMERATION_CAP: int = Field(default=5_000_000, gt=0)

    # Exact-diagonalization oracle works on the full 2^N space
    ORACLE_MAX_SITES: int = Field(default=14, ge=1)

    # Below this Hilbert-space dimension the oracle diagonalizes the full matrix;
    # above it, each excitation-number block separately.
    ORACLE_BLOCK_THRESHOLD: int = Field(default=2 ** 10, gt=0)

    # Largest (time x field) sweep the experiments layer will hold in memory
    SWEEP_MAX_CELLS: int = Field(default=20_000_000, gt=0)

    # Largest Jt window a maximum search will sample
    WINDOW_MAX_POINTS: int = Field(default=5_000_000, gt=0)

    # =========================================================================
    # Search Defaults (dimensionless: times as Jt, fields as h)
    # =========================================================================
    DEFAULT_T_START: float = Field(default=0.0)
    DEFAULT_T_STOP: float = Field(default=500.0)
    DEFAULT_T_STEP: float = Field(default=0.01, gt=0.0)

    DEFAULT_H_START: float = Field(default=0.0)
    DEFAULT_H_STOP: float = Field(default=2.0)
    DEFAULT_H_STEP: float = Field(default=0.01, gt=0.0)

    REFINEMENT_TOL: float = Field(default=1e-6, gt=0.0)  # golden-section bracket width
    TIE_TOL: float = Field(default=1e-9, ge=0.0)  # earliest-arrival tie-break window

    # =========================================================================
    # Parallelism
    # =========================================================================
    # Fixed work-unit size; results never depend on the worker count.
    TIME_CHUNK: int = Field(default=1024, gt=0)
    DEFAULT_WORKERS: int = Field(default=1, ge=1)

    # =========================================================================
    # Study Presets
    # =========================================================================
    STUDY_CONFIG_PATH: str = Field(default="config/studies.yaml")

    model_config = SettingsConfigDict(
        env_prefix="SPINXFER_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# =============================================================================
# Global Settings Instance
# =============================================================================
# Single instance created at module import time. All modules should import
# and use this instance rather than creating new Settings() objects.

settings = Settings()


def get_settings() -> Settings:
    """
    Get the global settings instance.

    Returns:
        Settings: The singleton settings object with all configuration values.
    """
    return settings


def get_study_config():
    """
    Get the study preset registry.

    Loads presets from the YAML file specified in settings.
    Returns an empty registry if the file doesn't exist.

    Returns:
        StudyRegistry: Registry containing all study presets
    """
    from config.study_config import StudyRegistry

    config_path = Path(settings.STUDY_CONFIG_PATH)
    if not config_path.is_absolute():
        config_path = Path(__file__).resolve().parent.parent / config_path
    return StudyRegistry.load_from_file(config_path)
