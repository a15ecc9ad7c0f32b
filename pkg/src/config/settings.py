"""
Toolkit Settings Module

This module defines all configuration settings for the toolkit
using Pydantic for validation and environment variable loading.

Responsibilities:
    - Load defaults from environment variables (prefix ``SMOOTHTEST_``)
    - Validate configuration values
    - Provide type-safe settings access to every layer

Example:
    >>> from config.settings import settings
    >>>
    >>> print(settings.DEFAULT_D)
    >>> print(settings.BOOTSTRAP_B)
"""

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Toolkit settings loaded from environment variables.

    Environment Variables:
        - SMOOTHTEST_SEED: default seed when none is given on the command line
        - SMOOTHTEST_LOG_LEVEL: logging level
        - SMOOTHTEST_DEFAULT_D: truncation parameter used when unspecified
        - SMOOTHTEST_BOOTSTRAP_B: multiplier bootstrap replicates
        - SMOOTHTEST_JOBS: replicate parallelism for simulations

    Example .env file:
        SMOOTHTEST_SEED=12345
        SMOOTHTEST_LOG_LEVEL=INFO
        SMOOTHTEST_BOOTSTRAP_B=1000
        SMOOTHTEST_JOBS=8

    Usage:
        >>> from config.settings import settings
        >>>
        >>> if settings.JOBS > 1:
        ...     print("Replicates run in parallel")
    """

    # Application
    APP_NAME: str = "smoothtest"
    LOG_LEVEL: str = Field(default="WARNING")
    SEED: int = Field(default=20240101, ge=0, description="Fallback seed")

    # Univariate smooth test
    DEFAULT_D: int = Field(default=10, ge=1)
    DEFAULT_BASIS: str = Field(default="trig")
    SCHWARZ_D_MAX: int = Field(default=20, ge=1)
    PERMUTATIONS: int = Field(default=999, ge=1)

    # Multivariate sphere search
    BOOTSTRAP_B: int = Field(default=500, ge=20)
    RESTARTS: int = Field(default=10, ge=1)
    BOOTSTRAP_RESTARTS: int = Field(default=5, ge=1)
    CANDIDATE_DIRECTIONS: int = Field(default=256, ge=1)
    INITIAL_STEP: float = Field(default=0.5, gt=0)
    SIMPLEX_TOLERANCE: float = Field(default=1e-6)
    MAX_ITERATIONS: int = Field(default=400, ge=1)
    CIRCLE_GRID: int = Field(default=32, ge=1)
    CIRCLE_EXACT_LIMIT: int = Field(
        default=2500, ge=0, description="Largest n*m searched exactly when p = 2"
    )
    BF_DIRECTIONS: int = Field(default=200, ge=1)

    # Simulation
    AR1_RHO: float = Field(default=0.5)
    JOBS: int = Field(default=1, ge=1)

    @field_validator("SIMPLEX_TOLERANCE")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        """Ensure the simplex tolerance is strictly positive"""
        if v <= 0:
            raise ValueError("SIMPLEX_TOLERANCE must be > 0")
        return v

    @field_validator("AR1_RHO")
    @classmethod
    def validate_rho(cls, v: float) -> float:
        """AR(1) correlation must give a positive definite covariance"""
        if not -1 < v < 1:
            raise ValueError("AR1_RHO must lie in (-1, 1)")
        return v

    @field_validator("DEFAULT_BASIS")
    @classmethod
    def validate_basis(cls, v: str) -> str:
        if v not in ("trig", "legendre"):
            raise ValueError("DEFAULT_BASIS must be 'trig' or 'legendre'")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        level = v.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"Unknown LOG_LEVEL {v!r}")
        return level

    model_config = SettingsConfigDict(
        env_prefix="SMOOTHTEST_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
