"""Configuration settings for ym2d."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical budgets and tolerances.

    Every field can be overridden from the environment with a ``YM2D_`` prefix,
    e.g. ``YM2D_QUAD_BUDGET=262144``.
    """

    APP_NAME: str = "ym2d"
    APP_VERSION: str = "0.1.0"
    SCHEMA: str = "ym2d/1"

    # Quadrature and truncation
    QUAD_BUDGET: int = Field(65536, ge=64)
    TORUS_TOL: float = Field(1e-10, gt=0)
    TAIL_TOL: float = Field(1e-12, gt=0)
    SMALL_T: float = Field(0.01, gt=0)
    HERMITE_NODES: int = Field(200, ge=20)

    # Monte Carlo
    DEFAULT_SEED: int = 20240917
    MC_CHUNK_SIZE: int = Field(8192, ge=256)
    MC_WORKERS: int = Field(4, ge=1)
    MC_MIN_SAMPLES: int = Field(10_000, ge=1)
    MC_MIN_ESS_FRACTION: float = Field(0.01, gt=0, lt=1)
    MC_MIN_FACE_COUPLING: float = Field(0.05, ge=0)

    # Perturbative simplex integration
    PERT_GL_NODES_2D: int = Field(64, ge=4)
    PERT_GL_NODES_4D: int = Field(24, ge=4)
    PERT_QMC_LOG2: int = Field(17, ge=8, le=24)
    PERT_QMC_REPLICATES: int = Field(8, ge=2)

    model_config = SettingsConfigDict(
        env_prefix="YM2D_", env_file=".env", extra="ignore"
    )


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Return the process-wide settings instance."""
    return Settings()
