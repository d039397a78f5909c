import math
import os

from pydantic_settings import BaseSettings, SettingsConfigDict


def _default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))


class Settings(BaseSettings):
    """Numerical settings loaded from PNLAB_* environment variables"""

    model_config = SettingsConfigDict(
        env_prefix="PNLAB_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "pnlab"
    APP_VERSION: str = "1.0.0"
    OUTPUT_DIR: str = "results"
    SEED: int = 20240601
    THREADS: int = _default_threads()

    # Series evaluation
    EVAL_FLOOR: float = 1e-14
    TERM_CAP: int = 10_000_000

    # Zero finder
    BOUNDARY_CLEARANCE: float = 1e-6
    NUDGE_ATTEMPTS: int = 10
    PHASE_MAX_STEP: float = math.pi / 2
    PHASE_MAX_DEPTH: int = 24
    NEWTON_MAX_ITER: int = 200
    NEWTON_RESIDUAL: float = 1e-12
    MULTIPLICITY_CAP: int = 8
    LEAF_COUNT: int = 4
    RATIONAL_DENOMINATOR: int = 64
    RATIONAL_TOL: float = 1e-9

    # Pairings
    SIGMA_SNAP_TOL: float = 1e-10
    SIGMA_CLEARANCE: float = 1e-7
    QUAD_TOL: float = 1e-11
    QUAD_LIMIT: int = 400
    DISCREPANCY_TOL: float = 1e-4
    FE_TOL: float = 1e-9

    # Explicit formula
    PRIME_TMAX: float = 30.0
    SIEVE_CAP: int = 50_000_000

    # Reports
    REPORT_TOL: float = 1e-6


settings = Settings()
