from contextlib import contextmanager
from typing import Iterator, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Graph Fourier MMD toolkit configuration"""

    # Application Settings
    app_name: str = "Graph Fourier MMD"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "INFO"

    # Concurrency (GFMMD_THREADS caps the worker pool, None means one per CPU)
    threads: Optional[int] = None

    # Exact spectral path
    dense_limit: int = 4096
    rank_tolerance: float = 1e-9

    # Chebyshev path
    lambda_max_safety: float = 1.02
    power_iteration_tol: float = 1e-6
    power_iteration_max_iter: int = 500
    chebyshev_order: int = 64
    epsilon_ratio: float = 1e-6
    fit_grid_points: int = 200

    # Metric Settings
    mass_tolerance: float = 1e-9

    # Graph construction
    adaptive_k_bw: int = 5

    # Randomness
    default_seed: int = 0

    model_config = SettingsConfigDict(env_prefix="GFMMD_", env_file=".env", extra="ignore")


settings = Settings()


@contextmanager
def override_settings(**values) -> Iterator[Settings]:
    """Temporarily replace settings fields; ``None`` values are skipped"""
    values = {k: v for k, v in values.items() if v is not None}
    previous = {k: getattr(settings, k) for k in values}
    try:
        for key, value in values.items():
            setattr(settings, key, value)
        yield settings
    finally:
        for key, value in previous.items():
            setattr(settings, key, value)
