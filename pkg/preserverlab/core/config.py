"""Library configuration using Pydantic Settings."""

from functools import lru_cache

import numpy as np
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Tolerances, sampling defaults and logging, loaded from PRESERVERLAB_* variables."""

    model_config = SettingsConfigDict(
        env_prefix="PRESERVERLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "preserver-lab"
    app_version: str = "1.0.0"

    # Kernel tolerances
    tol_eig_scale: float = Field(default=1e-12, gt=0, description="tol_eig = scale * n")
    tol_sym_scale: float = Field(default=1e-10, gt=0, description="tol_sym = scale * max(|A|_inf, 1)")
    tol_rank: float = Field(default=1e-9, gt=0, lt=1, description="Relative singular value cutoff")
    jacobi_max_sweeps: int = Field(default=30, ge=1, le=200)

    # Geometry and classification tolerances
    tol_canon_scale: float = Field(default=1e-9, gt=0, description="tol_canon = scale * ambient")
    cluster_tol: float = Field(default=1e-7, gt=0, lt=0.1, description="Angle merge tolerance (rad)")
    tol_classify_scale: float = Field(default=1e-8, gt=0, description="tol_classify = scale * N")

    # Randomized verification
    default_seed: int = Field(default=20240601, ge=0, lt=2**64)
    default_samples: int = Field(default=200, ge=1)
    admissibility_samples: int = Field(default=200, ge=1)
    involution_samples: int = Field(default=200, ge=1)
    probe_projections: int = Field(default=50, ge=0)
    bloch_grid: int = Field(default=100, ge=4, description="Grid side; grid has side**2 points")
    search_restarts: int = Field(default=500, ge=1)
    search_unitaries: int = Field(default=200, ge=64)

    # Logging
    log_level: str = Field(default="WARNING", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")
    log_format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        """Accept lower-case level names."""
        return v.upper() if isinstance(v, str) else v

    def tol_eig(self, n: int) -> float:
        """Eigen/SVD reconstruction tolerance for an n-dimensional problem."""
        return self.tol_eig_scale * max(n, 1)

    def tol_sym(self, a: np.ndarray) -> float:
        """Hermiticity tolerance scaled by the largest entry of ``a``."""
        scale = float(np.max(np.abs(a))) if a.size else 0.0
        return self.tol_sym_scale * max(scale, 1.0)

    def tol_canon(self, ambient: int) -> float:
        """Canonical-form reconstruction tolerance."""
        return self.tol_canon_scale * max(ambient, 1)

    def tol_classify(self, n: int) -> float:
        """Classification residual tolerance for an N-dimensional codomain."""
        return self.tol_classify_scale * max(n, 1)

    def tolerance_set(self) -> dict[str, float]:
        """Return the scale factors recorded in every CLI output."""
        return {
            "tol_eig_scale": self.tol_eig_scale,
            "tol_sym_scale": self.tol_sym_scale,
            "tol_rank": self.tol_rank,
            "tol_canon_scale": self.tol_canon_scale,
            "cluster_tol": self.cluster_tol,
            "tol_classify_scale": self.tol_classify_scale,
        }


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
