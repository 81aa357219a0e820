"""
Toolkit configuration using Pydantic Settings.
Loads tolerances and logging options from KREINSPEC_* environment variables and .env file.
"""

from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="KREINSPEC_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Residual tolerance, relative to ||M||_F (overridden by --rtol)
    RTOL: float = 1e-10

    # Spectrum
    GROUP_TOL: float = 1e-8  # eigenvalue clustering, relative
    DEFECT_TOL: float = 1e-6  # smallest singular value of a block Gram matrix
    REAL_SPECTRUM_TOL: float = 1e-8  # |Im E| cutoff, relative

    # Matrix predicates
    PIVOT_TOL: float = 1e-14
    HERMITIAN_TOL: float = 1e-12
    UNITARY_TOL: float = 1e-12

    # Four-level model
    OMEGA_EPS: float = 1e-12
    SWEEP_XTOL: float = 1e-8

    # Characteristic polynomial oracle
    ORACLE_MAX_DIM: int = 8
    ORACLE_PRECISION_BITS: int = 96

    # Self-test
    SELFTEST_SEED: int = 20160917
    SELFTEST_INSTANCES: int = 100

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_JSON: bool = False

    @field_validator(
        "RTOL",
        "GROUP_TOL",
        "DEFECT_TOL",
        "REAL_SPECTRUM_TOL",
        "PIVOT_TOL",
        "HERMITIAN_TOL",
        "UNITARY_TOL",
        "OMEGA_EPS",
        "SWEEP_XTOL",
    )
    @classmethod
    def must_be_positive(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("tolerances must be positive")
        return v

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_log_level(cls, v: str) -> str:
        if isinstance(v, str):
            return v.strip().upper()
        return v

    def tolerances(self) -> dict[str, float]:
        """All numeric thresholds, as echoed in reports."""
        return {
            "rtol": self.RTOL,
            "group_tol": self.GROUP_TOL,
            "defect_tol": self.DEFECT_TOL,
            "real_spectrum_tol": self.REAL_SPECTRUM_TOL,
            "pivot_tol": self.PIVOT_TOL,
            "hermitian_tol": self.HERMITIAN_TOL,
            "unitary_tol": self.UNITARY_TOL,
            "omega_eps": self.OMEGA_EPS,
            "sweep_xtol": self.SWEEP_XTOL,
        }


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
