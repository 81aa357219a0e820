"""
Pytest configuration and fixtures.
"""

import numpy as np
import pytest

from kreinspec.core.config import settings
from kreinspec.core.logging import configure_logging
from kreinspec.numerics.antilinear import AntilinearOp, default_pt
from kreinspec.numerics.fourlevel import FourLevelParams, build_hamiltonian, model_metric
from kreinspec.numerics.numkernel import ComplexMatrix


@pytest.fixture
def model_params() -> FourLevelParams:
    """Unbroken four-level parameters with D = 1.29."""
    return FourLevelParams(a0=1.0, A=0.5 + 0.3j, B=0.2 - 0.1j)


@pytest.fixture
def broken_params() -> FourLevelParams:
    """D = -1, eigenvalues +-i."""
    return FourLevelParams(a0=0.0, A=0j, B=1 + 0j)


@pytest.fixture
def ep_params() -> FourLevelParams:
    """D = 0 with a nilpotent Hamiltonian."""
    return FourLevelParams(a0=0.0, A=1 + 0j, B=1 + 0j)


@pytest.fixture
def model_hamiltonian(model_params: FourLevelParams) -> ComplexMatrix:
    return build_hamiltonian(model_params)


@pytest.fixture
def eta22() -> ComplexMatrix:
    """Indefinite model metric diag(1, -1, -1, 1)."""
    return model_metric()


@pytest.fixture
def pt4() -> AntilinearOp:
    return default_pt(4)


@pytest.fixture
def jordan() -> ComplexMatrix:
    return np.array([[1.0, 1.0], [0.0, 1.0]], dtype=np.complex128)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def restore_settings(monkeypatch: pytest.MonkeyPatch):
    """Undo any settings mutation made during a test."""
    for name in ("RTOL", "SELFTEST_INSTANCES"):
        monkeypatch.setattr(settings, name, getattr(settings, name))
    yield settings


@pytest.fixture(autouse=True, scope="session")
def quiet_logging():
    """Warnings and above to stderr for the whole session."""
    configure_logging(level="WARNING", json=False)
    yield
