"""
Tests for settings and logging configuration.
"""

import pytest
import structlog
from pydantic import ValidationError

from kreinspec.core.config import Settings, get_settings, settings
from kreinspec.core.exceptions import InputError, NumericalError, OddDimension, PreconditionFailed
from kreinspec.core.logging import configure_logging


def test_defaults():
    """Test the default tolerances."""
    s = Settings(_env_file=None)
    assert s.RTOL == 1e-10
    assert s.DEFECT_TOL == 1e-6
    assert s.ORACLE_MAX_DIM == 8
    assert set(s.tolerances()) >= {"rtol", "group_tol", "defect_tol", "sweep_xtol"}


def test_environment_override(monkeypatch):
    """Test KREINSPEC_* variables."""
    monkeypatch.setenv("KREINSPEC_RTOL", "1e-8")
    monkeypatch.setenv("KREINSPEC_LOG_LEVEL", " debug ")
    s = Settings(_env_file=None)
    assert s.RTOL == 1e-8
    assert s.LOG_LEVEL == "DEBUG"


def test_non_positive_tolerance_rejected(monkeypatch):
    """Test that tolerances must be positive."""
    monkeypatch.setenv("KREINSPEC_GROUP_TOL", "0")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)


def test_settings_cached():
    """Test that get_settings returns the module instance."""
    assert get_settings() is settings


def test_exception_exit_codes():
    """Test the exit-code contract of the hierarchy."""
    assert OddDimension(3).exit_code == 2
    assert isinstance(OddDimension(3), InputError)
    error = PreconditionFailed("commutes", 0.5, relation="Neither")
    assert error.exit_code == 3
    assert isinstance(error, NumericalError)
    assert error.details == {"precondition": "commutes", "residual": 0.5, "relation": "Neither"}
    assert error.with_stage("kreindeg").details["stage"] == "kreindeg"


def test_configure_logging_json(capsys):
    """Test that log events go to stderr as JSON lines."""
    configure_logging(level="info", json=True)
    structlog.get_logger("test").info("sample.event", value=1)
    captured = capsys.readouterr()
    assert captured.out == ""
    assert '"event": "sample.event"' in captured.err
    configure_logging(level="WARNING", json=False)


def test_settings_fields():
    """Test that settings hold only tolerances, oracle, self-test and logging options."""
    assert set(Settings.model_fields) == {
        "RTOL",
        "GROUP_TOL",
        "DEFECT_TOL",
        "REAL_SPECTRUM_TOL",
        "PIVOT_TOL",
        "HERMITIAN_TOL",
        "UNITARY_TOL",
        "OMEGA_EPS",
        "SWEEP_XTOL",
        "ORACLE_MAX_DIM",
        "ORACLE_PRECISION_BITS",
        "SELFTEST_SEED",
        "SELFTEST_INSTANCES",
        "LOG_LEVEL",
        "LOG_JSON",
    }
