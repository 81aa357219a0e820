"""
Tests for the closed-form four-level model.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from kreinspec.core.exceptions import BrokenPhase, InvalidSweep, SingularNormalization
from kreinspec.numerics.fourlevel import (
    EIGEN_TOL,
    EXPECTED_SIGNS,
    STATE_LABELS,
    FourLevelParams,
    OmegaKind,
    SweepAxis,
    abnormal_relations_check,
    analytic_eigensystem,
    build_hamiltonian,
    build_hamiltonian_from_blocks,
    compare_with_numeric,
    omega,
    params_along,
    sweep_exceptional_point,
)
from kreinspec.numerics.kreindeg import PtPhase
from kreinspec.numerics.metric import eta_norm
from kreinspec.services.selftest_service import random_fourlevel_params


def test_params_validation():
    """Test that non-finite parameters are rejected."""
    with pytest.raises(ValidationError):
        FourLevelParams(a0=math.inf)
    with pytest.raises(ValidationError):
        FourLevelParams(a0=0.0, A=complex(math.nan, 0.0))


def test_params_split_quaternion(model_params):
    """Test B = b0 + i b3 and A = b1 + i b2."""
    assert model_params.as_split_quaternion().components == (0.2, 0.5, 0.3, -0.1)
    assert model_params.discriminant == pytest.approx(1.29)


def test_block_assembly_matches_explicit(model_params, rng):
    """Test that the split-quaternion blocks reproduce the explicit matrix."""
    assert np.array_equal(build_hamiltonian(model_params), build_hamiltonian_from_blocks(model_params))
    for _ in range(20):
        a0, b0, b1, b2, b3 = (float(x) for x in rng.integers(-9, 10, size=5))
        p = FourLevelParams(a0=a0, A=complex(b1, b2), B=complex(b0, b3))
        assert np.array_equal(build_hamiltonian(p), build_hamiltonian_from_blocks(p))


def test_omega_kinds(model_params, broken_params, ep_params):
    """Test Real, BrokenPair and Zero."""
    real = omega(model_params)
    assert real.kind is OmegaKind.REAL
    assert real.value == pytest.approx(math.sqrt(1.29))
    broken = omega(broken_params)
    assert broken.kind is OmegaKind.BROKEN_PAIR
    assert broken.value == 1.0
    assert omega(ep_params).kind is OmegaKind.ZERO


def test_analytic_eigensystem(model_params, model_hamiltonian, eta22, pt4):
    """Test eigen-equations, eta-norms and the PT partners."""
    system = analytic_eigensystem(model_params)
    assert system.eigen_residual < 1e-14
    assert system.k > 0
    for label in STATE_LABELS:
        v = system.psi(label)
        assert np.linalg.norm(model_hamiltonian @ v - system.energy(label) * v) < 1e-13
        assert eta_norm(v, eta22) == pytest.approx(EXPECTED_SIGNS[label], abs=1e-13)
        assert np.allclose(system.phi(label), eta22 @ v)
    assert np.allclose(pt4.apply(system.psi_pp), system.psi_pm, atol=1e-15)
    assert np.allclose(pt4.apply(system.psi_mp), system.psi_mm, atol=1e-15)


def test_analytic_eigensystem_errors(broken_params, ep_params):
    """Test BrokenPhase off the real region and a vanishing Omega + a0."""
    with pytest.raises(BrokenPhase):
        analytic_eigensystem(broken_params)
    with pytest.raises(BrokenPhase):
        analytic_eigensystem(ep_params)
    with pytest.raises(SingularNormalization):
        analytic_eigensystem(FourLevelParams(a0=-1.0, A=1 + 0j, B=1 + 0j))


def test_abnormal_relations(model_params):
    """Test the sixteen pairings, signed completeness and normalization of k."""
    report = abnormal_relations_check(analytic_eigensystem(model_params))
    assert report.ok, report.violations
    assert len(report.entries) == 16
    assert max(e.deviation for e in report.entries) <= 1e-10
    assert report.completeness_residual <= 1e-10
    assert report.normalization_residual <= 1e-14
    diagonal = {e.psi: e.value.real for e in report.entries if e.psi == e.phi}
    assert [round(diagonal[label]) for label in STATE_LABELS] == [1, -1, 1, -1]


def test_abnormal_relations_flags_violations(model_params):
    """Test that a zero tolerance reports the failing pairs by name."""
    report = abnormal_relations_check(analytic_eigensystem(model_params), tol=0.0)
    assert report.tol == 0.0
    assert all(v.startswith("<psi") or v == "completeness" for v in report.violations)


def test_compare_with_numeric(model_params):
    """Test the analytic model against the numeric pipeline."""
    comparison = compare_with_numeric(model_params)
    assert comparison.eigenvalue_error < 1e-9
    assert sorted(comparison.multiplicities) == [2, 2]
    assert max(comparison.subspace_residuals.values()) < 1e-8


def test_params_along():
    """Test that only the swept coordinate changes."""
    p0 = FourLevelParams(a0=0.5, A=2j, B=1 + 0j)
    assert params_along(p0, SweepAxis.A0, 3.0).a0 == 3.0
    moved = params_along(p0, SweepAxis.ABS_A, 4.0)
    assert moved.A == pytest.approx(4j)
    assert moved.B == p0.B
    assert abs(params_along(p0, SweepAxis.ARG_B, math.pi / 2).B - 1j) < 1e-15


def test_sweep_brackets_exceptional_point():
    """Test EP localization at |B| = 1 for a0 = 0, |A| = 1."""
    p0 = FourLevelParams(a0=0.0, A=1 + 0j, B=0j)
    result = sweep_exceptional_point(p0, SweepAxis.ABS_B, 0.0, 2.0, 200)
    assert len(result.points) == 200
    assert len(result.exceptional_points) == 1
    hit = result.exceptional_points[0]
    assert abs(hit.t - 1.0) <= 1e-8
    assert hit.t_lo <= hit.t <= hit.t_hi
    for point in result.points:
        expected = PtPhase.UNBROKEN if point.t < 1.0 else PtPhase.BROKEN
        assert point.phase is expected


def test_sweep_grid_point_on_exceptional_point():
    """Test that a grid point with D = 0 is reported directly."""
    p0 = FourLevelParams(a0=0.0, A=1 + 0j, B=0j)
    result = sweep_exceptional_point(p0, "absB", 0.0, 2.0, 3)
    assert [pt.phase for pt in result.points] == [
        PtPhase.UNBROKEN,
        PtPhase.EXCEPTIONAL_POINT,
        PtPhase.BROKEN,
    ]
    assert len(result.exceptional_points) == 1
    assert result.exceptional_points[0].t == 1.0


def test_sweep_two_exceptional_points():
    """Test D = a0^2 - 1 with EPs at a0 = -1 and a0 = 1."""
    p0 = FourLevelParams(a0=0.0, A=0j, B=1 + 0j)
    result = sweep_exceptional_point(p0, SweepAxis.A0, -2.0, 2.0, 100)
    ts = sorted(hit.t for hit in result.exceptional_points)
    assert len(ts) == 2
    assert abs(ts[0] + 1.0) <= 1e-8
    assert abs(ts[1] - 1.0) <= 1e-8


def test_sweep_invalid_arguments(model_params):
    """Test InvalidSweep for a bad axis, range or step count."""
    with pytest.raises(InvalidSweep):
        sweep_exceptional_point(model_params, "phase", 0.0, 1.0, 10)
    with pytest.raises(InvalidSweep):
        sweep_exceptional_point(model_params, SweepAxis.A0, 1.0, 1.0, 10)
    with pytest.raises(InvalidSweep):
        sweep_exceptional_point(model_params, SweepAxis.A0, 0.0, 1.0, 1)


def test_hamiltonian_is_traceless_and_asymmetric(model_hamiltonian, rng):
    """Test tr H = 0 and H^T != H while Im B != 0."""
    assert np.trace(model_hamiltonian) == 0
    assert not np.array_equal(model_hamiltonian, model_hamiltonian.T)
    for _ in range(20):
        H = build_hamiltonian(random_fourlevel_params(rng))
        assert abs(np.trace(H)) == 0
        assert not np.allclose(H, H.T)


def test_analytic_residual_warning(model_params, capsys):
    """Test that an eigen residual above the bound is logged as a warning."""
    system = analytic_eigensystem(model_params)
    assert system.eigen_residual <= EIGEN_TOL
    assert "fourlevel.eigen_residual_exceeded" not in capsys.readouterr().err
    analytic_eigensystem(model_params, resid_tol=-1.0)
    assert "fourlevel.eigen_residual_exceeded" in capsys.readouterr().err
