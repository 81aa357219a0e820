"""
Tests for PT doublets and the Krein-space assembly.
"""

import numpy as np
import pytest

from kreinspec.core.exceptions import PreconditionFailed
from kreinspec.numerics.antilinear import build_timereversal, conjugation
from kreinspec.numerics.biortho import build_biortho
from kreinspec.numerics.fourlevel import STATE_LABELS, analytic_eigensystem, build_hamiltonian
from kreinspec.numerics.kreindeg import (
    PtDoublet,
    PtPhase,
    build_krein,
    classify_pt_phase,
    eigenstates_pt_invariant,
    find_pt_doublets,
    phase_of_system,
)


def test_doublets_of_the_model(model_hamiltonian, model_params, eta22, pt4):
    """Test one doublet per eigenvalue with eta-norms +1 and -1."""
    doublets = find_pt_doublets(model_hamiltonian, eta22, pt4)
    w = np.sqrt(model_params.discriminant)
    assert len(doublets) == 2
    assert sorted(d.E.real for d in doublets) == pytest.approx([-w, w])
    for d in doublets:
        assert abs(d.eta_norm_psi - 1.0) <= 1e-10
        assert abs(d.eta_norm_pt_psi + 1.0) <= 1e-10
        assert d.phi_pt_overlap <= 1e-10
        assert d.gram_determinant >= 1e-6
        assert d.eigen_residual <= 1e-10
        assert np.vdot(d.psi, d.phi) == pytest.approx(1.0)


def test_doublets_reproduce_analytic_states(model_hamiltonian, model_params, eta22, pt4):
    """Test that every analytic eigenstate lies in the span of its doublet."""
    doublets = find_pt_doublets(model_hamiltonian, eta22, pt4)
    analytic = analytic_eigensystem(model_params)
    for label in STATE_LABELS:
        E = analytic.energy(label)
        d = min(doublets, key=lambda d: abs(d.E - E))
        q, _ = np.linalg.qr(np.column_stack([d.psi, d.pt_psi]))
        v = analytic.psi(label)
        assert np.linalg.norm(v - q @ (q.conj().T @ v)) < 1e-8


def test_precondition_pseudo_hermitian(eta22, pt4, rng):
    """Test that a generic matrix fails the first precondition."""
    H = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    with pytest.raises(PreconditionFailed) as exc_info:
        find_pt_doublets(H, eta22, pt4)
    assert exc_info.value.precondition == "pseudo_hermitian"


def test_precondition_commutes(eta22, pt4):
    """Test a pseudo-Hermitian H that breaks PT."""
    with pytest.raises(PreconditionFailed) as exc_info:
        find_pt_doublets(np.diag([1.0, 2.0, 3.0, 4.0]), eta22, pt4)
    assert exc_info.value.precondition == "commutes"


def test_precondition_anticommute(pt4):
    """Test that a commuting metric is refused."""
    with pytest.raises(PreconditionFailed) as exc_info:
        find_pt_doublets(np.diag([1.0, 1.0, 2.0, 2.0]), np.eye(4), pt4)
    assert exc_info.value.precondition == "eta_pt_anticommute"
    assert exc_info.value.details["relation"] == "Commute"


def test_precondition_real_spectrum(broken_params, eta22, pt4):
    """Test that the broken phase has no doublets."""
    with pytest.raises(PreconditionFailed) as exc_info:
        find_pt_doublets(build_hamiltonian(broken_params), eta22, pt4)
    assert exc_info.value.precondition == "real_spectrum"


def test_krein_restoration(model_hamiltonian, eta22, pt4):
    """Test chi = psi + PT psi: PT-invariant eigenstates and a direct sum."""
    doublets = find_pt_doublets(model_hamiltonian, eta22, pt4)
    krein = build_krein(doublets, pt4, hamiltonian=model_hamiltonian)
    assert len(krein.chi_states) == 2
    assert krein.pt_invariance_residual <= 1e-10
    assert krein.cross_eta_product <= 1e-10
    assert krein.eigen_residual <= 1e-10
    assert krein.spans_space
    for chi in krein.chi_states:
        assert np.linalg.norm(pt4.apply(chi) - chi) <= 1e-10 * np.linalg.norm(chi)


def test_krein_without_hamiltonian(model_hamiltonian, eta22, pt4):
    """Test that the eigen residual is only computed when H is given."""
    krein = build_krein(find_pt_doublets(model_hamiltonian, eta22, pt4), pt4)
    assert krein.eigen_residual is None


def test_krein_requires_doublets(pt4):
    """Test that an empty doublet list is refused."""
    with pytest.raises(PreconditionFailed):
        build_krein([], pt4)


def test_krein_retries_cancelling_chi():
    """Test that psi with PT psi = -psi is replaced by i psi."""
    psi = np.array([1j, 0.0])
    doublet = PtDoublet(
        E=0j,
        psi=psi,
        pt_psi=-psi,
        phi=psi,
        eta_norm_psi=1.0,
        eta_norm_pt_psi=-1.0,
        eigen_residual=0.0,
        phi_pt_overlap=0.0,
        gram_determinant=0.0,
    )
    krein = build_krein([doublet], conjugation(2))
    assert np.allclose(krein.chi_states[0], [-2.0, 0.0])


def test_classify_pt_phase(model_hamiltonian, broken_params, ep_params, jordan):
    """Test the three spectral phases."""
    assert classify_pt_phase(model_hamiltonian) is PtPhase.UNBROKEN
    assert classify_pt_phase(build_hamiltonian(broken_params)) is PtPhase.BROKEN
    assert classify_pt_phase(build_hamiltonian(ep_params)) is PtPhase.EXCEPTIONAL_POINT
    assert classify_pt_phase(jordan) is PtPhase.EXCEPTIONAL_POINT
    assert phase_of_system(build_biortho(np.array([[0.0, 1.0], [-1.0, 0.0]]))) is PtPhase.BROKEN


def test_eigenstates_pt_invariant():
    """Test the eigenstate invariance flag independently of the spectrum."""
    states = [level.psi for level in build_biortho(np.diag([1.0, 2.0])).levels]
    assert eigenstates_pt_invariant(states, conjugation(2))
    assert not eigenstates_pt_invariant(states, build_timereversal(2))


def test_doublet_states_are_not_pt_invariant(model_hamiltonian, eta22, pt4):
    """Test that psi and PT psi have opposite eta-norms, so PT psi leaves the ray of psi."""
    doublets = find_pt_doublets(model_hamiltonian, eta22, pt4)
    assert not eigenstates_pt_invariant([d.psi for d in doublets], pt4)
    krein = build_krein(doublets, pt4, hamiltonian=model_hamiltonian)
    assert eigenstates_pt_invariant(krein.chi_states, pt4, tol=1e-9)
