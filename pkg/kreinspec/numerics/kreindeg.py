"""
PT-doublet degeneracy and Krein-space assembly.

When the metric anticommutes with an even PT symmetry, every real eigenvalue
carries doublets (psi, PT psi) with eta-norms +1 and -1 that are linearly
independent and eta-orthogonal. The sums chi = psi + PT psi are PT-invariant
eigenstates, and the doublets split the space into H_plus + H_minus.
"""

import enum
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.linalg import null_space, orth

from kreinspec.core.config import settings
from kreinspec.core.exceptions import (
    DegenerateChi,
    Defective,
    DimensionMismatch,
    DoubletCheckFailed,
    NoConvergence,
    PreconditionFailed,
)
from kreinspec.numerics.antilinear import (
    AntilinearOp,
    EtaPtRelation,
    commutation_residual,
    eta_pt_relation,
)
from kreinspec.numerics.biortho import BiorthoSystem, build_biortho
from kreinspec.numerics.metric import pseudo_hermiticity_residual
from kreinspec.numerics.numkernel import (
    ComplexMatrix,
    ComplexVector,
    adjoint,
    as_matrix,
    frobenius_norm,
)

logger = structlog.get_logger(__name__)

# Smallest singular value of the unit-column doublet stack for a direct sum
RANK_TOL = 1e-8


class PtPhase(str, enum.Enum):
    """Spectral phase of a PT-symmetric Hamiltonian."""

    UNBROKEN = "Unbroken"
    BROKEN = "Broken"
    EXCEPTIONAL_POINT = "ExceptionalPoint"


@dataclass(frozen=True, eq=False)
class PtDoublet:
    """
    Degenerate pair (psi, PT psi) sharing the eigenvalue E.

    phi = eta psi, so <psi|phi> = 1. The remaining fields record the checks
    the pair passed.
    """

    E: complex
    psi: ComplexVector
    pt_psi: ComplexVector
    phi: ComplexVector
    eta_norm_psi: float
    eta_norm_pt_psi: float
    eigen_residual: float
    phi_pt_overlap: float
    gram_determinant: float


@dataclass(frozen=True, eq=False)
class KreinDecomposition:
    """chi states and the bases of H_plus and H_minus, with verification residuals."""

    chi_states: Tuple[ComplexVector, ...]
    h_plus_basis: Tuple[ComplexVector, ...]
    h_minus_basis: Tuple[ComplexVector, ...]
    energies: Tuple[complex, ...]
    pt_invariance_residual: float
    cross_eta_product: float
    eigen_residual: Optional[float]
    min_singular_value: float
    spans_space: bool


def _precondition_checks(
    H: ComplexMatrix, eta: ComplexMatrix, theta: AntilinearOp, tol: float
) -> None:
    residual = pseudo_hermiticity_residual(H, eta)
    if residual > tol:
        raise PreconditionFailed("pseudo_hermitian", residual)

    residual = commutation_residual(theta, H)
    if residual > tol:
        raise PreconditionFailed("commutes", residual)

    classification = eta_pt_relation(eta, theta)
    if classification.relation is not EtaPtRelation.ANTICOMMUTE:
        raise PreconditionFailed(
            "eta_pt_anticommute",
            classification.anticommute_residual,
            relation=classification.relation.value,
        )


def _unit_phase(v: ComplexVector) -> ComplexVector:
    # Largest entry real positive, norm untouched
    idx = int(np.argmax(np.abs(v)))
    pivot = v[idx]
    return v * (np.conj(pivot) / abs(pivot))


def _doublets_in_eigenspace(
    E: complex,
    basis: ComplexMatrix,
    H: ComplexMatrix,
    eta: ComplexMatrix,
    theta: AntilinearOp,
    tol: float,
) -> List[PtDoublet]:
    scale = frobenius_norm(H) or 1.0
    doublets: List[PtDoublet] = []
    W = orth(basis)
    while W.shape[1] > 0:
        form = adjoint(W) @ eta @ W
        values, vectors = np.linalg.eigh((form + adjoint(form)) / 2)
        top = float(values[-1])
        if top <= tol:
            raise DoubletCheckFailed("positive_eta_norm", top, tol)

        psi = _unit_phase(W @ vectors[:, -1] / np.sqrt(top))
        pt_psi = theta.apply(psi)
        phi = eta @ psi

        norm_psi = float(np.vdot(psi, phi).real)
        norm_pt = float(np.vdot(pt_psi, eta @ pt_psi).real)
        overlap = float(abs(np.vdot(phi, pt_psi)))
        gram = np.array(
            [[np.vdot(psi, psi), np.vdot(psi, pt_psi)], [np.vdot(pt_psi, psi), np.vdot(pt_psi, pt_psi)]]
        )
        det = float(np.linalg.det(gram).real)
        residual = max(
            float(np.linalg.norm(H @ v - E * v)) / (scale * float(np.linalg.norm(v)))
            for v in (psi, pt_psi)
        )

        if residual > tol:
            raise DoubletCheckFailed("eigen_residual", residual, tol)
        if overlap > tol:
            raise DoubletCheckFailed("phi_pt_orthogonality", overlap, tol)
        if det < tol:
            raise DoubletCheckFailed("gram_determinant", det, tol)
        if abs(norm_psi - 1.0) > tol:
            raise DoubletCheckFailed("eta_norm_psi", abs(norm_psi - 1.0), tol)
        if abs(norm_pt + 1.0) > tol:
            raise DoubletCheckFailed("eta_norm_pt_psi", abs(norm_pt + 1.0), tol)

        doublets.append(
            PtDoublet(
                E=E,
                psi=psi,
                pt_psi=pt_psi,
                phi=phi,
                eta_norm_psi=norm_psi,
                eta_norm_pt_psi=norm_pt,
                eigen_residual=residual,
                phi_pt_overlap=overlap,
                gram_determinant=det,
            )
        )

        # Continue in the eta-orthogonal complement of span{psi, PT psi}
        constraints = np.vstack([adjoint(phi) @ W, adjoint(eta @ pt_psi) @ W])
        complement = null_space(constraints)
        if complement.shape[1] == 0:
            break
        W = orth(W @ complement)
    return doublets


def find_pt_doublets(
    H: ComplexMatrix,
    eta: ComplexMatrix,
    theta: AntilinearOp,
    tol: Optional[float] = None,
) -> List[PtDoublet]:
    """
    Extract the PT doublets of every eigenvalue.

    Args:
        H: Hamiltonian
        eta: Metric anticommuting with theta
        theta: Even PT symmetry of H
        tol: Residual tolerance (defaults to settings.RTOL)

    Returns:
        Doublets ordered by eigenvalue

    Raises:
        PreconditionFailed: naming the first precondition that does not hold
        DoubletCheckFailed: if a constructed doublet violates an invariant
        Defective: propagated from build_biortho
    """
    tol = settings.RTOL if tol is None else tol
    H = as_matrix(H)
    eta = as_matrix(eta)
    if H.shape != eta.shape or H.shape[0] != theta.dim:
        raise DimensionMismatch(
            shapes=[list(H.shape), list(eta.shape), [theta.dim, theta.dim]]
        )

    _precondition_checks(H, eta, theta, tol)
    system = build_biortho(H)

    threshold = settings.REAL_SPECTRUM_TOL * (system.h_norm or 1.0)
    max_imag = max(abs(E.imag) for E in system.eigenvalues)
    if max_imag > threshold:
        raise PreconditionFailed("real_spectrum", max_imag, threshold=threshold)

    psi = system.psi_matrix()
    doublets: List[PtDoublet] = []
    for members in system.clusters():
        if len(members) % 2:
            E = system.levels[members[0]].E
            raise PreconditionFailed(
                "even_multiplicity", None, eigenvalue=[E.real, E.imag], multiplicity=len(members)
            )
        E = complex(system.levels[members[0]].E.real, 0.0)
        doublets.extend(_doublets_in_eigenspace(E, psi[:, members], H, eta, theta, tol))

    logger.debug("doublets.found", count=len(doublets), energies=[d.E.real for d in doublets])
    return doublets


def build_krein(
    doublets: Sequence[PtDoublet],
    theta: AntilinearOp,
    hamiltonian: Optional[ComplexMatrix] = None,
    tol: Optional[float] = None,
) -> KreinDecomposition:
    """
    Assemble chi_n = psi_n + PT psi_n and the decomposition H_plus + H_minus.

    A chi that cancels is retried with i psi; DegenerateChi is raised if that
    cancels too.
    """
    tol = settings.RTOL if tol is None else tol
    if not doublets:
        raise PreconditionFailed("doublets_nonempty")

    chis: List[ComplexVector] = []
    plus: List[ComplexVector] = []
    minus: List[ComplexVector] = []
    phis: List[ComplexVector] = []
    for d in doublets:
        for factor in (1.0, 1j):
            psi = factor * d.psi
            pt_psi = theta.apply(psi)
            chi = psi + pt_psi
            chi_norm = float(np.linalg.norm(chi))
            if chi_norm >= tol * float(np.linalg.norm(psi)):
                break
            logger.debug("krein.chi_retry", E=d.E.real, norm=chi_norm)
        else:
            raise DegenerateChi(norm=chi_norm, tol=tol)
        chis.append(chi)
        plus.append(psi)
        minus.append(pt_psi)
        phis.append(factor * d.phi)

    pt_residual = max(
        float(np.linalg.norm(theta.apply(chi) - chi)) / float(np.linalg.norm(chi)) for chi in chis
    )
    cross = max(float(abs(np.vdot(phi, v))) for phi in phis for v in minus)

    eigen_residual: Optional[float] = None
    if hamiltonian is not None:
        H = as_matrix(hamiltonian)
        scale = frobenius_norm(H) or 1.0
        eigen_residual = max(
            float(np.linalg.norm(H @ chi - d.E * chi)) / (scale * float(np.linalg.norm(chi)))
            for chi, d in zip(chis, doublets)
        )

    stack = np.column_stack([v / np.linalg.norm(v) for v in plus + minus])
    min_sv = float(np.linalg.svd(stack, compute_uv=False).min())
    spans = stack.shape[1] == stack.shape[0] and min_sv >= RANK_TOL

    logger.debug(
        "krein.built",
        chi_count=len(chis),
        pt_invariance_residual=pt_residual,
        cross_eta_product=cross,
        spans_space=spans,
    )
    return KreinDecomposition(
        chi_states=tuple(chis),
        h_plus_basis=tuple(plus),
        h_minus_basis=tuple(minus),
        energies=tuple(d.E for d in doublets),
        pt_invariance_residual=pt_residual,
        cross_eta_product=cross,
        eigen_residual=eigen_residual,
        min_singular_value=min_sv,
        spans_space=spans,
    )


def phase_of_system(system: BiorthoSystem, tol: Optional[float] = None) -> PtPhase:
    """Unbroken when every |Im E| <= tol * ||H||_F, Broken otherwise."""
    tol = settings.REAL_SPECTRUM_TOL if tol is None else tol
    threshold = tol * (system.h_norm or 1.0)
    max_imag = max(abs(E.imag) for E in system.eigenvalues)
    return PtPhase.UNBROKEN if max_imag <= threshold else PtPhase.BROKEN


def classify_pt_phase(H: ComplexMatrix, tol: Optional[float] = None) -> PtPhase:
    """Spectral phase of H; a non-diagonalizable H is an exceptional point."""
    try:
        system = build_biortho(H)
    except (Defective, NoConvergence) as exc:
        logger.debug("phase.exceptional_point", error_code=exc.error_code)
        return PtPhase.EXCEPTIONAL_POINT
    return phase_of_system(system, tol)


def eigenstates_pt_invariant(
    states: Sequence[ComplexVector], theta: AntilinearOp, tol: Optional[float] = None
) -> bool:
    """
    Whether theta maps every given eigenstate onto its own ray.

    Reported next to PtPhase: a real spectrum does not imply PT-invariant
    eigenstates. Inside a degenerate eigenspace the answer depends on the
    basis, so callers pass a fixed choice (the doublet states psi, or the
    eigenvectors of non-degenerate levels).
    """
    tol = settings.RTOL if tol is None else tol
    for state in states:
        psi = np.asarray(state, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        image = theta.apply(psi)
        along = np.vdot(psi, image) * psi
        if float(np.linalg.norm(image - along)) > tol:
            return False
    return True
