"""
Metric operators: pseudo-Hermiticity, signature and eta-inner products.
"""

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import structlog

from kreinspec.core.config import settings
from kreinspec.core.exceptions import DimensionMismatch, NearSingular, NotHermitian
from kreinspec.numerics.numkernel import (
    ComplexMatrix,
    ComplexVector,
    adjoint,
    as_matrix,
    as_vector,
    eig_right,
    frobenius_norm,
    mat_inverse,
)

logger = structlog.get_logger(__name__)


class Definiteness(str, enum.Enum):
    """Definiteness of a Hermitian metric."""

    POSITIVE_DEFINITE = "PositiveDefinite"
    NEGATIVE_DEFINITE = "NegativeDefinite"
    INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class MetricReport:
    """Hermiticity, invertibility and signature of a metric operator."""

    is_hermitian: bool
    is_invertible: bool
    n_plus: int
    n_minus: int
    definiteness: Definiteness
    eigenvalues: Tuple[float, ...]
    hermiticity_residual: float

    @property
    def signature(self) -> Tuple[int, int]:
        return (self.n_plus, self.n_minus)


def _check_same_dim(H: ComplexMatrix, eta: ComplexMatrix) -> None:
    if H.shape != eta.shape:
        raise DimensionMismatch(
            "Hamiltonian and metric differ in dimension",
            shapes=[list(H.shape), list(eta.shape)],
        )


def pseudo_hermiticity_residual(H: ComplexMatrix, eta: ComplexMatrix) -> float:
    """||H^H - eta H eta^{-1}||_F relative to ||H||_F."""
    H = as_matrix(H)
    eta = as_matrix(eta)
    _check_same_dim(H, eta)
    diff = adjoint(H) - eta @ H @ mat_inverse(eta)
    scale = frobenius_norm(H) or 1.0
    return frobenius_norm(diff) / scale


def is_pseudo_hermitian(H: ComplexMatrix, eta: ComplexMatrix, tol: Optional[float] = None) -> bool:
    """
    Check H^H = eta H eta^{-1}.

    Raises:
        SingularMatrix: if eta cannot be inverted
    """
    tol = settings.RTOL if tol is None else tol
    return pseudo_hermiticity_residual(H, eta) <= tol


def metric_signature(eta: ComplexMatrix) -> MetricReport:
    """
    Count positive and negative eigenvalues of a Hermitian metric.

    Raises:
        NotHermitian: if max |eta - eta^H| exceeds HERMITIAN_TOL * ||eta||_F
        NearSingular: if an eigenvalue lies within HERMITIAN_TOL * ||eta||_F of zero
    """
    eta = as_matrix(eta)
    norm = frobenius_norm(eta)
    threshold = settings.HERMITIAN_TOL * norm
    residual = float(np.max(np.abs(eta - adjoint(eta))))
    if residual > threshold:
        raise NotHermitian(residual=residual, tol=threshold)

    symmetric = (eta + adjoint(eta)) / 2
    eigenvalues = sorted(lam.real for lam, _ in eig_right(symmetric))
    smallest = min(abs(lam) for lam in eigenvalues)
    if norm == 0 or smallest < threshold:
        raise NearSingular(eigenvalue=smallest, threshold=threshold)

    n_plus = sum(1 for lam in eigenvalues if lam > 0)
    n_minus = len(eigenvalues) - n_plus
    if n_minus == 0:
        definiteness = Definiteness.POSITIVE_DEFINITE
    elif n_plus == 0:
        definiteness = Definiteness.NEGATIVE_DEFINITE
    else:
        definiteness = Definiteness.INDEFINITE

    logger.debug("metric.signature", n_plus=n_plus, n_minus=n_minus)
    return MetricReport(
        is_hermitian=True,
        is_invertible=True,
        n_plus=n_plus,
        n_minus=n_minus,
        definiteness=definiteness,
        eigenvalues=tuple(eigenvalues),
        hermiticity_residual=residual,
    )


def eta_inner(x: ComplexVector, y: ComplexVector, eta: ComplexMatrix) -> complex:
    """<x|y>_eta = <x|eta y>, conjugate-linear in x."""
    x = as_vector(x)
    y = as_vector(y)
    eta = as_matrix(eta)
    if not (x.shape[0] == y.shape[0] == eta.shape[0]):
        raise DimensionMismatch(shapes=[list(x.shape), list(y.shape), list(eta.shape)])
    return complex(np.vdot(x, eta @ y))


def eta_norm(x: ComplexVector, eta: ComplexMatrix) -> float:
    """Indefinite norm <x|x>_eta (real for Hermitian eta)."""
    return eta_inner(x, x, eta).real
