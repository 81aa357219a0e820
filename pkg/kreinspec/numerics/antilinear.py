"""
Antilinear operators theta = U K.

An operator is stored by its unitary part U; complex conjugation K is applied
at call time. Parity S, time reversal Z K and their product PT = S Z K are
built here, together with the commutation tests against a Hamiltonian or a
metric.
"""

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
import structlog

from kreinspec.core.config import settings
from kreinspec.core.exceptions import DimensionMismatch, NotUnitary, OddDimension
from kreinspec.numerics.numkernel import (
    ComplexMatrix,
    ComplexVector,
    adjoint,
    as_matrix,
    as_vector,
    frobenius_norm,
)
from kreinspec.numerics.splitq import PAULI

logger = structlog.get_logger(__name__)

# Classification threshold for eta_pt_relation (absolute Frobenius residual)
RELATION_TOL = 1e-10


class EtaPtRelation(str, enum.Enum):
    """How a metric relates to an antilinear symmetry."""

    COMMUTE = "Commute"
    ANTICOMMUTE = "Anticommute"
    NEITHER = "Neither"


@dataclass(frozen=True)
class EtaPtClassification:
    relation: EtaPtRelation
    commute_residual: float
    anticommute_residual: float


@dataclass(frozen=True, eq=False)
class AntilinearOp:
    """Antiunitary operator x -> U conj(x)."""

    unitary: ComplexMatrix
    label: str = "theta"

    def __post_init__(self) -> None:
        u = as_matrix(self.unitary)
        n = u.shape[0]
        residual = frobenius_norm(adjoint(u) @ u - np.eye(n))
        tol = settings.UNITARY_TOL * np.sqrt(n)
        if residual > tol:
            raise NotUnitary(residual=residual, tol=tol)
        object.__setattr__(self, "unitary", u)

    @property
    def dim(self) -> int:
        return self.unitary.shape[0]

    def apply(self, x: ComplexVector) -> ComplexVector:
        """U conj(x)."""
        x = as_vector(x)
        if x.shape[0] != self.dim:
            raise DimensionMismatch(
                f"{self.label} acts on dimension {self.dim}", shapes=[[self.dim], list(x.shape)]
            )
        return self.unitary @ np.conj(x)

    __call__ = apply

    def squared(self) -> ComplexMatrix:
        """theta^2 as a linear map, U conj(U)."""
        return self.unitary @ np.conj(self.unitary)


def apply(theta: AntilinearOp, x: ComplexVector) -> ComplexVector:
    """Apply theta to x; apply(theta, a x) = conj(a) apply(theta, x)."""
    return theta.apply(x)


def _require_even(n: int) -> None:
    if n <= 0:
        raise DimensionMismatch(f"Dimension must be positive, got {n}", shapes=[[n]])
    if n % 2:
        raise OddDimension(n)


def build_parity(n: int) -> ComplexMatrix:
    """S = blockdiag(I, -I) with blocks of size n/2."""
    _require_even(n)
    half = n // 2
    return np.diag(np.concatenate([np.ones(half), -np.ones(half)])).astype(np.complex128)


def build_timereversal(n: int) -> AntilinearOp:
    """T = Z K with Z = blockdiag(sigma_x, ..., sigma_x); T^2 = +1."""
    _require_even(n)
    z = np.kron(np.eye(n // 2), PAULI.sigmaX)
    return AntilinearOp(unitary=z, label="T")


def compose_pt(P: ComplexMatrix, T: AntilinearOp) -> AntilinearOp:
    """PT = S Z K, i.e. the antilinear operator with U = S Z."""
    P = as_matrix(P)
    if P.shape[0] != T.dim:
        raise DimensionMismatch(
            "Parity and time reversal differ in dimension",
            shapes=[list(P.shape), [T.dim, T.dim]],
        )
    return AntilinearOp(unitary=P @ T.unitary, label="PT")


def conjugation(n: int) -> AntilinearOp:
    """Bare complex conjugation K."""
    if n <= 0:
        raise DimensionMismatch(f"Dimension must be positive, got {n}", shapes=[[n]])
    return AntilinearOp(unitary=np.eye(n, dtype=np.complex128), label="K")


def default_pt(n: int) -> AntilinearOp:
    """PT built from the standard parity and time reversal of dimension n."""
    return compose_pt(build_parity(n), build_timereversal(n))


def commutation_residual(theta: AntilinearOp, H: ComplexMatrix) -> float:
    """||H U - U conj(H)||_F relative to ||H||_F."""
    H = as_matrix(H)
    if H.shape[0] != theta.dim:
        raise DimensionMismatch(shapes=[list(H.shape), [theta.dim, theta.dim]])
    u = theta.unitary
    scale = frobenius_norm(H) or 1.0
    return frobenius_norm(H @ u - u @ np.conj(H)) / scale


def commutes_with(theta: AntilinearOp, H: ComplexMatrix, tol: Optional[float] = None) -> bool:
    """Whether [H, theta] = 0."""
    tol = settings.RTOL if tol is None else tol
    return commutation_residual(theta, H) <= tol


def eta_pt_relation(
    eta: ComplexMatrix, theta: AntilinearOp, tol: Optional[float] = None
) -> EtaPtClassification:
    """
    Classify a metric as commuting or anticommuting with theta.

    Both residuals ||eta U -+ U conj(eta)||_F are absolute and are always
    reported.
    """
    tol = RELATION_TOL if tol is None else tol
    eta = as_matrix(eta)
    if eta.shape[0] != theta.dim:
        raise DimensionMismatch(shapes=[list(eta.shape), [theta.dim, theta.dim]])
    u = theta.unitary
    left = eta @ u
    right = u @ np.conj(eta)
    commute = frobenius_norm(left - right)
    anticommute = frobenius_norm(left + right)

    if commute <= tol:
        relation = EtaPtRelation.COMMUTE
    elif anticommute <= tol:
        relation = EtaPtRelation.ANTICOMMUTE
    else:
        relation = EtaPtRelation.NEITHER

    logger.debug(
        "eta_pt.classified",
        relation=relation.value,
        commute_residual=commute,
        anticommute_residual=anticommute,
    )
    return EtaPtClassification(
        relation=relation, commute_residual=commute, anticommute_residual=anticommute
    )


def antiunitarity_defect(theta: AntilinearOp, x: ComplexVector, y: ComplexVector) -> float:
    """|<theta x|theta y> - <y|x>|."""
    lhs = np.vdot(theta.apply(x), theta.apply(y))
    rhs = np.vdot(as_vector(y), as_vector(x))
    return float(abs(lhs - rhs))


def is_even_involution(theta: AntilinearOp, tol: Optional[float] = None) -> bool:
    """theta^2 = +1."""
    tol = settings.UNITARY_TOL if tol is None else tol
    return frobenius_norm(theta.squared() - np.eye(theta.dim)) <= tol
