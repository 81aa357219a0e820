"""
Dense complex matrix kernel.
Validation helpers, pivoted inversion, the right eigensolver and an independent
characteristic-polynomial oracle.
"""

import warnings
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import numpy.typing as npt
import structlog
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.optimize import linear_sum_assignment

from kreinspec.core.config import settings
from kreinspec.core.exceptions import (
    DimensionMismatch,
    DimensionTooLarge,
    NoConvergence,
    NonFiniteInput,
    SingularMatrix,
)

logger = structlog.get_logger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]
EigenPair = Tuple[complex, ComplexVector]


def as_matrix(data: object, square: bool = True) -> ComplexMatrix:
    """Coerce to a finite complex128 matrix."""
    m = np.asarray(data, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionMismatch("Expected a non-empty 2-D matrix", shapes=[list(m.shape)])
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch("Expected a square matrix", shapes=[list(m.shape)])
    if not np.all(np.isfinite(m)):
        raise NonFiniteInput()
    return m


def as_vector(data: object) -> ComplexVector:
    """Coerce to a finite complex128 vector."""
    v = np.asarray(data, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] == 0:
        raise DimensionMismatch("Expected a non-empty 1-D vector", shapes=[list(v.shape)])
    if not np.all(np.isfinite(v)):
        raise NonFiniteInput()
    return v


def frobenius_norm(m: ComplexMatrix) -> float:
    return float(np.linalg.norm(m, "fro"))


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return np.conj(m).T


def inner(x: ComplexVector, y: ComplexVector) -> complex:
    """Standard inner product <x|y>, conjugate-linear in x."""
    if x.shape != y.shape:
        raise DimensionMismatch(shapes=[list(x.shape), list(y.shape)])
    return complex(np.vdot(x, y))


def normalize_phase(v: ComplexVector) -> ComplexVector:
    """Unit-normalize v and make its largest-magnitude entry real positive."""
    norm = np.linalg.norm(v)
    if norm == 0:
        return v.astype(np.complex128)
    u = v / norm
    idx = int(np.argmax(np.abs(u)))
    pivot = u[idx]
    u = u * (np.conj(pivot) / abs(pivot))
    u[idx] = abs(pivot)
    return u


def mat_inverse(m: ComplexMatrix, pivot_tol: Optional[float] = None) -> ComplexMatrix:
    """
    Invert a square matrix by LU factorization with partial pivoting.

    Args:
        m: Square complex matrix
        pivot_tol: Relative pivot threshold (defaults to settings.PIVOT_TOL)

    Returns:
        The inverse matrix

    Raises:
        SingularMatrix: if a pivot falls below pivot_tol * ||M||_F
    """
    m = as_matrix(m)
    pivot_tol = settings.PIVOT_TOL if pivot_tol is None else pivot_tol
    norm = frobenius_norm(m)
    threshold = pivot_tol * norm
    if norm == 0:
        raise SingularMatrix(pivot=0.0, threshold=threshold)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(m, check_finite=False)

    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if smallest < threshold:
        raise SingularMatrix(pivot=smallest, threshold=threshold)

    return lu_solve((lu, piv), np.eye(m.shape[0], dtype=np.complex128), check_finite=False)


def eig_right(m: ComplexMatrix, tol: Optional[float] = None) -> List[EigenPair]:
    """
    Right eigenpairs of a general complex matrix.

    Eigenvectors are unit-normalized with their largest entry real positive;
    pairs are sorted by (Re, Im). Each residual ||M v - lambda v|| is checked
    against tol * ||M||_F * ||v||.
    """
    m = as_matrix(m)
    tol = settings.RTOL if tol is None else tol
    try:
        values, vectors = np.linalg.eig(m)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc

    norm = frobenius_norm(m)
    pairs: List[EigenPair] = []
    for j in range(m.shape[0]):
        lam = complex(values[j])
        v = normalize_phase(vectors[:, j])
        residual = float(np.linalg.norm(m @ v - lam * v))
        if residual > tol * norm * np.linalg.norm(v):
            raise NoConvergence(
                "Eigenpair residual exceeds tolerance",
                details={"eigenvalue": [lam.real, lam.imag], "residual": residual, "tol": tol},
            )
        pairs.append((lam, v))

    pairs.sort(key=lambda pair: (pair[0].real, pair[0].imag))
    logger.debug("eig_right.done", n=m.shape[0], norm=norm)
    return pairs


def charpoly_coefficients(m: ComplexMatrix, prec: int) -> List[mpmath.mpc]:
    """
    Coefficients of det(lambda I - M), highest degree first, by the
    Faddeev-LeVerrier recursion at `prec` bits.
    """
    n = m.shape[0]
    with mpmath.workprec(prec):
        a = mpmath.matrix(n, n)
        for i in range(n):
            for j in range(n):
                a[i, j] = mpmath.mpc(float(m[i, j].real), float(m[i, j].imag))
        identity = mpmath.eye(n)
        coeffs = [mpmath.mpc(1)]
        mk = mpmath.zeros(n, n)
        for k in range(1, n + 1):
            mk = a * mk + coeffs[-1] * identity
            amk = a * mk
            trace = mpmath.fsum(amk[i, i] for i in range(n))
            coeffs.append(-trace / k)
    return coeffs


def charpoly_roots_oracle(m: ComplexMatrix) -> List[complex]:
    """
    Eigenvalues as roots of the characteristic polynomial.

    Independent of eig_right: coefficients by Faddeev-LeVerrier, roots by
    Durand-Kerner iteration. The working precision grows with n so that
    roots of multiplicity up to n still converge.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n > settings.ORACLE_MAX_DIM:
        raise DimensionTooLarge(n, settings.ORACLE_MAX_DIM)
    if n == 1:
        return [complex(m[0, 0])]

    base = settings.ORACLE_PRECISION_BITS
    extra = base * n
    coeffs = charpoly_coefficients(m, base + extra)
    with mpmath.workprec(base):
        try:
            roots = mpmath.polyroots(coeffs, maxsteps=200 * n + 400, extraprec=extra)
        except mpmath.mp.NoConvergence as exc:
            raise NoConvergence(f"Characteristic polynomial roots: {exc}") from exc
        result = [complex(r) for r in roots]
    logger.debug("charpoly_oracle.done", n=n, precision_bits=base + extra)

    result.sort(key=lambda z: (z.real, z.imag))
    return result


def multiset_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Largest distance under the optimal one-to-one matching of two complex multisets."""
    if len(a) != len(b):
        raise DimensionMismatch("Multisets differ in size", shapes=[[len(a)], [len(b)]])
    if len(a) == 0:
        return 0.0
    cost = np.abs(np.subtract.outer(np.asarray(a), np.asarray(b)))
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
