"""
Split-quaternion algebra and its 2x2 complex-matrix embedding.

Both four-dimensional real algebras are generated by sigma_0 and three
generators: (-sigma_x, -sigma_y, i sigma_z) for split-quaternions (SU(1,1))
and (i sigma_x, i sigma_y, i sigma_z) for quaternions (SU(2)). The product is
the one induced by the embedding; its structure constants are derived once
from the generator matrices.
"""

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Tuple

import numpy as np
import numpy.typing as npt

from kreinspec.core.exceptions import DimensionMismatch
from kreinspec.numerics.numkernel import ComplexMatrix


class PauliBasis(NamedTuple):
    """The 2x2 identity and the three Pauli matrices."""

    sigma0: ComplexMatrix
    sigmaX: ComplexMatrix
    sigmaY: ComplexMatrix
    sigmaZ: ComplexMatrix


PAULI = PauliBasis(
    sigma0=np.array([[1, 0], [0, 1]], dtype=np.complex128),
    sigmaX=np.array([[0, 1], [1, 0]], dtype=np.complex128),
    sigmaY=np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    sigmaZ=np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


class Algebra(str, enum.Enum):
    """Generator sets sharing the sigma_0 unit."""

    SPLIT = "split"  # (-sigma_x, -sigma_y, i sigma_z)
    QUATERNION = "quaternion"  # (i sigma_x, i sigma_y, i sigma_z)


def basis(algebra: Algebra = Algebra.SPLIT) -> npt.NDArray[np.complex128]:
    """Stack (sigma_0, e_1, e_2, e_3) of shape (4, 2, 2)."""
    if algebra is Algebra.SPLIT:
        gens = (-PAULI.sigmaX, -PAULI.sigmaY, 1j * PAULI.sigmaZ)
    else:
        gens = (1j * PAULI.sigmaX, 1j * PAULI.sigmaY, 1j * PAULI.sigmaZ)
    return np.stack((PAULI.sigma0,) + gens)


def _decompose(m: ComplexMatrix, algebra: Algebra) -> npt.NDArray[np.float64]:
    # Each basis element is a unit-modulus multiple of a Pauli matrix, so
    # Tr(e_k^H e_k) = 2 and the e_k are orthogonal under the trace form.
    elems = basis(algebra)
    coeffs = np.array([np.trace(np.conj(e).T @ m) / 2 for e in elems])
    if np.max(np.abs(coeffs.imag)) > 1e-12:
        raise ValueError("matrix is not a real combination of the algebra basis")
    return coeffs.real


@lru_cache(maxsize=None)
def _table(algebra: Algebra) -> Tuple[Tuple[Tuple[int, ...], ...], ...]:
    elems = basis(algebra)
    rows = []
    for i in range(4):
        row = []
        for j in range(4):
            c = _decompose(elems[i] @ elems[j], algebra)
            row.append(tuple(int(round(x)) for x in c))
        rows.append(tuple(row))
    return tuple(rows)


def product_table(algebra: Algebra = Algebra.SPLIT) -> npt.NDArray[np.int64]:
    """Structure constants T[i, j, k] with e_i e_j = sum_k T[i, j, k] e_k."""
    return np.array(_table(algebra), dtype=np.int64)


def generator_signature(algebra: Algebra = Algebra.SPLIT) -> Tuple[int, int, int]:
    """Squares of the three generators in units of sigma_0."""
    t = product_table(algebra)
    return tuple(int(t[k, k, 0]) for k in (1, 2, 3))  # type: ignore[return-value]


@dataclass(frozen=True)
class SplitQuaternion:
    """Real element b0 e_0 + b1 e_1 + b2 e_2 + b3 e_3 of the selected algebra."""

    b0: float
    b1: float
    b2: float
    b3: float
    algebra: Algebra = Algebra.SPLIT

    @property
    def components(self) -> Tuple[float, float, float, float]:
        return (self.b0, self.b1, self.b2, self.b3)

    def __mul__(self, other: "SplitQuaternion") -> "SplitQuaternion":
        return sq_mul(self, other)

    def __add__(self, other: "SplitQuaternion") -> "SplitQuaternion":
        _check_same_algebra(self, other)
        return SplitQuaternion(
            *(x + y for x, y in zip(self.components, other.components)), algebra=self.algebra
        )

    def __neg__(self) -> "SplitQuaternion":
        return SplitQuaternion(*(-x for x in self.components), algebra=self.algebra)

    def __sub__(self, other: "SplitQuaternion") -> "SplitQuaternion":
        return self + (-other)


def _check_same_algebra(p: SplitQuaternion, q: SplitQuaternion) -> None:
    if p.algebra is not q.algebra:
        raise DimensionMismatch(
            f"Cannot combine {p.algebra.value} and {q.algebra.value} elements"
        )


def sq_mul(p: SplitQuaternion, q: SplitQuaternion) -> SplitQuaternion:
    """Product induced by the matrix embedding."""
    _check_same_algebra(p, q)
    table = _table(p.algebra)
    out = [0.0, 0.0, 0.0, 0.0]
    for i, pi in enumerate(p.components):
        if pi == 0:
            continue
        for j, qj in enumerate(q.components):
            if qj == 0:
                continue
            for k, t in enumerate(table[i][j]):
                if t:
                    out[k] += t * pi * qj
    return SplitQuaternion(*out, algebra=p.algebra)


def sq_conj(q: SplitQuaternion) -> SplitQuaternion:
    """Conjugate (b0, -b1, -b2, -b3)."""
    return SplitQuaternion(q.b0, -q.b1, -q.b2, -q.b3, algebra=q.algebra)


def sq_norm(q: SplitQuaternion) -> float:
    """Norm q conj(q); equals det(sq_embed(q)). For split-quaternions b0^2 + b3^2 - b1^2 - b2^2."""
    signs = generator_signature(q.algebra)
    return q.b0 * q.b0 - sum(s * b * b for s, b in zip(signs, (q.b1, q.b2, q.b3)))


def sq_embed(q: SplitQuaternion) -> ComplexMatrix:
    """2x2 complex matrix b0 sigma_0 + b1 e_1 + b2 e_2 + b3 e_3."""
    coeffs = np.array(q.components, dtype=np.float64)
    return np.tensordot(coeffs, basis(q.algebra), axes=1)
