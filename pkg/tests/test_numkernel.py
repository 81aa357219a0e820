"""
Tests for the dense matrix kernel.
"""

import numpy as np
import pytest

from kreinspec.core.exceptions import (
    DimensionMismatch,
    DimensionTooLarge,
    NonFiniteInput,
    SingularMatrix,
)
from kreinspec.numerics.numkernel import (
    adjoint,
    as_matrix,
    charpoly_coefficients,
    charpoly_roots_oracle,
    eig_right,
    inner,
    mat_inverse,
    multiset_distance,
    normalize_phase,
)
from kreinspec.services.selftest_service import random_well_conditioned


def test_mat_inverse_small():
    """Test inversion of a well-conditioned 2x2 matrix."""
    m = np.array([[2.0, 1.0], [1.0, 3.0]], dtype=np.complex128)
    assert np.allclose(m @ mat_inverse(m), np.eye(2), atol=1e-14)


def test_mat_inverse_complex(rng):
    """Test inversion of a random complex matrix."""
    m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert np.linalg.norm(m @ mat_inverse(m) - np.eye(5)) < 1e-12


def test_mat_inverse_singular():
    """Test that a rank-deficient matrix raises SingularMatrix."""
    with pytest.raises(SingularMatrix):
        mat_inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_mat_inverse_zero():
    """Test that the zero matrix raises SingularMatrix."""
    with pytest.raises(SingularMatrix):
        mat_inverse(np.zeros((3, 3)))


def test_as_matrix_rejects_bad_input():
    """Test validation of shape and finiteness."""
    with pytest.raises(DimensionMismatch):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatch):
        as_matrix(np.zeros(3))
    with pytest.raises(NonFiniteInput):
        as_matrix(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_eig_right_sorted_and_normalized():
    """Test ordering by real part and the phase convention."""
    m = np.diag([3.0, 1.0, 2.0]).astype(np.complex128)
    pairs = eig_right(m)
    assert [lam.real for lam, _ in pairs] == [1.0, 2.0, 3.0]
    for _, v in pairs:
        assert np.isclose(np.linalg.norm(v), 1.0)
        idx = int(np.argmax(np.abs(v)))
        assert v[idx].imag == 0.0 and v[idx].real > 0


def test_eig_right_residuals(rng):
    """Test that every returned pair satisfies the eigen-equation."""
    m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    for lam, v in eig_right(m):
        assert np.linalg.norm(m @ v - lam * v) < 1e-10 * np.linalg.norm(m)


def test_normalize_phase():
    """Test unit norm and real positive pivot."""
    v = normalize_phase(np.array([0.1j, -3.0j, 0.2]))
    assert np.isclose(np.linalg.norm(v), 1.0)
    assert v[1].real > 0 and v[1].imag == 0.0


def test_inner_is_conjugate_linear_in_first_argument():
    """Test <a x|y> = conj(a) <x|y>."""
    x = np.array([1 + 2j, 3 - 1j])
    y = np.array([0.5j, 2.0])
    a = 2 - 3j
    assert np.isclose(inner(a * x, y), np.conj(a) * inner(x, y))


def test_charpoly_coefficients_diagonal():
    """Test det(lambda I - diag(1, 2)) = lambda^2 - 3 lambda + 2."""
    coeffs = charpoly_coefficients(np.diag([1.0, 2.0]).astype(np.complex128), 96)
    assert [complex(c) for c in coeffs] == [1, -3, 2]


def test_oracle_matches_eig_right(rng):
    """Test that the oracle and the eigensolver agree on random matrices."""
    for _ in range(10):
        m = random_well_conditioned(rng, 4)
        eigenvalues = [lam for lam, _ in eig_right(m)]
        assert multiset_distance(eigenvalues, charpoly_roots_oracle(m)) < 1e-8


def test_oracle_repeated_roots(model_hamiltonian, model_params):
    """Test the oracle on the twofold degenerate four-level spectrum."""
    w = np.sqrt(model_params.discriminant)
    roots = charpoly_roots_oracle(model_hamiltonian)
    assert multiset_distance(roots, [w, w, -w, -w]) < 1e-8


def test_oracle_dimension_limit():
    """Test that matrices above the oracle limit are refused."""
    with pytest.raises(DimensionTooLarge):
        charpoly_roots_oracle(np.eye(9))


def test_multiset_distance():
    """Test optimal matching and size checking."""
    assert multiset_distance([1, 2j, 3], [3, 1, 2j]) == 0.0
    assert multiset_distance([0, 1], [0.1, 1]) == pytest.approx(0.1)
    assert multiset_distance(np.array([1j, -1j]), np.array([-1j, 1j])) == 0.0
    with pytest.raises(DimensionMismatch):
        multiset_distance([1], [1, 2])


@pytest.mark.parametrize("n", [2, 4, 6])
def test_trace_is_sum_of_eigenvalues(rng, n):
    """Test tr M = sum of the eigenvalues."""
    m = random_well_conditioned(rng, n)
    total = sum(lam for lam, _ in eig_right(m))
    assert abs(np.trace(m) - total) < 1e-10 * np.linalg.norm(m)


def test_double_inverse(rng):
    """Test (M^-1)^-1 = M."""
    m = random_well_conditioned(rng, 5)
    assert np.allclose(mat_inverse(mat_inverse(m)), m, atol=1e-9 * np.linalg.norm(m))


def test_adjoint_reverses_products(rng):
    """Test (A B)^H = B^H A^H."""
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert np.allclose(adjoint(a @ b), adjoint(b) @ adjoint(a), atol=1e-12)
    assert np.array_equal(adjoint(adjoint(a)), a)
