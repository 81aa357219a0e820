"""
Biorthonormal eigensystems of diagonalizable matrices.

Right eigenvectors of H and of H^H are paired cluster by cluster, and each
degenerate block is biorthonormalized through its Gram matrix, so that
<psi_n|phi_m> = delta_nm and sum |psi_n><phi_n| = 1.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np
import structlog
from scipy.cluster.hierarchy import fcluster, linkage

from kreinspec.core.config import settings
from kreinspec.core.exceptions import ComplexSpectrum, Defective
from kreinspec.numerics.numkernel import (
    ComplexMatrix,
    ComplexVector,
    adjoint,
    as_matrix,
    eig_right,
    frobenius_norm,
    mat_inverse,
    normalize_phase,
)

logger = structlog.get_logger(__name__)


@dataclass(frozen=True, eq=False)
class BiorthoLevel:
    """One level (E, psi, phi); `cluster` indexes its degenerate block."""

    E: complex
    psi: ComplexVector
    phi: ComplexVector
    cluster: int


@dataclass(frozen=True)
class BiorthoResiduals:
    """Post-condition residuals of a constructed system."""

    right: float  # max ||H psi - E psi|| / (||H||_F ||psi||)
    left: float  # max ||H^H phi - E* phi|| / (||H||_F ||phi||)
    biorthonormality: float  # max |<psi_n|phi_m> - delta_nm|
    completeness: float  # ||sum |psi><phi| - I||_F
    spectral: float  # ||sum E |psi><phi| - H||_F / ||H||_F

    def as_dict(self) -> Dict[str, float]:
        return {
            "right": self.right,
            "left": self.left,
            "biorthonormality": self.biorthonormality,
            "completeness": self.completeness,
            "spectral": self.spectral,
        }


@dataclass(frozen=True, eq=False)
class BiorthoSystem:
    """Complete biorthonormal eigensystem {E_n, psi_n, phi_n}."""

    dim: int
    levels: Tuple[BiorthoLevel, ...]
    h_norm: float = 1.0
    residuals: Optional[BiorthoResiduals] = field(default=None)

    @property
    def eigenvalues(self) -> List[complex]:
        return [level.E for level in self.levels]

    def psi_matrix(self) -> ComplexMatrix:
        """Right eigenvectors as columns."""
        if not self.levels:
            return np.zeros((self.dim, 0), dtype=np.complex128)
        return np.column_stack([level.psi for level in self.levels])

    def phi_matrix(self) -> ComplexMatrix:
        """Left partners as columns."""
        if not self.levels:
            return np.zeros((self.dim, 0), dtype=np.complex128)
        return np.column_stack([level.phi for level in self.levels])

    def clusters(self) -> List[List[int]]:
        """Level indices grouped by degenerate block, in block order."""
        groups: Dict[int, List[int]] = {}
        for i, level in enumerate(self.levels):
            groups.setdefault(level.cluster, []).append(i)
        return [groups[key] for key in sorted(groups)]

    def without_level(self, index: int) -> "BiorthoSystem":
        """Copy with one level removed; residuals are dropped."""
        levels = tuple(level for i, level in enumerate(self.levels) if i != index)
        return BiorthoSystem(dim=self.dim, levels=levels, h_norm=self.h_norm)


def _cluster_labels(values: Sequence[complex], radius: float) -> List[int]:
    """Single-linkage clusters of eigenvalues, labelled in order of first appearance."""
    if len(values) == 1:
        return [0]
    points = np.array([[z.real, z.imag] for z in values])
    raw = fcluster(linkage(points, method="single"), t=radius, criterion="distance")
    relabel: Dict[int, int] = {}
    return [relabel.setdefault(int(r), len(relabel)) for r in raw]


def _group(values: Sequence[complex], radius: float) -> List[Tuple[complex, List[int]]]:
    labels = _cluster_labels(values, radius)
    groups: Dict[int, List[int]] = {}
    for i, label in enumerate(labels):
        groups.setdefault(label, []).append(i)
    out = []
    for label in sorted(groups):
        members = groups[label]
        mean = complex(np.mean([values[i] for i in members]))
        out.append((mean, members))
    return out


def _null_basis(m: ComplexMatrix, k: int, bound: float, shift: complex) -> ComplexMatrix:
    """Orthonormal basis of the k-dimensional numerical kernel of m."""
    _, s, vh = np.linalg.svd(m)
    if s[-k] > bound:
        raise Defective(
            "Eigenspace dimension is below the algebraic multiplicity",
            details={
                "eigenvalue": [shift.real, shift.imag],
                "multiplicity": k,
                "singular_value": float(s[-k]),
                "bound": bound,
            },
        )
    return adjoint(vh[-k:, :])


def build_biortho(
    H: ComplexMatrix,
    group_tol: Optional[float] = None,
    resid_tol: Optional[float] = None,
    defect_tol: Optional[float] = None,
) -> BiorthoSystem:
    """
    Build the biorthonormal eigensystem of a diagonalizable matrix.

    Args:
        H: Square complex matrix
        group_tol: Relative eigenvalue clustering radius (defaults to settings.GROUP_TOL)
        resid_tol: Residual tolerance for the post-conditions (defaults to settings.RTOL)
        defect_tol: Smallest admissible singular value of a block Gram matrix
            (defaults to settings.DEFECT_TOL)

    Returns:
        BiorthoSystem with residuals attached

    Raises:
        Defective: if H is not diagonalizable (an exceptional point)
        NoConvergence: propagated from the eigensolver
    """
    H = as_matrix(H)
    group_tol = settings.GROUP_TOL if group_tol is None else group_tol
    resid_tol = settings.RTOL if resid_tol is None else resid_tol
    defect_tol = settings.DEFECT_TOL if defect_tol is None else defect_tol

    n = H.shape[0]
    Hh = adjoint(H)
    h_norm = frobenius_norm(H)
    scale = h_norm if h_norm > 0 else 1.0
    radius = group_tol * scale
    pair_bound = np.sqrt(group_tol) * scale

    right = _group([lam for lam, _ in eig_right(H)], radius)
    left = _group([mu for mu, _ in eig_right(Hh)], radius)
    if len(right) != len(left):
        raise Defective(
            "Eigenvalue clusters of H and H^H do not pair up",
            details={"right_clusters": len(right), "left_clusters": len(left)},
        )

    # Greedy nearest match of E against conj(E') with collision detection
    used: Set[int] = set()
    for lam, members in right:
        distances = [abs(np.conj(mu) - lam) for mu, _ in left]
        j = int(np.argmin(distances))
        if j in used or distances[j] > pair_bound or len(left[j][1]) != len(members):
            raise Defective(
                "Eigenvalue of H has no unique partner in the spectrum of H^H",
                details={"eigenvalue": [lam.real, lam.imag], "distance": float(distances[j])},
            )
        used.add(j)

    identity = np.eye(n, dtype=np.complex128)
    levels: List[BiorthoLevel] = []
    for c, (lam, members) in enumerate(right):
        k = len(members)
        psi_block = _null_basis(H - lam * identity, k, pair_bound, lam)
        phi_block = _null_basis(Hh - np.conj(lam) * identity, k, pair_bound, lam)
        psi_block = np.column_stack([normalize_phase(psi_block[:, j]) for j in range(k)])

        gram = adjoint(psi_block) @ phi_block
        smallest = float(np.linalg.svd(gram, compute_uv=False).min())
        if smallest < defect_tol:
            raise Defective(
                "Block Gram matrix is singular",
                details={
                    "eigenvalue": [lam.real, lam.imag],
                    "multiplicity": k,
                    "gram_singular_value": smallest,
                    "defect_tol": defect_tol,
                },
            )
        phi_block = phi_block @ mat_inverse(gram)

        for j in range(k):
            levels.append(BiorthoLevel(E=lam, psi=psi_block[:, j], phi=phi_block[:, j], cluster=c))

    system = BiorthoSystem(dim=n, levels=tuple(levels), h_norm=h_norm)
    residuals = _residuals(system, H)
    system = BiorthoSystem(dim=n, levels=system.levels, h_norm=h_norm, residuals=residuals)

    logger.debug(
        "biortho.built",
        dim=n,
        clusters=[len(m) for _, m in right],
        **residuals.as_dict(),
    )
    worst = max(residuals.right, residuals.left, residuals.biorthonormality, residuals.spectral)
    if worst > resid_tol or residuals.completeness > resid_tol * np.sqrt(n):
        logger.warning("biortho.residual_exceeded", resid_tol=resid_tol, **residuals.as_dict())
    return system


def _residuals(system: BiorthoSystem, H: ComplexMatrix) -> BiorthoResiduals:
    scale = system.h_norm if system.h_norm > 0 else 1.0
    Hh = adjoint(H)
    right = max(
        float(np.linalg.norm(H @ lv.psi - lv.E * lv.psi)) / (scale * float(np.linalg.norm(lv.psi)))
        for lv in system.levels
    )
    left = max(
        float(np.linalg.norm(Hh @ lv.phi - np.conj(lv.E) * lv.phi))
        / (scale * float(np.linalg.norm(lv.phi)))
        for lv in system.levels
    )
    overlap = adjoint(system.psi_matrix()) @ system.phi_matrix()
    biorthonormality = float(np.max(np.abs(overlap - np.eye(len(system.levels)))))
    return BiorthoResiduals(
        right=right,
        left=left,
        biorthonormality=biorthonormality,
        completeness=completeness_residual(system),
        spectral=spectral_residual(system, H),
    )


def completeness_residual(system: BiorthoSystem) -> float:
    """||sum_n |psi_n><phi_n| - I||_F."""
    projector = system.psi_matrix() @ adjoint(system.phi_matrix())
    return frobenius_norm(projector - np.eye(system.dim))


def spectral_representation(system: BiorthoSystem) -> ComplexMatrix:
    """sum_n E_n |psi_n><phi_n|."""
    energies = np.array(system.eigenvalues, dtype=np.complex128)
    return (system.psi_matrix() * energies) @ adjoint(system.phi_matrix())


def spectral_residual(system: BiorthoSystem, H: ComplexMatrix) -> float:
    """||sum E_n |psi_n><phi_n| - H||_F relative to ||H||_F."""
    H = as_matrix(H)
    scale = frobenius_norm(H) or 1.0
    return frobenius_norm(spectral_representation(system) - H) / scale


def _require_real_spectrum(system: BiorthoSystem) -> None:
    threshold = settings.REAL_SPECTRUM_TOL * (system.h_norm or 1.0)
    max_imag = max((abs(E.imag) for E in system.eigenvalues), default=0.0)
    if max_imag > threshold:
        raise ComplexSpectrum(max_imag=max_imag, threshold=threshold)


def spectral_metric(system: BiorthoSystem) -> ComplexMatrix:
    """
    Positive-definite metric eta_+ = sum_n |phi_n><phi_n|.

    It satisfies H^H = eta_+ H eta_+^{-1} and maps psi_n onto phi_n.
    Requires a real spectrum.
    """
    _require_real_spectrum(system)
    phi = system.phi_matrix()
    eta = phi @ adjoint(phi)
    return (eta + adjoint(eta)) / 2


def inverse_spectral_metric(system: BiorthoSystem) -> ComplexMatrix:
    """eta_+^{-1} = sum_n |psi_n><psi_n|."""
    _require_real_spectrum(system)
    psi = system.psi_matrix()
    inv = psi @ adjoint(psi)
    return (inv + adjoint(inv)) / 2
