"""
Closed-form four-level model.

H = [[a0 s0, i c], [i b, -a0 s0]] with real split-quaternions b and c = conj(b),
parametrized by a0 (real), A = b1 + i b2 and B = b0 + i b3. Its spectrum is
+-Omega, each twofold, with Omega^2 = D = a0^2 + |A|^2 - |B|^2.

This module holds the analytic eigensystem, the signed biorthogonality
relations it satisfies, and exceptional-point sweeps along one parameter axis.
"""

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, field_validator
from scipy.linalg import orth

from kreinspec.core.config import settings
from kreinspec.core.exceptions import BrokenPhase, InvalidSweep, SingularNormalization
from kreinspec.numerics.biortho import BiorthoSystem, build_biortho
from kreinspec.numerics.kreindeg import PtPhase
from kreinspec.numerics.numkernel import ComplexMatrix, ComplexVector, multiset_distance
from kreinspec.numerics.splitq import PAULI, SplitQuaternion, sq_conj, sq_embed

logger = structlog.get_logger(__name__)

# Order of the four eigenstates and the sign of <psi|phi> for each
STATE_LABELS: Tuple[str, ...] = ("++", "+-", "-+", "--")
EXPECTED_SIGNS: Dict[str, int] = {"++": 1, "+-": -1, "-+": 1, "--": -1}

# Relative eigen-equation residual allowed for the closed-form states
EIGEN_TOL = 1e-12


class FourLevelParams(BaseModel):
    """Model parameters (a0, A, B)."""

    model_config = ConfigDict(frozen=True)

    a0: float
    A: complex = 0j
    B: complex = 0j

    @field_validator("a0")
    @classmethod
    def a0_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("a0 must be finite")
        return v

    @field_validator("A", "B")
    @classmethod
    def complex_finite(cls, v: complex) -> complex:
        if not cmath.isfinite(v):
            raise ValueError("A and B must be finite")
        return v

    @property
    def discriminant(self) -> float:
        """D = a0^2 + |A|^2 - |B|^2."""
        return self.a0**2 + abs(self.A) ** 2 - abs(self.B) ** 2

    @property
    def scale(self) -> float:
        return self.a0**2 + abs(self.A) ** 2 + abs(self.B) ** 2

    @property
    def eps(self) -> float:
        """Phase-boundary threshold OMEGA_EPS * scale."""
        return settings.OMEGA_EPS * self.scale

    def as_split_quaternion(self) -> SplitQuaternion:
        """b = (Re B, Re A, Im A, Im B)."""
        return SplitQuaternion(self.B.real, self.A.real, self.A.imag, self.B.imag)


class OmegaKind(str, enum.Enum):
    REAL = "Real"
    BROKEN_PAIR = "BrokenPair"
    ZERO = "Zero"


@dataclass(frozen=True)
class OmegaResult:
    """Real(Omega), BrokenPair(gamma) with eigenvalues +-i gamma, or Zero."""

    kind: OmegaKind
    value: float


@dataclass(frozen=True, eq=False)
class AnalyticEigensystem:
    """The four closed-form eigenstates, with phi = eta psi."""

    params: FourLevelParams
    omega: float
    k: float
    psi_pp: ComplexVector
    psi_pm: ComplexVector
    psi_mp: ComplexVector
    psi_mm: ComplexVector
    phi_pp: ComplexVector
    phi_pm: ComplexVector
    phi_mp: ComplexVector
    phi_mm: ComplexVector
    eigen_residual: float

    def psi(self, label: str) -> ComplexVector:
        return getattr(self, "psi_" + _suffix(label))

    def phi(self, label: str) -> ComplexVector:
        return getattr(self, "phi_" + _suffix(label))

    def energy(self, label: str) -> float:
        return self.omega if label[0] == "+" else -self.omega


def _suffix(label: str) -> str:
    return label.replace("+", "p").replace("-", "m")


@dataclass(frozen=True)
class PairingEntry:
    """<psi_a|phi_b> against its expected value."""

    psi: str
    phi: str
    expected: int
    value: complex
    deviation: float


@dataclass(frozen=True)
class AbnormalRelationsReport:
    entries: Tuple[PairingEntry, ...]
    completeness_residual: float
    normalization_residual: float
    violations: Tuple[str, ...]
    tol: float

    @property
    def ok(self) -> bool:
        return not self.violations


class SweepAxis(str, enum.Enum):
    """Single parameter varied by a sweep."""

    A0 = "a0"
    ABS_A = "absA"
    ABS_B = "absB"
    ARG_A = "argA"
    ARG_B = "argB"


@dataclass(frozen=True)
class SweepPoint:
    t: float
    discriminant: float
    phase: PtPhase


@dataclass(frozen=True)
class ExceptionalPointHit:
    """EP location t with its bracket [t_lo, t_hi]."""

    t: float
    t_lo: float
    t_hi: float
    discriminant: float


@dataclass(frozen=True)
class SweepResult:
    p0: FourLevelParams
    axis: SweepAxis
    points: Tuple[SweepPoint, ...]
    exceptional_points: Tuple[ExceptionalPointHit, ...]


@dataclass(frozen=True)
class NumericComparison:
    """Analytic model against the numeric biorthonormal pipeline."""

    eigenvalue_error: float
    multiplicities: Tuple[int, ...]
    subspace_residuals: Dict[str, float]


def model_metric() -> ComplexMatrix:
    """eta = diag(1, -1, -1, 1)."""
    return np.diag([1.0, -1.0, -1.0, 1.0]).astype(np.complex128)


def build_hamiltonian(p: FourLevelParams) -> ComplexMatrix:
    """Explicit 4x4 model Hamiltonian."""
    a0, A, B = p.a0, p.A, p.B
    return np.array(
        [
            [a0, 0, 1j * B.conjugate(), 1j * A.conjugate()],
            [0, a0, 1j * A, 1j * B],
            [1j * B, -1j * A.conjugate(), -a0, 0],
            [-1j * A, 1j * B.conjugate(), 0, -a0],
        ],
        dtype=np.complex128,
    )


def build_hamiltonian_from_blocks(p: FourLevelParams) -> ComplexMatrix:
    """Block form [[a0 s0, i embed(conj b)], [i embed(b), -a0 s0]]."""
    q = p.as_split_quaternion()
    diagonal = p.a0 * PAULI.sigma0
    return np.block(
        [
            [diagonal, 1j * sq_embed(sq_conj(q))],
            [1j * sq_embed(q), -diagonal],
        ]
    )


def omega(p: FourLevelParams) -> OmegaResult:
    """Omega = sqrt(D), classified with eps = OMEGA_EPS * (a0^2 + |A|^2 + |B|^2)."""
    D, eps = p.discriminant, p.eps
    if D > eps:
        return OmegaResult(OmegaKind.REAL, math.sqrt(D))
    if D < -eps:
        return OmegaResult(OmegaKind.BROKEN_PAIR, math.sqrt(-D))
    return OmegaResult(OmegaKind.ZERO, 0.0)


def analytic_eigensystem(
    p: FourLevelParams, resid_tol: Optional[float] = None
) -> AnalyticEigensystem:
    """
    Closed-form eigenstates for the real-spectrum region.

    psi_{+-} = PT psi_{++} and psi_{--} = PT psi_{-+}. The normalization
    k = 1 / sqrt(2 Omega (Omega + a0)) is chosen real positive.

    Raises:
        BrokenPhase: if D <= eps
        SingularNormalization: if Omega + a0 vanishes
    """
    D, eps = p.discriminant, p.eps
    if D <= eps:
        raise BrokenPhase(discriminant=D, eps=eps)
    w = math.sqrt(D)
    norm_eps = settings.OMEGA_EPS * math.sqrt(p.scale)
    if w + p.a0 <= norm_eps:
        raise SingularNormalization(omega=w, a0=p.a0, eps=norm_eps)

    k = 1.0 / math.sqrt(2.0 * w * (w + p.a0))
    s = w + p.a0
    A, B = p.A, p.B
    psi_pp = k * np.array([s, 0, 1j * B, -1j * A], dtype=np.complex128)
    psi_pm = k * np.array([0, s, -1j * A.conjugate(), 1j * B.conjugate()], dtype=np.complex128)
    psi_mp = k * np.array([1j * A.conjugate(), 1j * B, 0, -s], dtype=np.complex128)
    psi_mm = k * np.array([-1j * B.conjugate(), -1j * A, s, 0], dtype=np.complex128)

    eta = model_metric()
    H = build_hamiltonian(p)
    h_norm = float(np.linalg.norm(H, "fro"))
    residual = max(
        float(np.linalg.norm(H @ v - E * v)) / h_norm
        for v, E in ((psi_pp, w), (psi_pm, w), (psi_mp, -w), (psi_mm, -w))
    )
    logger.debug("fourlevel.analytic", omega=w, k=k, eigen_residual=residual)
    resid_tol = EIGEN_TOL if resid_tol is None else resid_tol
    if residual > resid_tol:
        logger.warning("fourlevel.eigen_residual_exceeded", eigen_residual=residual, resid_tol=resid_tol)

    return AnalyticEigensystem(
        params=p,
        omega=w,
        k=k,
        psi_pp=psi_pp,
        psi_pm=psi_pm,
        psi_mp=psi_mp,
        psi_mm=psi_mm,
        phi_pp=eta @ psi_pp,
        phi_pm=eta @ psi_pm,
        phi_mp=eta @ psi_mp,
        phi_mm=eta @ psi_mm,
        eigen_residual=residual,
    )


def abnormal_relations_check(
    system: AnalyticEigensystem, tol: Optional[float] = None
) -> AbnormalRelationsReport:
    """
    Verify the sixteen pairings <psi_a|phi_b> and the signed completeness sum.

    Diagonal pairings must equal (+1, -1, +1, -1) for (++, +-, -+, --); all
    cross pairings vanish. A diagonal whose sign differs from the expected one
    is listed separately as `sign:<label>`.
    """
    tol = settings.RTOL if tol is None else tol
    entries: List[PairingEntry] = []
    violations: List[str] = []
    for a in STATE_LABELS:
        for b in STATE_LABELS:
            expected = EXPECTED_SIGNS[a] if a == b else 0
            value = complex(np.vdot(system.psi(a), system.phi(b)))
            deviation = abs(value - expected)
            entries.append(PairingEntry(psi=a, phi=b, expected=expected, value=value, deviation=deviation))
            if deviation > tol:
                violations.append(f"<psi{a}|phi{b}>")
            if a == b and np.sign(value.real) != expected:
                violations.append(f"sign:{a}")

    identity = sum(
        EXPECTED_SIGNS[a] * np.outer(system.psi(a), np.conj(system.phi(a))) for a in STATE_LABELS
    )
    completeness = float(np.linalg.norm(identity - np.eye(4), "fro"))
    if completeness > tol:
        violations.append("completeness")

    w, a0 = system.omega, system.params.a0
    normalization = abs(2.0 * w * (w + a0) * system.k**2 - 1.0)

    return AbnormalRelationsReport(
        entries=tuple(entries),
        completeness_residual=completeness,
        normalization_residual=normalization,
        violations=tuple(violations),
        tol=tol,
    )


def params_along(p0: FourLevelParams, axis: SweepAxis, t: float) -> FourLevelParams:
    """Parameters with the swept coordinate set to t."""
    if axis is SweepAxis.A0:
        return p0.model_copy(update={"a0": t})
    if axis is SweepAxis.ABS_A:
        return p0.model_copy(update={"A": cmath.rect(t, cmath.phase(p0.A))})
    if axis is SweepAxis.ABS_B:
        return p0.model_copy(update={"B": cmath.rect(t, cmath.phase(p0.B))})
    if axis is SweepAxis.ARG_A:
        return p0.model_copy(update={"A": cmath.rect(abs(p0.A), t)})
    return p0.model_copy(update={"B": cmath.rect(abs(p0.B), t)})


def _phase(p: FourLevelParams) -> PtPhase:
    kind = omega(p).kind
    if kind is OmegaKind.REAL:
        return PtPhase.UNBROKEN
    if kind is OmegaKind.BROKEN_PAIR:
        return PtPhase.BROKEN
    return PtPhase.EXCEPTIONAL_POINT


def _bisect(
    p0: FourLevelParams, axis: SweepAxis, lo: float, hi: float, xtol: float
) -> ExceptionalPointHit:
    d_lo = params_along(p0, axis, lo).discriminant
    for _ in range(200):
        if hi - lo <= xtol:
            break
        mid = (lo + hi) / 2
        p_mid = params_along(p0, axis, mid)
        d_mid = p_mid.discriminant
        if abs(d_mid) <= p_mid.eps:
            lo = hi = mid
            break
        if (d_mid > 0) == (d_lo > 0):
            lo, d_lo = mid, d_mid
        else:
            hi = mid
    t = (lo + hi) / 2
    return ExceptionalPointHit(t=t, t_lo=lo, t_hi=hi, discriminant=params_along(p0, axis, t).discriminant)


def sweep_exceptional_point(
    p0: FourLevelParams,
    axis: SweepAxis,
    lo: float,
    hi: float,
    steps: int,
    xtol: Optional[float] = None,
) -> SweepResult:
    """
    Classify the phase along one axis and locate the exceptional points.

    Args:
        p0: Base parameters; only the swept coordinate changes
        axis: Swept coordinate
        lo: Range start
        hi: Range end, strictly above lo
        steps: Number of grid points (at least 2)
        xtol: Bracket width for bisection (defaults to settings.SWEEP_XTOL)

    Returns:
        SweepResult with one point per grid value and the EP hits

    Raises:
        InvalidSweep: on a bad axis, range or step count
    """
    xtol = settings.SWEEP_XTOL if xtol is None else xtol
    try:
        axis = SweepAxis(axis)
    except ValueError as exc:
        raise InvalidSweep(
            f"Unknown sweep axis {axis!r}", details={"axes": [a.value for a in SweepAxis]}
        ) from exc
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise InvalidSweep("Sweep range needs lo < hi", details={"lo": lo, "hi": hi})
    if int(steps) != steps or steps < 2:
        raise InvalidSweep("Sweep needs at least 2 steps", details={"steps": steps})

    grid = np.linspace(lo, hi, int(steps))
    points: List[SweepPoint] = []
    for t in grid:
        p = params_along(p0, axis, float(t))
        points.append(SweepPoint(t=float(t), discriminant=p.discriminant, phase=_phase(p)))

    hits: List[ExceptionalPointHit] = []
    i = 0
    while i < len(points):
        point = points[i]
        if point.phase is PtPhase.EXCEPTIONAL_POINT:
            j = i
            while j + 1 < len(points) and points[j + 1].phase is PtPhase.EXCEPTIONAL_POINT:
                j += 1
            t_lo, t_hi = points[i].t, points[j].t
            t = (t_lo + t_hi) / 2
            hits.append(
                ExceptionalPointHit(
                    t=t, t_lo=t_lo, t_hi=t_hi, discriminant=params_along(p0, axis, t).discriminant
                )
            )
            i = j + 1
            continue
        if i + 1 < len(points):
            nxt = points[i + 1]
            if nxt.phase is not PtPhase.EXCEPTIONAL_POINT and nxt.phase is not point.phase:
                hits.append(_bisect(p0, axis, point.t, nxt.t, xtol))
        i += 1

    for hit in hits:
        logger.debug("sweep.ep_bracketed", axis=axis.value, t=hit.t, t_lo=hit.t_lo, t_hi=hit.t_hi)
    return SweepResult(p0=p0, axis=axis, points=tuple(points), exceptional_points=tuple(hits))


def compare_with_numeric(
    p: FourLevelParams, system: Optional[BiorthoSystem] = None
) -> NumericComparison:
    """
    Eigenvalue error against +-Omega, cluster multiplicities, and the distance
    of each analytic psi from the numeric eigenspace of its eigenvalue.
    """
    analytic = analytic_eigensystem(p)
    if system is None:
        system = build_biortho(build_hamiltonian(p))

    w = analytic.omega
    error = multiset_distance(system.eigenvalues, [w, w, -w, -w])
    clusters = system.clusters()
    psi = system.psi_matrix()

    residuals: Dict[str, float] = {}
    for label in STATE_LABELS:
        E = analytic.energy(label)
        members = min(clusters, key=lambda m: abs(system.levels[m[0]].E - E))
        basis = orth(psi[:, members])
        v = analytic.psi(label)
        projected = basis @ (basis.conj().T @ v)
        residuals[label] = float(np.linalg.norm(v - projected) / np.linalg.norm(v))

    return NumericComparison(
        eigenvalue_error=error,
        multiplicities=tuple(len(m) for m in clusters),
        subspace_residuals=residuals,
    )
