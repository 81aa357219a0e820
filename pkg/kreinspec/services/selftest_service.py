"""
Acceptance suite run by `kreinspec selftest`.

Ten criteria over seeded random instances. Each criterion reports its worst
residual against its threshold; `inject_tol` replaces every threshold to
demonstrate that the suite is sensitive.
"""

from typing import Callable, List, Optional, Tuple

import numpy as np
import structlog

from kreinspec import __version__
from kreinspec.core.config import settings
from kreinspec.core.exceptions import Defective, KreinSpecError
from kreinspec.numerics.antilinear import EtaPtRelation, default_pt, eta_pt_relation
from kreinspec.numerics.biortho import build_biortho, spectral_metric
from kreinspec.numerics.fourlevel import (
    FourLevelParams,
    SweepAxis,
    abnormal_relations_check,
    analytic_eigensystem,
    build_hamiltonian,
    build_hamiltonian_from_blocks,
    model_metric,
    sweep_exceptional_point,
)
from kreinspec.numerics.kreindeg import PtPhase, build_krein, find_pt_doublets
from kreinspec.numerics.numkernel import (
    ComplexMatrix,
    charpoly_roots_oracle,
    eig_right,
    multiset_distance,
)
from kreinspec.numerics.splitq import SplitQuaternion, sq_embed, sq_mul, sq_norm
from kreinspec.schemas.reports import CriterionResult, SelftestReport

logger = structlog.get_logger(__name__)

CriterionOutcome = Tuple[bool, float, str]


# ============ Instance generators ============


def random_fourlevel_params(rng: np.random.Generator) -> FourLevelParams:
    """Model parameters with D > 0.1 and Omega + a0 > 0.1."""
    while True:
        a0 = float(rng.uniform(-1.5, 1.5))
        A = complex(*rng.normal(0.0, 0.8, size=2))
        B = complex(*rng.normal(0.0, 0.6, size=2))
        p = FourLevelParams(a0=a0, A=A, B=B)
        D = p.discriminant
        if D > 0.1 and np.sqrt(D) + a0 > 0.1:
            return p


def random_integer_params(rng: np.random.Generator) -> FourLevelParams:
    a0, b0, b1, b2, b3 = (int(x) for x in rng.integers(-9, 10, size=5))
    return FourLevelParams(a0=a0, A=complex(b1, b2), B=complex(b0, b3))


def random_integer_split_quaternion(rng: np.random.Generator) -> SplitQuaternion:
    return SplitQuaternion(*(float(x) for x in rng.integers(-9, 10, size=4)))


def random_pseudo_hermitian(rng: np.random.Generator, n: int) -> ComplexMatrix:
    """S diag(E) S^{-1} with distinct real E and well-conditioned S."""
    energies = np.sort(rng.uniform(-2.0, 2.0, size=n))
    energies += 0.3 * np.arange(n)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    s = np.eye(n) + 0.3 * x / np.linalg.norm(x)
    return s @ np.diag(energies) @ np.linalg.inv(s)


def random_well_conditioned(rng: np.random.Generator, n: int, max_cond: float = 1e6) -> ComplexMatrix:
    """Random complex matrix whose eigenvector matrix has condition below max_cond."""
    while True:
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        _, vectors = np.linalg.eig(m)
        if np.linalg.cond(vectors) < max_cond:
            return m


class SelftestService:
    """Runs the acceptance criteria."""

    def __init__(self, seed: Optional[int] = None, instances: Optional[int] = None) -> None:
        self.seed = settings.SELFTEST_SEED if seed is None else seed
        self.instances = settings.SELFTEST_INSTANCES if instances is None else instances

    def _rng(self, criterion: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, criterion])

    # ============ Criteria ============

    def fourlevel_spectrum(self, tol: float) -> CriterionOutcome:
        rng = self._rng(1)
        worst = 0.0
        bad_multiplicity = 0
        for _ in range(self.instances):
            p = random_fourlevel_params(rng)
            system = build_biortho(build_hamiltonian(p))
            w = np.sqrt(p.discriminant)
            worst = max(worst, multiset_distance(system.eigenvalues, [w, w, -w, -w]))
            if sorted(len(m) for m in system.clusters()) != [2, 2]:
                bad_multiplicity += 1
        return worst <= tol and bad_multiplicity == 0, worst, f"multiplicity failures={bad_multiplicity}"

    def eta_pt_classification(self, tol: float) -> CriterionOutcome:
        rng = self._rng(2)
        theta = default_pt(4)
        model = eta_pt_relation(model_metric(), theta)
        worst = 0.0
        misclassified = 0
        for _ in range(self.instances):
            p = random_fourlevel_params(rng)
            relation = eta_pt_relation(spectral_metric(build_biortho(build_hamiltonian(p))), theta)
            worst = max(worst, relation.commute_residual)
            if relation.relation is not EtaPtRelation.COMMUTE:
                misclassified += 1
        passed = (
            model.relation is EtaPtRelation.ANTICOMMUTE
            and model.anticommute_residual == 0.0
            and worst <= tol
            and misclassified == 0
        )
        detail = f"model anticommute residual={model.anticommute_residual!r}, misclassified={misclassified}"
        return passed, worst, detail

    def _doublets(self, criterion: int) -> List[Tuple[FourLevelParams, list]]:
        rng = self._rng(criterion)
        theta = default_pt(4)
        out = []
        for _ in range(self.instances):
            p = random_fourlevel_params(rng)
            out.append((p, find_pt_doublets(build_hamiltonian(p), model_metric(), theta)))
        return out

    def degeneracy(self, tol: float, det_floor: float) -> CriterionOutcome:
        overlap = 0.0
        min_det = np.inf
        for _, doublets in self._doublets(3):
            for d in doublets:
                overlap = max(overlap, d.phi_pt_overlap)
                min_det = min(min_det, d.gram_determinant)
        return overlap <= tol and min_det >= det_floor, overlap, f"min Gram determinant={min_det:.3e}"

    def indefinite_norms(self, tol: float) -> CriterionOutcome:
        worst = 0.0
        for _, doublets in self._doublets(4):
            for d in doublets:
                worst = max(worst, abs(d.eta_norm_psi - 1.0), abs(d.eta_norm_pt_psi + 1.0))
        return worst <= tol, worst, ""

    def abnormal_relations(self, tol: float, k_tol: float) -> CriterionOutcome:
        rng = self._rng(5)
        worst = 0.0
        worst_k = 0.0
        for _ in range(self.instances):
            report = abnormal_relations_check(analytic_eigensystem(random_fourlevel_params(rng)), tol=tol)
            worst = max(worst, report.completeness_residual, *(e.deviation for e in report.entries))
            worst_k = max(worst_k, report.normalization_residual)
        return worst <= tol and worst_k <= k_tol, worst, f"normalization residual={worst_k:.3e}"

    def krein_restoration(self, tol: float) -> CriterionOutcome:
        theta = default_pt(4)
        worst = 0.0
        for p, doublets in self._doublets(6):
            krein = build_krein(doublets, theta, hamiltonian=build_hamiltonian(p))
            worst = max(
                worst,
                krein.pt_invariance_residual,
                krein.cross_eta_product,
                krein.eigen_residual or 0.0,
            )
        return worst <= tol, worst, ""

    def exceptional_point(self, tol: float) -> CriterionOutcome:
        p0 = FourLevelParams(a0=0.0, A=1 + 0j, B=0j)
        result = sweep_exceptional_point(p0, SweepAxis.ABS_B, 0.0, 2.0, 200)
        if len(result.exceptional_points) != 1:
            return False, float("inf"), f"found {len(result.exceptional_points)} EPs"
        error = abs(result.exceptional_points[0].t - 1.0)
        labels_ok = all(
            pt.phase is (PtPhase.UNBROKEN if pt.t < 1.0 else PtPhase.BROKEN)
            for pt in result.points
            if abs(pt.t - 1.0) > 1e-6
        )
        try:
            build_biortho(build_hamiltonian(FourLevelParams(a0=0.0, A=1 + 0j, B=1 + 0j)))
            defective = False
        except Defective:
            defective = True
        return error <= tol and labels_ok and defective, error, f"labels_ok={labels_ok}, defective={defective}"

    def split_quaternion(self, tol: float) -> CriterionOutcome:
        rng = self._rng(8)
        mismatches = 0
        for _ in range(self.instances):
            p = random_integer_params(rng)
            if not np.array_equal(build_hamiltonian(p), build_hamiltonian_from_blocks(p)):
                mismatches += 1
            q1 = random_integer_split_quaternion(rng)
            q2 = random_integer_split_quaternion(rng)
            if not np.array_equal(sq_embed(sq_mul(q1, q2)), sq_embed(q1) @ sq_embed(q2)):
                mismatches += 1
            if sq_norm(sq_mul(q1, q2)) != sq_norm(q1) * sq_norm(q2):
                mismatches += 1
        return mismatches <= tol, float(mismatches), "count of inexact identities"

    def oracle_equivalence(self, tol: float) -> CriterionOutcome:
        rng = self._rng(9)
        worst = 0.0
        for _ in range(self.instances):
            m = random_well_conditioned(rng, 4)
            eigenvalues = [lam for lam, _ in eig_right(m)]
            worst = max(worst, multiset_distance(eigenvalues, charpoly_roots_oracle(m)))
        return worst <= tol, worst, ""

    def biortho_contract(self, tol: float, map_tol: float) -> CriterionOutcome:
        rng = self._rng(10)
        worst = 0.0
        worst_map = 0.0
        for i in range(self.instances):
            H = random_pseudo_hermitian(rng, 4 if i % 2 == 0 else 6)
            system = build_biortho(H)
            r = system.residuals
            worst = max(worst, r.right, r.left, r.biorthonormality, r.completeness, r.spectral)
            eta = spectral_metric(system)
            for level in system.levels:
                worst_map = max(worst_map, float(np.linalg.norm(eta @ level.psi - level.phi)))
        return worst <= tol and worst_map <= map_tol, worst, f"eta psi - phi={worst_map:.3e}"

    # ============ Runner ============

    def run(self, inject_tol: Optional[float] = None) -> SelftestReport:
        """
        Run all criteria.

        Args:
            inject_tol: If given, every threshold is replaced by this value

        Returns:
            SelftestReport; `passed` is True iff every criterion passed
        """

        def t(default: float) -> float:
            return default if inject_tol is None else inject_tol

        criteria: List[Tuple[int, str, float, Callable[[], CriterionOutcome]]] = [
            (1, "four-level spectrum", t(1e-9), lambda: self.fourlevel_spectrum(t(1e-9))),
            (2, "eta/PT classification", t(1e-10), lambda: self.eta_pt_classification(t(1e-10))),
            (3, "PT doublet degeneracy", t(1e-10), lambda: self.degeneracy(t(1e-10), t(1e-6))),
            (4, "indefinite eta-norms", t(1e-10), lambda: self.indefinite_norms(t(1e-10))),
            (5, "abnormal relations", t(1e-10), lambda: self.abnormal_relations(t(1e-10), t(1e-14))),
            (6, "Krein restoration", t(1e-10), lambda: self.krein_restoration(t(1e-10))),
            (7, "exceptional point", t(1e-8), lambda: self.exceptional_point(t(1e-8))),
            (8, "split-quaternion consistency", t(0.0), lambda: self.split_quaternion(t(0.0))),
            (9, "oracle equivalence", t(1e-8), lambda: self.oracle_equivalence(t(1e-8))),
            (10, "biortho contract", t(1e-9), lambda: self.biortho_contract(t(1e-9), t(1e-8))),
        ]

        results: List[CriterionResult] = []
        for number, name, threshold, check in criteria:
            try:
                passed, value, detail = check()
            except KreinSpecError as exc:
                passed, value, detail = False, float("inf"), f"{exc.error_code}: {exc.message}"
            logger.info("selftest.criterion", number=number, passed=passed, value=value)
            results.append(
                CriterionResult(
                    number=number,
                    name=name,
                    passed=passed,
                    value=value,
                    threshold=threshold,
                    detail=detail,
                )
            )

        failed = [r.number for r in results if not r.passed]
        return SelftestReport(version=__version__, passed=not failed, criteria=results, failed=failed)
