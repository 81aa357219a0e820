"""
Analysis pipeline behind the CLI.

Runs biortho -> spectral metric -> eta/PT relation -> PT doublets -> Krein
assembly on a Hamiltonian, and the analytic plus numeric pipelines on the
four-level model. Errors leave here tagged with the stage that raised them.
"""

from contextlib import contextmanager
from typing import Iterator, List, Optional

import numpy as np
import structlog

from kreinspec import __version__
from kreinspec.core.config import settings
from kreinspec.core.exceptions import KreinSpecError, NoConvergence
from kreinspec.numerics.antilinear import (
    AntilinearOp,
    EtaPtRelation,
    commutation_residual,
    default_pt,
    eta_pt_relation,
)
from kreinspec.numerics.biortho import build_biortho, spectral_metric
from kreinspec.numerics.fourlevel import (
    FourLevelParams,
    OmegaKind,
    STATE_LABELS,
    abnormal_relations_check,
    analytic_eigensystem,
    build_hamiltonian,
    build_hamiltonian_from_blocks,
    compare_with_numeric,
    model_metric,
    omega,
    sweep_exceptional_point,
)
from kreinspec.numerics.kreindeg import (
    PtPhase,
    build_krein,
    classify_pt_phase,
    eigenstates_pt_invariant,
    find_pt_doublets,
    phase_of_system,
)
from kreinspec.numerics.metric import eta_norm, metric_signature, pseudo_hermiticity_residual
from kreinspec.numerics.numkernel import ComplexMatrix, as_matrix, charpoly_roots_oracle
from kreinspec.schemas.common import ComplexValue
from kreinspec.schemas.reports import (
    AnalysisReport,
    AnalyticSection,
    DoubletRow,
    ExceptionalPointRow,
    FourLevelInput,
    FourLevelReport,
    KreinSection,
    MatrixEcho,
    MetricVerdict,
    NumericAgreement,
    SpectrumEntry,
    SweepReport,
)
from kreinspec.services.matrix_io import write_sweep

logger = structlog.get_logger(__name__)


@contextmanager
def stage(name: str) -> Iterator[None]:
    """Tag toolkit errors raised inside the block with a pipeline stage."""
    try:
        yield
    except KreinSpecError as exc:
        exc.with_stage(name)
        raise


def _params_echo(p: FourLevelParams) -> FourLevelInput:
    return FourLevelInput(a0=p.a0, A=ComplexValue.of(p.A), B=ComplexValue.of(p.B))


class AnalysisService:
    """Builds analysis, four-level and sweep reports."""

    def _metric_verdict(
        self, name: str, H: ComplexMatrix, eta: ComplexMatrix, theta: Optional[AntilinearOp]
    ) -> MetricVerdict:
        residual = pseudo_hermiticity_residual(H, eta)
        signature = metric_signature(eta)
        verdict = MetricVerdict(
            name=name,
            pseudo_hermitian=residual <= settings.RTOL,
            pseudo_hermiticity_residual=residual,
            n_plus=signature.n_plus,
            n_minus=signature.n_minus,
            definiteness=signature.definiteness.value,
        )
        if theta is not None:
            relation = eta_pt_relation(eta, theta)
            verdict.eta_pt_relation = relation.relation.value
            verdict.commute_residual = relation.commute_residual
            verdict.anticommute_residual = relation.anticommute_residual
        return verdict

    def analyze(
        self,
        H: ComplexMatrix,
        eta: Optional[ComplexMatrix] = None,
        source: Optional[str] = None,
        metric_source: Optional[str] = None,
    ) -> AnalysisReport:
        """
        Run the full pipeline on H.

        Args:
            H: Hamiltonian
            eta: Optional user metric; doublets are extracted when it
                anticommutes with PT
            source: Input file echoed in the report
            metric_source: Metric file echoed in the report

        Returns:
            AnalysisReport
        """
        with stage("input"):
            H = as_matrix(H)
            if eta is not None:
                eta = as_matrix(eta)
        n = H.shape[0]
        notes: List[str] = []

        with stage("biortho"):
            system = build_biortho(H)
        phase = phase_of_system(system)
        spectrum = [
            SpectrumEntry(E=ComplexValue.of(system.levels[m[0]].E), multiplicity=len(m))
            for m in system.clusters()
        ]

        theta: Optional[AntilinearOp] = None
        if n % 2 == 0:
            theta = default_pt(n)
        else:
            notes.append(f"odd dimension {n}: PT analysis skipped")

        metrics: List[MetricVerdict] = []
        if eta is not None:
            with stage("metric"):
                metrics.append(self._metric_verdict("supplied", H, eta, theta))
        if phase is PtPhase.UNBROKEN:
            with stage("spectral_metric"):
                metrics.append(self._metric_verdict("spectral", H, spectral_metric(system), theta))
        else:
            notes.append("complex spectrum: spectral metric skipped")

        report = AnalysisReport(
            version=__version__,
            input=MatrixEcho(source=source, metric_source=metric_source, dim=n),
            phase=phase.value,
            spectrum=spectrum,
            biortho_residuals=system.residuals.as_dict() if system.residuals else {},
            metrics=metrics,
            notes=notes,
            tolerances=settings.tolerances(),
        )
        if theta is None:
            return report

        report.pt_commutation_residual = commutation_residual(theta, H)

        supplied = metrics[0] if eta is not None else None
        if supplied is None or supplied.eta_pt_relation != EtaPtRelation.ANTICOMMUTE.value:
            report.notes.append("no metric anticommuting with PT: doublet extraction skipped")
            if all(len(members) == 1 for members in system.clusters()):
                report.eigenstates_pt_invariant = eigenstates_pt_invariant(
                    [level.psi for level in system.levels], theta
                )
                report.eigenstates_pt_basis = "eigenvectors"
            else:
                report.notes.append("degenerate eigenspaces without doublets: eigenstate PT-invariance not reported")
            return report

        with stage("kreindeg"):
            doublets = find_pt_doublets(H, eta, theta)
            krein = build_krein(doublets, theta, hamiltonian=H)
        report.eigenstates_pt_invariant = eigenstates_pt_invariant([d.psi for d in doublets], theta)
        report.eigenstates_pt_basis = "doublets"

        report.doublets = [
            DoubletRow(
                E=d.E.real,
                eta_norm_psi=d.eta_norm_psi,
                eta_norm_pt_psi=d.eta_norm_pt_psi,
                phi_pt_overlap=d.phi_pt_overlap,
                gram_determinant=d.gram_determinant,
                eigen_residual=d.eigen_residual,
            )
            for d in doublets
        ]
        report.krein = KreinSection(
            chi_count=len(krein.chi_states),
            pt_invariance_residual=krein.pt_invariance_residual,
            cross_eta_product=krein.cross_eta_product,
            eigen_residual=krein.eigen_residual,
            min_singular_value=krein.min_singular_value,
            spans_space=krein.spans_space,
        )
        logger.info("analysis.done", dim=n, phase=phase.value, doublets=len(doublets))
        return report

    def fourlevel(self, p: FourLevelParams) -> FourLevelReport:
        """
        Analytic and numeric pipelines on the four-level model.

        Broken and exceptional-point parameters give a phase report; a
        singular normalization raises.
        """
        H = build_hamiltonian(p)
        result = omega(p)
        notes: List[str] = []
        try:
            roots = charpoly_roots_oracle(H)
        except NoConvergence as exc:
            roots = []
            notes.append(f"characteristic polynomial oracle: {exc.message}")
        numeric_phase = classify_pt_phase(H)

        phase = {
            OmegaKind.REAL: PtPhase.UNBROKEN,
            OmegaKind.BROKEN_PAIR: PtPhase.BROKEN,
            OmegaKind.ZERO: PtPhase.EXCEPTIONAL_POINT,
        }[result.kind]

        report = FourLevelReport(
            version=__version__,
            params=_params_echo(p),
            discriminant=p.discriminant,
            omega_kind=result.kind.value,
            omega=result.value,
            phase=phase.value,
            numeric_phase=numeric_phase.value,
            blocks_match_explicit=bool(np.array_equal(H, build_hamiltonian_from_blocks(p))),
            oracle_eigenvalues=[ComplexValue.of(z) for z in roots],
            notes=notes,
            tolerances=settings.tolerances(),
        )

        if result.kind is OmegaKind.BROKEN_PAIR:
            report.notes.append(f"broken phase: eigenvalues +-i*{result.value!r}, each twofold")
            return report
        if result.kind is OmegaKind.ZERO:
            report.notes.append("exceptional point: D = 0, eigenvalues and eigenvectors coalesce")
            return report

        with stage("analytic"):
            analytic = analytic_eigensystem(p)
        relations = abnormal_relations_check(analytic)
        eta = model_metric()
        report.analytic = AnalyticSection(
            omega=analytic.omega,
            k=analytic.k,
            normalization_residual=relations.normalization_residual,
            eigen_residual=analytic.eigen_residual,
            eta_norms={label: eta_norm(analytic.psi(label), eta) for label in STATE_LABELS},
            relations_ok=relations.ok,
            max_relation_deviation=max(e.deviation for e in relations.entries),
            completeness_residual=relations.completeness_residual,
            violations=list(relations.violations),
        )

        with stage("biortho"):
            comparison = compare_with_numeric(p)
        report.agreement = NumericAgreement(
            eigenvalue_error=comparison.eigenvalue_error,
            multiplicities=list(comparison.multiplicities),
            subspace_residuals=comparison.subspace_residuals,
        )
        report.analysis = self.analyze(H, eta, source="fourlevel", metric_source="model eta")
        return report

    def sweep(
        self,
        p0: FourLevelParams,
        axis: str,
        lo: float,
        hi: float,
        steps: int,
        out: Optional[str] = None,
    ) -> SweepReport:
        """Sweep one axis, optionally writing the data file."""
        with stage("sweep"):
            result = sweep_exceptional_point(p0, axis, lo, hi, steps)
        if out:
            write_sweep(out, result)

        counts = {phase.value: 0 for phase in PtPhase}
        for point in result.points:
            counts[point.phase.value] += 1
        return SweepReport(
            version=__version__,
            params=_params_echo(p0),
            axis=result.axis.value,
            lo=lo,
            hi=hi,
            steps=steps,
            phase_counts=counts,
            exceptional_points=[
                ExceptionalPointRow(t=h.t, t_lo=h.t_lo, t_hi=h.t_hi) for h in result.exceptional_points
            ],
            output=out,
        )


analysis_service = AnalysisService()
