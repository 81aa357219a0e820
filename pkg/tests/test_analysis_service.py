"""
Tests for the analysis pipeline and report rendering.
"""

import numpy as np
import orjson
import pytest

from kreinspec.core.exceptions import Defective, KreinSpecError, NoConvergence, SingularNormalization
from kreinspec.numerics.fourlevel import FourLevelParams
from kreinspec.services.analysis_service import AnalysisService, analysis_service, stage
from kreinspec.services.report_writer import (
    render_analysis,
    render_fourlevel,
    render_sweep,
    to_json,
)


def test_stage_tags_errors():
    """Test that errors leaving a stage carry its name."""
    with pytest.raises(KreinSpecError) as exc_info:
        with stage("biortho"):
            raise Defective()
    assert exc_info.value.details["stage"] == "biortho"


def test_analyze_model_with_indefinite_metric(model_hamiltonian, eta22):
    """Test the full pipeline: two doublets with norms +-1 and a Krein split."""
    report = analysis_service.analyze(model_hamiltonian, eta22, source="H.txt", metric_source="eta.txt")
    assert report.phase == "Unbroken"
    assert report.input.dim == 4
    assert [e.multiplicity for e in report.spectrum] == [2, 2]
    assert report.pt_commutation_residual < 1e-14

    supplied, spectral = report.metrics
    assert supplied.name == "supplied"
    assert supplied.pseudo_hermitian
    assert (supplied.n_plus, supplied.n_minus) == (2, 2)
    assert supplied.eta_pt_relation == "Anticommute"
    assert spectral.definiteness == "PositiveDefinite"
    assert spectral.eta_pt_relation == "Commute"

    assert len(report.doublets) == 2
    for row in report.doublets:
        assert row.eta_norm_psi == pytest.approx(1.0, abs=1e-10)
        assert row.eta_norm_pt_psi == pytest.approx(-1.0, abs=1e-10)
    assert report.krein.chi_count == 2
    assert report.krein.spans_space
    assert report.tolerances["rtol"] > 0
    assert report.eigenstates_pt_invariant is False
    assert report.eigenstates_pt_basis == "doublets"


def test_analyze_without_metric(model_hamiltonian):
    """Test that doublets need an anticommuting metric."""
    report = analysis_service.analyze(model_hamiltonian)
    assert report.doublets == []
    assert report.krein is None
    assert [m.name for m in report.metrics] == ["spectral"]
    assert any("doublet extraction skipped" in note for note in report.notes)
    assert report.eigenstates_pt_invariant is None
    assert any("eigenstate PT-invariance not reported" in note for note in report.notes)


def test_analyze_nondegenerate_eigenvectors():
    """Test that the invariance flag uses eigenvectors when every level is simple."""
    report = analysis_service.analyze(np.diag([1.0, 2.0]))
    assert report.eigenstates_pt_basis == "eigenvectors"
    assert report.eigenstates_pt_invariant is False


def test_analyze_odd_dimension():
    """Test that PT analysis is skipped for odd dimensions."""
    report = analysis_service.analyze(np.diag([1.0, 2.0, 3.0]))
    assert report.pt_commutation_residual is None
    assert any("odd dimension" in note for note in report.notes)


def test_analyze_broken_spectrum():
    """Test that a complex spectrum skips the spectral metric."""
    report = analysis_service.analyze(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert report.phase == "Broken"
    assert report.metrics == []


def test_analyze_defective_names_stage(jordan):
    """Test that a Jordan block fails in the biortho stage."""
    with pytest.raises((Defective, NoConvergence)) as exc_info:
        analysis_service.analyze(jordan)
    assert exc_info.value.details["stage"] == "biortho"


def test_fourlevel_unbroken(model_params):
    """Test the analytic and numeric pipelines on the model."""
    report = AnalysisService().fourlevel(model_params)
    assert report.phase == "Unbroken"
    assert report.numeric_phase == "Unbroken"
    assert report.blocks_match_explicit
    assert report.omega == pytest.approx(np.sqrt(1.29))
    assert len(report.oracle_eigenvalues) == 4
    assert report.analytic.relations_ok
    assert report.analytic.eta_norms["+-"] == pytest.approx(-1.0)
    assert report.agreement.eigenvalue_error < 1e-9
    assert len(report.analysis.doublets) == 2


def test_fourlevel_broken(broken_params):
    """Test that the broken phase yields a phase report."""
    report = analysis_service.fourlevel(broken_params)
    assert report.phase == "Broken"
    assert report.omega_kind == "BrokenPair"
    assert report.omega == 1.0
    assert report.analytic is None
    assert any("broken phase" in note for note in report.notes)


def test_fourlevel_exceptional_point(ep_params):
    """Test that D = 0 is reported as an exceptional point."""
    report = analysis_service.fourlevel(ep_params)
    assert report.phase == "ExceptionalPoint"
    assert report.numeric_phase == "ExceptionalPoint"
    assert report.analysis is None


def test_fourlevel_singular_normalization():
    """Test that Omega + a0 = 0 raises in the analytic stage."""
    with pytest.raises(SingularNormalization) as exc_info:
        analysis_service.fourlevel(FourLevelParams(a0=-1.0, A=1 + 0j, B=1 + 0j))
    assert exc_info.value.details["stage"] == "analytic"


def test_sweep_report(tmp_path):
    """Test phase counts and the optional data file."""
    out = tmp_path / "sweep.txt"
    report = analysis_service.sweep(
        FourLevelParams(a0=0.0, A=1 + 0j, B=0j), "absB", 0.0, 2.0, 201, out=str(out)
    )
    assert report.axis == "absB"
    assert sum(report.phase_counts.values()) == 201
    assert len(report.exceptional_points) == 1
    assert report.exceptional_points[0].t == pytest.approx(1.0, abs=1e-8)
    assert out.exists()
    assert "EP at t" in render_sweep(report)


def test_reports_are_reproducible(model_hamiltonian, eta22):
    """Test that identical input gives identical JSON bytes."""
    first = to_json(analysis_service.analyze(model_hamiltonian, eta22))
    second = to_json(analysis_service.analyze(model_hamiltonian, eta22))
    assert first == second
    data = orjson.loads(first)
    assert list(data) == sorted(data)
    assert set(data["spectrum"][0]["E"]) == {"re", "im"}


def test_text_rendering(model_params):
    """Test the plain-text renderers."""
    report = analysis_service.fourlevel(model_params)
    text = render_fourlevel(report)
    assert "phase: Unbroken" in text
    assert "PT doublets:" in text
    assert render_analysis(report.analysis).startswith("kreinspec")
