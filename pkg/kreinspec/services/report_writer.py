"""
Report rendering: sorted-key JSON through orjson and plain text for terminals.
"""

from typing import List

import orjson
from pydantic import BaseModel

from kreinspec.schemas.common import ComplexValue
from kreinspec.schemas.reports import (
    AnalysisReport,
    FourLevelReport,
    SelftestReport,
    SweepReport,
)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY


def to_json(report: BaseModel) -> bytes:
    return orjson.dumps(report.model_dump(mode="json"), option=JSON_OPTIONS) + b"\n"


def _c(z: ComplexValue) -> str:
    return f"{z.re:.12g}{'-' if z.im < 0 else '+'}{abs(z.im):.12g}i"


def _e(x: float) -> str:
    return f"{x:.3e}"


def render_analysis(report: AnalysisReport, indent: str = "") -> str:
    lines: List[str] = []

    def add(text: str) -> None:
        lines.append(indent + text)

    source = report.input.source or "<matrix>"
    add(f"kreinspec {report.version} analysis of {source} (dim {report.input.dim})")
    add(f"phase: {report.phase}")
    add("spectrum:")
    for entry in report.spectrum:
        add(f"  E = {_c(entry.E)}  multiplicity {entry.multiplicity}")
    add("biortho residuals: " + ", ".join(f"{k}={_e(v)}" for k, v in sorted(report.biortho_residuals.items())))
    if report.pt_commutation_residual is not None:
        add(f"[H, PT] residual: {_e(report.pt_commutation_residual)}")
        if report.eigenstates_pt_invariant is not None:
            add(
                f"eigenstates PT-invariant: {report.eigenstates_pt_invariant} "
                f"(on {report.eigenstates_pt_basis})"
            )
    for m in report.metrics:
        add(
            f"metric {m.name}: pseudo-Hermitian={m.pseudo_hermitian} "
            f"(residual {_e(m.pseudo_hermiticity_residual)}), signature ({m.n_plus}, {m.n_minus}) "
            f"{m.definiteness}"
        )
        if m.eta_pt_relation is not None:
            add(
                f"  eta/PT: {m.eta_pt_relation} (commute {_e(m.commute_residual or 0.0)}, "
                f"anticommute {_e(m.anticommute_residual or 0.0)})"
            )
    if report.doublets:
        add("PT doublets:")
        add("  E                 norm(psi)   norm(PTpsi)  |<phi|PTpsi>|  Gram det    eigen resid")
        for d in report.doublets:
            add(
                f"  {d.E:<+16.10g}  {d.eta_norm_psi:<+10.6f}  {d.eta_norm_pt_psi:<+11.6f}  "
                f"{_e(d.phi_pt_overlap):<13}  {_e(d.gram_determinant):<10}  {_e(d.eigen_residual)}"
            )
    if report.krein is not None:
        k = report.krein
        add(
            f"Krein: {k.chi_count} chi states, PT invariance {_e(k.pt_invariance_residual)}, "
            f"cross eta {_e(k.cross_eta_product)}, eigen {_e(k.eigen_residual or 0.0)}, "
            f"sigma_min {_e(k.min_singular_value)}, spans space {k.spans_space}"
        )
    for note in report.notes:
        add(f"note: {note}")
    add("tolerances: " + ", ".join(f"{k}={v:g}" for k, v in sorted(report.tolerances.items())))
    return "\n".join(lines) + "\n"


def render_fourlevel(report: FourLevelReport) -> str:
    p = report.params
    lines = [
        f"kreinspec {report.version} four-level model a0={p.a0:g} A={_c(p.A)} B={_c(p.B)}",
        f"D = {report.discriminant:.12g}  Omega: {report.omega_kind} {report.omega:.12g}",
        f"phase: {report.phase} (numeric: {report.numeric_phase})",
        f"block assembly matches explicit matrix: {report.blocks_match_explicit}",
        "oracle eigenvalues: " + ", ".join(_c(z) for z in report.oracle_eigenvalues),
    ]
    if report.analytic is not None:
        a = report.analytic
        lines.append(f"k = {a.k:.12g} (normalization residual {_e(a.normalization_residual)})")
        lines.append(f"analytic eigen residual: {_e(a.eigen_residual)}")
        lines.append("eta-norms: " + ", ".join(f"{k}: {v:+.12f}" for k, v in a.eta_norms.items()))
        lines.append(
            f"abnormal relations ok: {a.relations_ok} (max deviation {_e(a.max_relation_deviation)}, "
            f"completeness {_e(a.completeness_residual)})"
        )
        for v in a.violations:
            lines.append(f"  violated: {v}")
    if report.agreement is not None:
        g = report.agreement
        lines.append(
            f"numeric agreement: eigenvalue error {_e(g.eigenvalue_error)}, multiplicities {g.multiplicities}"
        )
        lines.append(
            "  subspace residuals: " + ", ".join(f"{k}: {_e(v)}" for k, v in g.subspace_residuals.items())
        )
    for note in report.notes:
        lines.append(f"note: {note}")
    text = "\n".join(lines) + "\n"
    if report.analysis is not None:
        text += "\n" + render_analysis(report.analysis, indent="  ")
    return text


def render_sweep(report: SweepReport) -> str:
    lines = [
        f"kreinspec {report.version} sweep axis={report.axis} range=[{report.lo:g}, {report.hi:g}] "
        f"steps={report.steps}",
        "phases: " + ", ".join(f"{k}={v}" for k, v in report.phase_counts.items()),
    ]
    if not report.exceptional_points:
        lines.append("no exceptional points in range")
    for ep in report.exceptional_points:
        lines.append(f"EP at t = {ep.t:.12g} in [{ep.t_lo:.12g}, {ep.t_hi:.12g}]")
    if report.output:
        lines.append(f"data written to {report.output}")
    return "\n".join(lines) + "\n"


def render_selftest(report: SelftestReport) -> str:
    lines = [f"kreinspec {report.version} selftest"]
    for c in report.criteria:
        status = "PASS" if c.passed else "FAIL"
        line = f"[{status}] {c.number:>2} {c.name:<30} value {_e(c.value)}  threshold {_e(c.threshold)}"
        if c.detail:
            line += f"  ({c.detail})"
        lines.append(line)
    if report.passed:
        lines.append("all criteria passed")
    else:
        lines.append("failed criteria: " + ", ".join(str(n) for n in report.failed))
    return "\n".join(lines) + "\n"
