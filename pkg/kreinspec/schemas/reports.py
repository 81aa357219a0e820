"""
Report schemas emitted by the CLI.

Every numeric claim carries the residual it was checked against; reports
contain no timestamps so identical input reproduces identical output.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from kreinspec.schemas.common import BaseSchema, ComplexValue


# ============ Analysis ============


class MatrixEcho(BaseModel):
    """Input echo."""

    source: Optional[str] = None
    metric_source: Optional[str] = None
    dim: int


class SpectrumEntry(BaseModel):
    E: ComplexValue
    multiplicity: int


class MetricVerdict(BaseModel):
    """Pseudo-Hermiticity and PT relation of one metric."""

    name: str
    pseudo_hermitian: bool
    pseudo_hermiticity_residual: float
    n_plus: int
    n_minus: int
    definiteness: str
    eta_pt_relation: Optional[str] = None
    commute_residual: Optional[float] = None
    anticommute_residual: Optional[float] = None


class DoubletRow(BaseSchema):
    E: float
    eta_norm_psi: float
    eta_norm_pt_psi: float
    phi_pt_overlap: float
    gram_determinant: float
    eigen_residual: float


class KreinSection(BaseSchema):
    chi_count: int
    pt_invariance_residual: float
    cross_eta_product: float
    eigen_residual: Optional[float] = None
    min_singular_value: float
    spans_space: bool


class AnalysisReport(BaseModel):
    """Result of the analysis pipeline on one Hamiltonian."""

    version: str
    input: MatrixEcho
    phase: str
    spectrum: List[SpectrumEntry]
    biortho_residuals: Dict[str, float]
    pt_commutation_residual: Optional[float] = None
    eigenstates_pt_invariant: Optional[bool] = None
    eigenstates_pt_basis: Optional[str] = None  # "doublets" or "eigenvectors"
    metrics: List[MetricVerdict] = Field(default_factory=list)
    doublets: List[DoubletRow] = Field(default_factory=list)
    krein: Optional[KreinSection] = None
    notes: List[str] = Field(default_factory=list)
    tolerances: Dict[str, float]


# ============ Four-level model ============


class FourLevelInput(BaseModel):
    a0: float
    A: ComplexValue
    B: ComplexValue


class AnalyticSection(BaseModel):
    """Closed-form eigensystem and its signed relations."""

    omega: float
    k: float
    normalization_residual: float
    eigen_residual: float
    eta_norms: Dict[str, float]
    relations_ok: bool
    max_relation_deviation: float
    completeness_residual: float
    violations: List[str] = Field(default_factory=list)


class NumericAgreement(BaseModel):
    eigenvalue_error: float
    multiplicities: List[int]
    subspace_residuals: Dict[str, float]


class FourLevelReport(BaseModel):
    version: str
    params: FourLevelInput
    discriminant: float
    omega_kind: str
    omega: float
    phase: str
    numeric_phase: str
    blocks_match_explicit: bool
    oracle_eigenvalues: List[ComplexValue]
    analytic: Optional[AnalyticSection] = None
    agreement: Optional[NumericAgreement] = None
    analysis: Optional[AnalysisReport] = None
    notes: List[str] = Field(default_factory=list)
    tolerances: Dict[str, float]


# ============ Sweep ============


class ExceptionalPointRow(BaseModel):
    t: float
    t_lo: float
    t_hi: float


class SweepReport(BaseModel):
    version: str
    params: FourLevelInput
    axis: str
    lo: float
    hi: float
    steps: int
    phase_counts: Dict[str, int]
    exceptional_points: List[ExceptionalPointRow]
    output: Optional[str] = None


# ============ Self-test ============


class CriterionResult(BaseModel):
    number: int
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""


class SelftestReport(BaseModel):
    version: str
    passed: bool
    criteria: List[CriterionResult]
    failed: List[int] = Field(default_factory=list)
