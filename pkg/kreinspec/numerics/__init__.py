"""
Numerical core: matrix kernel, split-quaternions, biorthonormal systems,
metric operators, antilinear symmetries, PT doublets and the four-level model.
"""

from kreinspec.numerics.antilinear import (
    AntilinearOp,
    EtaPtRelation,
    build_parity,
    build_timereversal,
    commutes_with,
    compose_pt,
    default_pt,
    eta_pt_relation,
)
from kreinspec.numerics.biortho import (
    BiorthoSystem,
    build_biortho,
    completeness_residual,
    spectral_metric,
)
from kreinspec.numerics.fourlevel import (
    FourLevelParams,
    SweepAxis,
    abnormal_relations_check,
    analytic_eigensystem,
    build_hamiltonian,
    omega,
    sweep_exceptional_point,
)
from kreinspec.numerics.kreindeg import (
    PtPhase,
    build_krein,
    classify_pt_phase,
    find_pt_doublets,
)
from kreinspec.numerics.metric import eta_inner, is_pseudo_hermitian, metric_signature
from kreinspec.numerics.numkernel import charpoly_roots_oracle, eig_right, mat_inverse
from kreinspec.numerics.splitq import SplitQuaternion, sq_conj, sq_embed, sq_mul


__all__ = [
    # Kernel
    "mat_inverse",
    "eig_right",
    "charpoly_roots_oracle",
    # Split-quaternions
    "SplitQuaternion",
    "sq_mul",
    "sq_conj",
    "sq_embed",
    # Biorthonormal systems
    "BiorthoSystem",
    "build_biortho",
    "completeness_residual",
    "spectral_metric",
    # Metrics
    "is_pseudo_hermitian",
    "metric_signature",
    "eta_inner",
    # Antilinear operators
    "AntilinearOp",
    "EtaPtRelation",
    "build_parity",
    "build_timereversal",
    "compose_pt",
    "default_pt",
    "commutes_with",
    "eta_pt_relation",
    # PT doublets
    "PtPhase",
    "find_pt_doublets",
    "build_krein",
    "classify_pt_phase",
    # Four-level model
    "FourLevelParams",
    "SweepAxis",
    "build_hamiltonian",
    "omega",
    "analytic_eigensystem",
    "abnormal_relations_check",
    "sweep_exceptional_point",
]
