"""
Pydantic schemas for reports.
"""

from kreinspec.schemas.common import BaseSchema, ComplexValue, ErrorResponse
from kreinspec.schemas.reports import (
    AnalysisReport,
    AnalyticSection,
    CriterionResult,
    DoubletRow,
    ExceptionalPointRow,
    FourLevelInput,
    FourLevelReport,
    KreinSection,
    MatrixEcho,
    MetricVerdict,
    NumericAgreement,
    SelftestReport,
    SpectrumEntry,
    SweepReport,
)


__all__ = [
    # Common
    "BaseSchema",
    "ComplexValue",
    "ErrorResponse",
    # Analysis
    "AnalysisReport",
    "MatrixEcho",
    "SpectrumEntry",
    "MetricVerdict",
    "DoubletRow",
    "KreinSection",
    # Four-level
    "FourLevelInput",
    "FourLevelReport",
    "AnalyticSection",
    "NumericAgreement",
    # Sweep
    "SweepReport",
    "ExceptionalPointRow",
    # Self-test
    "CriterionResult",
    "SelftestReport",
]
