"""
Custom exception classes for the toolkit.
Every error carries a stable error code and the CLI exit code it maps to.
"""

from typing import Any, Dict, Optional


class KreinSpecError(Exception):
    """Base exception for toolkit errors."""

    def __init__(
        self,
        message: str,
        exit_code: int = 3,
        error_code: str = "INTERNAL_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code
        self.details = details or {}
        super().__init__(message)

    def with_stage(self, stage: str) -> "KreinSpecError":
        """Record the pipeline stage that raised this error."""
        self.details.setdefault("stage", stage)
        return self


# ---------------------------------------------------------------------------
# Input errors (exit code 2)
# ---------------------------------------------------------------------------


class InputError(KreinSpecError):
    """Malformed or inadmissible input."""

    def __init__(
        self,
        message: str = "Invalid input",
        error_code: str = "INPUT_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            message=message,
            exit_code=2,
            error_code=error_code,
            details=details,
        )


class MatrixFileError(InputError):
    """Matrix file could not be parsed."""

    def __init__(
        self,
        message: str = "Malformed matrix file",
        path: Optional[str] = None,
        line: Optional[int] = None,
    ):
        super().__init__(
            message=message,
            error_code="MATRIX_FILE_ERROR",
            details={"path": path, "line": line},
        )


class DimensionMismatch(InputError):
    """Operand shapes do not agree."""

    def __init__(self, message: str = "Dimension mismatch", shapes: Optional[list] = None):
        super().__init__(
            message=message,
            error_code="DIMENSION_MISMATCH",
            details={"shapes": shapes or []},
        )


class OddDimension(InputError):
    """An even dimension was required."""

    def __init__(self, n: int):
        super().__init__(
            message=f"Dimension must be even, got {n}",
            error_code="ODD_DIMENSION",
            details={"n": n},
        )


class DimensionTooLarge(InputError):
    """Dimension exceeds what an operation supports."""

    def __init__(self, n: int, limit: int):
        super().__init__(
            message=f"Dimension {n} exceeds the supported maximum {limit}",
            error_code="DIMENSION_TOO_LARGE",
            details={"n": n, "limit": limit},
        )


class NonFiniteInput(InputError):
    """NaN or Inf entries."""

    def __init__(self, message: str = "Input contains NaN or Inf entries"):
        super().__init__(message=message, error_code="NON_FINITE_INPUT")


class NotHermitian(InputError):
    """Matrix expected to be Hermitian is not."""

    def __init__(self, residual: float, tol: float):
        super().__init__(
            message=f"Matrix is not Hermitian (max |M - M^H| = {residual:.3e} > {tol:.3e})",
            error_code="NOT_HERMITIAN",
            details={"residual": residual, "tol": tol},
        )


class NotUnitary(InputError):
    """Matrix expected to be unitary is not."""

    def __init__(self, residual: float, tol: float):
        super().__init__(
            message=f"Matrix is not unitary (||U^H U - I||_F = {residual:.3e} > {tol:.3e})",
            error_code="NOT_UNITARY",
            details={"residual": residual, "tol": tol},
        )


class InvalidSweep(InputError):
    """Bad sweep axis, range or step count."""

    def __init__(self, message: str = "Invalid sweep", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, error_code="INVALID_SWEEP", details=details)


# ---------------------------------------------------------------------------
# Numerical failures (exit code 3)
# ---------------------------------------------------------------------------


class NumericalError(KreinSpecError):
    """A numerical procedure failed or its result is not trustworthy."""

    def __init__(
        self,
        message: str = "Numerical failure",
        error_code: str = "NUMERICAL_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            message=message,
            exit_code=3,
            error_code=error_code,
            details=details,
        )


class SingularMatrix(NumericalError):
    """Pivot below threshold during inversion."""

    def __init__(self, pivot: float, threshold: float):
        super().__init__(
            message=f"Matrix is singular (pivot {pivot:.3e} < {threshold:.3e})",
            error_code="SINGULAR_MATRIX",
            details={"pivot": pivot, "threshold": threshold},
        )


class NearSingular(NumericalError):
    """Metric has an eigenvalue too close to zero."""

    def __init__(self, eigenvalue: float, threshold: float):
        super().__init__(
            message=f"Metric is nearly singular (|lambda| = {eigenvalue:.3e} < {threshold:.3e})",
            error_code="NEAR_SINGULAR",
            details={"eigenvalue": eigenvalue, "threshold": threshold},
        )


class NoConvergence(NumericalError):
    """Iterative solver failed to converge."""

    def __init__(self, message: str = "Eigensolver did not converge", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, error_code="NO_CONVERGENCE", details=details)


class Defective(NumericalError):
    """Non-diagonalizable input, i.e. an exceptional point."""

    def __init__(self, message: str = "Matrix is defective", details: Optional[Dict[str, Any]] = None):
        super().__init__(message=message, error_code="DEFECTIVE", details=details)


class ComplexSpectrum(NumericalError):
    """Operation requires a real spectrum."""

    def __init__(self, max_imag: float, threshold: float):
        super().__init__(
            message=f"Spectrum is not real (max |Im E| = {max_imag:.3e} > {threshold:.3e})",
            error_code="COMPLEX_SPECTRUM",
            details={"max_imag": max_imag, "threshold": threshold},
        )


class PreconditionFailed(NumericalError):
    """A structural precondition of the doublet construction does not hold."""

    def __init__(self, precondition: str, residual: Optional[float] = None, **extra: Any):
        details: Dict[str, Any] = {"precondition": precondition, "residual": residual}
        details.update(extra)
        message = f"Precondition failed: {precondition}"
        if residual is not None:
            message += f" (residual {residual:.3e})"
        super().__init__(message=message, error_code="PRECONDITION_FAILED", details=details)
        self.precondition = precondition


class DoubletCheckFailed(NumericalError):
    """A constructed PT doublet violates one of its invariants."""

    def __init__(self, check: str, value: float, tol: float):
        super().__init__(
            message=f"PT doublet check '{check}' failed ({value:.3e} vs tol {tol:.3e})",
            error_code="DOUBLET_CHECK_FAILED",
            details={"check": check, "value": value, "tol": tol},
        )


class DegenerateChi(NumericalError):
    """psi + PT psi vanished for both phase choices."""

    def __init__(self, norm: float, tol: float):
        super().__init__(
            message=f"chi = psi + PT psi vanishes (||chi|| = {norm:.3e} < {tol:.3e})",
            error_code="DEGENERATE_CHI",
            details={"norm": norm, "tol": tol},
        )


class BrokenPhase(NumericalError):
    """Analytic eigensystem requested outside the real-spectrum region."""

    def __init__(self, discriminant: float, eps: float):
        super().__init__(
            message=f"Spectrum is not real: D = {discriminant:.6g} <= eps = {eps:.3e}",
            error_code="BROKEN_PHASE",
            details={"discriminant": discriminant, "eps": eps},
        )


class SingularNormalization(NumericalError):
    """Omega + a0 vanishes, so k cannot be fixed."""

    def __init__(self, omega: float, a0: float, eps: float):
        super().__init__(
            message=f"Normalization is singular: Omega + a0 = {omega + a0:.3e} <= {eps:.3e}",
            error_code="SINGULAR_NORMALIZATION",
            details={"omega": omega, "a0": a0, "eps": eps},
        )
