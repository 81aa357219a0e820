"""
Common schemas used across reports.
"""

from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Base schema with common configuration."""

    model_config = ConfigDict(
        from_attributes=True,
        populate_by_name=True,
    )


class ComplexValue(BaseModel):
    """Complex number as {re, im}."""

    re: float
    im: float

    @classmethod
    def of(cls, z: complex) -> "ComplexValue":
        z = complex(z)
        return cls(re=z.real, im=z.imag)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


class ErrorResponse(BaseModel):
    """Error report printed by the CLI."""

    error_code: str
    message: str
    exit_code: int
    stage: Optional[str] = None
    details: Optional[Dict[str, Any]] = None
