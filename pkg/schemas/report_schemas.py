"""
Schemas for numerical configurations, intermediate results and reports
"""

import math
import sys
from datetime import datetime, timezone
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .types import ComplexNumber


# ============= Configurations =============

class PairingConfig(BaseModel):
    """Parameters of the regularized zero-side pairing"""

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {"sigma": [2.0, 0.0], "d_prime": 2, "ymax": 200.0, "quad_tol": 1e-11, "method": "termwise"}
        },
    )

    sigma: ComplexNumber = Field(2.0, description="Base point of the Hadamard interpolation")
    d_prime: int = Field(2, ge=2, description="Order d' >= d of the primitive K_d'")
    ymax: float = Field(50.0, gt=0, description="Zero truncation height")
    quad_tol: float = Field(1e-11, gt=0, description="Quadrature tolerance")
    method: Literal["termwise", "quadrature"] = Field("termwise", description="Zero-side evaluation path")
    tail_budget: Optional[float] = Field(None, description="Filled in by the pairing from the zero density")


class EMConfig(BaseModel):
    """Euler-MacLaurin truncation settings"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    m: int = Field(3, ge=1, le=60, description="Bernoulli truncation order")
    remainder_quad_tol: float = Field(1e-12, gt=0)
    sigma: ComplexNumber = Field(0.0, description="0 for the classical formula")

    @field_validator("sigma")
    @classmethod
    def _off_poles(cls, v: complex) -> complex:
        if v != 0:
            k = v.imag / (2 * math.pi)
            if abs(v.real) < 1e-12 and abs(k - round(k)) < 1e-12:
                raise ValueError("sigma must avoid 2*pi*i*Z")
            if abs(v) >= 2 * math.pi:
                raise ValueError("|sigma| must be below 2*pi for the periodic kernel")
        return v


# ============= Intermediate results =============

class KEllSum(BaseModel):
    """Truncated K_l(t, sigma) with its tail bound"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: ComplexNumber
    tail_bound: float
    terms: int


class PairingResult(BaseModel):
    """Value of a pairing together with its error attribution"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: ComplexNumber
    tail_budget: float = 0.0
    quad_error: float = 0.0
    terms_used: int = 0

    @property
    def budget(self) -> float:
        return self.tail_budget + self.quad_error


class DiscrepancyPoly(BaseModel):
    """Constant (genus 1) discrepancy polynomial P_f = G - f'/f"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: Tuple[ComplexNumber, ...]
    sigma: ComplexNumber
    sample_residual: float
    tail_budget: float = 0.0

    @property
    def c0(self) -> complex:
        return self.coeffs[0]


class SummationResult(BaseModel):
    """Result of a summation formula"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: ComplexNumber
    remainder_bound: float = 0.0
    terms_used: int = 0

    @property
    def real(self) -> float:
        return float(self.value.real)


# ============= Explicit formula data =============

class ZeroTable(BaseModel):
    """Ordinates of nontrivial zeta zeros 1/2 + i*gamma"""

    model_config = ConfigDict(frozen=True)

    ordinates: Tuple[float, ...]
    source: str = ""
    count: int = 0
    assumptions: Tuple[str, ...] = ("zeros simple", "zeros on the critical line as supplied")

    @model_validator(mode="after")
    def _consistent(self) -> "ZeroTable":
        if self.count != len(self.ordinates):
            object.__setattr__(self, "count", len(self.ordinates))
        return self

    def truncated(self, n: int) -> "ZeroTable":
        return ZeroTable(ordinates=self.ordinates[:n], source=f"{self.source}[:{n}]")


class PrimeTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    position: float = Field(..., description="k log p")
    weight: float = Field(..., description="log p = von Mangoldt value")
    n: int = Field(..., description="p^k")


class PrimeSupport(BaseModel):
    """Prime powers p^k with k log p <= T"""

    model_config = ConfigDict(frozen=True)

    terms: Tuple[PrimeTerm, ...]
    T: float

    @property
    def positions(self) -> List[float]:
        return [t.position for t in self.terms]


# ============= Reports =============

class VerificationReport(BaseModel):
    """Both sides of an identity, residual and attributable error budget"""

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        populate_by_name=True,
        json_schema_extra={
            "example": {
                "name": "classical-poisson",
                "lhs": [0.9999, 0.0],
                "rhs": [0.9999, 0.0],
                "residual": 1e-12,
                "budget": 3e-11,
                "tol": 1e-8,
                "pass": True,
                "inputs": {"series": {"lambdas": [1.0], "coeffs": [[-1.0, 0.0]]}},
            }
        },
    )

    name: str
    lhs: ComplexNumber
    rhs: ComplexNumber
    residual: float
    budget: float = Field(..., gt=0)
    tol: float
    passed: bool = Field(..., alias="pass")
    inputs: Dict[str, Any] = Field(default_factory=dict)
    details: Dict[str, Any] = Field(default_factory=dict)
    created_at: str = Field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    @model_validator(mode="after")
    def _pass_flag(self) -> "VerificationReport":
        if self.passed != (self.residual <= self.budget + self.tol):
            raise ValueError("pass flag inconsistent with residual, budget and tol")
        return self

    @classmethod
    def build(
        cls,
        name: str,
        lhs: complex,
        rhs: complex,
        budget: float,
        tol: float,
        inputs: Optional[Dict[str, Any]] = None,
        details: Optional[Dict[str, Any]] = None,
        residual: Optional[float] = None,
    ) -> "VerificationReport":
        lhs, rhs = complex(lhs), complex(rhs)
        if residual is None:
            residual = abs(lhs - rhs)
        # rounding floor keeps the budget strictly positive
        budget = float(budget) + 64 * sys.float_info.epsilon * max(1.0, abs(lhs), abs(rhs))
        return cls(
            name=name,
            lhs=lhs,
            rhs=rhs,
            residual=float(residual),
            budget=budget,
            tol=tol,
            passed=bool(residual <= budget + tol),
            inputs=inputs or {},
            details=details or {},
        )

    def to_json(self) -> dict:
        return self.model_dump(mode="json", by_alias=True)
