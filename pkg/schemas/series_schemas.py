"""
Schemas for finite Dirichlet series and their divisors
"""

import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .types import ComplexNumber


# ============= Series =============

class FiniteDirichletSeries(BaseModel):
    """f(s) = 1 + sum a_n exp(-lambda_n s), a_0 = 1 implicit"""

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {
                "lambdas": [1.0, 1.4142135623730951],
                "coeffs": [[0.4, 0.0], [0.3, 0.0]],
            }
        },
    )

    lambdas: Tuple[float, ...] = Field(..., description="Strictly increasing positive frequencies")
    coeffs: Tuple[ComplexNumber, ...] = Field(..., description="Coefficients a_1..a_N")

    @field_validator("lambdas")
    @classmethod
    def _check_lambdas(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if len(v) == 0:
            raise ValueError("at least one frequency is required")
        if any(not math.isfinite(x) or x <= 0 for x in v):
            raise ValueError("frequencies must be finite and positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("frequencies must be strictly increasing")
        return tuple(float(x) for x in v)

    @model_validator(mode="after")
    def _check_coeffs(self) -> "FiniteDirichletSeries":
        if len(self.coeffs) != len(self.lambdas):
            raise ValueError(f"{len(self.coeffs)} coefficients for {len(self.lambdas)} frequencies")
        if self.coeffs[-1] == 0:
            raise ValueError("last coefficient a_N must be nonzero")
        return self

    @property
    def n_terms(self) -> int:
        return len(self.lambdas)

    @property
    def is_real(self) -> bool:
        return all(c.imag == 0 for c in self.coeffs)

    @property
    def l1_norm(self) -> float:
        return float(sum(abs(c) for c in self.coeffs))

    def lambda_array(self) -> np.ndarray:
        return np.asarray(self.lambdas, dtype=float)

    def coeff_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def describe(self) -> dict:
        return self.model_dump(mode="json")


class StripBound(BaseModel):
    """Vertical strip containing every zero of a series"""

    model_config = ConfigDict(frozen=True)

    sigma_minus: float = Field(..., description="Left bound of Re(rho)")
    sigma_plus: float = Field(..., description="Right bound of Re(rho)")

    @model_validator(mode="after")
    def _ordered(self) -> "StripBound":
        if self.sigma_minus > self.sigma_plus + 1e-12:
            raise ValueError("sigma_minus must not exceed sigma_plus")
        return self


# ============= Frequency side =============

class FrequencyTerm(BaseModel):
    """One multi-index k of the frequency semigroup with its atomic weight"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    k: Tuple[Tuple[int, int], ...] = Field(..., description="Sparse multi-index as (slot, count), slots 1-based")
    value: float = Field(..., description="<lambda, k>")
    b: Optional[ComplexNumber] = Field(None, description="Coefficient b_k of -log f")

    @field_validator("k")
    @classmethod
    def _check_k(cls, v: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
        if not v or sum(c for _, c in v) < 1:
            raise ValueError("multi-index must have |k| >= 1")
        if any(slot < 1 or c < 1 for slot, c in v):
            raise ValueError("slots are 1-based and counts positive")
        return tuple(sorted((int(s), int(c)) for s, c in v))

    @property
    def norm(self) -> int:
        return sum(c for _, c in self.k)

    def k_label(self) -> str:
        return " ".join(f"{slot}:{count}" for slot, count in self.k)


# ============= Divisor =============

class DivisorEntry(BaseModel):
    """Zero (n > 0) or pole (n < 0) with multiplicity"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: ComplexNumber
    n: int

    @field_validator("n")
    @classmethod
    def _nonzero(cls, v: int) -> int:
        if v == 0:
            raise ValueError("multiplicity must be nonzero")
        return v


class Divisor(BaseModel):
    """Truncated divisor of a meromorphic function of finite order"""

    model_config = ConfigDict(
        frozen=True,
        arbitrary_types_allowed=True,
        json_schema_extra={
            "example": {
                "entries": [{"rho": [0.0, 0.0], "n": 1}, {"rho": [0.0, 6.283185307179586], "n": 1}],
                "sigma1": 0.0,
                "d": 2,
                "g": 1,
                "ymax": 20.0,
                "density": 0.15915494309189535,
            }
        },
    )

    entries: Tuple[DivisorEntry, ...] = Field(default_factory=tuple)
    sigma1: float = Field(..., description="sup Re(rho)")
    d: int = Field(2, ge=1, description="Convergence exponent")
    g: int = Field(1, ge=0, description="Genus")
    ymax: Optional[float] = Field(None, description="Truncation height |Im rho| <= ymax")
    density: Optional[float] = Field(None, description="Asymptotic zeros per unit height in each half-plane")
    source: str = Field("", description="Provenance")

    @property
    def total_multiplicity(self) -> int:
        return sum(e.n for e in self.entries)

    def rho_array(self) -> np.ndarray:
        return np.asarray([e.rho for e in self.entries], dtype=complex)

    def mult_array(self) -> np.ndarray:
        return np.asarray([e.n for e in self.entries], dtype=float)

    def sorted_around(self, sigma: complex) -> List[DivisorEntry]:
        """Entries by increasing |Im(rho - sigma)|, conjugate partners adjacent"""
        return sorted(
            self.entries,
            key=lambda e: (round(abs(e.rho.imag - sigma.imag), 9), e.rho.imag, e.rho.real),
        )

    def to_json(self) -> dict:
        return {
            "sigma1": self.sigma1,
            "d": self.d,
            "g": self.g,
            "ymax": self.ymax,
            "density": self.density,
            "source": self.source,
            "entries": [{"re": e.rho.real, "im": e.rho.imag, "n": e.n} for e in self.entries],
        }


class SearchRegion(BaseModel):
    """Axis-parallel rectangle of the complex plane"""

    model_config = ConfigDict(frozen=True)

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    @model_validator(mode="after")
    def _proper(self) -> "SearchRegion":
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate rectangle {self.bounds}")
        return self

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        return (self.re_min, self.re_max, self.im_min, self.im_max)

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))

    def contains(self, z: complex) -> bool:
        return self.re_min <= z.real <= self.re_max and self.im_min <= z.imag <= self.im_max

    def split(self) -> Tuple["SearchRegion", "SearchRegion"]:
        """Bisect along the longer side"""
        if self.width >= self.height:
            mid = 0.5 * (self.re_min + self.re_max)
            return (
                SearchRegion(re_min=self.re_min, re_max=mid, im_min=self.im_min, im_max=self.im_max),
                SearchRegion(re_min=mid, re_max=self.re_max, im_min=self.im_min, im_max=self.im_max),
            )
        mid = 0.5 * (self.im_min + self.im_max)
        return (
            SearchRegion(re_min=self.re_min, re_max=self.re_max, im_min=self.im_min, im_max=mid),
            SearchRegion(re_min=self.re_min, re_max=self.re_max, im_min=mid, im_max=self.im_max),
        )
