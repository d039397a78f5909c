"""Pydantic schemas for series, divisors, configurations and reports"""

from .types import ComplexNumber, parse_complex, complex_pair
from .series_schemas import (
    FiniteDirichletSeries,
    StripBound,
    FrequencyTerm,
    DivisorEntry,
    Divisor,
    SearchRegion,
)
from .report_schemas import (
    PairingConfig,
    EMConfig,
    KEllSum,
    PairingResult,
    DiscrepancyPoly,
    SummationResult,
    ZeroTable,
    PrimeTerm,
    PrimeSupport,
    VerificationReport,
)

__all__ = [
    "ComplexNumber",
    "parse_complex",
    "complex_pair",
    "FiniteDirichletSeries",
    "StripBound",
    "FrequencyTerm",
    "DivisorEntry",
    "Divisor",
    "SearchRegion",
    "PairingConfig",
    "EMConfig",
    "KEllSum",
    "PairingResult",
    "DiscrepancyPoly",
    "SummationResult",
    "ZeroTable",
    "PrimeTerm",
    "PrimeSupport",
    "VerificationReport",
]
