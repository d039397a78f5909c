"""
Error hierarchy for pnlab
"""

from typing import Optional, Sequence


class PNLabError(Exception):
    """Base class for every numerical or input failure raised by pnlab"""


class InvalidSeries(PNLabError):
    """Series data violates its structural invariants"""


# ============= Evaluation =============

class NearZeroDivision(PNLabError):
    """|f(s)| fell below the evaluation floor"""

    def __init__(self, s: complex, magnitude: float):
        self.s = s
        self.magnitude = magnitude
        super().__init__(f"|f(s)| = {magnitude:.3e} at s = {s} is below the evaluation floor")


class EvaluationOverflow(PNLabError):
    """A term of the series overflowed; s lies too far left of the zero strip"""

    def __init__(self, s: complex):
        self.s = s
        super().__init__(f"series terms overflow at s = {s}")


class BudgetExceeded(PNLabError):
    """A term, sieve or panel cap was hit"""


# ============= Zero finder =============

class RegionError(PNLabError):
    """Failure tied to a rectangle of the complex plane"""

    def __init__(self, message: str, region: Optional[Sequence[float]] = None):
        self.region = tuple(region) if region is not None else None
        if self.region is not None:
            message = f"{message} [rectangle re=({self.region[0]:.6g}, {self.region[1]:.6g}), im=({self.region[2]:.6g}, {self.region[3]:.6g})]"
        super().__init__(message)


class BoundaryZero(RegionError):
    """Edges could not be nudged away from a zero"""


class PhaseJump(RegionError):
    """Argument of f jumps by more than the allowed step after max refinement"""


class MultiplicityExceeded(RegionError):
    """Zero of multiplicity above the configured cap"""


class RefinementFailure(RegionError):
    """Newton refinement did not reach the residual target"""


class InvalidLevel(PNLabError):
    """Level c = 1 has no preimages under a normalized series"""


# ============= Pairings =============

class SigmaOnDivisor(PNLabError):
    """Base point too close to (but not on) a divisor point"""


class DerivativeUnavailable(PNLabError):
    """Test function cannot supply the requested derivative or transform"""


class NotRealAnalytic(PNLabError):
    """Operation needs real coefficients"""


class NonpositiveT(PNLabError):
    """Theta distributions are evaluated on t > 0 only"""


class DivergentRegularization(PNLabError):
    """Subtracted integrand is not integrable at 0"""


class QuadratureFailure(PNLabError):
    """Adaptive quadrature did not meet its tolerance"""


# ============= Discrepancy =============

class NearPole(PNLabError):
    """Evaluation point within clearance of a divisor point"""


class NonConstantDiscrepancy(PNLabError):
    """Sampled discrepancy is not constant"""


class UnsupportedM(PNLabError):
    """Shift formulas exist for m = 1, 2 only"""


# ============= Summation =============

class OutOfRange(PNLabError):
    """Argument outside the supported range"""


class PoleAtQ(PNLabError):
    """Hurwitz parameter is a non-positive integer"""


class DecayHypothesisViolated(PNLabError):
    """Function grows too fast on vertical lines for Abel-Plana"""


class NotRamanujanClass(PNLabError):
    """Euler-MacLaurin remainder does not shrink with the order"""


# ============= Explicit formula =============

class PoleAtNonPositiveInteger(PNLabError):
    """Digamma evaluated at a pole"""


class PoleAtSigma(PNLabError):
    """Base point is a pole of the archimedean factor"""


class ParseError(PNLabError):
    """Input file could not be parsed"""


class MonotonicityError(ParseError):
    """Zero ordinates are not strictly ascending"""


class SanityGateError(ParseError):
    """First zero ordinate outside the expected window"""
