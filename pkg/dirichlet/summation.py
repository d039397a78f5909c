"""
Summation formulas: Bernoulli numbers, Hurwitz zeta, Euler-MacLaurin
(finite, infinite and with a complex base point), Abel-Plana and the
Ramanujan constant
"""

import cmath
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional

import numpy as np

from schemas import EMConfig, SummationResult

from .exceptions import (
    DecayHypothesisViolated,
    DerivativeUnavailable,
    NotRamanujanClass,
    OutOfRange,
    PoleAtQ,
)
from .test_functions import Bump, Exponential, Gaussian, InversePower, TestFunction, quad_complex

logger = logging.getLogger(__name__)

BERNOULLI_MAX = 120
TWO_PI = 2 * math.pi


# ============= Bernoulli numbers =============

@lru_cache(maxsize=None)
def _bernoulli_table() -> List[Fraction]:
    table = [Fraction(1)]
    for n in range(1, BERNOULLI_MAX + 1):
        acc = sum(math.comb(n + 1, k) * table[k] for k in range(n))
        table.append(-acc / (n + 1))
    return table


def bernoulli_fraction(n: int) -> Fraction:
    if n < 0 or n > BERNOULLI_MAX:
        raise OutOfRange(f"Bernoulli index {n} outside [0, {BERNOULLI_MAX}]")
    return _bernoulli_table()[n]


def bernoulli(n: int) -> float:
    """B_n (B_1 = -1/2), exact rational recurrence rounded to binary64"""
    return float(bernoulli_fraction(n))


def bernoulli_poly(n: int, x):
    """B_n(x) = sum C(n, k) B_k x^{n-k}"""
    x = np.asarray(x, dtype=float)
    coeffs = [math.comb(n, k) * bernoulli(k) for k in range(n + 1)]
    # highest power first for polyval
    return np.polyval(coeffs, x)


def periodic_bernoulli(n: int, t):
    """B_n({t}); Fourier series for large n where the polynomial cancels badly"""
    frac = np.mod(np.asarray(t, dtype=float), 1.0)
    if n < 8:
        return bernoulli_poly(n, frac)
    # B_n({t}) = -2 n! sum_k cos(2 pi k t - n pi/2) / (2 pi k)^n
    k = np.arange(1, 40)
    terms = np.cos(np.multiply.outer(frac, TWO_PI * k) - n * math.pi / 2) / (TWO_PI * k) ** n
    return -2 * math.factorial(n) * terms.sum(axis=-1)


# ============= Hurwitz zeta =============

def _pochhammer(s: complex, n: int) -> complex:
    out = 1 + 0j
    for j in range(n):
        out *= s + j
    return out


def hurwitz_zeta(s: complex, q: complex) -> complex:
    """
    zeta(s, q) = sum_{n>=0} (n + q)^{-s}: direct sum until |n + q| >= 30,
    then Euler-MacLaurin tail
    """
    s, q = complex(s), complex(q)
    if abs(q.imag) < 1e-14 and q.real <= 0 and abs(q.real - round(q.real)) < 1e-14:
        raise PoleAtQ(f"Hurwitz parameter q = {q} is a non-positive integer")
    if abs(s - 1) < 1e-14:
        raise OutOfRange("zeta(s, q) has a pole at s = 1")
    n_direct = 0
    while abs(n_direct + q) < 30:
        n_direct += 1
    head = [(n + q) ** (-s) for n in range(n_direct)]
    total = complex(math.fsum(h.real for h in head), math.fsum(h.imag for h in head))
    a = n_direct + q
    tail = a ** (1 - s) / (s - 1) + 0.5 * a ** (-s)
    for k in range(1, 25):
        term = bernoulli(2 * k) / math.factorial(2 * k) * _pochhammer(s, 2 * k - 1) * a ** (-s - 2 * k + 1)
        tail += term
        if abs(term) < 1e-17 * max(1.0, abs(total + tail)):
            break
    return total + tail


def k_ell_hurwitz(ell: int, sigma: complex) -> complex:
    """
    K_l(0, -sigma) = sum_{k != 0} (2 pi i k + sigma)^{-l} for the divisor of
    (1 - e^{-s})/s, l >= 2, through Hurwitz zeta
    """
    if ell < 2:
        raise ValueError("the Hurwitz form needs l >= 2; use k1_closed for l = 1")
    sigma = complex(sigma)
    if sigma == 0:
        # K_{2l}(0, 0) = -B_{2l}/(2l)!, odd orders cancel
        return complex(-bernoulli(ell) / math.factorial(ell)) if ell % 2 == 0 else 0j
    q = sigma / (2j * math.pi)
    return (2j * math.pi) ** (-ell) * (hurwitz_zeta(ell, q) + (-1) ** ell * hurwitz_zeta(ell, -q)) - 2 * sigma ** (-ell)


def k1_closed(sigma: complex) -> complex:
    """K_1(0, sigma) = sum_{k != 0} 1/(2 pi i k - sigma) = -coth(sigma/2)/2 + 1/sigma"""
    sigma = complex(sigma)
    if abs(sigma) < 1e-4:
        # series of -coth(x/2)/2 + 1/x
        return -sigma / 12 + sigma**3 / 720
    return -0.5 / cmath.tanh(sigma / 2) + 1 / sigma


# ============= Quadrature helpers =============

def extent(phi: TestFunction, tol: float = 1e-17) -> float:
    """Right end beyond which phi and its low derivatives are negligible"""
    if isinstance(phi, Bump):
        return phi.b
    if isinstance(phi, Gaussian):
        return phi.mu + phi.s * math.sqrt(2 * math.log(1 / tol)) + 2 * phi.s
    if isinstance(phi, Exponential):
        if phi.rate.real <= 0:
            raise DerivativeUnavailable("exponential without decay has no finite extent")
        return math.log(1 / tol) / phi.rate.real + 1.0
    hi = phi.support[1]
    if hi is not None:
        return float(hi)
    raise DerivativeUnavailable(f"{phi.kind} has no finite extent")


def _integral(phi: TestFunction, a: float, b: float) -> tuple:
    if math.isinf(b) and not isinstance(phi, InversePower):
        b = max(a, extent(phi))
    return quad_complex(lambda t: phi.derivative(t, 0), a, b)


def _real_if(value: complex, phi: TestFunction) -> complex:
    return complex(value.real, 0.0) if phi.is_real else value


# ============= Euler-MacLaurin =============

def _em_remainder_classical(phi: TestFunction, m: int, start: float, stop: float, tol: float) -> tuple:
    """-int_start^stop B_2m({t})/(2m)! phi^(2m)(t) dt, per unit interval"""
    fact = math.factorial(2 * m)
    total = 0j
    err = 0.0
    j = math.floor(start)
    while j < stop:
        lo, hi = max(j, start), min(j + 1, stop)
        val, e = quad_complex(
            lambda t: periodic_bernoulli(2 * m, t) * phi.derivative(t, 2 * m) / fact, lo, hi, tol
        )
        total -= val
        err += e
        j += 1
    return total, err


def em_finite(phi: TestFunction, N: int, cfg: Optional[EMConfig] = None) -> SummationResult:
    """sum_{n=0}^N phi(n) through Euler-MacLaurin of order m"""
    cfg = cfg or EMConfig()
    m = cfg.m
    if 2 * m > phi.max_derivative_order:
        raise DerivativeUnavailable(f"{phi.kind} cannot supply order {2 * m}")
    integral, err = _integral(phi, 0.0, float(N))
    value = integral + 0.5 * (complex(phi(0.0)) + complex(phi(float(N))))
    for l in range(1, m + 1):
        value += bernoulli(2 * l) / math.factorial(2 * l) * (
            complex(phi.derivative(float(N), 2 * l - 1)) - complex(phi.derivative(0.0, 2 * l - 1))
        )
    remainder, r_err = _em_remainder_classical(phi, m, 0.0, float(N), cfg.remainder_quad_tol)
    value += remainder
    return SummationResult(value=_real_if(value, phi), remainder_bound=err + r_err, terms_used=N + 1)


def periodic_kernel(order: int, sigma: complex, x) -> np.ndarray:
    """
    P_m(x, sigma) = sum_{k != 0} e^{2 pi i k x}/(2 pi i k - sigma)^m for x in [0, 1)

    m-1 sigma-derivatives of -(e^{sigma x}/(e^sigma - 1) - 1/sigma), taken by a
    trapezoid Cauchy integral on a circle inside |z| < 2 pi.
    """
    sigma = complex(sigma)
    x = np.mod(np.asarray(x, dtype=float), 1.0)
    radius = 0.5 * (TWO_PI - abs(sigma))
    if abs(radius - abs(sigma)) < 0.2:
        radius *= 0.8
    n_nodes = 96
    theta = TWO_PI * np.arange(n_nodes) / n_nodes
    z = sigma + radius * np.exp(1j * theta)
    h = np.exp(np.multiply.outer(x, z)) / np.expm1(z) - 1.0 / z
    weights = np.exp(-1j * (order - 1) * theta) / (n_nodes * radius ** (order - 1))
    return -(h @ weights)


def em_infinite(phi: TestFunction, cfg: Optional[EMConfig] = None) -> SummationResult:
    """sum_{n>=0} phi(n); cfg.sigma != 0 selects the Hurwitz-generalized coefficients"""
    cfg = cfg or EMConfig()
    if cfg.sigma != 0:
        return _em_infinite_sigma(phi, cfg)
    m = cfg.m
    if 2 * m > phi.max_derivative_order:
        raise DerivativeUnavailable(f"{phi.kind} cannot supply order {2 * m}")
    integral, err = _integral(phi, 0.0, math.inf)
    value = 0.5 * complex(phi(0.0)) + integral
    for l in range(1, m + 1):
        value -= bernoulli(2 * l) / math.factorial(2 * l) * complex(phi.derivative(0.0, 2 * l - 1))
    remainder, r_err = _em_remainder_classical(phi, m, 0.0, _remainder_extent(phi, 2 * m), cfg.remainder_quad_tol)
    value += remainder
    return SummationResult(value=_real_if(value, phi), remainder_bound=err + r_err, terms_used=0)


def _remainder_extent(phi: TestFunction, order: int, tol: float = 1e-16) -> float:
    if isinstance(phi, InversePower):
        # |phi^(order)| ~ (order)! t^{-p-order}
        return min(1e4, math.exp((math.lgamma(order + phi.p) - math.log(tol)) / (phi.p + order)))
    return extent(phi)


def _em_infinite_sigma(phi: TestFunction, cfg: EMConfig) -> SummationResult:
    """
    sum phi(n) = phi(0)/2 + int phi - sum_r L_r(sigma) phi^(r)(0)
                 + (-1)^M int_0^inf P_M(t, sigma) sum_r C(M, r) sigma^{M-r} phi^(r)(t) dt
    with M = 2m and L_r = -sum_{i=r+1}^M (-1)^i C(i-1, r) sigma^{i-1-r} K_i(0, sigma)
    """
    sigma = complex(cfg.sigma)
    order = 2 * cfg.m
    if order > phi.max_derivative_order:
        raise DerivativeUnavailable(f"{phi.kind} cannot supply order {order}")
    kernels = {1: k1_closed(sigma)}
    for i in range(2, order + 1):
        kernels[i] = k_ell_hurwitz(i, -sigma)
    integral, err = _integral(phi, 0.0, math.inf)
    value = 0.5 * complex(phi(0.0)) + integral
    for r in range(order):
        L_r = -sum((-1) ** i * math.comb(i - 1, r) * sigma ** (i - 1 - r) * kernels[i] for i in range(r + 1, order + 1))
        value -= L_r * complex(phi.derivative(0.0, r))

    binom = [math.comb(order, r) * sigma ** (order - r) for r in range(order + 1)]

    def integrand(t):
        jet = sum(binom[r] * complex(phi.derivative(t, r)) for r in range(order + 1))
        return complex(periodic_kernel(order, sigma, t)) * jet

    stop = _remainder_extent(phi, order)
    remainder = 0j
    r_err = 0.0
    j = 0
    while j < stop:
        val, e = quad_complex(integrand, j, min(j + 1, stop), cfg.remainder_quad_tol)
        remainder += val
        r_err += e
        j += 1
    value += (-1) ** order * remainder
    return SummationResult(value=_real_if(value, phi), remainder_bound=err + r_err, terms_used=0)


# ============= Abel-Plana =============

def check_decay_hypothesis(phi: TestFunction) -> None:
    """phi -> 0 along the real axis and |phi(iy)| e^{-2 pi y} -> 0"""
    on_axis = [abs(complex(phi.analytic(x))) for x in (10.0, 20.0)]
    if not on_axis[1] <= on_axis[0] + 1e-300:
        raise DecayHypothesisViolated(f"|phi(x)| does not decrease on the real axis: {on_axis}")
    vertical = []
    for y in (10.0, 20.0, 40.0):
        with np.errstate(over="ignore"):
            mag = max(abs(complex(phi.analytic(1j * y))), abs(complex(phi.analytic(-1j * y))))
        vertical.append(math.log(mag) - TWO_PI * y if mag > 0 else -math.inf)
    if not (vertical[2] < vertical[1] < vertical[0] or vertical[2] == -math.inf):
        raise DecayHypothesisViolated(
            f"phi grows like exp(2 pi |y|) or faster on the imaginary axis (log-ratios {vertical})"
        )


def abel_plana(phi: TestFunction) -> SummationResult:
    """sum_{n>=0} phi(n) = int phi + phi(0)/2 + i int_0^inf (phi(it) - phi(-it))/(e^{2 pi t} - 1) dt"""
    check_decay_hypothesis(phi)
    integral, err = quad_complex(lambda t: complex(phi.analytic(t)), 0.0, math.inf)
    slope0 = complex(phi.derivative(0.0, 1)) if phi.max_derivative_order >= 1 else None

    def vertical(t: float) -> complex:
        if t < 1e-8:
            if slope0 is None:
                raise DerivativeUnavailable("Abel-Plana needs phi'(0)")
            return -slope0 / math.pi
        # 1/(e^{2 pi t} - 1) written with decaying exponentials only
        weight = math.exp(-TWO_PI * t) / -math.expm1(-TWO_PI * t)
        if weight == 0.0:
            return 0j
        diff = complex(phi.analytic(1j * t)) - complex(phi.analytic(-1j * t))
        return 1j * diff * weight

    correction, c_err = quad_complex(vertical, 0.0, math.inf)
    value = integral + 0.5 * complex(phi.analytic(0.0)) + correction
    return SummationResult(value=value, remainder_bound=err + c_err, terms_used=0)


# ============= Ramanujan constant =============

def _remainder_bound(phi: TestFunction, m: int) -> float:
    """|B_2m|/(2m)! int_0^inf |phi^(2m)|, a bound of the order-m remainder"""
    stop = _remainder_extent(phi, 2 * m)
    val, _ = quad_complex(lambda t: abs(complex(phi.derivative(t, 2 * m))), 0.0, stop)
    return abs(bernoulli(2 * m)) / math.factorial(2 * m) * val.real


def is_ramanujan_class(phi: TestFunction, orders=(2, 4, 6)) -> bool:
    bounds = [_remainder_bound(phi, m) for m in orders]
    logger.debug(f"Euler-MacLaurin remainder bounds {dict(zip(orders, bounds))}")
    return all(b2 < b1 or b2 < 1e-15 for b1, b2 in zip(bounds, bounds[1:]))


def ramanujan_constant(phi: TestFunction, shift: int = 10) -> SummationResult:
    """
    RC(phi) = -phi(0)/2 - sum_l B_2l/(2l)! phi^(2l-1)(0), evaluated as
    sum_{n=1}^{shift} phi(n) - int_0^shift phi + RC(phi(. + shift)) with the
    shifted Bernoulli series cut at its smallest term
    """
    shifted = phi.shifted(float(shift))
    if not is_ramanujan_class(shifted):
        raise NotRamanujanClass(f"Euler-MacLaurin remainder of {phi!r} does not shrink with the order")

    head = sum(complex(phi(float(n))) for n in range(1, shift + 1))
    integral, err = _integral(phi, 0.0, float(shift))

    max_l = min(BERNOULLI_MAX, shifted.max_derivative_order + 1) // 2
    terms = [
        bernoulli(2 * l) / math.factorial(2 * l) * complex(shifted.derivative(0.0, 2 * l - 1))
        for l in range(1, max_l + 1)
    ]
    smallest = min(range(len(terms)), key=lambda i: abs(terms[i]))
    tail = -0.5 * complex(shifted(0.0)) - sum(terms[:smallest])
    value = head - integral + tail
    logger.debug(f"Ramanujan series cut at 2l = {2 * (smallest + 1)}, first omitted term {abs(terms[smallest]):.2e}")
    return SummationResult(
        value=_real_if(value, phi),
        remainder_bound=abs(terms[smallest]) + err,
        terms_used=smallest,
    )
