"""
Digamma and the integral representations of Gauss and Euler
"""

import cmath
import logging
import math

import numpy as np
from scipy import integrate

from config import settings

from .exceptions import PoleAtNonPositiveInteger, QuadratureFailure
from .summation import bernoulli

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061

# shift the argument up to this real part before the asymptotic series
ASYMPTOTIC_START = 12.0


def digamma(z: complex) -> complex:
    """psi(z) by reflection for Re z < 1/2, upward recurrence and the Bernoulli asymptotic series"""
    z = complex(z)
    if abs(z.imag) < 1e-12 and z.real <= 0 and abs(z.real - round(z.real)) < 1e-12:
        raise PoleAtNonPositiveInteger(f"digamma has a pole at {z}")
    if z.real < 0.5:
        return digamma(1 - z) - math.pi / cmath.tan(math.pi * z)
    shift = 0j
    while z.real < ASYMPTOTIC_START:
        shift -= 1 / z
        z += 1
    series = cmath.log(z) - 0.5 / z
    inv2 = 1 / (z * z)
    power = inv2
    for k in range(1, 9):
        series -= bernoulli(2 * k) / (2 * k) * power
        power *= inv2
    return series + shift


def _expm1c(w: complex) -> complex:
    if abs(w) < 1e-5:
        return w + w * w / 2 + w * w * w / 6
    return cmath.exp(w) - 1


def _bernoulli_kernel(t: float) -> float:
    """1/(1 - e^{-t}) - 1/t, series near 0"""
    if t < 1e-2:
        t2 = t * t
        return 0.5 + t / 12 - t * t2 / 720 + t * t2 * t2 / 30240
    return -1.0 / math.expm1(-t) - 1.0 / t


def _quad(func, a: float, b: float) -> tuple:
    try:
        return integrate.quad(func, a, b, limit=settings.QUAD_LIMIT, epsabs=1e-14, epsrel=1e-13)
    except Exception as e:
        raise QuadratureFailure(f"integral on [{a}, {b}] failed: {e}") from e


def gauss_digamma_integral(s: complex) -> complex:
    """
    int_0^inf (e^{-t}/t - e^{-st}/(1 - e^{-t})) dt = psi(s), Re s > 0

    On [0, 1] the integrand is rewritten as -e^{-t} expm1(-(s-1)t)/t - e^{-st} K(t)
    with K the Bernoulli kernel so that nothing cancels near t = 0; on [1, inf)
    the direct form only holds decaying exponentials.
    """
    s = complex(s)
    if s.real <= 0:
        raise ValueError("Gauss integral needs Re s > 0")

    def head(t: float) -> complex:
        if t == 0:
            return s - 1.5
        return -math.exp(-t) * _expm1c(-(s - 1) * t) / t - cmath.exp(-s * t) * _bernoulli_kernel(t)

    def tail(t: float) -> complex:
        return math.exp(-t) / t + cmath.exp(-s * t) / math.expm1(-t)

    total = 0j
    for integrand, a, b in ((head, 0.0, 1.0), (tail, 1.0, np.inf)):
        re, _ = _quad(lambda t: integrand(t).real, a, b)
        im, _ = _quad(lambda t: integrand(t).imag, a, b)
        total += complex(re, im)
    return total


def euler_gamma_integral() -> float:
    """gamma = int_0^inf (1/(1 - e^{-t}) - 1/t) e^{-t} dt"""
    head, _ = _quad(lambda t: _bernoulli_kernel(t) * math.exp(-t), 0.0, 1.0)
    tail, _ = _quad(lambda t: _bernoulli_kernel(t) * math.exp(-t), 1.0, np.inf)
    return head + tail
