"""
Evaluation of finite Dirichlet series f(s) = 1 + sum a_n exp(-lambda_n s)
"""

import logging
import math
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from config import settings
from schemas import Divisor, DivisorEntry, FiniteDirichletSeries, StripBound

from .exceptions import EvaluationOverflow, NearZeroDivision

logger = logging.getLogger(__name__)


def _terms(f: FiniteDirichletSeries, s: complex) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return f.coeff_array() * np.exp(-f.lambda_array() * complex(s))


def _fsum_complex(values, s: complex) -> complex:
    values = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(values)):
        raise EvaluationOverflow(complex(s))
    return complex(math.fsum(values.real), math.fsum(values.imag))


def eval_series(f: FiniteDirichletSeries, s: complex) -> complex:
    """f(s) with exactly rounded (fsum) accumulation of the terms"""
    terms = _terms(f, s)
    return _fsum_complex(np.concatenate(([1.0 + 0j], terms)), s)


def eval_derivative(f: FiniteDirichletSeries, s: complex, order: int = 1) -> complex:
    """k-th derivative sum (-lambda_n)^k a_n exp(-lambda_n s)"""
    with np.errstate(over="ignore", invalid="ignore"):
        terms = _terms(f, s) * (-f.lambda_array()) ** order
    return _fsum_complex(terms, s)


def eval_many(f: FiniteDirichletSeries, s: np.ndarray) -> np.ndarray:
    """Vectorized f(s) over an array of points (pairwise numpy summation)"""
    s = np.asarray(s, dtype=complex)
    lam = f.lambda_array()
    a = f.coeff_array()
    return 1.0 + np.exp(-np.multiply.outer(s, lam)) @ a


def eval_many_derivative(f: FiniteDirichletSeries, s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=complex)
    lam = f.lambda_array()
    a = f.coeff_array()
    return np.exp(-np.multiply.outer(s, lam)) @ (-lam * a)


def log_derivative(f: FiniteDirichletSeries, s: complex, eval_floor: Optional[float] = None) -> complex:
    """f'(s)/f(s); raises NearZeroDivision when s is numerically a zero"""
    floor = settings.EVAL_FLOOR if eval_floor is None else eval_floor
    value = eval_series(f, s)
    if abs(value) <= floor:
        raise NearZeroDivision(complex(s), abs(value))
    return eval_derivative(f, s) / value


def zero_strip(f: FiniteDirichletSeries) -> StripBound:
    """
    Vertical strip [sigma_minus, sigma_plus] containing every zero

    sigma_plus solves sum |a_n| e^{-lambda_n sigma} = 1; sigma_minus solves
    |a_N| e^{-lambda_N sigma} = 1 + sum_{n<N} |a_n| e^{-lambda_n sigma}.
    Both left-hand minus right-hand sides are strictly monotone in sigma.
    """
    lam = f.lambda_array()
    mod = np.abs(f.coeff_array())

    def right_gap(sigma: float) -> float:
        return float(np.sum(mod * np.exp(-lam * sigma))) - 1.0

    def left_gap(sigma: float) -> float:
        # divided by the dominant term to stay finite for very negative sigma
        rest = 1.0 + float(np.sum(mod[:-1] * np.exp(-lam[:-1] * sigma)))
        return 1.0 - rest * math.exp(lam[-1] * sigma) / mod[-1]

    sigma_plus = _bracket_root(right_gap, decreasing=True)
    sigma_minus = _bracket_root(left_gap, decreasing=True)
    sigma_minus = min(sigma_minus, sigma_plus)
    logger.debug(f"zero strip [{sigma_minus:.6g}, {sigma_plus:.6g}] for N={f.n_terms}")
    return StripBound(sigma_minus=sigma_minus, sigma_plus=sigma_plus)


def _bracket_root(func, decreasing: bool) -> float:
    lo, hi = -1.0, 1.0
    for _ in range(200):
        if func(lo) > 0 and func(hi) < 0:
            break
        if func(lo) <= 0:
            lo *= 2.0
        if func(hi) >= 0:
            hi *= 2.0
    if func(lo) == 0:
        return lo
    if func(hi) == 0:
        return hi
    return float(brentq(func, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500))


def zero_density(f: FiniteDirichletSeries) -> float:
    """Asymptotic number of zeros per unit height in each half-plane"""
    return f.lambdas[-1] / (2 * math.pi)


def rescale_series(f: FiniteDirichletSeries, alpha: float, beta: float) -> FiniteDirichletSeries:
    """g(s) = f(alpha s + beta)"""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    lam = f.lambda_array()
    coeffs = f.coeff_array() * np.exp(-lam * beta)
    return FiniteDirichletSeries(lambdas=tuple(alpha * lam), coeffs=tuple(coeffs))


def rescale_divisor(div: Divisor, alpha: float, beta: float) -> Divisor:
    """Divisor of s -> f(alpha s + beta): rho -> (rho - beta)/alpha"""
    entries = tuple(DivisorEntry(rho=(e.rho - beta) / alpha, n=e.n) for e in div.entries)
    return Divisor(
        entries=entries,
        sigma1=(div.sigma1 - beta) / alpha,
        d=div.d,
        g=div.g,
        ymax=None if div.ymax is None else div.ymax / alpha,
        density=None if div.density is None else div.density * alpha,
        source=f"{div.source} rescaled(alpha={alpha}, beta={beta})",
    )


def shifted_level(f: FiniteDirichletSeries, c: complex) -> Tuple[FiniteDirichletSeries, complex]:
    """(f - c)/(1 - c) as a normalized series, with the scale 1 - c"""
    scale = 1.0 - complex(c)
    coeffs = f.coeff_array() / scale
    return FiniteDirichletSeries(lambdas=f.lambdas, coeffs=tuple(coeffs)), scale
