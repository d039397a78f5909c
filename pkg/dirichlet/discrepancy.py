"""
Hadamard interpolation G(s, sigma) and the discrepancy polynomial P_f = G - f'/f
"""

import cmath
import logging
from typing import List, Optional, Tuple

import numpy as np

from config import settings
from schemas import DiscrepancyPoly, Divisor, FiniteDirichletSeries

from .exceptions import NearPole, NonConstantDiscrepancy, SigmaOnDivisor, UnsupportedM
from .series_core import eval_derivative, eval_series, log_derivative

logger = logging.getLogger(__name__)

N_SAMPLES = 8


def split_at_base(div: Divisor, sigma: complex, ymax: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    (rho, n) arrays ordered around sigma with |Im rho| <= ymax, plus the
    multiplicity of an entry sitting on sigma (removed from the arrays)

    An entry within SIGMA_SNAP_TOL of sigma is snapped onto it; one closer than
    SIGMA_CLEARANCE but not snapped raises SigmaOnDivisor.
    """
    sigma = complex(sigma)
    entries = div.sorted_around(sigma)
    if ymax is not None:
        entries = [e for e in entries if abs(e.rho.imag) <= ymax]
    rho = np.asarray([e.rho for e in entries], dtype=complex)
    n = np.asarray([e.n for e in entries], dtype=float)
    if rho.size == 0:
        return rho, n, 0
    dist = np.abs(rho - sigma)
    snapped = dist <= settings.SIGMA_SNAP_TOL
    if np.any((dist < settings.SIGMA_CLEARANCE) & ~snapped):
        raise SigmaOnDivisor(f"sigma={sigma} lies within {settings.SIGMA_CLEARANCE} of a divisor point")
    n_sigma = int(round(n[snapped].sum()))
    return rho[~snapped], n[~snapped], n_sigma


def _top_height(rho: np.ndarray) -> float:
    return float(np.max(np.abs(rho.imag))) if rho.size else 0.0


def _tail_correction(div: Divisor, rho: np.ndarray, n: np.ndarray, sigma: complex, s: complex) -> complex:
    """
    Density estimate of sum_{|Im rho| > Y} n (1/(s - rho) + 1/(rho - sigma)),
    2 D (atan((s - x)/Y') - atan((sigma - x)/Y')) with Y' half a gap above the top zero
    """
    if div.density is None or div.ymax is None or div.d != 2 or rho.size == 0:
        return 0j
    x_bar = float(np.average(rho.real, weights=np.abs(n)))
    y_eff = _top_height(rho) + 0.5 / div.density
    return 2 * div.density * (cmath.atan((s - x_bar) / y_eff) - cmath.atan((sigma - x_bar) / y_eff))


def g_interp(
    div: Divisor,
    sigma: complex,
    s: complex,
    ymax: Optional[float] = None,
    tail_correction: bool = False,
) -> complex:
    """
    G(s, sigma) = sum n ((s - sigma)/(rho - sigma))^{d-1} / (s - rho), which for
    d = 2 is sum n (1/(s - rho) + 1/(rho - sigma)); a snapped entry contributes
    n_sigma/(s - sigma)
    """
    s, sigma = complex(s), complex(sigma)
    rho, n, n_sigma = split_at_base(div, sigma, ymax)
    near = np.abs(s - rho) < 1e-9 if rho.size else np.array([], dtype=bool)
    if np.any(near) or (n_sigma and abs(s - sigma) < 1e-9):
        raise NearPole(f"s={s} is within 1e-9 of the divisor")
    if s == sigma:
        return 0j
    ratio = ((s - sigma) / (rho - sigma)) ** (div.d - 1)
    value = complex(np.sum(n * ratio / (s - rho)))
    if n_sigma:
        value += n_sigma / (s - sigma)
    if tail_correction:
        value += _tail_correction(div, rho, n, sigma, s)
    return value


def g_interp_tail(div: Divisor, sigma: complex, s: complex, ymax: Optional[float] = None) -> float:
    """Density bound on the truncation error of g_interp"""
    if div.density is None:
        return 0.0
    rho, _, _ = split_at_base(div, complex(sigma), ymax)
    height = ymax if ymax is not None else (div.ymax if div.ymax is not None else _top_height(rho))
    reach = max(abs(complex(s).imag), abs(complex(sigma).imag))
    gap = max(height - reach, 1.0)
    d = div.d
    return 2 * div.density * abs(complex(s) - complex(sigma)) ** (d - 1) / ((d - 1) * gap ** (d - 1))


def _sample_points(div: Divisor) -> np.ndarray:
    x = div.sigma1 + 2.0
    return x + 1j * np.linspace(-3.5, 3.5, N_SAMPLES)


def discrepancy_poly(
    f: FiniteDirichletSeries,
    div: Divisor,
    sigma: complex,
    ymax: Optional[float] = None,
    tol: Optional[float] = None,
) -> DiscrepancyPoly:
    """
    c_0 = mean of G(s, sigma) - f'/f(s) over samples on Re s = sigma_1 + 2

    Raises NonConstantDiscrepancy when the samples spread by more than tol.
    """
    tol = settings.DISCREPANCY_TOL if tol is None else tol
    sigma = complex(sigma)
    values = []
    tails = []
    for s in _sample_points(div):
        s = complex(s)
        values.append(g_interp(div, sigma, s, ymax, tail_correction=True) - log_derivative(f, s))
        tails.append(g_interp_tail(div, sigma, s, ymax))
    values = np.asarray(values)
    c0 = complex(np.mean(values))
    spread = float(np.max(np.abs(values - c0)))
    logger.debug(f"discrepancy at sigma={sigma}: c0={c0:.10g}, sample spread {spread:.2e}")
    if spread > tol:
        raise NonConstantDiscrepancy(f"G - f'/f varies by {spread:.3e} across samples (tol {tol:.1e})")
    return DiscrepancyPoly(coeffs=(c0,), sigma=sigma, sample_residual=spread, tail_budget=float(max(tails)))


def discrepancy_at_base(f: FiniteDirichletSeries, sigma: complex) -> complex:
    """
    Closed-form c_0(f, sigma) = -f'(sigma)/f(sigma); on a zero of multiplicity
    n it is -f^(n+1)(sigma) / ((n + 1) f^(n)(sigma))
    """
    sigma = complex(sigma)
    floor = settings.EVAL_FLOOR
    value = eval_series(f, sigma)
    if abs(value) > floor * max(1.0, f.l1_norm):
        return -eval_derivative(f, sigma, 1) / value
    order = 1
    while order <= settings.MULTIPLICITY_CAP:
        dn = eval_derivative(f, sigma, order)
        if abs(dn) > floor * max(1.0, f.l1_norm) * max(1.0, f.lambdas[-1]) ** order:
            return -eval_derivative(f, sigma, order + 1) / ((order + 1) * dn)
        order += 1
    raise NearPole(f"f vanishes to order above {settings.MULTIPLICITY_CAP} at {sigma}")


def shift_Q_poly(
    div: Divisor,
    sigma: complex,
    sigma_prime: complex,
    ymax: Optional[float] = None,
) -> List[complex]:
    """
    Coefficients (ascending) of the polynomial G(s, sigma) - G(s, sigma'),
    degree m - 1 with m = d - 1 in {1, 2}
    """
    m = div.d - 1
    if m not in (1, 2):
        raise UnsupportedM(f"shift polynomial implemented for m in {{1, 2}}, got m={m}")
    sigma, sigma_prime = complex(sigma), complex(sigma_prime)
    if sigma == sigma_prime:
        return [0j] * m

    def polyterm(base: complex) -> np.ndarray:
        # an entry snapped onto base drops out of its own sum
        rho, n, _ = split_at_base(div, base, ymax)
        if m == 1:
            return np.asarray([np.sum(n / (rho - base))])
        inv = 1 / (rho - base)
        const = np.sum(n * (inv - base * inv * inv))
        linear = np.sum(n * inv * inv)
        return np.asarray([const, linear])

    diff = polyterm(sigma) - polyterm(sigma_prime)
    return [complex(c) for c in diff]


# ============= Functional equation =============

def detect_functional_equation(f: FiniteDirichletSeries, tol: Optional[float] = None) -> Optional[Tuple[float, int]]:
    """
    (mu, c) with e^{mu s} f(s) = g(s), g(-s) = c g(s), when the frequencies are
    palindromic (lambda_i + lambda_{N-i} = lambda_N) and a_{N-i} = c a_i, c = a_N = +-1;
    c = 1 is forced for even N
    """
    tol = settings.FE_TOL if tol is None else tol
    exps = [0.0] + list(f.lambdas)
    coeffs = [1 + 0j] + [complex(a) for a in f.coeffs]
    N = len(exps) - 1
    top = exps[-1]
    c = coeffs[-1]
    if abs(c.imag) > tol or abs(abs(c.real) - 1) > tol:
        return None
    c_sign = 1 if c.real > 0 else -1
    if N % 2 == 0 and c_sign == -1:
        return None
    for i in range(N + 1):
        if abs(exps[i] + exps[N - i] - top) > tol * max(1.0, top):
            return None
        if abs(coeffs[N - i] - c_sign * coeffs[i]) > tol:
            return None
    return top / 2, c_sign


def functional_equation_residual(f: FiniteDirichletSeries, mu: float, c: int, s: complex) -> float:
    """|g(-s) - c g(s)| for g(s) = e^{mu s} f(s)"""
    s = complex(s)
    g_plus = cmath.exp(mu * s) * eval_series(f, s)
    g_minus = cmath.exp(-mu * s) * eval_series(f, -s)
    return abs(g_minus - c * g_plus)


def fe_c0_check(f: FiniteDirichletSeries, mu: float) -> complex:
    """c_0(f, 0) - mu, zero for a series satisfying the functional equation"""
    return discrepancy_at_base(f, 0j) - mu


