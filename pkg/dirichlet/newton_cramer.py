"""
Newton-Cramer distribution W(f, sigma, d') and its pairings

Zero side:   <W, phi> = sum_rho n_rho [phi(0)/(rho - sigma) + int_0^inf e^{rho t} phi(t) dt]
Atomic side: c_0 phi(0) + sum_k <lambda, k> b_k phi(<lambda, k>)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from config import settings
from schemas import Divisor, FiniteDirichletSeries, KEllSum, PairingConfig, PairingResult

from .discrepancy import discrepancy_at_base, split_at_base
from .exceptions import (
    DerivativeUnavailable,
    DivergentRegularization,
    NonpositiveT,
    NotRealAnalytic,
)
from .freq_expansion import expand
from .series_core import rescale_divisor, rescale_series
from .test_functions import Exponential, Gaussian, TestFunction, quad_complex

logger = logging.getLogger(__name__)

# Gaussians are integrated over mu +- GAUSS_WIDTH * s
GAUSS_WIDTH = 12.0
TAIL_MAX_ORDER = 12


# ============= K_l sums =============

def _height(div: Divisor, ymax: Optional[float]) -> Optional[float]:
    if ymax is None:
        return div.ymax
    return ymax if div.ymax is None else min(ymax, div.ymax)


def k_ell_tail_bound(div: Divisor, ell: int, sigma: complex, t: float, height: Optional[float]) -> float:
    """2 D (Y - |Im sigma|)^{1-l}/(l-1) max(1, e^{(sigma_1 - Re sigma) t})"""
    if div.density is None or height is None or ell < 2:
        return 0.0
    gap = max(height - abs(complex(sigma).imag), 1.0)
    growth = max(1.0, math.exp((div.sigma1 - complex(sigma).real) * t))
    return 2 * div.density * gap ** (1 - ell) / (ell - 1) * growth


def _k_ell_tail_estimate(div: Divisor, rho: np.ndarray, n: np.ndarray, ell: int, sigma: complex) -> complex:
    """
    Density estimate of the t = 0 tail: D/(i(l-1)) ((a + iY')^{1-l} - (a - iY')^{1-l}),
    a = mean Re rho - sigma, Y' half a gap above the top zero
    """
    if div.density is None or div.ymax is None or rho.size == 0:
        return 0j
    a = float(np.average(rho.real, weights=np.abs(n))) - sigma
    y_eff = float(np.max(np.abs(rho.imag))) + 0.5 / div.density
    return div.density / (1j * (ell - 1)) * ((a + 1j * y_eff) ** (1 - ell) - (a - 1j * y_eff) ** (1 - ell))


def k_ell_sum(div: Divisor, ell: int, sigma: complex, t: float, ymax: Optional[float] = None) -> KEllSum:
    """
    K_l(t, sigma) = sum n (rho - sigma)^{-l} e^{(rho - sigma) t} (+ n_sigma t^l/l!)

    At t = 0 the truncated sum is completed by a density estimate of the tail.
    """
    if ell < div.d:
        raise ValueError(f"l={ell} is below the convergence exponent d={div.d}")
    if t < 0:
        raise ValueError("t must be nonnegative")
    sigma = complex(sigma)
    rho, n, n_sigma = split_at_base(div, sigma, ymax)
    a = rho - sigma
    value = complex(np.sum(n * a ** (-ell) * np.exp(a * t)))
    if n_sigma:
        value += n_sigma * t**ell / math.factorial(ell)
    if t == 0:
        value += _k_ell_tail_estimate(div, rho, n, ell, sigma)
    height = _height(div, ymax)
    return KEllSum(
        value=value,
        tail_bound=k_ell_tail_bound(div, ell, sigma, t, height),
        terms=int(rho.size) + (1 if n_sigma else 0),
    )


# ============= Zero side =============

def pairing_interval(phi: TestFunction) -> Tuple[float, float]:
    """Part of [0, inf) where phi is numerically supported"""
    if isinstance(phi, Gaussian):
        return max(0.0, phi.mu - GAUSS_WIDTH * phi.s), max(0.0, phi.mu + GAUSS_WIDTH * phi.s)
    if isinstance(phi, Exponential):
        if phi.rate.real <= 0:
            raise DerivativeUnavailable("exponential test function must decay")
        return 0.0, 40.0 / phi.rate.real
    lo, hi = phi.support
    if hi is None:
        raise DerivativeUnavailable(f"{phi.kind} is not pairable: needs compact support or gaussian decay")
    return max(0.0, lo if lo is not None else 0.0), max(0.0, hi)


def _check_pairable(phi: TestFunction, d_prime: int) -> None:
    if not isinstance(phi, (Gaussian, Exponential)):
        lo, hi = phi.support
        if lo is None or hi is None:
            raise DerivativeUnavailable(f"{phi.kind} is not pairable: needs compact support or gaussian decay")
    if phi.max_derivative_order < d_prime:
        raise DerivativeUnavailable(f"{phi.kind} supplies {phi.max_derivative_order} derivatives, d'={d_prime}")


def _phi0(phi: TestFunction) -> complex:
    if phi.vanishes_at_zero():
        return 0j
    return complex(phi(0.0))


def zero_tail_budget(div: Divisor, phi: TestFunction, sigma: complex, height: Optional[float]) -> float:
    """
    Bound on sum_{|Im rho| > Y} |n (phi(0)/(rho - sigma) + I(rho))| from k-fold
    integration by parts of I(rho), minimized over k
    """
    if div.density is None or height is None:
        return 0.0
    sigma = complex(sigma)
    D, Y = div.density, max(height, 1.0)
    gap = max(height - abs(sigma.imag), 1.0)
    lo, hi = pairing_interval(phi)
    phi0 = abs(_phi0(phi))
    base = 2 * D * abs(sigma) * phi0 / gap
    jets = [0.0] + [
        0.0 if phi.vanishes_at_zero() else abs(complex(phi.derivative(0.0, j)))
        for j in range(1, min(phi.max_derivative_order, TAIL_MAX_ORDER))
    ]
    best = math.inf
    for k in range(2, min(phi.max_derivative_order, TAIL_MAX_ORDER) + 1):
        moment, _ = quad_complex(
            lambda t, k=k: math.exp(div.sigma1 * t) * abs(complex(phi.derivative(t, k))), lo, hi, tol=1e-14
        )
        boundary = sum(jets[j] * 2 * D * Y ** (-j) / j for j in range(1, k))
        remainder = moment.real * 2 * D * Y ** (1 - k) / (k - 1)
        best = min(best, base + boundary + remainder)
    return best


def _termwise(rho: np.ndarray, n: np.ndarray, n_sigma: int, phi: TestFunction, sigma: complex) -> complex:
    phi0 = _phi0(phi)
    with ThreadPoolExecutor(max_workers=settings.THREADS) as pool:
        laplace = np.fromiter(pool.map(phi.laplace_from, rho), dtype=complex, count=rho.size)
    # numpy sum is a pairwise reduction over the fixed ordering
    value = complex(np.sum(n * (phi0 / (rho - sigma) + laplace)))
    if n_sigma:
        value += n_sigma * phi.laplace_from(sigma)
    return value


def _quadrature(
    rho: np.ndarray, n: np.ndarray, n_sigma: int, phi: TestFunction, sigma: complex, d_prime: int, tol: float
) -> Tuple[complex, float]:
    """int_0^inf (K_d'(t) - taylor)(-1)^d' e^{-sigma t} (d/dt)^d' (e^{sigma t} phi) dt"""
    a = rho - sigma
    scale = n * a ** (-d_prime)
    binom = [math.comb(d_prime, r) * sigma ** (d_prime - r) for r in range(d_prime + 1)]
    fact = math.factorial(d_prime)

    def kernel(t: float) -> complex:
        at = a * t
        # e^{at} - sum_{l <= d'-2} (at)^l / l!
        diff = np.expm1(at)
        term = np.ones_like(at)
        for l in range(1, d_prime - 1):
            term = term * at / l
            diff = diff - term
        value = complex(np.sum(scale * diff))
        if n_sigma:
            value += n_sigma * t**d_prime / fact
        return value

    def integrand(t: float) -> complex:
        jet = sum(binom[r] * complex(phi.derivative(t, r)) for r in range(d_prime + 1))
        return (-1) ** d_prime * kernel(t) * np.exp(sigma * t) * jet

    lo, hi = pairing_interval(phi)
    if hi <= lo:
        return 0j, 0.0
    return quad_complex(integrand, lo, hi, tol=tol)


def pair_zero_side(div: Divisor, phi: TestFunction, cfg: Optional[PairingConfig] = None) -> PairingResult:
    """<W(f, sigma, d'), phi> over the zeros with |Im rho| <= cfg.ymax"""
    cfg = cfg or PairingConfig()
    if cfg.d_prime < div.d:
        raise ValueError(f"d'={cfg.d_prime} is below d={div.d}")
    _check_pairable(phi, cfg.d_prime)
    sigma = complex(cfg.sigma)
    rho, n, n_sigma = split_at_base(div, sigma, cfg.ymax)

    quad_error = 0.0
    if cfg.method == "termwise":
        value = _termwise(rho, n, n_sigma, phi, sigma)
    else:
        value, quad_error = _quadrature(rho, n, n_sigma, phi, sigma, cfg.d_prime, cfg.quad_tol)

    height = _height(div, cfg.ymax)
    tail = cfg.tail_budget if cfg.tail_budget is not None else zero_tail_budget(div, phi, sigma, height)
    logger.debug(f"zero side over {rho.size} entries ({cfg.method}): {value:.12g}, tail {tail:.2e}")
    return PairingResult(
        value=value,
        tail_budget=tail,
        quad_error=quad_error,
        terms_used=int(rho.size) + (1 if n_sigma else 0),
    )


# ============= Atomic side =============

def default_T(phi: TestFunction) -> float:
    """Largest atom position where phi is not negligible"""
    if isinstance(phi, Gaussian):
        return abs(phi.mu) + GAUSS_WIDTH * phi.s
    return pairing_interval(phi)[1]


def pair_atomic_side(
    f: FiniteDirichletSeries,
    phi: TestFunction,
    c_poly: Sequence[complex] = (),
    T: Optional[float] = None,
) -> PairingResult:
    """
    sum_{<lambda, k> <= T} <lambda, k> b_k phi(<lambda, k>) + sum_j c_j (-1)^j phi^(j)(0);
    the tail budget is twice the absolute sum over (T, 1.5 T]
    """
    T = default_T(phi) if T is None else T
    value = 0j
    for j, c in enumerate(c_poly):
        if complex(c) != 0 and not phi.vanishes_at_zero():
            value += complex(c) * (-1) ** j * complex(phi.derivative(0.0, j))
    if T <= 0:
        return PairingResult(value=value)

    terms = expand(f, 1.5 * T)
    positions = np.asarray([t.value for t in terms], dtype=float)
    weights = np.asarray([t.value * complex(t.b) for t in terms], dtype=complex)
    contrib = weights * np.asarray(phi(positions), dtype=complex) if terms else np.zeros(0, dtype=complex)
    inside = positions <= T * (1 + 1e-12)
    value += complex(np.sum(contrib[inside]))
    tail = 2.0 * float(np.sum(np.abs(contrib[~inside])))
    return PairingResult(value=value, tail_budget=tail, terms_used=int(inside.sum()))


# ============= Symmetric and parameterized forms =============

def pair_symmetric(
    div: Divisor,
    f: FiniteDirichletSeries,
    phi: TestFunction,
    beta: float,
    cfg: Optional[PairingConfig] = None,
    T: Optional[float] = None,
) -> Tuple[PairingResult, PairingResult]:
    """
    lhs = sum n <e^{(rho - beta)|t|}, phi> as two one-sided pairings of phi and phi(-t);
    rhs = 2 c_0 phi(0) + atoms of f(s + beta) at +-<lambda, k>
    """
    if not f.is_real:
        raise NotRealAnalytic("the symmetric formula needs real coefficients")
    cfg = cfg or PairingConfig()
    g = rescale_series(f, 1.0, beta)
    div_g = rescale_divisor(div, 1.0, beta)
    c0 = discrepancy_at_base(g, complex(cfg.sigma))

    reflected = phi.reflected()
    halves = [phi] if reflected is None else [phi, reflected]
    lhs_parts = [pair_zero_side(div_g, half, cfg) for half in halves]
    rhs_parts = [pair_atomic_side(g, half, [c0], T) for half in halves]
    if reflected is None:
        # phi(-t) vanishes on the positive axis but still carries c_0 phi(0)
        rhs_parts.append(PairingResult(value=c0 * _phi0(phi)))

    lhs = PairingResult(
        value=sum(p.value for p in lhs_parts),
        tail_budget=sum(p.tail_budget for p in lhs_parts),
        quad_error=sum(p.quad_error for p in lhs_parts),
        terms_used=sum(p.terms_used for p in lhs_parts),
    )
    rhs = PairingResult(
        value=sum(p.value for p in rhs_parts),
        tail_budget=sum(p.tail_budget for p in rhs_parts),
        terms_used=sum(p.terms_used for p in rhs_parts),
    )
    return lhs, rhs


def pair_parameterized(
    div: Divisor,
    f: FiniteDirichletSeries,
    phi: TestFunction,
    alpha: float,
    beta: float,
    cfg: Optional[PairingConfig] = None,
    T: Optional[float] = None,
) -> Tuple[PairingResult, PairingResult]:
    """Both sides of the formula for g(s) = f(alpha s + beta)"""
    cfg = cfg or PairingConfig()
    g = rescale_series(f, alpha, beta)
    div_g = rescale_divisor(div, alpha, beta)
    lhs = pair_zero_side(div_g, phi, cfg)
    rhs = pair_atomic_side(g, phi, [discrepancy_at_base(g, complex(cfg.sigma))], T)
    return lhs, rhs


# ============= Theta distributions =============

def _inverse_gamma_theta(t):
    # sum_{n >= 0} e^{-n t}
    return -1.0 / np.expm1(-np.asarray(t, dtype=float))


THETAS = {
    "inverse_gamma_shift": _inverse_gamma_theta,
}


def closed_theta(name: str, t):
    """Closed form of a theta distribution on t > 0"""
    if name not in THETAS:
        raise ValueError(f"unknown theta distribution {name!r}; known: {sorted(THETAS)}")
    arr = np.asarray(t, dtype=float)
    if np.any(arr <= 0):
        raise NonpositiveT(f"theta distributions are evaluated at t > 0, got {t}")
    out = THETAS[name](arr)
    return float(out) if out.ndim == 0 else out


def hadamard_regularized_pair(
    theta: Union[str, Callable],
    phi: TestFunction,
    sigma1: float,
    d: int,
) -> PairingResult:
    """
    int_0^inf W(t) (phi(t) - e^{-sigma_1 t} sum_{l <= d-2} psi^(l)(0) t^l / l!) dt,
    psi = e^{sigma_1 t} phi
    """
    W = (lambda t: closed_theta(theta, t)) if isinstance(theta, str) else theta
    jet = []
    for l in range(d - 1):
        jet.append(sum(math.comb(l, r) * sigma1 ** (l - r) * complex(phi.derivative(0.0, r)) for r in range(l + 1)))

    def integrand(t: float) -> complex:
        taylor = sum(c * t**l / math.factorial(l) for l, c in enumerate(jet))
        return complex(W(t)) * (complex(phi(t)) - math.exp(-sigma1 * t) * taylor)

    near, far = abs(integrand(1e-3)) * 1e-3, abs(integrand(1e-6)) * 1e-6
    if far > 0.1 * near and far > 1e-14:
        raise DivergentRegularization(
            f"t |h(t)| does not decay at 0 ({near:.3e} at 1e-3, {far:.3e} at 1e-6); raise d"
        )
    head, e1 = quad_complex(integrand, 0.0, 1.0)
    tail, e2 = quad_complex(integrand, 1.0, math.inf)
    return PairingResult(value=head + tail, quad_error=e1 + e2)
