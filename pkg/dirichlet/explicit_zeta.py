"""
Riemann zeta: zero tables, prime support, the archimedean density and the
explicit formula with its c_0 constants
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np
from scipy import integrate, special

from config import settings
from schemas import PrimeSupport, PrimeTerm, VerificationReport, ZeroTable

from .exceptions import BudgetExceeded, DerivativeUnavailable, NonpositiveT, PoleAtSigma, QuadratureFailure
from .loaders import read_zero_table
from .special import EULER_GAMMA, digamma
from .test_functions import Gaussian, quad_complex

logger = logging.getLogger(__name__)

LOG_PI = math.log(math.pi)
# |phi_hat| below this is treated as zero
TRANSFORM_FLOOR = 1e-16


def load_zero_table(path) -> ZeroTable:
    return read_zero_table(path)


# ============= Primes =============

def _sieve(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.nonzero(is_prime)[0]


def prime_support(T: float) -> PrimeSupport:
    """Prime powers p^k with k log p <= T, weight log p = Lambda(p^k)"""
    if T <= 0:
        raise ValueError("T must be positive")
    if T > settings.PRIME_TMAX:
        raise BudgetExceeded(f"T={T} exceeds PRIME_TMAX={settings.PRIME_TMAX}")
    limit = int(math.floor(math.exp(T) + 1e-9))
    if limit > settings.SIEVE_CAP:
        raise BudgetExceeded(f"sieve up to {limit} exceeds SIEVE_CAP={settings.SIEVE_CAP}")
    terms = []
    slack = 1e-12 * max(1.0, T)
    for p in _sieve(limit) if limit >= 2 else []:
        p = int(p)
        log_p = math.log(p)
        k, power = 1, p
        while k * log_p <= T + slack:
            terms.append(PrimeTerm(position=k * log_p, weight=log_p, n=power))
            k += 1
            power *= p
    terms.sort(key=lambda term: term.position)
    logger.debug(f"prime support up to T={T}: {len(terms)} prime powers")
    return PrimeSupport(terms=tuple(terms), T=T)


# ============= Archimedean side =============

def _psi_scalar(t: float) -> float:
    return -LOG_PI + digamma(0.25 + 0.5j * t).real


def archimedean_density(t):
    """Psi(t) = -log pi + Re digamma(1/4 + i t/2)"""
    arr = np.asarray(t, dtype=float)
    out = np.vectorize(_psi_scalar, otypes=[float])(arr)
    return float(out) if out.ndim == 0 else out


def _transform_cutoff(phi: Gaussian) -> float:
    peak = abs(phi.amplitude) * phi.s * math.sqrt(2 * math.pi)
    if peak <= TRANSFORM_FLOOR:
        return 0.0
    return math.sqrt(2 * math.log(peak / TRANSFORM_FLOOR)) / phi.s


def weil_functional(phi: Gaussian) -> complex:
    """
    (1/2 pi) int Psi(t) phi_hat(t) dt; phi_hat = A e^{-s^2 t^2/2} e^{-i mu t} is
    split into cosine and sine weighted quadratures on [-t_max, t_max]
    """
    if not isinstance(phi, Gaussian):
        raise DerivativeUnavailable("the Weil functional is implemented for gaussian test functions")
    t_max = _transform_cutoff(phi)
    if t_max == 0:
        return 0j
    envelope_scale = phi.amplitude * phi.s * math.sqrt(2 * math.pi)

    def envelope(t: float) -> float:
        return _psi_scalar(t) * envelope_scale * math.exp(-0.5 * (phi.s * t) ** 2)

    limit = settings.QUAD_LIMIT
    try:
        if phi.mu == 0:
            re, _ = integrate.quad(envelope, -t_max, t_max, limit=limit, epsabs=1e-14, epsrel=1e-12)
            im = 0.0
        else:
            re, _ = integrate.quad(envelope, -t_max, t_max, weight="cos", wvar=phi.mu, limit=limit, epsabs=1e-14)
            im, _ = integrate.quad(envelope, -t_max, t_max, weight="sin", wvar=phi.mu, limit=limit, epsabs=1e-14)
            im = -im
    except Exception as e:
        raise QuadratureFailure(f"Weil functional quadrature failed: {e}") from e
    return complex(re, im) / (2 * math.pi)


# ============= Explicit formula =============

def zero_tail_budget(phi: Gaussian, gamma_max: float) -> float:
    """
    sum_{|gamma| > gamma_max} |phi_hat(gamma)| with the zero density
    (log(y/2 pi) + 1)/(2 pi) and the Gaussian tail A pi erfc(s gamma_max / sqrt 2)
    """
    density = (math.log(max(gamma_max, 2 * math.pi) / (2 * math.pi)) + 1) / (2 * math.pi)
    return 2 * density * abs(phi.amplitude) * math.pi * float(special.erfc(phi.s * gamma_max / math.sqrt(2)))


def prime_tail_budget(phi: Gaussian, T: float) -> float:
    """Twice int_T^inf e^{u/2} (|phi(u)| + |phi(-u)|) du, the prime-number-theorem weight"""
    hi = abs(phi.mu) + 40 * phi.s
    if hi <= T:
        return 0.0
    value, _ = quad_complex(lambda u: math.exp(u / 2) * (abs(float(phi(u))) + abs(float(phi(-u)))), T, hi)
    return 2 * value.real


def explicit_formula_check(
    phi: Gaussian,
    zt: ZeroTable,
    T: float,
    tol: float = 1e-3,
) -> VerificationReport:
    """
    sum_gamma phi_hat(+-gamma) = phi_hat(i/2) + phi_hat(-i/2) + W(phi)
                                 - sum (log p) p^{-k/2} (phi(k log p) + phi(-k log p))
    """
    gammas = np.asarray(zt.ordinates, dtype=float)
    lhs = complex(np.sum(phi.transform(gammas) + phi.transform(-gammas)))

    poles = complex(phi.transform(0.5j) + phi.transform(-0.5j))
    archimedean = weil_functional(phi)
    support = prime_support(T)
    prime_sum = math.fsum(
        term.weight * term.n ** -0.5 * (float(phi(term.position)) + float(phi(-term.position)))
        for term in support.terms
    )
    rhs = poles + archimedean - prime_sum

    zero_tail = zero_tail_budget(phi, float(gammas[-1]))
    prime_tail = prime_tail_budget(phi, T)
    logger.info(
        f"Explicit formula with {len(gammas)} zeros, T={T}: lhs={lhs.real:.8f}, rhs={rhs.real:.8f}, "
        f"zero tail {zero_tail:.2e}, prime tail {prime_tail:.2e}"
    )
    return VerificationReport.build(
        name="explicit-formula",
        lhs=lhs,
        rhs=rhs,
        budget=zero_tail + prime_tail,
        tol=tol,
        inputs={"phi": phi.describe(), "zeros": len(gammas), "zero_source": zt.source, "T": T},
        details={
            "poles": [poles.real, poles.imag],
            "archimedean": [archimedean.real, archimedean.imag],
            "primes": prime_sum,
            "prime_terms": len(support.terms),
            "zero_tail_budget": zero_tail,
            "prime_tail_budget": prime_tail,
            "assumptions": list(zt.assumptions),
        },
    )


# ============= c_0 constants =============

def trivial_zero_kernel(t, beta: float = 0.5):
    """
    W_0(t) of the trivial zeros -2n - beta and the pole 1 - beta:
    -e^{(1-beta)|t|} + e^{-(2+beta)|t|}/(1 - e^{-2|t|})
    """
    a = np.abs(np.asarray(t, dtype=float))
    if np.any(a == 0):
        raise NonpositiveT("W_0 is singular at t = 0")
    out = -np.exp((1 - beta) * a) - np.exp(-(2 + beta) * a) / np.expm1(-2 * a)
    return float(out) if out.ndim == 0 else out


def _even_laplace(phi: Gaussian, eta: complex) -> complex:
    """int_0^inf e^{eta t} (phi(t) + phi(-t)) dt"""
    return phi.laplace_from(eta) + phi.reflected().laplace_from(eta)


def _trivial_tower(phi: Gaussian, beta: float) -> complex:
    """sum_n int_0^inf (phi_e(t) - phi_e(0)) e^{-(2n+beta)t} dt in closed form over n"""
    phi_e0 = 2 * float(phi(0.0))

    def integrand(t: float) -> float:
        if t < 1e-12:
            return 0.0
        phi_e = float(phi(t)) + float(phi(-t))
        return (phi_e - phi_e0) * math.exp(-(2 + beta) * t) / -math.expm1(-2 * t)

    split = abs(phi.mu) + 12 * phi.s
    head, _ = quad_complex(integrand, 0.0, split)
    tail, _ = quad_complex(integrand, split, math.inf)
    return head + tail


def c0_estimates(zt: ZeroTable, beta: float, phis: Sequence[Gaussian], T: float) -> List[float]:
    """
    c_0(zeta, beta) from 2 c_0 phi(0) = zero side + sum Lambda(n) n^{-beta} (phi(log n) + phi(-log n)),
    one estimate per test function
    """
    support = prime_support(T)
    gammas = np.asarray(zt.ordinates, dtype=float)
    estimates = []
    for phi in phis:
        phi0 = float(phi(0.0))
        if abs(phi0) < 1e-12:
            raise ValueError(f"{phi!r} vanishes at 0 and cannot isolate c_0")
        phi_e0 = 2 * phi0

        zero_side = 0j
        for gamma in np.concatenate((gammas, -gammas)):
            eta = complex(0.5 - beta, gamma)
            zero_side += phi_e0 / eta + _even_laplace(phi, eta)
        # the pole at 1 enters with multiplicity -1
        eta = complex(1 - beta, 0)
        zero_side -= phi_e0 / eta + _even_laplace(phi, eta)
        zero_side += _trivial_tower(phi, beta)

        prime_side = math.fsum(
            term.weight * term.n ** (-beta) * (float(phi(term.position)) + float(phi(-term.position)))
            for term in support.terms
        )
        estimates.append(((zero_side.real + prime_side) / (2 * phi0)))
    logger.debug(f"c0(zeta, {beta}) estimates {estimates}")
    return estimates


def extract_c0(
    zt: ZeroTable,
    beta: float,
    phis: Optional[Sequence[Gaussian]] = None,
    T: float = 8.0,
) -> float:
    """Mean of c0_estimates over centered gaussians"""
    phis = phis or [Gaussian(0.0, s) for s in (0.4, 0.5, 0.6)]
    return float(np.mean(c0_estimates(zt, beta, phis, T)))


def c0_chi0(sigma: complex) -> complex:
    """c_0 of pi^{-s/2} Gamma(s/2): (log pi)/2 - digamma(sigma/2)/2"""
    sigma = complex(sigma)
    half = sigma / 2
    if abs(half.imag) < 1e-12 and half.real <= 0 and abs(half.real - round(half.real)) < 1e-12:
        raise PoleAtSigma(f"sigma={sigma} is a pole of the archimedean factor")
    return LOG_PI / 2 - digamma(half) / 2


def c0_zeta_reference(beta: float) -> float:
    """Closed forms c_0(zeta, 0) = -log 2 pi and c_0(zeta, 1/2) = -zeta'(1/2)/zeta(1/2)"""
    if beta == 0:
        return -math.log(2 * math.pi)
    if beta == 0.5:
        return -LOG_PI / 2 - EULER_GAMMA / 2 - math.pi / 4 - 1.5 * math.log(2)
    raise ValueError("closed form known for beta in {0, 1/2}")
