"""
Frequency side of the Poisson-Newton formula

-log f(s) = sum_k b_k exp(-<lambda, k> s) over multi-indices k with |k| >= 1,
b_k = ((-1)^|k| / |k|) * (|k|! / prod k_j!) * prod a_j^{k_j}.
"""

import cmath
import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config import settings
from schemas import FiniteDirichletSeries, FrequencyTerm

from .exceptions import BudgetExceeded

logger = logging.getLogger(__name__)

SparseIndex = Tuple[Tuple[int, int], ...]

# |k| above which b_k is assembled in log space
LOG_SPACE_NORM = 30


def _enumerate_raw(lambdas: Sequence[float], T: float, cap: int) -> List[Tuple[float, SparseIndex]]:
    """Bounded DFS over slots; returns (value, sparse k) unsorted"""
    lam = [float(x) for x in lambdas]
    n = len(lam)
    out: List[Tuple[float, SparseIndex]] = []
    # stack entries: (next slot, partial value, partial index)
    stack: List[Tuple[int, float, SparseIndex]] = [(0, 0.0, ())]
    slack = 1e-12 * max(1.0, abs(T))
    while stack:
        slot, partial, index = stack.pop()
        if slot == n:
            if index:
                out.append((math.fsum(lam[j - 1] * c for j, c in index), index))
                if len(out) > cap:
                    raise BudgetExceeded(f"frequency enumeration exceeds {cap} terms at T={T}")
            continue
        count = 0
        value = partial
        while value <= T + slack:
            nxt = index + ((slot + 1, count),) if count else index
            stack.append((slot + 1, value, nxt))
            count += 1
            value = partial + count * lam[slot]
    return out


def enumerate_frequencies(lambdas: Sequence[float], T: float, cap: Optional[int] = None) -> List[FrequencyTerm]:
    """All k with <lambda, k> <= T, sorted by value then k; repetitions kept"""
    if T <= 0:
        raise ValueError("T must be positive")
    cap = cap or settings.TERM_CAP
    raw = _enumerate_raw(lambdas, T, cap)
    raw.sort(key=lambda item: (item[0], item[1]))
    logger.debug(f"enumerated {len(raw)} frequency terms up to T={T}")
    return [FrequencyTerm(k=k, value=value) for value, k in raw]


def _sparse(k) -> SparseIndex:
    k = tuple(k)
    if k and isinstance(k[0], (tuple, list)):
        return tuple((int(s), int(c)) for s, c in k if c)
    return tuple((j + 1, int(c)) for j, c in enumerate(k) if c)


def b_coefficient(coeffs: Sequence[complex], k) -> complex:
    """
    Closed-form b_k for a sparse ((slot, count), ...) or dense (k_1, ..., k_N) index
    """
    index = _sparse(k)
    norm = sum(c for _, c in index)
    if norm < 1:
        raise ValueError("multi-index must have |k| >= 1")
    a = [complex(c) for c in coeffs]
    if any(slot > len(a) for slot, _ in index):
        raise ValueError(f"multi-index {index} exceeds {len(a)} coefficients")
    if any(a[slot - 1] == 0 for slot, _ in index):
        return 0j

    if norm <= LOG_SPACE_NORM:
        multinomial = math.factorial(norm)
        for _, c in index:
            multinomial //= math.factorial(c)
        prod = 1 + 0j
        for slot, c in index:
            prod *= a[slot - 1] ** c
        return (-1) ** norm * multinomial / norm * prod

    # factorials overflow binary64 past 170
    log_mag = math.lgamma(norm + 1) - math.log(norm)
    phase = math.pi * norm
    for slot, c in index:
        log_mag += c * math.log(abs(a[slot - 1])) - math.lgamma(c + 1)
        phase += c * cmath.phase(a[slot - 1])
    return cmath.rect(math.exp(log_mag), math.fmod(phase, 2 * math.pi))


def expand(f: FiniteDirichletSeries, T: float, cap: Optional[int] = None) -> List[FrequencyTerm]:
    """enumerate_frequencies with b_k filled in"""
    coeffs = f.coeffs
    return [
        FrequencyTerm(k=term.k, value=term.value, b=b_coefficient(coeffs, term.k))
        for term in enumerate_frequencies(f.lambdas, T, cap)
    ]


def aggregate(terms: Iterable[FrequencyTerm], rel_tol: float = 1e-12) -> List[Tuple[float, complex]]:
    """Merge terms whose values coincide (Q-dependent frequencies) into one atom"""
    atoms: List[Tuple[float, complex]] = []
    for term in sorted(terms, key=lambda t: t.value):
        b = term.b if term.b is not None else 0j
        if atoms and abs(term.value - atoms[-1][0]) <= rel_tol * max(1.0, term.value):
            atoms[-1] = (atoms[-1][0], atoms[-1][1] + b)
        else:
            atoms.append((term.value, b))
    return atoms


def log_expansion_oracle(f: FiniteDirichletSeries, T: float, cap: Optional[int] = None) -> Dict[float, complex]:
    """
    Coefficients of -log f by truncated composition -log(1+u) = sum (-1)^m u^m / m,
    u = sum a_n X^{lambda_n}, equal exponents merged
    """
    if T <= 0:
        raise ValueError("T must be positive")
    cap = cap or settings.TERM_CAP
    slack = 1e-12 * max(1.0, T)

    def key(x: float) -> int:
        return round(x * 1e9)

    u = {key(lam): (lam, complex(a)) for lam, a in zip(f.lambdas, f.coeffs) if lam <= T + slack}
    result: Dict[int, Tuple[float, complex]] = {}
    power = dict(u)
    m = 1
    while power:
        for k, (x, c) in power.items():
            prev = result.get(k, (x, 0j))
            result[k] = (x, prev[1] + (-1) ** m * c / m)
        nxt: Dict[int, Tuple[float, complex]] = {}
        for x1, c1 in power.values():
            for x2, c2 in u.values():
                x = x1 + x2
                if x > T + slack:
                    continue
                k = key(x)
                prev = nxt.get(k, (x, 0j))
                nxt[k] = (x, prev[1] + c1 * c2)
        if len(nxt) > cap:
            raise BudgetExceeded(f"log expansion exceeds {cap} exponents at T={T}")
        power = nxt
        m += 1
    return {x: c for x, c in sorted(result.values())}


# ============= Newton identities =============

ExactComplex = Tuple[Fraction, Fraction]


def _exact(z: complex) -> ExactComplex:
    return Fraction(z.real), Fraction(z.imag)


def _mul(x: ExactComplex, y: ExactComplex) -> ExactComplex:
    return x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]


def newton_sums(poly_coeffs: Sequence[complex], M: int) -> List[complex]:
    """
    Power sums S_1..S_M of the roots of z^n + a_1 z^{n-1} + ... + a_n

    S_m = m * sum over k with sum j k_j = m of b_k, the frequencies being 1..n.
    The b_k are accumulated exactly in rationals (binary64 inputs are dyadic)
    and rounded once, so the alternating multinomial sum does not cancel.
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    a = [complex(c) for c in poly_coeffs]
    if not a:
        return [0j] * M
    if not all(cmath.isfinite(c) for c in a):
        raise ValueError("polynomial coefficients must be finite")

    powers = []
    for c in a:
        row = [(Fraction(1), Fraction(0))]
        for _ in range(M):
            row.append(_mul(row[-1], _exact(c)))
        powers.append(row)

    raw = _enumerate_raw(range(1, len(a) + 1), M + 0.5, settings.TERM_CAP)
    sums = [(Fraction(0), Fraction(0)) for _ in range(M + 1)]
    for value, k in raw:
        m = int(round(value))
        norm = sum(c for _, c in k)
        weight = Fraction((-1) ** norm * math.factorial(norm), norm)
        for _, c in k:
            weight /= math.factorial(c)
        term = (weight, Fraction(0))
        for slot, c in k:
            term = _mul(term, powers[slot - 1][c])
        sums[m] = (sums[m][0] + term[0], sums[m][1] + term[1])
    return [complex(float(m * re), float(m * im)) for m, (re, im) in enumerate(sums) if m >= 1]


def newton_identity_coefficients(m: int, n: Optional[int] = None) -> List[Tuple[SparseIndex, int]]:
    """
    S_m as an integer polynomial in the elementary symmetric functions e_1..e_n:
    S_m = sum_k c_k prod e_j^{k_j}, c_k = m (-1)^{|k|+m} (|k|-1)! / prod k_j!
    """
    n = n or m
    raw = _enumerate_raw(range(1, n + 1), m + 0.5, settings.TERM_CAP)
    out = []
    for value, k in sorted(raw, key=lambda item: item[1]):
        if int(round(value)) != m:
            continue
        norm = sum(c for _, c in k)
        coef = Fraction(m * math.factorial(norm - 1))
        for _, c in k:
            coef /= math.factorial(c)
        out.append((k, int((-1) ** (norm + m) * coef)))
    return out


def power_sums_from_roots(roots: Sequence[complex], M: int) -> List[complex]:
    """Direct sum of root^m, m = 1..M"""
    roots = [complex(r) for r in roots]
    out = []
    for m in range(1, M + 1):
        powers = [r**m for r in roots]
        out.append(complex(math.fsum(p.real for p in powers), math.fsum(p.imag for p in powers)))
    return out
