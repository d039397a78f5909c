"""
Zeros of finite Dirichlet series

Argument-principle counting on rectangles with adaptive phase tracking,
subdivision down to small leaves, damped Newton refinement, and the exact
tower structure of series with commensurable frequencies.
"""

import cmath
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import reduce
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from config import settings
from schemas import Divisor, DivisorEntry, FiniteDirichletSeries, SearchRegion

from .exceptions import (
    BoundaryZero,
    EvaluationOverflow,
    InvalidLevel,
    MultiplicityExceeded,
    PhaseJump,
    RefinementFailure,
)
from .series_core import eval_derivative, eval_many, eval_series, shifted_level, zero_density, zero_strip

logger = logging.getLogger(__name__)

# segments whose phase step exceeds this are bisected
TRACK_STEP = math.pi / 4
MIN_LEAF_SIZE = 1e-7
MAX_RATIONAL_DEGREE = 4096


# ============= Phase tracking =============

def _derivative_scale(f: FiniteDirichletSeries, z: np.ndarray) -> np.ndarray:
    """sum lambda_n |a_n| e^{-lambda_n Re z}, an upper bound of |f'|"""
    lam = f.lambda_array()
    mod = np.abs(f.coeff_array())
    return np.maximum(np.exp(-np.multiply.outer(np.real(z), lam)) @ (lam * mod), 1e-300)


def _track_phase(
    f: FiniteDirichletSeries,
    path: Callable[[np.ndarray], np.ndarray],
    n0: int,
) -> Tuple[float, float]:
    """
    Total change of arg f along path(u), u in [0, 1]

    Returns (phase change, min |f|/scale over the samples). A sample with
    f = 0 returns (nan, 0).
    """
    u = np.linspace(0.0, 1.0, n0 + 1)
    z = path(u)
    vals = eval_many(f, z)
    ratio = float(np.min(np.abs(vals) / _derivative_scale(f, z)))
    for depth in range(settings.PHASE_MAX_DEPTH + 1):
        if np.any(vals == 0):
            return float("nan"), 0.0
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(steps) > TRACK_STEP
        if not np.any(bad):
            break
        if depth == settings.PHASE_MAX_DEPTH:
            worst = float(np.max(np.abs(steps)))
            if worst > settings.PHASE_MAX_STEP:
                raise PhaseJump(f"phase step {worst:.3f} after {depth} refinements")
            break
        mid = 0.5 * (u[:-1][bad] + u[1:][bad])
        zm = path(mid)
        vm = eval_many(f, zm)
        ratio = min(ratio, float(np.min(np.abs(vm) / _derivative_scale(f, zm))))
        u = np.concatenate([u, mid])
        order = np.argsort(u, kind="stable")
        u = u[order]
        vals = np.concatenate([vals, vm])[order]
    return float(np.sum(np.angle(vals[1:] / vals[:-1]))), ratio


def _segment(z0: complex, z1: complex) -> Callable[[np.ndarray], np.ndarray]:
    return lambda u: z0 + (z1 - z0) * u


def _initial_samples(f: FiniteDirichletSeries, length: float) -> int:
    # arg f turns at most about lambda_N per unit length on vertical lines
    return int(min(4096, max(32, 2 * f.lambdas[-1] * length)))


def _edges(region: SearchRegion) -> List[Tuple[complex, complex]]:
    a = complex(region.re_min, region.im_min)
    b = complex(region.re_max, region.im_min)
    c = complex(region.re_max, region.im_max)
    d = complex(region.re_min, region.im_max)
    return [(a, b), (b, c), (c, d), (d, a)]


def _edge_phase(f: FiniteDirichletSeries, z0: complex, z1: complex, clearance: float) -> Tuple[Optional[float], str]:
    """Phase change along a segment; None with a reason when a zero sits within clearance"""
    try:
        phase, ratio = _track_phase(f, _segment(z0, z1), _initial_samples(f, abs(z1 - z0)))
    except PhaseJump as e:
        return None, str(e)
    if not math.isfinite(phase) or ratio < clearance:
        return None, "zero within clearance"
    return phase, ""


def _winding(f: FiniteDirichletSeries, region: SearchRegion, clearance: float) -> Tuple[Optional[int], List[int], str]:
    """Winding number of f around region, or None with the offending edges"""
    total = 0.0
    flagged = []
    reason = ""
    for i, (z0, z1) in enumerate(_edges(region)):
        phase, why = _edge_phase(f, z0, z1, clearance)
        if phase is None:
            flagged.append(i)
            reason = why
        else:
            total += phase
    if flagged:
        return None, flagged, reason
    return int(round(total / (2 * math.pi))), [], ""


def _nudged(region: SearchRegion, edges: Sequence[int], delta: float) -> SearchRegion:
    re_min, re_max, im_min, im_max = region.bounds
    if 0 in edges:
        im_min -= delta
    if 1 in edges:
        re_max += delta
    if 2 in edges:
        im_max += delta
    if 3 in edges:
        re_min -= delta
    return SearchRegion(re_min=re_min, re_max=re_max, im_min=im_min, im_max=im_max)


def count_zeros_rect_nudged(
    f: FiniteDirichletSeries,
    region: SearchRegion,
    clearance: Optional[float] = None,
) -> Tuple[int, SearchRegion]:
    """Zero count with multiplicity and the (possibly nudged) rectangle it refers to"""
    clearance = settings.BOUNDARY_CLEARANCE if clearance is None else clearance
    scale = max(1.0, region.width, region.height)
    current = region
    reason = ""
    for attempt in range(settings.NUDGE_ATTEMPTS + 1):
        count, flagged, reason = _winding(f, current, clearance)
        if count is not None:
            if attempt:
                logger.warning(f"rectangle edges nudged {attempt} time(s) to {current.bounds}")
            return count, current
        delta = 8 * clearance * scale * 2**attempt
        logger.debug(f"zero near edges {flagged} of {current.bounds}, nudging by {delta:.2e}")
        current = _nudged(current, flagged, delta)
    if reason.startswith("phase step"):
        raise PhaseJump(reason, region.bounds)
    raise BoundaryZero(f"edges stay within {clearance:g} of a zero after {settings.NUDGE_ATTEMPTS} nudges", region.bounds)


def count_zeros_rect(f: FiniteDirichletSeries, region: SearchRegion, clearance: Optional[float] = None) -> int:
    """Number of zeros of f inside region, counted with multiplicity"""
    count, _ = count_zeros_rect_nudged(f, region, clearance)
    return count


def winding_on_circle(f: FiniteDirichletSeries, center: complex, radius: float) -> int:
    phase, _ = _track_phase(f, lambda u: center + radius * np.exp(2j * math.pi * u), 64)
    if not math.isfinite(phase):
        raise PhaseJump(f"f vanishes on the circle |s - {center}| = {radius:g}")
    return int(round(phase / (2 * math.pi)))


# ============= Refinement =============

def _residual_target(f: FiniteDirichletSeries) -> float:
    return settings.NEWTON_RESIDUAL * max(1.0, f.l1_norm)


def newton_refine(f: FiniteDirichletSeries, z: complex, multiplicity: int = 1) -> Tuple[complex, float]:
    """Damped (multiplicity-modified) Newton iteration; returns (root, |f(root)|)"""
    target = _residual_target(f)
    value = eval_series(f, z)
    for _ in range(settings.NEWTON_MAX_ITER):
        if abs(value) <= target:
            break
        slope = eval_derivative(f, z)
        if slope == 0:
            break
        step = multiplicity * value / slope
        damping = 1.0
        while damping > 1e-6:
            candidate = z - damping * step
            try:
                cand_value = eval_series(f, candidate)
            except EvaluationOverflow:
                damping *= 0.5
                continue
            if abs(cand_value) < abs(value):
                break
            damping *= 0.5
        else:
            break
        z, value = candidate, cand_value
    return z, abs(value)


def _multiplicity(f: FiniteDirichletSeries, z: complex, neighbours: Sequence[complex]) -> int:
    gaps = [abs(z - w) for w in neighbours if w != z]
    radius = min([1e-3] + [g / 3 for g in gaps if g > 0])
    radius = max(radius, 1e-9)
    n = winding_on_circle(f, z, radius)
    return max(n, 1)


def _dedupe(points: List[complex], tol: float) -> List[complex]:
    out: List[complex] = []
    for z in sorted(points, key=lambda w: (w.imag, w.real)):
        if all(abs(z - w) > tol for w in out):
            out.append(z)
    return out


def _leaf_roots(f: FiniteDirichletSeries, region: SearchRegion) -> List[Tuple[complex, int]]:
    target = _residual_target(f)
    seeds = [region.center]
    for fx in (0.2, 0.5, 0.8):
        for fy in (0.2, 0.5, 0.8):
            seeds.append(complex(region.re_min + fx * region.width, region.im_min + fy * region.height))
    candidates = []
    for seed in seeds:
        z, res = newton_refine(f, seed)
        if res <= 1e3 * target and region.contains(z):
            candidates.append(z)
    roots = _dedupe(candidates, 1e-7 * max(1.0, region.width, region.height))
    out = []
    for z in roots:
        n = _multiplicity(f, z, roots)
        if n > settings.MULTIPLICITY_CAP:
            raise MultiplicityExceeded(f"zero at {z} has multiplicity {n}", region.bounds)
        if n > 1:
            z, _ = newton_refine(f, z, n)
        out.append((z, n))
    return out


def _safe_split(f: FiniteDirichletSeries, region: SearchRegion, clearance: float) -> Tuple[SearchRegion, SearchRegion]:
    """Bisect along the longer side, moving the cut off any zero"""
    horizontal_cut = region.height > region.width
    lo, hi = (region.im_min, region.im_max) if horizontal_cut else (region.re_min, region.re_max)
    mid = 0.5 * (lo + hi)
    span = hi - lo
    for shift in (0.0, 0.013, -0.017, 0.029, -0.031, 0.043, -0.047, 0.061, -0.067, 0.089):
        cut = mid + shift * span
        if horizontal_cut:
            z0, z1 = complex(region.re_min, cut), complex(region.re_max, cut)
        else:
            z0, z1 = complex(cut, region.im_min), complex(cut, region.im_max)
        if _edge_phase(f, z0, z1, clearance)[0] is not None:
            break
    else:
        raise BoundaryZero("no zero-free cut line found", region.bounds)
    if horizontal_cut:
        return (
            SearchRegion(re_min=region.re_min, re_max=region.re_max, im_min=region.im_min, im_max=cut),
            SearchRegion(re_min=region.re_min, re_max=region.re_max, im_min=cut, im_max=region.im_max),
        )
    return (
        SearchRegion(re_min=region.re_min, re_max=cut, im_min=region.im_min, im_max=region.im_max),
        SearchRegion(re_min=cut, re_max=region.re_max, im_min=region.im_min, im_max=region.im_max),
    )


def _isolate(f: FiniteDirichletSeries, region: SearchRegion, count: int, clearance: float) -> List[Tuple[complex, int]]:
    """Zeros of f in region, given their total count"""
    if count == 0:
        return []
    if count <= settings.LEAF_COUNT:
        roots = _leaf_roots(f, region)
        if sum(n for _, n in roots) == count:
            return roots
    if max(region.width, region.height) < MIN_LEAF_SIZE:
        raise RefinementFailure(f"{count} zero(s) not resolved at leaf size", region.bounds)
    out = []
    for child in _safe_split(f, region, clearance):
        child_count, _, _ = _winding(f, child, clearance)
        if child_count is None:
            raise BoundaryZero("cut line touches a zero", child.bounds)
        out.extend(_isolate(f, child, child_count, clearance))
    return out


# ============= Public API =============

def strip_region(f: FiniteDirichletSeries, ymax: float) -> SearchRegion:
    """Rectangle around zero_strip(f) up to height ymax"""
    strip = zero_strip(f)
    pad = max(0.25, 0.1 * (strip.sigma_plus - strip.sigma_minus))
    return SearchRegion(
        re_min=strip.sigma_minus - pad,
        re_max=strip.sigma_plus + pad,
        im_min=-ymax,
        im_max=ymax,
    )


def _bands(f: FiniteDirichletSeries, region: SearchRegion, clearance: float, n_bands: int) -> List[SearchRegion]:
    bands = [region]
    while len(bands) < n_bands:
        tallest = max(range(len(bands)), key=lambda i: bands[i].height)
        band = bands.pop(tallest)
        if band.height <= band.width:
            bands.append(band)
            break
        bands.extend(_safe_split(f, band, clearance))
    return sorted(bands, key=lambda b: b.im_min)


def _contour_zeros(f: FiniteDirichletSeries, ymax: float) -> Tuple[List[Tuple[complex, int]], SearchRegion, int]:
    clearance = settings.BOUNDARY_CLEARANCE
    total, region = count_zeros_rect_nudged(f, strip_region(f, ymax), clearance)
    logger.info(f"{total} zero(s) in {region.bounds}")
    n_bands = max(1, min(4 * settings.THREADS, int(region.height // 10)))
    bands = _bands(f, region, clearance, n_bands)

    def work(band: SearchRegion) -> List[Tuple[complex, int]]:
        count, _, _ = _winding(f, band, clearance)
        if count is None:
            raise BoundaryZero("band edge touches a zero", band.bounds)
        return _isolate(f, band, count, clearance)

    with ThreadPoolExecutor(max_workers=settings.THREADS) as pool:
        results = list(pool.map(work, bands))
    roots = [item for chunk in results for item in chunk]
    found = sum(n for _, n in roots)
    if found != total:
        raise RefinementFailure(f"found {found} zero(s) with multiplicity, winding gives {total}", region.bounds)
    return roots, region, total


def find_zeros(f: FiniteDirichletSeries, ymax: float, method: str = "auto") -> Divisor:
    """
    Divisor of f truncated at |Im rho| <= ymax

    method "auto" uses exact towers when the frequencies are commensurable and
    contour subdivision otherwise; "contour" forces subdivision.
    """
    if ymax <= 0:
        raise ValueError("ymax must be positive")
    if method not in ("auto", "contour"):
        raise ValueError(f"unknown method {method!r}")

    if method == "auto":
        reduced = reduce_rational(f)
        if reduced is not None:
            lam, poly = reduced
            logger.info(f"frequencies reduce to multiples of {lam:.12g} (degree {len(poly) - 1})")
            return _polish(f, polynomial_zeros(lam, poly, ymax))

    roots, region, total = _contour_zeros(f, ymax)
    roots.sort(key=lambda item: (round(item[0].imag, 9), item[0].real))
    entries = tuple(DivisorEntry(rho=z, n=n) for z, n in roots)
    return Divisor(
        entries=entries,
        sigma1=max((z.real for z, _ in roots), default=region.re_min),
        d=2,
        g=1,
        ymax=max(-region.im_min, region.im_max),
        density=zero_density(f),
        source=f"contour N={f.n_terms} count={total}",
    )


def _polish(f: FiniteDirichletSeries, div: Divisor) -> Divisor:
    target = 1e3 * _residual_target(f)
    entries = []
    for e in div.entries:
        z, res = newton_refine(f, e.rho, e.n)
        if res > target and e.n == 1:
            raise RefinementFailure(f"tower zero {e.rho} refines to residual {res:.2e}")
        entries.append(DivisorEntry(rho=z, n=e.n))
    return div.model_copy(update={"entries": tuple(entries)})


def find_level_zeros(f: FiniteDirichletSeries, c: complex, ymax: float, method: str = "auto") -> Divisor:
    """Solutions of f(s) = c, through the normalized series (f - c)/(1 - c)"""
    c = complex(c)
    if abs(c - 1) < 1e-14:
        raise InvalidLevel("f(s) = 1 has no solutions for a normalized series")
    g, _ = shifted_level(f, c)
    div = find_zeros(g, ymax, method)
    return div.model_copy(update={"source": f"level c={c} of {div.source}"})


# ============= Commensurable frequencies =============

def reduce_rational(f: FiniteDirichletSeries) -> Optional[Tuple[float, List[complex]]]:
    """
    (lambda, ascending coefficients of 1 + sum a_n X^{k_n}) when every
    lambda_n is an integer multiple k_n of a common lambda; None otherwise
    """
    lam = f.lambdas
    fracs = []
    for x in lam:
        ratio = x / lam[0]
        frac = Fraction(ratio).limit_denominator(settings.RATIONAL_DENOMINATOR)
        if abs(ratio - float(frac)) > settings.RATIONAL_TOL * ratio:
            return None
        fracs.append(frac)
    common_den = reduce(lambda a, b: a * b // math.gcd(a, b), (q.denominator for q in fracs), 1)
    ints = [int(q * common_den) for q in fracs]
    g = reduce(math.gcd, ints)
    ints = [k // g for k in ints]
    if ints[-1] > MAX_RATIONAL_DEGREE:
        return None
    base = lam[0] * g / common_den
    poly = [0j] * (ints[-1] + 1)
    poly[0] = 1 + 0j
    for k, a in zip(ints, f.coeffs):
        poly[k] += complex(a)
    return base, poly


def polynomial_zeros(lam: float, poly: Sequence[complex], ymax: float, cluster_tol: float = 1e-6) -> Divisor:
    """Towers rho = (-log alpha + 2 pi i k)/lambda over the roots alpha of poly"""
    roots = P.polyroots(np.asarray(poly, dtype=complex))
    clusters: List[List[complex]] = []
    for r in sorted(roots, key=lambda w: (abs(w), cmath.phase(w))):
        for cl in clusters:
            if abs(r - cl[0]) <= cluster_tol * max(1.0, abs(cl[0])):
                cl.append(r)
                break
        else:
            clusters.append([r])
    bases = []
    mults = []
    for cl in clusters:
        alpha = complex(np.mean(cl))
        bases.append(-cmath.log(alpha) / lam)
        mults.append(len(cl))
    return tower_divisor(bases, 2 * math.pi / lam, ymax, mults, source=f"polynomial towers lambda={lam:.12g}")


def tower_divisor(
    bases: Sequence[complex],
    step: float,
    ymax: float,
    mults: Optional[Sequence[int]] = None,
    exclude: Sequence[complex] = (),
    source: str = "tower",
) -> Divisor:
    """Divisor of vertical progressions base + i k step with |Im| <= ymax"""
    mults = list(mults) if mults is not None else [1] * len(bases)
    entries = []
    for base, n in zip(bases, mults):
        base = complex(base)
        k_lo = math.ceil((-ymax - base.imag) / step)
        k_hi = math.floor((ymax - base.imag) / step)
        for k in range(k_lo, k_hi + 1):
            rho = complex(base.real, base.imag + k * step)
            if any(abs(rho - x) < 1e-12 for x in exclude):
                continue
            entries.append(DivisorEntry(rho=rho, n=n))
    entries.sort(key=lambda e: (round(e.rho.imag, 9), e.rho.real))
    sigma1 = max((complex(b).real for b in bases), default=0.0)
    return Divisor(
        entries=tuple(entries),
        sigma1=sigma1,
        d=2,
        g=1,
        ymax=ymax,
        density=sum(mults) / step,
        source=source,
    )


def progression_divisor(start: complex, step: complex, n_terms: int, n: int = 1, source: str = "progression") -> Divisor:
    """n_terms points start + j step, e.g. the zeros -j of 1/Gamma"""
    entries = tuple(DivisorEntry(rho=complex(start) + j * complex(step), n=n) for j in range(n_terms))
    return Divisor(
        entries=entries,
        sigma1=max(e.rho.real for e in entries),
        d=2,
        g=1,
        ymax=None,
        density=None,
        source=source,
    )
