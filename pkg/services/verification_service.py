"""
Verification Service - end-to-end checks of the Poisson-Newton formula
Zero-side pairings against frequency-side atoms, classical Poisson, Newton
identities and lifting formulas, each returned as a VerificationReport
"""

import cmath
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from config import settings
from dirichlet.discrepancy import discrepancy_poly
from dirichlet.exceptions import PNLabError
from dirichlet.freq_expansion import expand, newton_sums, power_sums_from_roots
from dirichlet.newton_cramer import default_T, pair_atomic_side, pair_symmetric, pair_zero_side
from dirichlet.summation import hurwitz_zeta
from dirichlet.test_functions import Bump, Gaussian, TestFunction
from dirichlet.zero_finder import find_level_zeros, find_zeros, reduce_rational
from schemas import FiniteDirichletSeries, PairingConfig, PairingResult, VerificationReport

logger = logging.getLogger(__name__)

METADATA_NAME = "verification_metadata.json"

MAX_NEWTON_DEGREE = 8
MAX_NEWTON_M = 16


def _series_block(f: FiniteDirichletSeries) -> Dict:
    return f.model_dump(mode="json")


def _cfg_block(cfg: PairingConfig) -> Dict:
    return cfg.model_dump(mode="json")


def zeta_partial(r: int, M: int) -> float:
    """zeta_M(r) = sum_{a=1}^{M+1} a^{-r}"""
    return math.fsum(a ** (-r) for a in range(1, M + 2))


def harmonic(n: int) -> float:
    return math.fsum(1.0 / a for a in range(1, n + 1))


class VerificationService:
    """Runs the verification suite and keeps the metadata of the last run"""

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = Path(output_dir or settings.OUTPUT_DIR)
        self.status = "idle"  # idle, running, completed, failed
        self.last_run: Optional[Dict] = None
        self._load_metadata()

    @property
    def metadata_file(self) -> Path:
        return self.output_dir / METADATA_NAME

    def _load_metadata(self):
        """Load metadata of the previous suite run"""
        try:
            if self.metadata_file.exists():
                with open(self.metadata_file, "r", encoding="utf-8") as fh:
                    self.last_run = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"Could not load metadata: {e}")

    def _save_metadata(self, metadata: Dict):
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            with open(self.metadata_file, "w", encoding="utf-8") as fh:
                json.dump(metadata, fh, indent=2)
            self.last_run = metadata
        except OSError as e:
            logger.error(f"Failed to save metadata: {e}")

    # ============= Poisson-Newton =============

    def verify_pn(
        self,
        f: FiniteDirichletSeries,
        phi: TestFunction,
        cfg: Optional[PairingConfig] = None,
        T: Optional[float] = None,
        tol: Optional[float] = None,
        name: str = "pn",
    ) -> VerificationReport:
        """
        Zero side over find_zeros(f, ymax) against c_0 phi(0) + atoms

        Gaussians take the full formula with the discrepancy constant; test
        functions supported in (0, inf) take the restricted formula without it.
        """
        cfg = cfg or PairingConfig()
        tol = settings.REPORT_TOL if tol is None else tol
        T = default_T(phi) if T is None else T
        logger.info(f"Verifying PN formula for {phi.describe()} (ymax={cfg.ymax}, T={T:.4g})")
        try:
            div = find_zeros(f, cfg.ymax)
            lhs = pair_zero_side(div, phi, cfg)

            c_poly: Tuple[complex, ...] = ()
            c_budget = 0.0
            details: Dict = {"zeros": len(div.entries), "divisor_source": div.source}
            if not phi.vanishes_at_zero():
                dp = discrepancy_poly(f, div, complex(cfg.sigma), cfg.ymax)
                c_poly = dp.coeffs
                c_budget = (dp.tail_budget + dp.sample_residual) * abs(complex(phi(0.0)))
                details["c0"] = [dp.c0.real, dp.c0.imag]
                details["c0_sample_residual"] = dp.sample_residual
            rhs = pair_atomic_side(f, phi, c_poly, T)
        except PNLabError as e:
            logger.error(f"PN verification failed: {e}")
            raise

        details.update(
            {
                "zero_tail_budget": lhs.tail_budget,
                "zero_quad_error": lhs.quad_error,
                "atomic_tail_budget": rhs.tail_budget,
                "atoms": rhs.terms_used,
                "path": "full" if c_poly else "restricted",
            }
        )
        return VerificationReport.build(
            name=name,
            lhs=lhs.value,
            rhs=rhs.value,
            budget=lhs.budget + rhs.budget + c_budget,
            tol=tol,
            inputs={"series": _series_block(f), "phi": phi.describe(), "cfg": _cfg_block(cfg), "T": T},
            details=details,
        )

    def verify_classical_poisson(
        self,
        phi: Optional[TestFunction] = None,
        lam: float = 1.0,
        ymax: float = 50.0,
        tol: float = 1e-8,
    ) -> VerificationReport:
        """PN for f = 1 - e^{-lam s}: the Poisson summation formula on (0, inf)"""
        phi = phi or Gaussian(3.0, 0.4)
        f = FiniteDirichletSeries(lambdas=(lam,), coeffs=(-1.0,))
        return self.verify_pn(f, phi, PairingConfig(ymax=ymax), tol=tol, name="classical-poisson")

    def verify_symmetric(
        self,
        f: FiniteDirichletSeries,
        phi: TestFunction,
        beta: float,
        cfg: Optional[PairingConfig] = None,
        T: Optional[float] = None,
        tol: Optional[float] = None,
    ) -> VerificationReport:
        cfg = cfg or PairingConfig()
        tol = settings.REPORT_TOL if tol is None else tol
        div = find_zeros(f, cfg.ymax)
        lhs, rhs = pair_symmetric(div, f, phi, beta, cfg, T)
        return VerificationReport.build(
            name="symmetric",
            lhs=lhs.value,
            rhs=rhs.value,
            budget=lhs.budget + rhs.budget,
            tol=tol,
            inputs={"series": _series_block(f), "phi": phi.describe(), "beta": beta, "cfg": _cfg_block(cfg), "T": T},
            details={"zeros": len(div.entries), "atoms": rhs.terms_used},
        )

    # ============= Newton identities =============

    def verify_newton_equivalence(
        self,
        poly_coeffs: Sequence[complex],
        M: int,
        tol: float = 1e-9,
    ) -> VerificationReport:
        """
        Power sums S_1..S_M of the roots of a polynomial (descending
        coefficients) computed directly and through newton_sums

        The direct path reads the roots off the towers of
        f(s) = 1 + sum a_j e^{-j s}, the series whose zeros are the logs of the roots.
        """
        coeffs = [complex(c) for c in poly_coeffs]
        while coeffs and coeffs[0] == 0:
            coeffs.pop(0)
        degree = len(coeffs) - 1
        if not 1 <= degree <= MAX_NEWTON_DEGREE:
            raise ValueError(f"degree must be in 1..{MAX_NEWTON_DEGREE}, got {degree}")
        if not 1 <= M <= MAX_NEWTON_M:
            raise ValueError(f"M must be in 1..{MAX_NEWTON_M}, got {M}")
        a = [c / coeffs[0] for c in coeffs[1:]]

        roots = self._roots_via_series(a)
        direct = power_sums_from_roots(roots, M)
        newton = newton_sums(a, M)
        deviations = [abs(d - n) / max(1.0, abs(d)) for d, n in zip(direct, newton)]
        scale = max(1.0, max(abs(r) for r in roots) ** M) if roots else 1.0
        budget = 64 * sys.float_info.epsilon * M * degree * scale
        logger.info(f"Newton identities up to S_{M}: max relative deviation {max(deviations):.2e}")
        return VerificationReport.build(
            name="newton",
            lhs=direct[-1],
            rhs=newton[-1],
            budget=budget,
            tol=tol,
            residual=max(deviations),
            inputs={"poly_coeffs": [[c.real, c.imag] for c in coeffs], "M": M},
            details={
                "direct": [[s.real, s.imag] for s in direct],
                "newton": [[s.real, s.imag] for s in newton],
                "relative_deviation": deviations,
            },
        )

    @staticmethod
    def _roots_via_series(a: Sequence[complex]) -> List[complex]:
        # z = 0 roots contribute nothing to power sums
        a = list(a)
        while a and a[-1] == 0:
            a.pop()
        if not a:
            return []
        f = FiniteDirichletSeries(lambdas=tuple(float(j) for j in range(1, len(a) + 1)), coeffs=tuple(a))
        lam, poly = reduce_rational(f)
        step = int(round(lam))
        roots = []
        # X = e^{-lam s} solves poly(X) = 0 and z = e^{s}, so z^step = 1/X
        for X in P.polyroots(np.asarray(poly, dtype=complex)):
            base = complex(X) ** (-1.0 / step)
            roots.extend(base * cmath.exp(2j * math.pi * k / step) for k in range(step))
        return roots

    # ============= Lifting =============

    def verify_lifting(
        self,
        f: FiniteDirichletSeries,
        M: int,
        phi: Bump,
        ymax: float = 200.0,
        T: Optional[float] = None,
        tol: Optional[float] = None,
    ) -> VerificationReport:
        """
        sum_{m=0}^{M} sum_{f(eta) = -m} <e^{eta t}, phi> + H_{M+1} sum_j lambda_j a_j phi(lambda_j)
            = sum_{|k| >= 2} <lambda, k> b_k zeta_M(|k|) phi(<lambda, k>)
        """
        if M < 0:
            raise ValueError("M must be nonnegative")
        if not phi.vanishes_at_zero():
            raise ValueError("lifting is checked with test functions supported in (0, inf)")
        tol = settings.REPORT_TOL if tol is None else tol
        T = default_T(phi) if T is None else T
        cfg = PairingConfig(ymax=ymax)

        levels: List[PairingResult] = []
        for m in range(M + 1):
            div = find_level_zeros(f, -m, ymax)
            levels.append(pair_zero_side(div, phi, cfg))
            logger.debug(f"level f = {-m}: {len(div.entries)} zeros, pairing {levels[-1].value:.10g}")

        correction = harmonic(M + 1) * sum(
            lam * complex(a) * float(phi(lam)) for lam, a in zip(f.lambdas, f.coeffs)
        )
        lhs = sum(p.value for p in levels) + correction

        terms = [t for t in expand(f, 1.5 * T) if t.norm >= 2]
        contrib = np.asarray(
            [t.value * complex(t.b) * zeta_partial(t.norm, M) * float(phi(t.value)) for t in terms], dtype=complex
        )
        positions = np.asarray([t.value for t in terms], dtype=float)
        inside = positions <= T * (1 + 1e-12)
        rhs = complex(np.sum(contrib[inside])) if contrib.size else 0j
        atomic_tail = 2.0 * float(np.sum(np.abs(contrib[~inside]))) if contrib.size else 0.0

        norms = sorted({t.norm for t in terms})
        limit_ok = all(self._zeta_tail_holds(r, M) for r in norms)
        budget = sum(p.budget for p in levels) + atomic_tail
        logger.info(f"Lifting with M={M}: lhs={lhs:.10g}, rhs={rhs:.10g}")
        return VerificationReport.build(
            name="lifting",
            lhs=lhs,
            rhs=rhs,
            budget=budget,
            tol=tol,
            inputs={"series": _series_block(f), "M": M, "phi": phi.describe(), "ymax": ymax, "T": T},
            details={
                "levels": [[p.value.real, p.value.imag] for p in levels],
                "harmonic_correction": [correction.real, correction.imag],
                "atoms": int(inside.sum()),
                "norms": norms,
                "zeta_tail_bound_holds": limit_ok,
            },
        )

    @staticmethod
    def _zeta_tail_holds(r: int, M: int) -> bool:
        """|zeta(r) - zeta_M(r)| <= M^{1-r}/(r-1) for r >= 2"""
        if r < 2 or M < 1:
            return True
        gap = abs(hurwitz_zeta(r, 1.0).real - zeta_partial(r, M))
        return gap <= M ** (1 - r) / (r - 1) + 1e-15

    # ============= Suite =============

    def standard_suite(self) -> Dict[str, Callable[[], VerificationReport]]:
        """Named verifications of the standard suite"""
        generic = FiniteDirichletSeries(lambdas=(1.0, math.sqrt(2)), coeffs=(0.4, 0.3))
        factorable = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(-1.5, 0.5))
        bump_cfg = PairingConfig(ymax=200.0)
        return {
            "classical-poisson": lambda: self.verify_classical_poisson(),
            "pn-generic": lambda: self.verify_pn(generic, Bump(0.5, 4.0), bump_cfg, name="pn-generic"),
            "pn-factorable": lambda: self.verify_pn(
                factorable, Bump(0.5, 4.0), bump_cfg, tol=1e-8, name="pn-factorable"
            ),
            "newton": lambda: self.verify_newton_equivalence([1, -3, 2], 4),
            "lifting": lambda: self.verify_lifting(factorable, 3, Bump(0.4, 3.0)),
        }

    def verify_all(self, names: Optional[Sequence[str]] = None) -> List[VerificationReport]:
        """
        Run the suite in a thread pool

        Process:
        1. Submit each verification
        2. Collect reports in suite order
        3. Save run metadata under OUTPUT_DIR
        """
        suite = self.standard_suite()
        names = list(names or suite)
        unknown = [n for n in names if n not in suite]
        if unknown:
            raise ValueError(f"unknown verifications {unknown}; known: {sorted(suite)}")

        self.status = "running"
        logger.info(f"Running {len(names)} verification(s) on {settings.THREADS} worker(s)")
        try:
            with ThreadPoolExecutor(max_workers=settings.THREADS) as pool:
                futures = [pool.submit(suite[n]) for n in names]
                reports = [fut.result() for fut in futures]
        except PNLabError as e:
            self.status = "failed"
            logger.error(f"Verification suite failed: {e}")
            raise

        self.status = "completed"
        self._save_metadata(
            {
                "finished_at": datetime.now(timezone.utc).isoformat(),
                "seed": settings.SEED,
                "all_passed": all(r.passed for r in reports),
                "results": {r.name: {"pass": r.passed, "residual": r.residual, "budget": r.budget} for r in reports},
            }
        )
        return reports

    def get_status(self) -> Dict:
        return {"current_status": self.status, "last_run": self.last_run}


# Singleton instance
verification_service = VerificationService()
