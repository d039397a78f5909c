"""
Verification commands: verify pn | newton | lifting | classical-poisson | symmetric | all
"""

import argparse
import logging
from typing import List

import numpy as np

from config import settings
from dirichlet.exceptions import ParseError
from dirichlet.test_functions import Bump
from schemas import VerificationReport
from services.report_service import report_service
from services.verification_service import verification_service

from .common import (
    EXIT_FAILED,
    EXIT_OK,
    add_pairing_args,
    add_series_args,
    emit,
    load_phi,
    load_series,
    pairing_config,
)

logger = logging.getLogger(__name__)


def _finish(reports: List[VerificationReport], args: argparse.Namespace) -> int:
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        logger.info(f"{status} {r.name}: residual {r.residual:.3e}, budget {r.budget:.3e}, tol {r.tol:.1e}")
    if args.report:
        report_service.write_report(reports[0] if len(reports) == 1 else reports, args.report)
    else:
        emit(reports[0].to_json() if len(reports) == 1 else [r.to_json() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def cmd_pn(args: argparse.Namespace) -> int:
    report = verification_service.verify_pn(load_series(args), load_phi(args.phi), pairing_config(args), args.T)
    return _finish([report], args)


def cmd_classical(args: argparse.Namespace) -> int:
    report = verification_service.verify_classical_poisson(load_phi(args.phi), args.lam, args.ymax)
    return _finish([report], args)


def cmd_newton(args: argparse.Namespace) -> int:
    if args.random:
        rng = np.random.default_rng(settings.SEED)
        coeffs = [1.0] + list(rng.normal(size=args.random))
    elif args.poly:
        try:
            coeffs = [complex(c.strip().replace("i", "j")) for c in args.poly.split(",")]
        except ValueError as e:
            raise ParseError(f"invalid --poly {args.poly!r}: {e}") from e
    else:
        raise ParseError("give --poly or --random DEGREE")
    return _finish([verification_service.verify_newton_equivalence(coeffs, args.M)], args)


def cmd_lifting(args: argparse.Namespace) -> int:
    phi = load_phi(args.phi)
    if not isinstance(phi, Bump):
        raise ParseError("lifting is checked with bump test functions")
    report = verification_service.verify_lifting(load_series(args), args.M, phi, args.ymax, args.T)
    return _finish([report], args)


def cmd_symmetric(args: argparse.Namespace) -> int:
    report = verification_service.verify_symmetric(
        load_series(args), load_phi(args.phi), args.beta, pairing_config(args), args.T
    )
    return _finish([report], args)


def cmd_all(args: argparse.Namespace) -> int:
    return _finish(verification_service.verify_all(args.only), args)


def register(subparsers) -> None:
    p = subparsers.add_parser("verify", help="end-to-end verifications with error budgets")
    kinds = p.add_subparsers(dest="kind", required=True)

    def report_arg(q):
        q.add_argument("--report", help="write the JSON report here")

    q = kinds.add_parser("pn", help="Poisson-Newton formula for a series and a test function")
    add_series_args(q)
    q.add_argument("--phi", required=True)
    add_pairing_args(q)
    report_arg(q)
    q.set_defaults(handler=cmd_pn)

    q = kinds.add_parser("classical-poisson", help="f = 1 - e^{-lam s}")
    q.add_argument("--phi", default="gaussian:mu=3,s=0.4")
    q.add_argument("--lam", type=float, default=1.0)
    q.add_argument("--ymax", type=float, default=50.0)
    report_arg(q)
    q.set_defaults(handler=cmd_classical)

    q = kinds.add_parser("newton", help="power sums directly and through Newton identities")
    q.add_argument("--poly", help="descending coefficients, e.g. 1,-3,2")
    q.add_argument("--random", type=int, default=None, metavar="DEGREE", help="seeded random monic polynomial")
    q.add_argument("--M", type=int, default=4)
    report_arg(q)
    q.set_defaults(handler=cmd_newton)

    q = kinds.add_parser("lifting", help="lifting formula over the levels f = 0, -1, ..., -M")
    add_series_args(q)
    q.add_argument("--M", type=int, default=3)
    q.add_argument("--phi", default="bump:a=0.4,b=3")
    q.add_argument("--ymax", type=float, default=200.0)
    q.add_argument("--T", type=float, default=None)
    report_arg(q)
    q.set_defaults(handler=cmd_lifting)

    q = kinds.add_parser("symmetric", help="symmetric formula at base beta (real series)")
    add_series_args(q)
    q.add_argument("--phi", required=True)
    q.add_argument("--beta", type=float, default=0.0)
    add_pairing_args(q)
    report_arg(q)
    q.set_defaults(handler=cmd_symmetric)

    q = kinds.add_parser("all", help="the standard suite, in parallel")
    q.add_argument("--only", nargs="+", default=None, help="subset of the suite by name")
    report_arg(q)
    q.set_defaults(handler=cmd_all)
