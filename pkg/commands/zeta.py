"""
Riemann zeta commands: explicit, c0
"""

import argparse
import logging

from dirichlet.exceptions import ParseError
from dirichlet.explicit_zeta import c0_estimates, c0_zeta_reference, explicit_formula_check, load_zero_table
from dirichlet.test_functions import Gaussian
from services.report_service import report_service

from .common import EXIT_FAILED, EXIT_OK, add_output_args, emit, load_phi

logger = logging.getLogger(__name__)

DEFAULT_ZEROS = "data/zeta_zeros.txt"


def _zero_table(args: argparse.Namespace):
    zt = load_zero_table(args.zeros)
    if args.n_zeros:
        zt = zt.truncated(args.n_zeros)
    return zt


def cmd_explicit(args: argparse.Namespace) -> int:
    phi = load_phi(args.phi)
    if not isinstance(phi, Gaussian):
        raise ParseError("the explicit formula is checked with gaussian test functions")
    report = explicit_formula_check(phi, _zero_table(args), args.T, args.tol)
    if args.out:
        report_service.write_report(report, args.out)
    else:
        emit(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_c0(args: argparse.Namespace) -> int:
    zt = _zero_table(args)
    phis = [Gaussian(0.0, s) for s in args.widths]
    estimates = c0_estimates(zt, args.beta, phis, args.T)
    payload = {
        "beta": args.beta,
        "estimates": dict(zip([str(s) for s in args.widths], estimates)),
        "c0": sum(estimates) / len(estimates),
        "zeros": zt.count,
        "T": args.T,
    }
    try:
        payload["reference"] = c0_zeta_reference(args.beta)
    except ValueError:
        payload["reference"] = None
    logger.info(f"c0(zeta, {args.beta}) ~ {payload['c0']:.6f}")
    emit(payload, args.out)
    return EXIT_OK


def register(subparsers) -> None:
    p = subparsers.add_parser("explicit", help="Riemann explicit formula with a gaussian")
    p.add_argument("--phi", default="gaussian:mu=0,s=0.5")
    p.add_argument("--zeros", default=DEFAULT_ZEROS, help="zero ordinate table")
    p.add_argument("--n-zeros", type=int, default=None, help="use only the first n ordinates")
    p.add_argument("--T", type=float, default=8.0, help="prime power cutoff k log p <= T")
    p.add_argument("--tol", type=float, default=1e-3)
    add_output_args(p)
    p.set_defaults(handler=cmd_explicit)

    p = subparsers.add_parser("c0", help="estimate c_0(zeta, beta) from zeros and primes")
    p.add_argument("--zeros", default=DEFAULT_ZEROS)
    p.add_argument("--n-zeros", type=int, default=None)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--T", type=float, default=8.0)
    p.add_argument("--widths", type=float, nargs="+", default=[0.4, 0.5, 0.6], help="gaussian widths")
    add_output_args(p)
    p.set_defaults(handler=cmd_c0)
