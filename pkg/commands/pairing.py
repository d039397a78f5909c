"""
Pairing command: both sides of the Poisson-Newton formula for one test function
"""

import argparse
import logging

from dirichlet.discrepancy import discrepancy_at_base
from dirichlet.newton_cramer import pair_atomic_side, pair_parameterized, pair_symmetric, pair_zero_side
from dirichlet.zero_finder import find_zeros
from schemas import complex_pair

from .common import EXIT_OK, add_output_args, add_pairing_args, add_series_args, emit, load_phi, load_series, pairing_config

logger = logging.getLogger(__name__)


def cmd_pair(args: argparse.Namespace) -> int:
    """
    Process:
    1. Zeros up to ymax
    2. Zero-side pairing (plain, symmetric or parameterized form)
    3. Atomic side with c_0 phi(0) when phi(0) != 0
    """
    f = load_series(args)
    phi = load_phi(args.phi)
    cfg = pairing_config(args)
    div = find_zeros(f, cfg.ymax)

    if args.form == "symmetric":
        lhs, rhs = pair_symmetric(div, f, phi, args.beta, cfg, args.T)
    elif args.form == "parameterized":
        lhs, rhs = pair_parameterized(div, f, phi, args.alpha, args.beta, cfg, args.T)
    else:
        lhs = pair_zero_side(div, phi, cfg)
        c_poly = () if phi.vanishes_at_zero() else (discrepancy_at_base(f, complex(cfg.sigma)),)
        rhs = pair_atomic_side(f, phi, c_poly, args.T)

    residual = abs(lhs.value - rhs.value)
    logger.info(f"pairing residual {residual:.3e} against budget {lhs.budget + rhs.budget:.3e}")
    emit(
        {
            "form": args.form,
            "zeros": len(div.entries),
            "zero_side": {**lhs.model_dump(mode="json"), "value": complex_pair(lhs.value)},
            "atomic_side": {**rhs.model_dump(mode="json"), "value": complex_pair(rhs.value)},
            "residual": residual,
            "budget": lhs.budget + rhs.budget,
        },
        args.out,
    )
    return EXIT_OK


def register(subparsers) -> None:
    p = subparsers.add_parser("pair", help="zero side versus atomic side for a test function")
    add_series_args(p)
    p.add_argument("--phi", required=True, help="test function literal, e.g. gaussian:mu=3,s=0.4")
    add_pairing_args(p)
    p.add_argument("--form", choices=("plain", "symmetric", "parameterized"), default="plain")
    p.add_argument("--alpha", type=float, default=1.0, help="scale of f(alpha s + beta)")
    p.add_argument("--beta", type=float, default=0.0, help="shift of f(alpha s + beta)")
    add_output_args(p)
    p.set_defaults(handler=cmd_pair)
