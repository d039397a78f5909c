"""
Summation commands: em, abel-plana, rc
"""

import argparse

from dirichlet.summation import abel_plana, em_finite, em_infinite, ramanujan_constant
from schemas import EMConfig, SummationResult, complex_pair, parse_complex

from .common import EXIT_OK, add_output_args, emit, load_phi


def _payload(name: str, phi_literal: str, result: SummationResult) -> dict:
    return {
        "formula": name,
        "phi": phi_literal,
        "value": complex_pair(result.value),
        "remainder_bound": result.remainder_bound,
        "terms_used": result.terms_used,
    }


def cmd_em(args: argparse.Namespace) -> int:
    phi = load_phi(args.phi)
    cfg = EMConfig(m=args.m, sigma=parse_complex(args.sigma))
    if args.N is None:
        result = em_infinite(phi, cfg)
    else:
        result = em_finite(phi, args.N, cfg)
    emit(_payload("euler-maclaurin", args.phi, result), args.out)
    return EXIT_OK


def cmd_abel_plana(args: argparse.Namespace) -> int:
    emit(_payload("abel-plana", args.phi, abel_plana(load_phi(args.phi))), args.out)
    return EXIT_OK


def cmd_rc(args: argparse.Namespace) -> int:
    result = ramanujan_constant(load_phi(args.phi), args.shift)
    emit(_payload("ramanujan-constant", args.phi, result), args.out)
    return EXIT_OK


def register(subparsers) -> None:
    p = subparsers.add_parser("em", help="Euler-MacLaurin summation of phi(n), n >= 0")
    p.add_argument("--phi", required=True, help="e.g. exp:rate=1 or invpow:q=1,p=2")
    p.add_argument("--m", type=int, default=3, help="Bernoulli order")
    p.add_argument("--N", type=int, default=None, help="finite sum up to N (default: infinite)")
    p.add_argument("--sigma", default="0", help="generalized kernel parameter, |sigma| < 2 pi")
    add_output_args(p)
    p.set_defaults(handler=cmd_em)

    p = subparsers.add_parser("abel-plana", help="Abel-Plana summation of phi(n), n >= 0")
    p.add_argument("--phi", required=True)
    add_output_args(p)
    p.set_defaults(handler=cmd_abel_plana)

    p = subparsers.add_parser("rc", help="Ramanujan constant of phi")
    p.add_argument("--phi", required=True)
    p.add_argument("--shift", type=int, default=10)
    add_output_args(p)
    p.set_defaults(handler=cmd_rc)
