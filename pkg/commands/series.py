"""
Series commands: eval, expand, zeros, discrepancy, fe-detect
"""

import argparse
import logging

import pandas as pd

from dirichlet.discrepancy import (
    detect_functional_equation,
    discrepancy_at_base,
    discrepancy_poly,
    fe_c0_check,
    functional_equation_residual,
)
from dirichlet.freq_expansion import expand
from dirichlet.loaders import write_divisor
from dirichlet.series_core import eval_series, log_derivative, zero_strip
from dirichlet.zero_finder import find_level_zeros, find_zeros
from schemas import complex_pair, parse_complex

from .common import EXIT_OK, add_output_args, add_series_args, emit, load_series

logger = logging.getLogger(__name__)


def cmd_eval(args: argparse.Namespace) -> int:
    f = load_series(args)
    s = parse_complex(args.s)
    payload = {"s": complex_pair(s), "value": complex_pair(eval_series(f, s))}
    if args.log_derivative:
        payload["log_derivative"] = complex_pair(log_derivative(f, s))
    strip = zero_strip(f)
    payload["strip"] = [strip.sigma_minus, strip.sigma_plus]
    emit(payload, args.out)
    return EXIT_OK


def cmd_expand(args: argparse.Namespace) -> int:
    """Frequency terms <lambda, k> <= T with b_k; CSV with --out"""
    f = load_series(args)
    terms = expand(f, args.T, args.cap)
    logger.info(f"{len(terms)} frequency terms up to T={args.T}")
    if args.out:
        frame = pd.DataFrame(
            [(t.k_label(), t.norm, t.value, t.b.real, t.b.imag) for t in terms],
            columns=["k", "norm", "value", "b", "b_imag"],
        )
        frame.to_csv(args.out, index=False)
    else:
        emit([{"k": t.k_label(), "value": t.value, "b": complex_pair(t.b)} for t in terms])
    return EXIT_OK


def cmd_zeros(args: argparse.Namespace) -> int:
    f = load_series(args)
    if args.level is not None:
        div = find_level_zeros(f, parse_complex(args.level), args.ymax, args.method)
    else:
        div = find_zeros(f, args.ymax, args.method)
    logger.info(f"{len(div.entries)} zeros with |Im| <= {args.ymax} ({div.source})")
    if args.out:
        write_divisor(div, args.out)
    else:
        emit(div.to_json())
    return EXIT_OK


def cmd_discrepancy(args: argparse.Namespace) -> int:
    f = load_series(args)
    sigma = parse_complex(args.sigma)
    div = find_zeros(f, args.ymax)
    dp = discrepancy_poly(f, div, sigma, args.ymax)
    emit(
        {
            "sigma": complex_pair(sigma),
            "c0": complex_pair(dp.c0),
            "c0_closed_form": complex_pair(discrepancy_at_base(f, sigma)),
            "sample_residual": dp.sample_residual,
            "tail_budget": dp.tail_budget,
        },
        args.out,
    )
    return EXIT_OK


def cmd_fe_detect(args: argparse.Namespace) -> int:
    f = load_series(args)
    found = detect_functional_equation(f)
    if found is None:
        emit({"functional_equation": None}, args.out)
        return EXIT_OK
    mu, c = found
    points = [complex(0.3, 1.1), complex(-0.7, 2.5), complex(1.2, -0.4)]
    emit(
        {
            "functional_equation": {"mu": mu, "c": c},
            "residual": max(functional_equation_residual(f, mu, c, s) for s in points),
            "c0_minus_mu": complex_pair(fe_c0_check(f, mu)),
        },
        args.out,
    )
    return EXIT_OK


def register(subparsers) -> None:
    p = subparsers.add_parser("eval", help="evaluate f (and f'/f) at s")
    add_series_args(p)
    p.add_argument("--s", required=True, help="complex point, e.g. 0.5+2j")
    p.add_argument("--log-derivative", action="store_true")
    add_output_args(p)
    p.set_defaults(handler=cmd_eval)

    p = subparsers.add_parser("expand", help="frequency expansion of -log f")
    add_series_args(p)
    p.add_argument("--T", type=float, required=True, help="largest frequency")
    p.add_argument("--cap", type=int, default=None, help="term cap")
    add_output_args(p)
    p.set_defaults(handler=cmd_expand)

    p = subparsers.add_parser("zeros", help="zeros (or level points) with |Im| <= ymax")
    add_series_args(p)
    p.add_argument("--ymax", type=float, default=50.0)
    p.add_argument("--level", default=None, help="solve f(s) = level instead of f(s) = 0")
    p.add_argument("--method", choices=("auto", "contour"), default="auto")
    add_output_args(p)
    p.set_defaults(handler=cmd_zeros)

    p = subparsers.add_parser("discrepancy", help="discrepancy constant c_0(f, sigma)")
    add_series_args(p)
    p.add_argument("--sigma", default="2")
    p.add_argument("--ymax", type=float, default=50.0)
    add_output_args(p)
    p.set_defaults(handler=cmd_discrepancy)

    p = subparsers.add_parser("fe-detect", help="detect a functional equation g(-s) = c g(s)")
    add_series_args(p)
    add_output_args(p)
    p.set_defaults(handler=cmd_fe_detect)
