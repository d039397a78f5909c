"""
Plot data command: CSV samples of theta distributions, W_0, Psi and atomic sides
"""

import argparse
import logging

from dirichlet.explicit_zeta import archimedean_density, prime_support, trivial_zero_kernel
from dirichlet.freq_expansion import expand
from dirichlet.newton_cramer import THETAS, closed_theta
from services.report_service import report_service

from .common import EXIT_OK, add_series_args, load_series

logger = logging.getLogger(__name__)

KINDS = ("theta", "w0", "psi", "primes", "atoms")


def cmd_plot(args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "theta":
        frame = report_service.sample(lambda t: closed_theta(args.name, t), args.lo, args.hi, args.n)
    elif kind == "w0":
        frame = report_service.sample(lambda t: trivial_zero_kernel(t, args.beta), args.lo, args.hi, args.n)
    elif kind == "psi":
        frame = report_service.sample(archimedean_density, args.lo, args.hi, args.n)
    elif kind == "primes":
        frame = report_service.atoms_frame(prime_support(args.T))
    else:
        frame = report_service.atoms_frame(expand(load_series(args), args.T))
    path = report_service.emit_plot_data(frame, report_service.resolve(args.out or f"{kind}.csv"))
    logger.info(f"{kind}: {len(frame)} rows in {path}")
    return EXIT_OK


def register(subparsers) -> None:
    p = subparsers.add_parser("plot", help="CSV plot data")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--name", default="inverse_gamma_shift", choices=sorted(THETAS), help="theta distribution")
    p.add_argument("--beta", type=float, default=0.5, help="base point of W_0")
    p.add_argument("--lo", type=float, default=0.1)
    p.add_argument("--hi", type=float, default=5.0)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--T", type=float, default=3.0, help="cutoff for atomic sides")
    add_series_args(p)
    p.add_argument("--out", help="CSV path (default OUTPUT_DIR/<kind>.csv)")
    p.set_defaults(handler=cmd_plot)
