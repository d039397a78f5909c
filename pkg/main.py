"""
pnlab command line
Entry point for the Poisson-Newton formula laboratory
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from commands import register_all
from commands.common import EXIT_USAGE, PNLabParser, RunConfig, attach_negative_values
from config import settings
from dirichlet.exceptions import PNLabError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = PNLabParser(
        prog="pnlab",
        description="Poisson-Newton formula for finite Dirichlet series: zeros, pairings and verifications",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    parser.add_argument("--seed", type=int, default=None, help=f"random seed (default {settings.SEED})")
    parser.add_argument("--show-config", action="store_true", help="print the numerical settings and exit")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    verbosity.add_argument("--quiet", "-q", action="store_true", help="warnings only")
    subparsers = parser.add_subparsers(dest="command")
    register_all(subparsers)
    return parser


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def dispatch(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run the command and map the outcome to an exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(attach_negative_values(sys.argv[1:] if argv is None else list(argv)))
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help/--version
        return int(e.code or 0)

    configure_logging(args.verbose, args.quiet)
    if args.seed is not None:
        settings.SEED = args.seed

    if args.show_config:
        sys.stdout.write(json.dumps(settings.model_dump(), indent=2) + "\n")
        return 0
    if not getattr(args, "handler", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    run = RunConfig.from_args(args)
    logger.debug(f"Running {run.command} with {run.options}")
    try:
        return args.handler(args)
    except (PNLabError, OSError, ValueError) as e:
        logger.error(f"{run.command}: {e}")
        sys.stderr.write(f"pnlab: error: {e}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
