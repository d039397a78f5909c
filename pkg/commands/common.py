"""
Shared argument handling for the pnlab sub-commands
"""

import argparse
import json
import logging
import re
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from config import Settings, settings
from dirichlet.exceptions import ParseError
from dirichlet.loaders import read_series
from dirichlet.test_functions import TestFunction, parse_test_function
from schemas import FiniteDirichletSeries, PairingConfig, parse_complex

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


# a value like -1.5,0.5 or -1+2j does not match argparse's negative-number test
NEGATIVE_VALUE = re.compile(r"^-[\d.]")


class PNLabParser(argparse.ArgumentParser):
    """ArgumentParser without prefix matching of long options (--s is not --seed)"""

    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)


def attach_negative_values(argv: List[str]) -> List[str]:
    """Rewrite '--coeffs -1.5,0.5' as '--coeffs=-1.5,0.5'"""
    out: List[str] = []
    for token in argv:
        if out and NEGATIVE_VALUE.match(token) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
    return out


class RunConfig(BaseModel):
    """Parsed command line together with the numerical settings in effect"""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    command: str
    options: Dict[str, Any] = Field(default_factory=dict)
    numerics: Settings = Field(default_factory=lambda: settings)
    output: Optional[str] = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        options = {k: v for k, v in vars(args).items() if k not in ("handler", "command") and not callable(v)}
        return cls(command=args.command or "", options=options, output=getattr(args, "out", None))


# ============= Argument groups =============

def add_series_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("series")
    group.add_argument("--series", help="series JSON file {lambdas, coeffs}")
    group.add_argument("--lambdas", help="comma separated frequencies, e.g. 1,1.4142")
    group.add_argument("--coeffs", help="comma separated coefficients, e.g. -1.5,0.5 or 0.3+0.1j")


def add_pairing_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pairing")
    group.add_argument("--sigma", default="2", help="base point of the interpolation (default 2)")
    group.add_argument("--d-prime", type=int, default=2, help="order d' of the primitive")
    group.add_argument("--ymax", type=float, default=50.0, help="zero truncation height")
    group.add_argument("--method", choices=("termwise", "quadrature"), default="termwise")
    group.add_argument("--T", type=float, default=None, help="atom truncation (default from phi)")


def add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", help="write the result to this file instead of stdout")


# ============= Loading =============

def _split(text: str) -> list:
    return [chunk.strip() for chunk in text.split(",") if chunk.strip()]


def load_series(args: argparse.Namespace) -> FiniteDirichletSeries:
    if args.series:
        return read_series(args.series)
    if not args.lambdas or not args.coeffs:
        raise ParseError("give --series FILE or both --lambdas and --coeffs")
    try:
        return FiniteDirichletSeries(
            lambdas=tuple(float(x) for x in _split(args.lambdas)),
            coeffs=tuple(parse_complex(c) for c in _split(args.coeffs)),
        )
    except (ValueError, ValidationError) as e:
        raise ParseError(f"invalid series: {e}") from e


def load_phi(literal: str) -> TestFunction:
    return parse_test_function(literal)


def pairing_config(args: argparse.Namespace) -> PairingConfig:
    try:
        return PairingConfig(
            sigma=parse_complex(args.sigma),
            d_prime=args.d_prime,
            ymax=args.ymax,
            method=args.method,
            quad_tol=settings.QUAD_TOL,
        )
    except (ValueError, ValidationError) as e:
        raise ParseError(f"invalid pairing options: {e}") from e


def emit(payload: Any, out: Optional[str] = None) -> None:
    """JSON to stdout, or to --out"""
    text = json.dumps(payload, indent=2, default=str)
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote {path}")
    else:
        sys.stdout.write(text + "\n")
