"""
Reading and writing series, divisors and zero tables
"""

import json
import logging
import math
from pathlib import Path
from typing import Iterable, Union

from pydantic import ValidationError

from schemas import Divisor, DivisorEntry, FiniteDirichletSeries, ZeroTable

from .exceptions import MonotonicityError, ParseError, SanityGateError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# window for the first ordinate, a format sanity gate
FIRST_ZERO_WINDOW = (14.0, 14.2)


def _read_json(path: PathLike) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as e:
        raise ParseError(f"file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: {e}") from e


def read_series(path: PathLike) -> FiniteDirichletSeries:
    """Series JSON: {"lambdas": [...], "coeffs": [[re, im], ...]}"""
    data = _read_json(path)
    try:
        return FiniteDirichletSeries.model_validate(data)
    except ValidationError as e:
        raise ParseError(f"invalid series in {path}: {e}") from e


def write_series(f: FiniteDirichletSeries, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(f.model_dump(mode="json"), indent=2), encoding="utf-8")
    return path


def read_divisor(path: PathLike) -> Divisor:
    """Divisor JSON as written by write_divisor (entries with re, im, n)"""
    data = _read_json(path)
    try:
        entries = tuple(DivisorEntry(rho=complex(e["re"], e["im"]), n=int(e["n"])) for e in data.get("entries", []))
        return Divisor(
            entries=entries,
            sigma1=data["sigma1"],
            d=data.get("d", 2),
            g=data.get("g", 1),
            ymax=data.get("ymax"),
            density=data.get("density"),
            source=data.get("source", str(path)),
        )
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise ParseError(f"invalid divisor in {path}: {e}") from e


def write_divisor(div: Divisor, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(div.to_json(), indent=2), encoding="utf-8")
    return path


def read_zero_table(path: PathLike) -> ZeroTable:
    """
    One ordinate per line, '#' comments allowed; ordinates must increase and
    the first must sit near 14.13
    """
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except FileNotFoundError as e:
        raise ParseError(f"zero table not found: {path}") from e

    ordinates = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            value = float(line.split()[-1])
        except ValueError as e:
            raise ParseError(f"{path}:{lineno}: not a number: {raw!r}") from e
        if not math.isfinite(value) or value <= 0:
            raise ParseError(f"{path}:{lineno}: ordinates must be finite and positive, got {value}")
        if ordinates and value <= ordinates[-1]:
            raise MonotonicityError(f"{path}:{lineno}: ordinate {value} does not exceed {ordinates[-1]}")
        ordinates.append(value)

    if not ordinates:
        raise ParseError(f"zero table {path} is empty")
    lo, hi = FIRST_ZERO_WINDOW
    if not lo <= ordinates[0] <= hi:
        raise SanityGateError(f"first ordinate {ordinates[0]} outside [{lo}, {hi}]: not a zeta zero table")
    logger.info(f"Loaded {len(ordinates)} zeta zero ordinates from {path}")
    return ZeroTable(ordinates=tuple(ordinates), source=str(path))


def write_zero_table(ordinates: Iterable[float], path: PathLike, header: str = "") -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
        for gamma in ordinates:
            fh.write(f"{gamma:.15f}\n")
    return path
