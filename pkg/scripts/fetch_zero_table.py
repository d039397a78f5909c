"""
Compute ordinates of the nontrivial zeta zeros with mpmath and write the
table read by `pnlab explicit` and `pnlab c0`
"""

import argparse
import logging
import sys
from pathlib import Path

import mpmath

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from dirichlet.loaders import read_zero_table, write_zero_table  # noqa: E402

logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


def compute_ordinates(count: int, dps: int = 20) -> list:
    """Imaginary parts of the first `count` zeros on the critical line"""
    mpmath.mp.dps = dps
    ordinates = []
    for n in range(1, count + 1):
        ordinates.append(float(mpmath.zetazero(n).imag))
        if n % 25 == 0:
            logger.info(f"  {n}/{count} zeros")
    return ordinates


def main():
    parser = argparse.ArgumentParser(description="Write a zeta zero ordinate table")
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--dps", type=int, default=20, help="mpmath working precision")
    parser.add_argument("--out", default="data/zeta_zeros.txt")
    args = parser.parse_args()

    logger.info("=" * 80)
    logger.info(f"ZETA ZERO TABLE: first {args.count} ordinates")
    logger.info("=" * 80)

    ordinates = compute_ordinates(args.count, args.dps)
    header = f"first {args.count} ordinates gamma of zeta(1/2 + i gamma) = 0\ncomputed with mpmath.zetazero, dps={args.dps}"
    path = write_zero_table(ordinates, args.out, header)

    # the written file has to pass the loader's own checks
    table = read_zero_table(path)
    logger.info(f"✓ {table.count} ordinates written to {path}")
    logger.info(f"  first {table.ordinates[0]:.9f}, last {table.ordinates[-1]:.9f}")
    logger.info("=" * 80)


if __name__ == "__main__":
    main()
