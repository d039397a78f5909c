"""
Sub-commands of the pnlab command line
"""

from . import pairing, plot, series, summation, verify, zeta

MODULES = [series, pairing, summation, zeta, verify, plot]


def register_all(subparsers) -> None:
    for module in MODULES:
        module.register(subparsers)


__all__ = ["register_all", "MODULES"]
