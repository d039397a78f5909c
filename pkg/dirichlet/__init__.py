"""
Numerics of the Poisson-Newton formula for finite Dirichlet series
"""

from .exceptions import PNLabError
from .series_core import eval_series, log_derivative, zero_strip, zero_density, rescale_series, rescale_divisor
from .test_functions import Gaussian, Bump, Exponential, InversePower, PolynomialFunction, parse_test_function
from .freq_expansion import enumerate_frequencies, b_coefficient, expand, log_expansion_oracle, newton_sums
from .zero_finder import count_zeros_rect, find_zeros, find_level_zeros, reduce_rational, tower_divisor
from .discrepancy import g_interp, discrepancy_poly, discrepancy_at_base, shift_Q_poly, detect_functional_equation
from .newton_cramer import (
    k_ell_sum,
    pair_zero_side,
    pair_atomic_side,
    pair_symmetric,
    pair_parameterized,
    closed_theta,
    hadamard_regularized_pair,
)
from .summation import bernoulli, hurwitz_zeta, em_finite, em_infinite, abel_plana, ramanujan_constant
from .special import digamma, gauss_digamma_integral, euler_gamma_integral
from .explicit_zeta import (
    load_zero_table,
    prime_support,
    archimedean_density,
    explicit_formula_check,
    extract_c0,
    c0_chi0,
)

__all__ = [
    "PNLabError",
    "eval_series",
    "log_derivative",
    "zero_strip",
    "zero_density",
    "rescale_series",
    "rescale_divisor",
    "Gaussian",
    "Bump",
    "Exponential",
    "InversePower",
    "PolynomialFunction",
    "parse_test_function",
    "enumerate_frequencies",
    "b_coefficient",
    "expand",
    "log_expansion_oracle",
    "newton_sums",
    "count_zeros_rect",
    "find_zeros",
    "find_level_zeros",
    "reduce_rational",
    "tower_divisor",
    "g_interp",
    "discrepancy_poly",
    "discrepancy_at_base",
    "shift_Q_poly",
    "detect_functional_equation",
    "k_ell_sum",
    "pair_zero_side",
    "pair_atomic_side",
    "pair_symmetric",
    "pair_parameterized",
    "closed_theta",
    "hadamard_regularized_pair",
    "bernoulli",
    "hurwitz_zeta",
    "em_finite",
    "em_infinite",
    "abel_plana",
    "ramanujan_constant",
    "digamma",
    "gauss_digamma_integral",
    "euler_gamma_integral",
    "load_zero_table",
    "prime_support",
    "archimedean_density",
    "explicit_formula_check",
    "extract_c0",
    "c0_chi0",
]
