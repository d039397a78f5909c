import cmath
import math

import numpy as np
import pytest

from dirichlet.discrepancy import (
    detect_functional_equation,
    discrepancy_at_base,
    discrepancy_poly,
    fe_c0_check,
    functional_equation_residual,
    g_interp,
    g_interp_tail,
    shift_Q_poly,
    split_at_base,
)
from dirichlet.exceptions import NearPole, NonConstantDiscrepancy, SigmaOnDivisor, UnsupportedM
from dirichlet.series_core import eval_derivative, eval_series, log_derivative
from dirichlet.zero_finder import find_zeros
from schemas import FiniteDirichletSeries


@pytest.fixture
def poisson_divisor(poisson_series):
    return find_zeros(poisson_series, 200.0)


class TestClosedForm:
    def test_off_divisor(self, generic_series):
        sigma = complex(2.0, 0.3)
        expected = -eval_derivative(generic_series, sigma) / eval_series(generic_series, sigma)
        assert discrepancy_at_base(generic_series, sigma) == pytest.approx(expected, rel=1e-14)

    def test_poisson_at_two(self, poisson_series):
        assert discrepancy_at_base(poisson_series, 2.0) == pytest.approx(-1 / (math.e**2 - 1), rel=1e-14)

    def test_on_simple_zero(self, poisson_series):
        # 1/(e^s - 1) = 1/s - 1/2 + O(s)
        assert discrepancy_at_base(poisson_series, 0.0) == pytest.approx(0.5, rel=1e-12)

    def test_on_double_zero(self):
        # (1 - e^{-s})^2 has f''(0) = 2 and f'''(0) = -6
        f = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(-2.0, 1.0))
        assert discrepancy_at_base(f, 0.0) == pytest.approx(1.0, rel=1e-10)


class TestDiscrepancyPoly:
    def test_matches_closed_form(self, poisson_series, poisson_divisor):
        poly = discrepancy_poly(poisson_series, poisson_divisor, 2.0)
        assert len(poly.coeffs) == 1
        expected = -1 / (math.e**2 - 1)
        assert abs(poly.c0 - expected) <= poly.tail_budget + 1e-6

    def test_sigma_on_zero(self, poisson_series, poisson_divisor):
        poly = discrepancy_poly(poisson_series, poisson_divisor, 0.0)
        assert abs(poly.c0 - 0.5) <= poly.tail_budget + 1e-6

    def test_factorable_series(self, factorable_series):
        div = find_zeros(factorable_series, 200.0)
        sigma = complex(1.0, 0.5)
        poly = discrepancy_poly(factorable_series, div, sigma)
        assert abs(poly.c0 - discrepancy_at_base(factorable_series, sigma)) <= poly.tail_budget + 1e-6

    def test_wrong_divisor_is_not_constant(self, factorable_series, poisson_divisor):
        with pytest.raises(NonConstantDiscrepancy):
            discrepancy_poly(factorable_series, poisson_divisor, 2.0, tol=1e-8)


class TestInterpolation:
    def test_near_pole(self, poisson_divisor):
        with pytest.raises(NearPole):
            g_interp(poisson_divisor, 2.0, complex(0, 2 * math.pi))

    def test_vanishes_at_base(self, poisson_divisor):
        assert g_interp(poisson_divisor, 2.0, 2.0) == 0

    def test_sigma_too_close(self, poisson_divisor):
        with pytest.raises(SigmaOnDivisor):
            split_at_base(poisson_divisor, complex(0, 1e-8))

    def test_snapped_entry(self, poisson_divisor):
        rho, n, n_sigma = split_at_base(poisson_divisor, complex(1e-12, 0))
        assert n_sigma == 1
        assert rho.size == len(poisson_divisor.entries) - 1

    @pytest.mark.parametrize("direction", [1, 1j, -1, -1j])
    def test_pole_residue_is_multiplicity(self, poisson_divisor, direction):
        rho = min((e.rho for e in poisson_divisor.entries), key=lambda r: abs(r - 2j * math.pi))
        s = rho + 1e-8 * direction
        assert (s - rho) * g_interp(poisson_divisor, 2.0, s) == pytest.approx(1.0, abs=1e-6)

    def test_difference_from_log_derivative_is_constant(self, poisson_series, poisson_divisor, rng):
        points = rng.uniform(1.0, 3.0, 20) + 1j * rng.uniform(-5.0, 5.0, 20)
        values, tails = [], []
        for s in points:
            s = complex(s)
            values.append(g_interp(poisson_divisor, 2.0, s, tail_correction=True) - log_derivative(poisson_series, s))
            tails.append(g_interp_tail(poisson_divisor, 2.0, s))
        values = np.asarray(values)
        spread = float(np.max(np.abs(values - values[0])))
        assert spread <= 1e-6 + 2 * max(tails)


class TestShift:
    def test_constant_difference(self, poisson_divisor):
        sigma, sigma_prime = complex(2.0), complex(1.0, 0.5)
        q = shift_Q_poly(poisson_divisor, sigma, sigma_prime)
        assert len(q) == 1
        for s in (complex(3.0, 1.0), complex(0.5, -7.0), complex(-2.0, 0.2)):
            diff = g_interp(poisson_divisor, sigma, s) - g_interp(poisson_divisor, sigma_prime, s)
            assert diff == pytest.approx(q[0], rel=1e-10, abs=1e-12)

    def test_same_base(self, poisson_divisor):
        assert shift_Q_poly(poisson_divisor, 2.0, 2.0) == [0j]

    def test_linear_polynomial_for_higher_exponent(self, poisson_divisor):
        div = poisson_divisor.model_copy(update={"d": 3})
        sigma, sigma_prime = complex(2.0), complex(1.0, 0.5)
        q = shift_Q_poly(div, sigma, sigma_prime)
        assert len(q) == 2
        for s in (complex(3.0, 1.0), complex(0.5, -7.0)):
            diff = g_interp(div, sigma, s) - g_interp(div, sigma_prime, s)
            assert diff == pytest.approx(q[0] + q[1] * s, rel=1e-9, abs=1e-11)

    def test_unsupported_m(self, poisson_divisor):
        with pytest.raises(UnsupportedM):
            shift_Q_poly(poisson_divisor.model_copy(update={"d": 4}), 2.0, 1.0)


class TestFunctionalEquation:
    def test_poisson_series(self, poisson_series):
        assert detect_functional_equation(poisson_series) == (0.5, -1)
        for s in (complex(0.3, 2.0), complex(-1.0, 0.5)):
            assert functional_equation_residual(poisson_series, 0.5, -1, s) < 1e-13
        assert abs(fe_c0_check(poisson_series, 0.5)) < 1e-12

    def test_symmetric_series(self):
        f = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(3.0, 1.0))
        assert detect_functional_equation(f) == (1.0, 1)
        assert abs(fe_c0_check(f, 1.0)) < 1e-13

    def test_even_length_requires_plus_sign(self):
        # g(s) = e^s - e^{-s} is odd, but c = -1 is excluded for even N
        f = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(0.0, -1.0))
        assert detect_functional_equation(f) is None
        odd = FiniteDirichletSeries(lambdas=(1.0, 2.0, 3.0), coeffs=(0.5, -0.5, -1.0))
        assert detect_functional_equation(odd) == (1.5, -1)

    def test_not_palindromic(self, factorable_series, generic_series):
        assert detect_functional_equation(factorable_series) is None
        assert detect_functional_equation(generic_series) is None

    def test_detected_equation_holds_off_axis(self, poisson_series, rng):
        symmetric = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(3.0, 1.0))
        points = rng.uniform(-3.0, 3.0, 20) + 1j * rng.uniform(-10.0, 10.0, 20)
        for f in (poisson_series, symmetric):
            mu, c = detect_functional_equation(f)
            for s in points:
                s = complex(s)
                scale = max(1.0, abs(cmath.exp(mu * s) * eval_series(f, s)), abs(cmath.exp(-mu * s) * eval_series(f, -s)))
                assert functional_equation_residual(f, mu, c, s) <= 1e-10 * scale
