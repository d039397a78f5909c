import cmath
import math

import mpmath
import numpy as np
import pytest

from dirichlet.discrepancy import discrepancy_at_base, g_interp
from dirichlet.exceptions import DerivativeUnavailable, DivergentRegularization, NonpositiveT, NotRealAnalytic
from dirichlet.newton_cramer import (
    closed_theta,
    default_T,
    hadamard_regularized_pair,
    k_ell_sum,
    pair_atomic_side,
    pair_parameterized,
    pair_symmetric,
    pair_zero_side,
)
from dirichlet.special import EULER_GAMMA, digamma
from dirichlet.summation import k_ell_hurwitz
from dirichlet.test_functions import Bump, Exponential, Gaussian, InversePower
from dirichlet.zero_finder import find_zeros
from schemas import FiniteDirichletSeries, PairingConfig


@pytest.fixture
def poisson_divisor(poisson_series):
    return find_zeros(poisson_series, 1000.0)


class TestKEll:
    def test_at_origin_matches_bernoulli(self, poisson_divisor):
        result = k_ell_sum(poisson_divisor, 2, 0.0, 0.0)
        assert abs(result.value - k_ell_hurwitz(2, 0.0)) <= result.tail_bound + 1e-10
        assert k_ell_hurwitz(2, 0.0) == pytest.approx(-1 / 12)

    def test_off_divisor_matches_hurwitz(self, poisson_divisor):
        sigma = complex(0.5, 0.3)
        result = k_ell_sum(poisson_divisor, 2, sigma, 0.0)
        # the Hurwitz form leaves out rho = 0
        expected = k_ell_hurwitz(2, -sigma) + sigma**-2
        assert abs(result.value - expected) <= result.tail_bound + 1e-10

    def test_closed_form(self, poisson_divisor):
        result = k_ell_sum(poisson_divisor, 2, 1.0, 0.0)
        assert abs(result.value - 1 / (4 * math.sinh(0.5) ** 2)) <= result.tail_bound + 1e-10

    def test_higher_order_tail_is_smaller(self, poisson_divisor):
        assert k_ell_sum(poisson_divisor, 4, 1.0, 0.0).tail_bound < k_ell_sum(poisson_divisor, 2, 1.0, 0.0).tail_bound

    def test_snapped_base_adds_polynomial(self, poisson_divisor):
        t = 0.3
        with_base = k_ell_sum(poisson_divisor, 2, 0.0, t).value
        rho = np.asarray([e.rho for e in poisson_divisor.entries if abs(e.rho) > 1e-9])
        expected = complex(np.sum(rho**-2.0 * np.exp(rho * t))) + t**2 / 2
        assert with_base == pytest.approx(expected, rel=1e-12)

    def test_rejects_low_order(self, poisson_divisor):
        with pytest.raises(ValueError):
            k_ell_sum(poisson_divisor, 1, 1.0, 0.0)


class TestPairings:
    def test_classical_poisson(self, poisson_series):
        phi = Gaussian(3.0, 0.4)
        cfg = PairingConfig(ymax=50.0)
        div = find_zeros(poisson_series, cfg.ymax)
        lhs = pair_zero_side(div, phi, cfg)
        rhs = pair_atomic_side(poisson_series, phi, [discrepancy_at_base(poisson_series, 2.0)])
        # atoms b_m = 1/m at m, so the right side is sum phi(m)
        direct = sum(float(phi(m)) for m in range(1, 12))
        assert rhs.value == pytest.approx(direct, abs=1e-11)
        assert abs(lhs.value - rhs.value) <= lhs.budget + rhs.budget + 1e-8

    def test_termwise_matches_quadrature(self, generic_series):
        phi = Gaussian(3.0, 0.4)
        div = find_zeros(generic_series, 50.0)
        termwise = pair_zero_side(div, phi, PairingConfig(ymax=50.0, method="termwise"))
        quadrature = pair_zero_side(div, phi, PairingConfig(ymax=50.0, method="quadrature"))
        assert abs(termwise.value - quadrature.value) <= 1e-8 + quadrature.quad_error

    def test_restricted_formula_with_bump(self, factorable_series):
        phi = Bump(0.5, 4.0)
        cfg = PairingConfig(ymax=200.0)
        div = find_zeros(factorable_series, cfg.ymax)
        lhs = pair_zero_side(div, phi, cfg)
        rhs = pair_atomic_side(factorable_series, phi)
        assert abs(lhs.value - rhs.value) <= lhs.budget + rhs.budget + 1e-8

    def test_base_point_independence(self, poisson_series):
        phi = Gaussian(2.5, 0.5)
        values = []
        budget = 0.0
        for sigma in (2.0, complex(1.0, 0.5)):
            cfg = PairingConfig(ymax=50.0, sigma=sigma)
            div = find_zeros(poisson_series, cfg.ymax)
            lhs = pair_zero_side(div, phi, cfg)
            c0 = discrepancy_at_base(poisson_series, complex(sigma))
            values.append(lhs.value - c0 * float(phi(0.0)))
            budget += lhs.budget
        assert abs(values[0] - values[1]) <= budget + 1e-8

    def test_unpairable_test_function(self, poisson_series):
        div = find_zeros(poisson_series, 20.0)
        with pytest.raises(DerivativeUnavailable):
            pair_zero_side(div, InversePower(1.0, 2.0))

    def test_d_prime_below_d(self, poisson_series):
        div = find_zeros(poisson_series, 20.0).model_copy(update={"d": 3})
        with pytest.raises(ValueError):
            pair_zero_side(div, Gaussian(3.0, 0.4), PairingConfig(d_prime=2))

    def test_default_T(self):
        assert default_T(Gaussian(3.0, 0.4)) == pytest.approx(3.0 + 12 * 0.4)
        assert default_T(Bump(0.5, 4.0)) == pytest.approx(4.0)


class TestVariants:
    def test_symmetric_form(self, factorable_series):
        phi = Gaussian(2.0, 0.4)
        cfg = PairingConfig(ymax=100.0)
        div = find_zeros(factorable_series, cfg.ymax)
        lhs, rhs = pair_symmetric(div, factorable_series, phi, 0.3, cfg)
        assert abs(lhs.value - rhs.value) <= lhs.budget + rhs.budget + 1e-7

    def test_symmetric_needs_real_coefficients(self):
        f = FiniteDirichletSeries(lambdas=(1.0,), coeffs=(0.5j,))
        div = find_zeros(f, 20.0)
        with pytest.raises(NotRealAnalytic):
            pair_symmetric(div, f, Gaussian(2.0, 0.4), 0.0)

    def test_parameterized_form(self, poisson_series):
        phi = Gaussian(3.0, 0.4)
        cfg = PairingConfig(ymax=60.0)
        div = find_zeros(poisson_series, 120.0)
        lhs, rhs = pair_parameterized(div, poisson_series, phi, 0.5, 0.2, cfg)
        assert abs(lhs.value - rhs.value) <= lhs.budget + rhs.budget + 1e-8


class TestTheta:
    def test_closed_form(self):
        assert closed_theta("inverse_gamma_shift", 1.0) == pytest.approx(1 / (1 - math.exp(-1)))
        values = closed_theta("inverse_gamma_shift", [0.5, 2.0])
        assert values[1] == pytest.approx(1 / (1 - math.exp(-2)))

    def test_rejects_nonpositive(self):
        with pytest.raises(NonpositiveT):
            closed_theta("inverse_gamma_shift", 0.0)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            closed_theta("nope", 1.0)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 3.7, complex(1.5, 2.0)])
    def test_hadamard_pair_gives_digamma(self, s):
        # int (e^{-st} - e^{-t})/(1 - e^{-t}) dt = psi(1) - psi(s)
        result = hadamard_regularized_pair("inverse_gamma_shift", Exponential(s), 1.0, 2)
        expected = -EULER_GAMMA - digamma(s)
        assert result.value == pytest.approx(expected, abs=1e-9)

    def test_divergent_regularization(self):
        # d = 1 leaves the 1/t singularity in place
        with pytest.raises(DivergentRegularization):
            hadamard_regularized_pair("inverse_gamma_shift", Exponential(2.0), 1.0, 1)


class TestZeroSideIdentities:
    @pytest.mark.parametrize("sigma", [2.0, 3.0])
    def test_regularization_order_does_not_matter(self, generic_series, sigma):
        phi = Gaussian(3.0, 0.4)
        div = find_zeros(generic_series, 50.0)
        low = pair_zero_side(div, phi, PairingConfig(ymax=50.0, sigma=sigma, d_prime=2, method="termwise"))
        high = pair_zero_side(div, phi, PairingConfig(ymax=50.0, sigma=sigma, d_prime=3, method="quadrature"))
        assert abs(low.value - high.value) <= 1e-7 + high.quad_error

    def test_exponential_pairs_to_interpolated_log_derivative(self, generic_series, rng):
        # <W, e^{-st}> = sum n (1/(s - rho) + 1/(rho - sigma)) term by term
        ymax = 50.0
        div = find_zeros(generic_series, ymax)
        points = rng.uniform(2.0, 4.0, 10) + 1j * rng.uniform(-5.0, 5.0, 10)
        for s in points:
            s = complex(s)
            paired = pair_zero_side(div, Exponential(s), PairingConfig(sigma=2.0, ymax=ymax))
            assert paired.value == pytest.approx(g_interp(div, 2.0, s, ymax), abs=1e-10)

    def test_bump_pairing_is_independent_of_base(self, factorable_series):
        # phi(0) = 0, so the pairing itself carries no sigma dependence
        phi = Bump(0.5, 4.0)
        div = find_zeros(factorable_series, 50.0)
        reference = pair_zero_side(div, phi, PairingConfig(ymax=50.0, sigma=2.0, method="termwise"))
        for sigma in (2.0, 3.0, complex(1.0, 1.0)):
            quadrature = pair_zero_side(div, phi, PairingConfig(ymax=50.0, sigma=sigma, method="quadrature"))
            assert abs(quadrature.value - reference.value) <= 1e-7 + quadrature.quad_error

    def test_k_ell_derivative_lowers_order(self, poisson_divisor):
        t, h = 0.4, 1e-5
        ahead = k_ell_sum(poisson_divisor, 3, 1.0, t + h).value
        behind = k_ell_sum(poisson_divisor, 3, 1.0, t - h).value
        slope = (ahead - behind) / (2 * h)
        assert slope == pytest.approx(k_ell_sum(poisson_divisor, 2, 1.0, t).value, abs=1e-6)

    @pytest.mark.parametrize("ell, expected", [(4, 1 / 720), (6, -1 / 30240)])
    def test_even_orders_at_origin(self, poisson_divisor, ell, expected):
        result = k_ell_sum(poisson_divisor, ell, 0.0, 0.0)
        assert k_ell_hurwitz(ell, 0.0) == pytest.approx(expected, rel=1e-12)
        assert abs(result.value - expected) <= result.tail_bound + 1e-12

    def test_fourth_order_at_one(self, poisson_divisor):
        direct = 1 + 2 * mpmath.re(mpmath.nsum(lambda k: (2j * mpmath.pi * k + 1) ** -4, [1, mpmath.inf]))
        hurwitz = k_ell_hurwitz(4, -1.0) + 1.0
        assert hurwitz.real == pytest.approx(float(direct), rel=1e-10)
        result = k_ell_sum(poisson_divisor, 4, 1.0, 0.0)
        assert abs(result.value - hurwitz) <= result.tail_bound + 1e-10

    def test_symmetric_form_on_palindromic_series(self):
        f = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(3.0, 1.0))
        cfg = PairingConfig(ymax=100.0)
        div = find_zeros(f, cfg.ymax)
        lhs, rhs = pair_symmetric(div, f, Gaussian(2.0, 0.4), 0.3, cfg)
        assert abs(lhs.value - rhs.value) <= lhs.budget + rhs.budget + 1e-7


def test_symmetric_series_fixture_is_real(factorable_series):
    assert factorable_series.is_real
    assert cmath.isclose(discrepancy_at_base(factorable_series, 2.0).imag, 0.0, abs_tol=1e-15)
