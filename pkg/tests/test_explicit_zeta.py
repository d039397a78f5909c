import math

import mpmath
import numpy as np
import pytest

from dirichlet.exceptions import BudgetExceeded, NonpositiveT, PoleAtSigma
from dirichlet.explicit_zeta import (
    archimedean_density,
    c0_chi0,
    c0_estimates,
    c0_zeta_reference,
    explicit_formula_check,
    extract_c0,
    load_zero_table,
    prime_support,
    trivial_zero_kernel,
    weil_functional,
)
from dirichlet.test_functions import Gaussian


@pytest.fixture
def zero_table(zero_table_path):
    return load_zero_table(zero_table_path)


def test_zero_table_matches_mpmath(zero_table):
    assert zero_table.count == 100
    for n in range(1, 6):
        assert zero_table.ordinates[n - 1] == pytest.approx(float(mpmath.zetazero(n).imag), abs=1e-8)


class TestPrimeSupport:
    def test_prime_powers_up_to_e_cubed(self):
        support = prime_support(3.0)
        assert [t.n for t in support.terms] == [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19]
        assert support.positions == sorted(support.positions)
        sixteen = next(t for t in support.terms if t.n == 16)
        assert sixteen.weight == pytest.approx(math.log(2))
        assert sixteen.position == pytest.approx(4 * math.log(2))

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            prime_support(31.0)

    def test_nonpositive(self):
        with pytest.raises(ValueError):
            prime_support(0.0)


def test_archimedean_density_matches_mpmath():
    for t in (0.0, 1.5, 14.134725, 100.0):
        expected = -math.log(math.pi) + float(mpmath.re(mpmath.digamma(0.25 + 0.5j * t)))
        assert archimedean_density(t) == pytest.approx(expected, rel=1e-12)
    assert archimedean_density([0.0, 1.0]).shape == (2,)


def test_weil_functional_of_centered_gaussian_is_real():
    value = weil_functional(Gaussian(0.0, 0.5))
    assert value.imag == 0
    # Psi is even, so the sine-weighted part cancels
    assert weil_functional(Gaussian(1.0, 0.5)).imag == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("phi", [Gaussian(0.0, 0.5), Gaussian(1.0, 0.3), Gaussian(2.0, 0.4, amplitude=0.5)])
def test_explicit_formula(zero_table, phi):
    report = explicit_formula_check(phi, zero_table, T=8.0)
    assert report.passed
    assert report.residual <= 1e-3


def test_explicit_formula_fails_with_too_few_zeros(zero_table):
    # a wide transform needs far more than three zeros
    report = explicit_formula_check(Gaussian(0.0, 0.05), zero_table.truncated(3), T=8.0, tol=1e-9)
    assert report.residual > 1e-3


def test_explicit_formula_converges_with_more_zeros(zero_table):
    phi = Gaussian(math.log(2), 0.05)
    residuals = [explicit_formula_check(phi, zero_table.truncated(n), T=4.0).residual for n in (25, 50, 100)]
    assert residuals[0] > residuals[1]
    assert residuals[2] <= max(residuals[1], 1e-8)
    assert residuals[2] <= 1e-6


class TestC0:
    def test_beta_zero(self, zero_table):
        assert extract_c0(zero_table, 0.0) == pytest.approx(-math.log(2 * math.pi), abs=1e-3)

    def test_beta_half(self, zero_table):
        assert c0_zeta_reference(0.5) == pytest.approx(-2.6861, abs=1e-4)
        assert extract_c0(zero_table, 0.5) == pytest.approx(c0_zeta_reference(0.5), abs=1e-3)

    def test_estimates_agree_across_widths(self, zero_table):
        estimates = c0_estimates(zero_table, 0.5, [Gaussian(0.0, s) for s in (0.4, 0.6)], 8.0)
        assert np.ptp(estimates) < 1e-3

    def test_rejects_test_function_vanishing_at_zero(self, zero_table):
        with pytest.raises(ValueError):
            c0_estimates(zero_table, 0.5, [Gaussian(5.0, 0.1)], 8.0)

    def test_reference_only_for_known_betas(self):
        with pytest.raises(ValueError):
            c0_zeta_reference(0.25)

    @pytest.mark.parametrize("sigma", [0.5, 2.0, complex(1.0, 3.0)])
    def test_archimedean_factor(self, sigma):
        expected = math.log(math.pi) / 2 - complex(mpmath.digamma(sigma / 2)) / 2
        assert c0_chi0(sigma) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("sigma", [0.0, -2.0, -6.0])
    def test_archimedean_factor_poles(self, sigma):
        with pytest.raises(PoleAtSigma):
            c0_chi0(sigma)


def test_trivial_zero_kernel():
    t = 0.7
    expected = -math.exp(0.5 * t) + sum(math.exp(-(2 * n + 0.5) * t) for n in range(1, 200))
    assert trivial_zero_kernel(t) == pytest.approx(expected, rel=1e-12)
    assert trivial_zero_kernel(-t) == trivial_zero_kernel(t)
    with pytest.raises(NonpositiveT):
        trivial_zero_kernel(0.0)
