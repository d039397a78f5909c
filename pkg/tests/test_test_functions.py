import math

import numpy as np
import pytest
from scipy import integrate

from dirichlet.exceptions import DerivativeUnavailable, ParseError
from dirichlet.test_functions import (
    Bump,
    Exponential,
    Gaussian,
    InversePower,
    PolynomialFunction,
    oscillatory_integral,
    parse_test_function,
    quad_complex,
)


@pytest.mark.parametrize(
    "phi",
    [Gaussian(3.0, 0.4), Gaussian(-1.0, 1.3, amplitude=2.0), Bump(0.5, 4.0), InversePower(1.0, 2.0), Exponential(0.7)],
    ids=["gauss", "gauss-shifted", "bump", "invpow", "exp"],
)
def test_derivatives_match_finite_differences(phi, rng):
    lo, hi = (0.6, 3.9) if isinstance(phi, Bump) else (0.1, 4.0)
    h = 1e-6
    for t in rng.uniform(lo, hi, 8):
        for k in range(1, 4):
            fd = (phi.derivative(t + h, k - 1) - phi.derivative(t - h, k - 1)) / (2 * h)
            exact = phi.derivative(t, k)
            assert exact == pytest.approx(fd, rel=1e-6, abs=1e-7)


def test_gaussian_transform_at_zero_is_integral():
    phi = Gaussian(0.7, 0.5, amplitude=1.5)
    total, _ = integrate.quad(lambda t: float(phi(t)), -np.inf, np.inf, epsabs=1e-13)
    assert complex(phi.transform(0.0)).real == pytest.approx(total, abs=1e-10)


def test_gaussian_transform_convention():
    phi = Gaussian(1.0, 0.6)
    x = 2.3
    re, _ = integrate.quad(lambda t: float(phi(t)) * math.cos(x * t), -10, 12, epsabs=1e-13)
    im, _ = integrate.quad(lambda t: -float(phi(t)) * math.sin(x * t), -10, 12, epsabs=1e-13)
    assert complex(phi.transform(x)) == pytest.approx(complex(re, im), abs=1e-10)


@pytest.mark.parametrize("rho", [complex(0, 6.283185307179586), complex(-0.69, 12.0), complex(0.3, -40.0), complex(-2.0, 0.0)])
def test_gaussian_laplace_matches_quadrature(rho):
    phi = Gaussian(3.0, 0.4)
    expected = oscillatory_integral(phi, 0.0, 3.0 + 12 * 0.4, rho)
    assert phi.laplace_from(rho) == pytest.approx(expected, abs=1e-11)


def test_gaussian_laplace_near_origin():
    phi = Gaussian(0.0, 0.5)
    rho = complex(0.5, 14.134725)
    expected, _ = quad_complex(lambda t: np.exp(rho * t) * phi(t), 0.0, 8.0, tol=1e-14)
    assert phi.laplace_from(rho) == pytest.approx(expected, abs=1e-11)


def test_bump_is_compactly_supported():
    phi = Bump(0.5, 4.0)
    assert phi(0.5) == 0.0
    assert phi(4.0) == 0.0
    assert phi(2.25) == pytest.approx(math.exp(-1))
    assert phi.vanishes_at_zero()
    assert phi.reflected() is None


def test_bump_has_no_transform_oracle():
    with pytest.raises(DerivativeUnavailable):
        Bump(0.5, 4.0).transform(1.0)


def test_derivative_order_cap():
    with pytest.raises(DerivativeUnavailable):
        Bump(0.5, 4.0).derivative(1.0, 17)


def test_exponential_laplace():
    phi = Exponential(2.0)
    assert phi.laplace_from(complex(0.5, 3.0)) == pytest.approx(1 / (2.0 - complex(0.5, 3.0)))
    with pytest.raises(DerivativeUnavailable):
        phi.laplace_from(3.0)


def test_shifted_families():
    for phi in (Gaussian(1.0, 0.5), Exponential(1.3), InversePower(2.0, 3.0), PolynomialFunction([1.0, -2.0, 0.5])):
        moved = phi.shifted(1.5)
        assert complex(moved(0.25)) == pytest.approx(complex(phi(1.75)), rel=1e-13)


class TestParse:
    def test_gaussian(self):
        phi = parse_test_function("gaussian:mu=3,s=0.4")
        assert isinstance(phi, Gaussian)
        assert (phi.mu, phi.s) == (3.0, 0.4)

    def test_bump_and_poly(self):
        assert isinstance(parse_test_function("bump:a=0.5,b=4"), Bump)
        poly = parse_test_function("poly:c=1;0;2")
        assert poly(2.0) == pytest.approx(9.0)

    def test_exp_complex_rate(self):
        phi = parse_test_function("exp:rate=1+2i")
        assert phi.rate == complex(1, 2)
        assert not phi.is_real

    @pytest.mark.parametrize("literal", ["", "sinc:a=1", "gaussian:mu=1,width=2", "gaussian:mu", "bump:a=4,b=1"])
    def test_rejects(self, literal):
        with pytest.raises(ParseError):
            parse_test_function(literal)
