import cmath
import math

import pytest
from pydantic import ValidationError

from dirichlet.exceptions import EvaluationOverflow, NearZeroDivision
from dirichlet.series_core import (
    eval_derivative,
    eval_many,
    eval_series,
    log_derivative,
    rescale_divisor,
    rescale_series,
    shifted_level,
    zero_density,
    zero_strip,
)
from dirichlet.zero_finder import find_zeros
from schemas import FiniteDirichletSeries


def test_eval_at_zero_of_series(poisson_series):
    assert abs(eval_series(poisson_series, 0)) == 0


def test_eval_direct_substitution(poisson_series):
    assert eval_series(poisson_series, math.log(2)) == pytest.approx(0.5, abs=1e-15)
    f = FiniteDirichletSeries(lambdas=(1.0,), coeffs=(2.0,))
    assert eval_series(f, 0) == pytest.approx(3.0)


def test_eval_many_matches_scalar(generic_series, rng):
    s = rng.normal(size=20) + 1j * rng.normal(scale=10, size=20)
    vec = eval_many(generic_series, s)
    for z, v in zip(s, vec):
        assert v == pytest.approx(eval_series(generic_series, z), rel=1e-13, abs=1e-13)


def test_log_derivative(poisson_series):
    expected = math.exp(-1) / (1 - math.exp(-1))
    assert log_derivative(poisson_series, 1.0) == pytest.approx(expected, rel=1e-14)


def test_log_derivative_at_zero_raises(poisson_series):
    with pytest.raises(NearZeroDivision) as info:
        log_derivative(poisson_series, 0.0)
    assert info.value.s == 0


def test_log_derivative_vanishes_far_right():
    f = FiniteDirichletSeries(lambdas=(1.0,), coeffs=(0.7,))
    assert abs(log_derivative(f, 40.0)) < 1e-16


def test_overflow_far_left_raises(generic_series):
    with pytest.raises(EvaluationOverflow) as info:
        eval_series(generic_series, -1000.0)
    assert info.value.s == -1000.0
    with pytest.raises(EvaluationOverflow):
        eval_derivative(generic_series, complex(-1000.0, 3.0))


def test_derivative_matches_finite_difference(generic_series):
    s, h = complex(0.3, 1.7), 1e-5
    fd = (eval_series(generic_series, s + h) - eval_series(generic_series, s - h)) / (2 * h)
    assert eval_derivative(generic_series, s) == pytest.approx(fd, rel=1e-8)


def test_conjugation_symmetry(generic_series, rng):
    s = rng.uniform(-3, 3, 1000) + 1j * rng.uniform(-50, 50, 1000)
    for z in s:
        assert eval_series(generic_series, z.conjugate()) == pytest.approx(
            eval_series(generic_series, z).conjugate(), rel=1e-14, abs=1e-14
        )


class TestZeroStrip:
    def test_poisson_series(self, poisson_series):
        strip = zero_strip(poisson_series)
        assert strip.sigma_plus == pytest.approx(0.0, abs=1e-12)
        assert strip.sigma_minus == pytest.approx(0.0, abs=1e-12)

    def test_single_term(self):
        strip = zero_strip(FiniteDirichletSeries(lambdas=(1.0,), coeffs=(4.0,)))
        assert strip.sigma_plus == pytest.approx(math.log(4), abs=1e-12)
        assert strip.sigma_minus == pytest.approx(math.log(4), abs=1e-12)

    def test_zeros_inside_strip(self, generic_series):
        strip = zero_strip(generic_series)
        div = find_zeros(generic_series, 30.0)
        assert div.entries
        for e in div.entries:
            assert strip.sigma_minus - 1e-9 <= e.rho.real <= strip.sigma_plus + 1e-9

    def test_random_series_zeros_inside_strip(self, rng):
        for _ in range(20):
            lambdas = (float(rng.uniform(0.5, 1.5)), float(rng.uniform(1.8, 3.0)))
            moduli, phases = rng.uniform(0.3, 2.0, 2), rng.uniform(0, 2 * math.pi, 2)
            coeffs = tuple(cmath.rect(r, a) for r, a in zip(moduli, phases))
            f = FiniteDirichletSeries(lambdas=lambdas, coeffs=coeffs)
            strip = zero_strip(f)
            for e in find_zeros(f, 8.0).entries:
                assert strip.sigma_minus - 1e-9 <= e.rho.real <= strip.sigma_plus + 1e-9


def test_series_validation():
    with pytest.raises(ValidationError):
        FiniteDirichletSeries(lambdas=(2.0, 1.0), coeffs=(1.0, 1.0))
    with pytest.raises(ValidationError):
        FiniteDirichletSeries(lambdas=(1.0,), coeffs=(0.0,))
    with pytest.raises(ValidationError):
        FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(1.0,))


def test_series_parses_complex_forms():
    f = FiniteDirichletSeries.model_validate({"lambdas": [1, 2], "coeffs": [[0.5, -1], "0.25+0.5j"]})
    assert f.coeffs == (complex(0.5, -1), complex(0.25, 0.5))
    assert not f.is_real


def test_zero_density(factorable_series):
    assert zero_density(factorable_series) == pytest.approx(2 / (2 * math.pi))


def test_rescale_series(generic_series):
    alpha, beta = 0.5, 0.3
    g = rescale_series(generic_series, alpha, beta)
    s = complex(0.2, 1.1)
    assert eval_series(g, s) == pytest.approx(eval_series(generic_series, alpha * s + beta), rel=1e-14)


def test_rescale_divisor_maps_zeros(poisson_series):
    div = find_zeros(poisson_series, 20.0)
    moved = rescale_divisor(div, 2.0, 0.5)
    g = rescale_series(poisson_series, 2.0, 0.5)
    for e in moved.entries:
        assert abs(eval_series(g, e.rho)) < 1e-10


def test_shifted_level(poisson_series):
    g, scale = shifted_level(poisson_series, -1.0)
    s = complex(0.4, -0.9)
    assert scale * eval_series(g, s) == pytest.approx(eval_series(poisson_series, s) + 1.0, rel=1e-14)
    # (1 + f)/2 = 1 - e^{-s}/2 vanishes at -log 2
    assert abs(eval_series(g, -math.log(2))) < 1e-14
