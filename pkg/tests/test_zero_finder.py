import cmath
import math

import numpy as np
import pytest

from dirichlet.exceptions import InvalidLevel
from dirichlet.series_core import eval_series
from dirichlet.zero_finder import (
    count_zeros_rect,
    find_level_zeros,
    find_zeros,
    newton_refine,
    polynomial_zeros,
    progression_divisor,
    reduce_rational,
    strip_region,
    tower_divisor,
)
from schemas import FiniteDirichletSeries, SearchRegion

TWO_PI = 2 * math.pi


def _match(points_a, points_b, tol):
    """Greedy pointwise matching of two zero lists"""
    remaining = list(points_b)
    for z in points_a:
        best = min(range(len(remaining)), key=lambda i: abs(remaining[i] - z))
        assert abs(remaining[best] - z) <= tol
        remaining.pop(best)
    assert not remaining


class TestCountZerosRect:
    def test_simple_zero_at_origin(self, poisson_series):
        assert count_zeros_rect(poisson_series, SearchRegion(re_min=-1, re_max=1, im_min=-1, im_max=1)) == 1

    def test_square_around_two_pi_i(self, poisson_series):
        region = SearchRegion(re_min=-0.5, re_max=0.5, im_min=TWO_PI - 0.5, im_max=TWO_PI + 0.5)
        assert count_zeros_rect(poisson_series, region) == 1

    def test_zero_free_right_of_strip(self, poisson_series):
        assert count_zeros_rect(poisson_series, SearchRegion(re_min=1, re_max=2, im_min=0, im_max=1)) == 0

    def test_edge_through_zero_is_nudged(self, poisson_series):
        # the top edge passes through 2 pi i
        region = SearchRegion(re_min=-1, re_max=1, im_min=-1, im_max=TWO_PI)
        assert count_zeros_rect(poisson_series, region) in (1, 2)


class TestFindZeros:
    def test_poisson_series(self, poisson_series):
        div = find_zeros(poisson_series, 20.0)
        expected = [TWO_PI * k * 1j for k in range(-3, 4)]
        _match([e.rho for e in div.entries], expected, 1e-9)
        assert all(e.n == 1 for e in div.entries)
        assert div.density == pytest.approx(1 / TWO_PI)

    def test_factorable_towers(self, factorable_series):
        div = find_zeros(factorable_series, 20.0)
        expected = [TWO_PI * k * 1j for k in range(-3, 4)] + [-math.log(2) + TWO_PI * k * 1j for k in range(-3, 4)]
        _match([e.rho for e in div.entries], expected, 1e-9)

    def test_contour_matches_towers(self, factorable_series):
        towers = find_zeros(factorable_series, 20.0)
        contour = find_zeros(factorable_series, 20.0, method="contour")
        _match([e.rho for e in contour.entries], [e.rho for e in towers.entries], 1e-9)

    def test_generic_series_residuals_and_count(self, generic_series):
        div = find_zeros(generic_series, 50.0)
        for e in div.entries:
            assert abs(eval_series(generic_series, e.rho)) <= 1e-12
        total = count_zeros_rect(generic_series, strip_region(generic_series, 50.0))
        assert div.total_multiplicity == total

    def test_double_zeros(self):
        # (1 - e^{-s})^2
        f = FiniteDirichletSeries(lambdas=(1.0, 2.0), coeffs=(-2.0, 1.0))
        div = find_zeros(f, 10.0)
        assert {e.n for e in div.entries} == {2}
        assert len(div.entries) == 3

    def test_conjugation_symmetry(self, generic_series):
        zeros = [e.rho for e in find_zeros(generic_series, 30.0).entries]
        _match([z.conjugate() for z in zeros], zeros, 1e-9)

    def test_count_grows_with_height(self, generic_series):
        low = find_zeros(generic_series, 25.0).total_multiplicity
        high = find_zeros(generic_series, 50.0).total_multiplicity
        assert high >= 1.5 * low

    def test_random_series_count_consistency(self, rng):
        for _ in range(20):
            n = int(rng.integers(1, 4))
            lam = np.sort(rng.uniform(0.5, 2.0, n)) + np.arange(n) * 0.05
            coeffs = rng.uniform(0.2, 1.5, n) * np.exp(1j * rng.uniform(0, TWO_PI, n))
            f = FiniteDirichletSeries(lambdas=tuple(lam), coeffs=tuple(coeffs))
            div = find_zeros(f, 30.0, method="contour")
            total = count_zeros_rect(f, strip_region(f, 30.0))
            assert div.total_multiplicity == total

    def test_rejects_nonpositive_height(self, poisson_series):
        with pytest.raises(ValueError):
            find_zeros(poisson_series, 0.0)


def test_newton_rejects_overflowing_steps(poisson_series):
    # f'(700) ~ 1e-304 sends the full step to Re s ~ -1e304
    z, residual = newton_refine(poisson_series, 700.0)
    assert z == 700.0
    assert residual == pytest.approx(1.0)


class TestLevels:
    def test_level_zero_is_zero_set(self, poisson_series):
        a = [e.rho for e in find_level_zeros(poisson_series, 0, 20.0).entries]
        b = [e.rho for e in find_zeros(poisson_series, 20.0).entries]
        _match(a, b, 1e-12)

    def test_level_two(self, poisson_series):
        div = find_level_zeros(poisson_series, 2, 20.0)
        expected = [1j * math.pi + TWO_PI * k * 1j for k in range(-4, 3) if abs(math.pi + TWO_PI * k) <= 20]
        _match([e.rho for e in div.entries], expected, 1e-9)

    def test_level_one_is_invalid(self, poisson_series):
        with pytest.raises(InvalidLevel):
            find_level_zeros(poisson_series, 1, 20.0)


class TestRationalReduction:
    def test_integer_frequencies(self, factorable_series):
        lam, poly = reduce_rational(factorable_series)
        assert lam == pytest.approx(1.0)
        assert poly == pytest.approx([1, -1.5, 0.5])

    def test_log_frequencies(self):
        f = FiniteDirichletSeries(lambdas=(math.log(2), math.log(4)), coeffs=(0.3, -0.2))
        lam, poly = reduce_rational(f)
        assert lam == pytest.approx(math.log(2))
        assert poly == pytest.approx([1, 0.3, -0.2])

    def test_irrational_ratio(self, generic_series):
        assert reduce_rational(generic_series) is None

    def test_towers_match_contour(self):
        f = FiniteDirichletSeries(lambdas=(1.0, 1.5), coeffs=(0.6, -0.8))
        lam, poly = reduce_rational(f)
        towers = polynomial_zeros(lam, poly, 15.0)
        for e in towers.entries:
            assert abs(eval_series(f, e.rho)) < 1e-9
        contour = find_zeros(f, 15.0, method="contour")
        inner = [e.rho for e in towers.entries if abs(e.rho.imag) < 14.5]
        for z in inner:
            assert min(abs(z - e.rho) for e in contour.entries) <= 1e-9


def test_tower_divisor_heights():
    div = tower_divisor([0j, complex(-1, 0.5)], TWO_PI, 10.0, mults=[1, 2])
    assert all(abs(e.rho.imag) <= 10.0 for e in div.entries)
    assert div.density == pytest.approx(3 / TWO_PI)
    assert {e.n for e in div.entries if e.rho.real < -0.5} == {2}


def test_tower_divisor_excludes_points():
    div = tower_divisor([0j], TWO_PI, 10.0, exclude=[0j])
    assert all(abs(e.rho) > 1 for e in div.entries)


def test_progression_divisor():
    div = progression_divisor(0j, -1, 5)
    assert [e.rho for e in div.entries] == [0, -1, -2, -3, -4]
    assert div.sigma1 == 0
    assert cmath.isclose(div.entries[-1].rho, -4)
