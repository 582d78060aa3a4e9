"""Tests for the energy statistics."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats
from scipy.special import expit

from supportpoints.energy import (as_points, energy_1d_vs_cdf, energy_statistic,
                                  full_energy_distance, pairwise_distance_sum)
from supportpoints.exceptions import InvalidInputError


def brute_pair_sum(a, b):
    return sum(math.dist(u, v) for u, v in itertools.product(a, b))


class TestPairwiseDistanceSum:
    def test_single_point(self):
        assert pairwise_distance_sum([[0.0]]) == 0.0

    def test_two_points(self):
        assert pairwise_distance_sum([[0.0], [1.0]]) == 2.0

    def test_triangle(self):
        # ordered pairs: 2 * (5 + 4 + 3)
        assert pairwise_distance_sum([[0, 0], [3, 4], [0, 4]]) == pytest.approx(24.0, abs=1e-12)

    def test_matches_brute_force(self):
        a = np.random.default_rng(3).normal(size=(17, 4))
        assert pairwise_distance_sum(a) == pytest.approx(brute_pair_sum(a, a), rel=1e-13)

    def test_ragged_rejected(self):
        with pytest.raises(InvalidInputError):
            pairwise_distance_sum([[0.0, 1.0], [2.0]])

    def test_nan_rejected(self):
        with pytest.raises(InvalidInputError):
            as_points([[0.0], [np.nan]])


class TestEnergyStatistic:
    def test_singletons(self):
        e = energy_statistic([[0, 0]], [[3, 4]])
        assert e.value == pytest.approx(10.0)
        assert e.self_term_y == 0.0

    def test_coincident(self):
        assert energy_statistic([[1, 2]], [[1, 2]]).value == 0.0

    def test_two_by_two(self):
        # (2/4) * 2 - (1/4) * 2
        assert energy_statistic([[0], [1]], [[0], [1]]).value == pytest.approx(0.5)

    def test_terms_consistent(self):
        rng = np.random.default_rng(0)
        e = energy_statistic(rng.normal(size=(6, 3)), rng.normal(size=(40, 3)))
        assert e.value == pytest.approx(2 * e.cross_term - e.self_term_x - e.self_term_y, abs=1e-15)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(1)
        x, y = rng.normal(size=(7, 3)), rng.normal(size=(23, 3))
        want = 2 * brute_pair_sum(x, y) / (7 * 23) - brute_pair_sum(x, x) / 49
        assert energy_statistic(x, y).value == pytest.approx(want, rel=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            energy_statistic(np.zeros((2, 2)), np.zeros((3, 3)))

    def test_permutation_invariance(self):
        rng = np.random.default_rng(2)
        x, y = rng.normal(size=(9, 2)), rng.normal(size=(31, 2))
        base = energy_statistic(x, y).value
        got = energy_statistic(x[rng.permutation(9)], y[rng.permutation(31)]).value
        assert got == pytest.approx(base, rel=1e-13)

    def test_accepts_sample_batch(self):
        from supportpoints.dist import SampleBatch
        y = SampleBatch(np.array([[3.0, 4.0]]))
        assert energy_statistic([[0, 0]], y).value == pytest.approx(10.0)


class TestFullEnergyDistance:
    def test_identical(self):
        x = np.random.default_rng(4).normal(size=(12, 3))
        assert full_energy_distance(x, x).value == 0.0

    def test_singletons(self):
        assert full_energy_distance([[0]], [[3]]).value == pytest.approx(6.0)

    def test_hand_value(self):
        # 2/2 * (1 + 1) - 4/4 - 0
        assert full_energy_distance([[0], [2]], [[1]]).value == pytest.approx(1.0)

    def test_symmetric(self):
        rng = np.random.default_rng(5)
        x, y = rng.normal(size=(5, 2)), rng.normal(size=(8, 2))
        assert full_energy_distance(x, y).value == pytest.approx(full_energy_distance(y, x).value, rel=1e-13)


points_2d = arrays(np.float64, st.tuples(st.integers(1, 8), st.just(2)),
                   elements=st.floats(-100, 100, allow_nan=False, width=64))


def _scale(x, y):
    return max(1.0, float(np.abs(x).max()), float(np.abs(y).max()))


@settings(max_examples=200, deadline=None)
@given(points_2d, points_2d)
def test_full_distance_nonnegative(x, y):
    assert full_energy_distance(x, y).value >= -1e-12 * _scale(x, y)


@settings(max_examples=100, deadline=None)
@given(points_2d, points_2d, st.floats(-50, 50), st.floats(-50, 50))
def test_translation_invariance(x, y, c0, c1):
    c = np.array([c0, c1])
    a = full_energy_distance(x, y).value
    b = full_energy_distance(x + c, y + c).value
    assert b == pytest.approx(a, rel=1e-12, abs=1e-11 * (_scale(x, y) + 50))


@settings(max_examples=100, deadline=None)
@given(points_2d, points_2d, st.floats(0.01, 100))
def test_scaling_covariance(x, y, alpha):
    a = full_energy_distance(x, y).value
    b = full_energy_distance(alpha * x, alpha * y).value
    assert b == pytest.approx(alpha * a, rel=1e-12, abs=1e-12 * alpha * _scale(x, y))


class TestEnergy1D:
    def test_midpoint_uniform(self):
        # 2 * (x^3/3 + (1-x)^3/3) at x = 1/2
        assert energy_1d_vs_cdf([0.5], stats.uniform()) == pytest.approx(1 / 6, abs=1e-12)

    def test_closed_form_general_point(self):
        x = 0.3
        want = 2 * (x**3 / 3 + (1 - x) ** 3 / 3)
        assert energy_1d_vs_cdf([x], stats.uniform(), quad_points=200) == pytest.approx(want, abs=1e-12)

    def test_centered_grid_beats_right_grid(self):
        centered = [(2 * i - 1) / 10 for i in range(1, 6)]
        right = [i / 5 for i in range(1, 6)]
        assert energy_1d_vs_cdf(centered, stats.uniform()) < energy_1d_vs_cdf(right, stats.uniform())

    def test_steep_cdf_limit(self):
        vals = []
        for k in (10.0, 100.0, 1000.0):
            cdf = lambda t, k=k: expit(k * t)
            vals.append(energy_1d_vs_cdf([0.0], cdf, quad_points=4000, support=(-1, 1)))
        assert vals[0] > vals[1] > vals[2]
        assert vals[2] < 5e-3

    def test_bare_callable_needs_support(self):
        with pytest.raises(InvalidInputError):
            energy_1d_vs_cdf([0.0], lambda t: t)

    def test_rejects_multivariate(self):
        with pytest.raises(InvalidInputError):
            energy_1d_vs_cdf([[0.0, 1.0]], stats.norm())

    def test_agrees_with_sample_statistic(self):
        """One-dimensional statistic minus E|Y - Y'| matches the quadrature (3 MC s.e.)."""
        rng = np.random.default_rng(11)
        y = rng.uniform(size=100_000)
        x = np.array([0.15, 0.4, 0.62, 0.9])
        est = energy_statistic(x, y).value - 1 / 3  # E|Y - Y'| = 1/3 for U[0,1]
        per_draw = (2 / len(x)) * np.abs(y[:, None] - x[None, :]).sum(axis=1)
        se = per_draw.std(ddof=1) / math.sqrt(len(y))
        assert abs(est - energy_1d_vs_cdf(x, stats.uniform())) < 3 * se

    def test_same_argmin_as_sample_statistic(self):
        rng = np.random.default_rng(12)
        y = rng.uniform(size=100_000)
        family = [np.linspace(0.1, 0.9, 5), np.linspace(0.2, 1.0, 5),
                  np.linspace(0.0, 0.8, 5), np.linspace(0.05, 0.95, 5)]
        by_quad = np.argmin([energy_1d_vs_cdf(c, stats.uniform()) for c in family])
        by_sample = np.argmin([energy_statistic(c, y).value for c in family])
        assert by_quad == by_sample == 0
