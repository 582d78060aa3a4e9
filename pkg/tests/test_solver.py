"""Tests for the majorizer, the closed-form maps and the CCP loops."""

import time

import numpy as np
import pytest
from scipy import stats

from oracles import coordinate_descent, fd_gradient, golden_section, optimal_1d_points
from supportpoints import _backend
from supportpoints.dist import DistributionSpec, Marginal, sample
from supportpoints.energy import energy_statistic
from supportpoints.exceptions import InvalidInputError, SingularityError
from supportpoints.solver import (SolverConfig, Termination, ccp_map, ccp_maps,
                                  check_pairwise_distinct, initial_subsample, majorizer_hq,
                                  sp_ccp, sp_sccp)


def random_triple(rng, n, big_n, p):
    x_prev = rng.normal(size=(n, p))
    y = rng.normal(size=(big_n, p))
    return x_prev, y


class TestMajorizer:
    def test_touches_at_x_prev(self):
        x_prev, y = random_triple(np.random.default_rng(0), 6, 30, 3)
        e = energy_statistic(x_prev, y).value
        assert majorizer_hq(x_prev, x_prev, y) == pytest.approx(e, rel=1e-12)

    def test_hand_value_single_point(self):
        # 2/(1*2) * [(0-0)^2/(2*1) + 1/2 + (0-2)^2/(2*1) + 1/2] = 3
        assert majorizer_hq([[0.0]], [[1.0]], [[0.0], [2.0]]) == pytest.approx(3.0)

    def test_perturbation_sweep(self):
        rng = np.random.default_rng(1)
        x_prev, y = random_triple(rng, 5, 20, 2)
        for _ in range(1000):
            x = x_prev + rng.normal(scale=10.0 ** rng.uniform(-4, 0.5), size=x_prev.shape)
            assert majorizer_hq(x, x_prev, y) - energy_statistic(x, y).value >= -1e-10

    def test_singular(self):
        with pytest.raises(SingularityError):
            majorizer_hq([[0.0]], [[1.0]], [[1.0], [2.0]])


class TestMap:
    def test_symmetric_pair(self):
        np.testing.assert_allclose(ccp_map(0, [[1.0]], [[0.0], [2.0]]), [1.0])

    def test_single_draw(self):
        c, v = np.array([0.3, -1.2]), np.array([0.7, 0.25])
        np.testing.assert_allclose(ccp_map(0, [c], [c + v]), c + v, rtol=0, atol=1e-15)

    def test_two_points_hand_and_oracle(self):
        x_prev, y = np.array([[0.0], [1.0]]), np.array([[0.25], [0.75]])
        # W = 4 + 4/3, sum y/d = 2, repulsion -1
        got = ccp_map(0, x_prev, y)[0]
        assert got == pytest.approx(3 / 16, abs=1e-15)

        def f(t):
            return majorizer_hq([[t], [1.0]], x_prev, y)
        assert got == pytest.approx(golden_section(f, -2.0, 2.0), abs=1e-6)

    def test_stacked_matches_single(self):
        x_prev, y = random_triple(np.random.default_rng(2), 7, 40, 3)
        stacked = ccp_maps(x_prev, y)
        for i in range(7):
            np.testing.assert_allclose(stacked[i], ccp_map(i, x_prev, y), rtol=1e-12)

    def test_global_minimizer(self):
        rng = np.random.default_rng(3)
        x_prev, y = random_triple(rng, 3, 12, 2)
        lo, hi = y.min(axis=0) - 2, y.max(axis=0) + 2
        oracle = coordinate_descent(lambda z: majorizer_hq(z, x_prev, y), x_prev, lo, hi)
        np.testing.assert_allclose(ccp_maps(x_prev, y), oracle, atol=1e-5)

    def test_stationary(self):
        x_prev, y = random_triple(np.random.default_rng(4), 4, 25, 3)
        m = ccp_maps(x_prev, y)
        g = fd_gradient(lambda z: majorizer_hq(z, x_prev, y), m)
        assert np.abs(g).max() < 1e-4

    def test_singularity_names_pair(self):
        with pytest.raises(SingularityError) as info:
            ccp_map(1, [[0.0], [2.0]], [[1.0], [2.0]])
        assert info.value.pair == (1, 1)
        with pytest.raises(SingularityError) as info:
            ccp_maps([[0.0], [2.0]], [[1.0], [2.0]])
        assert info.value.pair == (1, 1)

    def test_coincident_points(self):
        with pytest.raises(SingularityError) as info:
            ccp_map(0, [[0.0], [0.0]], [[1.0]])
        assert info.value.pair == (0, 1)


class TestDistinct:
    def test_basic(self):
        assert check_pairwise_distinct([[0.0], [1.0]], 0.5)
        assert not check_pairwise_distinct([[0.0], [0.0]], 0.0)
        assert not check_pairwise_distinct([[0.0], [1.0]], 1.0)

    def test_random_draws(self):
        x = np.random.default_rng(5).normal(size=(100, 3))
        assert check_pairwise_distinct(x, 0.0)


class TestConfig:
    @pytest.mark.parametrize("kw", [{"resample_size": 0}, {"max_iters": 0}, {"move_tol": 0.0},
                                    {"distinct_tol": -1.0}, {"threads": 0}])
    def test_validation(self, kw):
        with pytest.raises(InvalidInputError):
            SolverConfig(**kw)


UNIFORM_OPT = None


def uniform_optimum():
    global UNIFORM_OPT
    if UNIFORM_OPT is None:
        UNIFORM_OPT = optimal_1d_points(5, stats.uniform())
    return UNIFORM_OPT


class TestSpCcp:
    def test_uniform_five(self):
        y = np.random.default_rng(6).uniform(size=(10_000, 1))
        x, rep = sp_ccp(y, 5)
        np.testing.assert_allclose(np.sort(x[:, 0]), uniform_optimum(), atol=0.02)
        assert rep.termination is Termination.CONVERGED

    def test_two_draws_single_point(self):
        # every point of the segment is optimal for n = 1
        x, _ = sp_ccp([[0.0, 0.0], [2.0, 1.0]], 1)
        assert energy_statistic(x, [[0.0, 0.0], [2.0, 1.0]]).value == pytest.approx(np.hypot(2, 1))

    def test_two_draws_midpoint_from_midpoint(self):
        x, _ = sp_ccp([[0.0], [2.0]], 1, init=[[1.0]])
        assert x[0, 0] == pytest.approx(1.0)

    def test_normal_median(self):
        y = np.random.default_rng(7).normal(size=(10_000, 1))
        x, _ = sp_ccp(y, 1)
        assert abs(x[0, 0]) < 0.05

    def test_descent(self):
        rng = np.random.default_rng(8)
        y = rng.exponential(size=(3000, 3))
        _, rep = sp_ccp(y, 20, SolverConfig(seed=3))
        tr = np.array(rep.objective_trace)
        assert len(tr) == rep.iterations + 1
        assert np.all(np.diff(tr) <= 1e-10)

    def test_output_decreases_objective(self):
        rng = np.random.default_rng(9)
        y = rng.normal(size=(2000, 2))
        init = initial_subsample(y, 15, 4)
        x, _ = sp_ccp(y, 15, SolverConfig(seed=4))
        assert energy_statistic(x, y).value <= energy_statistic(init, y).value
        assert check_pairwise_distinct(x)

    def test_more_points_than_draws(self):
        y = np.random.default_rng(10).normal(size=(8, 2))
        x, rep = sp_ccp(y, 12, SolverConfig(max_iters=50))
        assert x.shape == (12, 2)
        assert check_pairwise_distinct(x)
        assert rep.termination is not Termination.DISTINCTNESS_VIOLATION

    def test_duplicate_rows_in_chain(self):
        # rejected MCMC proposals repeat states; initial points may collide
        base = np.random.default_rng(11).normal(size=(50, 2))
        y = np.repeat(base, 4, axis=0)
        x, rep = sp_ccp(y, 60, SolverConfig(max_iters=30, seed=1))
        assert check_pairwise_distinct(x)
        assert np.all(np.diff(rep.objective_trace) <= 1e-10)

    def test_equivariance(self):
        rng = np.random.default_rng(12)
        y = rng.normal(size=(1500, 2)) * [1.0, 0.5]
        init = initial_subsample(y, 8, 0)
        theta = 0.7
        rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        shift = np.array([3.0, -1.0])
        cfg = SolverConfig(move_tol=1e-9)
        a, _ = sp_ccp(y, 8, cfg, init=init)
        b, _ = sp_ccp(y @ rot.T + shift, 8, cfg, init=init @ rot.T + shift)
        np.testing.assert_allclose(a @ rot.T + shift, b, atol=1e-8)

    def test_deterministic(self):
        y = np.random.default_rng(13).normal(size=(1000, 3))
        a, _ = sp_ccp(y, 10, SolverConfig(seed=5))
        b, _ = sp_ccp(y, 10, SolverConfig(seed=5))
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("backend", _backend.available_backends())
    def test_thread_count_does_not_change_result(self, backend):
        y = np.random.default_rng(14).normal(size=(1000, 3))
        a, _ = sp_ccp(y, 10, SolverConfig(seed=5, threads=1, backend=backend, max_iters=40))
        b, _ = sp_ccp(y, 10, SolverConfig(seed=5, threads=4, backend=backend, max_iters=40))
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)

    def test_init_shape_checked(self):
        with pytest.raises(InvalidInputError):
            sp_ccp(np.zeros((5, 2)) + np.arange(5)[:, None], 2, init=np.zeros((3, 2)))


class TestSpSccp:
    def test_uniform_five(self):
        spec = DistributionSpec((Marginal("uniform", (0, 1)),))
        x, rep = sp_sccp(spec, 5, SolverConfig(seed=0))
        np.testing.assert_allclose(np.sort(x[:, 0]), uniform_optimum(), atol=0.02)
        assert rep.iterations == 500  # movement never falls below 1e-6 under resampling

    def test_normal_origin(self):
        spec = DistributionSpec.iid(Marginal("normal", (0, 1)), 2)
        x, _ = sp_sccp(spec, 1, SolverConfig(seed=1, max_iters=200))
        assert np.linalg.norm(x[0]) < 0.05

    def test_reproducible(self):
        spec = DistributionSpec.iid(Marginal("exponential", (1,)), 2)
        cfg = SolverConfig(seed=2, max_iters=20, resample_size=2000)
        assert np.array_equal(sp_sccp(spec, 6, cfg)[0], sp_sccp(spec, 6, cfg)[0])

    def test_beats_random_subsample(self):
        spec = DistributionSpec.iid(Marginal("beta", (2, 4)), 2)
        x, _ = sp_sccp(spec, 128, SolverConfig(seed=3, max_iters=200))
        wins = 0
        for t in range(100):
            y = sample(spec, 100_000, [77, t]).draws
            sub = y[np.random.default_rng(t).choice(len(y), 128, replace=False)]
            wins += energy_statistic(x, y).value < energy_statistic(sub, y).value
        assert wins >= 95


def test_per_iteration_cost_scaling():
    rng = np.random.default_rng(15)
    y = rng.normal(size=(10_000, 2))
    xs = {n: rng.normal(size=(n, 2)) for n in (1000, 2000)}
    best = {n: np.inf for n in xs}
    for _ in range(7):
        for n, x in xs.items():
            t0 = time.perf_counter()
            _backend.sweep(x, y, 0.0)
            best[n] = min(best[n], time.perf_counter() - t0)
    ratio = best[2000] / best[1000]
    print(f"sweep time ratio n=2000/n=1000: {ratio:.2f}")
    assert 2.0 <= ratio <= 5.0
