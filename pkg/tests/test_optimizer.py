"""Soft-min objective, analytic gradient, and the descent optimizer."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_distinct_points
from eigencond.errors import NumericalError
from eigencond.extremal import (modulus_p_norm, proposition_constant,
                                separation_functional)
from eigencond.lattice import Configuration, first_n_lattice_points
from eigencond.optimizer import (OptimizerConfig, gradient, optimize,
                                 soft_separation_functional)

INF = math.inf


def soft_objective(z, p, beta):
    return soft_separation_functional(Configuration(z), p, beta)


def finite_difference_gradient(z, p, beta, h):
    g = np.zeros(z.size, dtype=complex)
    for i in range(z.size):
        for unit in (1.0, 1.0j):
            zp, zm = z.copy(), z.copy()
            zp[i] += unit * h
            zm[i] -= unit * h
            g[i] += unit * (soft_objective(zp, p, beta) - soft_objective(zm, p, beta)) / (2.0 * h)
    return g


class TestSoftFunctional:
    def test_single_pair_soft_min_is_exact(self):
        c = Configuration([0.0, 1.0])
        for beta in (1.0, 10.0, 1e4):
            assert soft_separation_functional(c, 2.0, beta) == separation_functional(c, 2.0)

    def test_three_collinear_points_closed_form(self):
        # gaps {1, 1, 2}: softmin = 1 - log(2 + e^{-beta})/beta
        c = Configuration([0.0, 1.0, 2.0])
        beta = 50.0
        numerator = modulus_p_norm(np.abs(c.points), 2.0)
        softmin = numerator / soft_separation_functional(c, 2.0, beta)
        expected = 1.0 - math.log(2.0 + math.exp(-beta)) / beta
        assert softmin == pytest.approx(expected, rel=1e-12)
        assert abs(softmin - 1.0) < 0.02

    @given(st.integers(min_value=0, max_value=200))
    def test_log_sum_exp_bound(self, seed):
        rng = np.random.default_rng(seed)
        z = random_distinct_points(rng, 10, min_gap=0.1)
        c = Configuration(z)
        hard = c.min_separation
        pairs = c.n * (c.n - 1) / 2.0
        numerator = modulus_p_norm(np.abs(z), 2.0)
        for beta in (10.0, 100.0, 1000.0):
            softmin = numerator / soft_separation_functional(c, 2.0, beta)
            assert softmin <= hard + 1e-12
            assert hard - softmin <= math.log(pairs) / beta + 1e-12

    def test_coincident_points_raise(self):
        with pytest.raises(NumericalError):
            soft_separation_functional(Configuration([1.0, 1.0]), 2.0, 10.0)

    def test_argument_validation(self):
        c = Configuration([0.0, 1.0])
        with pytest.raises(ValueError):
            soft_separation_functional(c, -1.0, 10.0)
        with pytest.raises(ValueError):
            soft_separation_functional(c, 2.0, 0.0)


class TestGradient:
    @pytest.mark.parametrize("seed,p,beta", [
        (0, 2.0, 10.0), (1, 2.0, 100.0), (2, 4.0, 30.0), (3, 1.0, 50.0)])
    def test_matches_central_differences(self, seed, p, beta):
        rng = np.random.default_rng(seed)
        z = random_distinct_points(rng, 8, min_gap=0.3)
        diameter = np.abs(z[:, None] - z[None, :]).max()
        g = gradient(Configuration(z), p, beta)
        fd = finite_difference_gradient(z, p, beta, 1e-6 * diameter)
        assert np.max(np.abs(g - fd)) <= 1e-5 * np.max(np.abs(g))

    def test_symmetric_triangle_is_critical_modulo_gauge(self):
        tri = np.array([np.exp(2j * math.pi * k / 3) for k in range(3)]) / math.sqrt(3.0)
        g = gradient(Configuration(tri), 2.0, 77.0)
        flat = np.concatenate([g.real, g.imag])
        # project out the two flat directions at the symmetric point:
        # rotation (i*z) and scale (z)
        for direction in (1j * tri, tri):
            v = np.concatenate([direction.real, direction.imag])
            v /= np.linalg.norm(v)
            flat -= (flat @ v) * v
        assert np.linalg.norm(flat) <= 1e-8

    def test_gradient_sum_sees_only_the_numerator(self):
        # the soft-min is translation invariant, so the gradient total equals
        # the numerator term's total
        rng = np.random.default_rng(12)
        z = random_distinct_points(rng, 6, min_gap=0.3)
        p, beta = 2.0, 40.0
        c = Configuration(z)
        g_total = gradient(c, p, beta).sum()
        moduli = np.abs(z)
        numerator = modulus_p_norm(moduli, p)
        softmin = numerator / soft_separation_functional(c, p, beta)
        grad_num = (numerator / np.sum(moduli ** p)) * moduli ** (p - 1.0) * (z / moduli)
        assert abs(g_total - grad_num.sum() / softmin) <= 1e-10 * abs(g_total)

    def test_rejects_infinite_p_and_coincident_points(self):
        c = Configuration([0.0, 1.0])
        with pytest.raises(ValueError):
            gradient(c, INF, 10.0)
        with pytest.raises(NumericalError):
            gradient(Configuration([1.0, 1.0]), 2.0, 10.0)


class TestOptimize:
    def test_two_points_reach_the_antipodal_optimum(self):
        cfg = OptimizerConfig(n=2, p=2.0, init="random", seed=0, restarts=2)
        result = optimize(cfg)
        assert abs(result.objective - 1.0 / math.sqrt(2.0)) <= 1e-3

    def test_three_points_reach_the_equilateral_optimum(self):
        cfg = OptimizerConfig(n=3, p=2.0, init="random", seed=0, restarts=2)
        result = optimize(cfg)
        assert abs(result.objective - 1.0) <= 1e-3

    def test_never_worse_than_the_start(self):
        cfg = OptimizerConfig(n=30, p=2.0, init="lattice", seed=0, max_iters=40)
        result = optimize(cfg)
        assert result.objective <= result.init_objective
        assert result.init_objective == separation_functional(first_n_lattice_points(30), 2.0)

    def test_objective_is_recomputed_on_the_returned_points(self):
        cfg = OptimizerConfig(n=5, p=2.0, init="random", seed=3, max_iters=50)
        result = optimize(cfg)
        assert result.objective == separation_functional(result.best, 2.0)

    def test_deterministic_given_seed(self):
        cfg = OptimizerConfig(n=6, p=2.0, init="random", seed=11, max_iters=30, restarts=2)
        r1, r2 = optimize(cfg), optimize(cfg)
        assert r1.trace == r2.trace
        assert np.array_equal(r1.best.points, r2.best.points)
        assert r1.objective == r2.objective

    def test_respects_the_leading_order_floor(self):
        # the optimizer may not beat the asymptotic bound by a margin: that
        # would signal an objective bug
        for n, iters in ((25, 30), (100, 30), (400, 10)):
            cfg = OptimizerConfig(n=n, p=2.0, init="lattice", seed=0, max_iters=iters)
            result = optimize(cfg)
            floor = proposition_constant(2.0) * n
            assert result.objective / floor >= 0.85

    def test_infinite_p_uses_the_true_objective(self):
        cfg = OptimizerConfig(n=5, p=INF, init="random", seed=2, max_iters=40)
        result = optimize(cfg)
        assert result.objective == separation_functional(result.best, INF)
        assert result.objective <= result.init_objective

    def test_file_init(self):
        points = tuple(first_n_lattice_points(4).points)
        cfg = OptimizerConfig(n=4, p=2.0, init="file", init_points=points,
                              seed=0, max_iters=20)
        result = optimize(cfg)
        assert result.objective <= result.init_objective

    def test_trace_is_nonincreasing_at_the_end(self):
        cfg = OptimizerConfig(n=8, p=2.0, init="random", seed=7, max_iters=60)
        result = optimize(cfg)
        objectives = [v for _, v in result.trace]
        assert objectives[-1] == min(objectives)
        assert result.trace[0][0] == 0

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OptimizerConfig(n=1)
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, p=0.0)
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, beta_schedule=(30.0, 10.0))
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, step_schedule=(0.1, -0.1))
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, restarts=0)
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, init="file")
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, init="file", init_points=(0.0, 1.0))
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, init="sobol")
        with pytest.raises(ValueError):
            OptimizerConfig(n=3, seed=-1)
