#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from common.types import (
    ContractViolationError,
    DomainError,
    InsufficientDataError,
    MissingSampleError,
)
from ilf_control.control import ControllerSpec, ControllerVariant, Sampling, u_hyper
from ilf_control.lmi import build_chain
from ilf_control.lyapunov import (
    ConditionId,
    Dilation,
    IlfBisectionSolver,
    IlfCandidate,
    beta_rate_margin,
    check_c4_c5,
    check_differential_conditions,
    check_norm_bounds,
    dilation_matrix,
    dq_dv,
    dq_dx,
    estimate_alpha1,
    linear_field,
    merged_v,
    nested_level_diagnostics,
    nested_levels_report,
    q_eval,
    quadratic_decay_rate,
    shell_samples,
    solve_ilf_bisection,
    varrho,
    varrho_derivative,
)
from ilf_control.sim import SimConfig, integrate


def _candidates(P):
    return [
        IlfCandidate.finite_time(P, 0.5),
        IlfCandidate.hyper(P, 0.2),
        IlfCandidate.quadratic(P),
        IlfCandidate.nearly_fixed(P, 1.0),
    ]


def _on_unit_ellipsoid(P, z):
    return z / math.sqrt(float(z @ P @ z))


class TestDilation:
    def test_exponents(self):
        np.testing.assert_allclose(Dilation.descending(0.5, 3).exponents, [2.0, 1.5, 1.0])
        np.testing.assert_allclose(Dilation.ascending(1.0, 3).exponents, [1.0, 2.0, 3.0])

    def test_matrix_matches_scale(self):
        d = Dilation.descending(0.2, 3)
        x = np.array([1.0, -2.0, 0.5])
        np.testing.assert_allclose(dilation_matrix(d, 3.0) @ x, d.scale(3.0, x))

    @pytest.mark.parametrize("mu", [0.0, 1.5, -0.1])
    def test_rejects_bad_mu(self, mu):
        with pytest.raises(ContractViolationError):
            Dilation.descending(mu, 3)

    def test_scale_domain(self):
        with pytest.raises(DomainError):
            Dilation.descending(0.5, 2).scale(0.0, np.ones(2))

    def test_varrho(self):
        assert varrho(1.0) == 1.0
        assert varrho(1e6) < varrho(1.0) < varrho(1e-6)
        with pytest.raises(DomainError):
            varrho(0.0)

    @pytest.mark.parametrize("V", [1e-3, 0.5, 1.0, 20.0])
    def test_varrho_derivative(self, V):
        h = 1e-6 * V
        numeric = (varrho(V + h) - varrho(V - h)) / (2 * h)
        assert varrho_derivative(V) == pytest.approx(numeric, rel=1e-6)

    def test_varrho_log_bounds(self):
        log_e_minus_one = math.log(math.e - 1.0)
        for V in np.logspace(-8, 0, 1000):
            r = varrho(V)
            assert r >= -math.log(V) + log_e_minus_one
            assert r <= 1.0 - math.log(V) + 1e-12


class TestCandidates:
    def test_rejects_indefinite_p(self):
        with pytest.raises(ContractViolationError):
            IlfCandidate.quadratic(np.diag([1.0, -1.0]))

    def test_rejects_asymmetric_p(self):
        with pytest.raises(ContractViolationError):
            IlfCandidate.quadratic(np.array([[2.0, 1.0], [0.0, 2.0]]))

    def test_rejects_wrong_dilation(self, example_p):
        with pytest.raises(ContractViolationError):
            IlfCandidate('HyperQ1', example_p, Dilation.ascending(1.0, 3))

    def test_unit_level_on_unit_ellipsoid(self, example_p, rng):
        for c in _candidates(example_p):
            for _ in range(5):
                x = _on_unit_ellipsoid(example_p, rng.standard_normal(3))
                assert q_eval(c, 1.0, x) == pytest.approx(0.0, abs=1e-12)
                assert solve_ilf_bisection(c, x).value == pytest.approx(1.0, rel=1e-9)

    def test_quadratic_closed_form(self, example_p, rng):
        c = IlfCandidate.quadratic(example_p)
        for scale in (1e-3, 0.4, 7.0, 300.0):
            x = scale * rng.standard_normal(3)
            expected = math.sqrt(float(x @ example_p @ x))
            assert solve_ilf_bisection(c, x).value == pytest.approx(expected, rel=1e-10)

    @pytest.mark.parametrize("factory, dilation", [
        (lambda P: IlfCandidate.finite_time(P, 0.5), lambda: Dilation.descending(0.5, 3)),
        (lambda P: IlfCandidate.nearly_fixed(P, 1.0), lambda: Dilation.ascending(1.0, 3)),
    ])
    def test_homogeneity(self, example_p, rng, factory, dilation):
        c = factory(example_p)
        d = dilation()
        x = rng.standard_normal(3)
        base = solve_ilf_bisection(c, x).value
        for lam in (0.3, 3.0):
            scaled = solve_ilf_bisection(c, d.scale(lam, x)).value
            assert scaled == pytest.approx(lam * base, rel=1e-9)

    def test_single_sign_change(self, example_p, rng):
        grid = np.logspace(-12, 6, 361)
        for c in _candidates(example_p):
            for _ in range(10):
                direction = rng.standard_normal(3)
                x = direction / np.linalg.norm(direction) * 10 ** rng.uniform(-1, 1)
                q = np.array([q_eval(c, V, x) for V in grid])
                changes = np.count_nonzero(np.diff(np.sign(q)) != 0)
                assert changes == 1, c

    @pytest.mark.parametrize("V", [0.3, 1.0, 2.5])
    def test_analytic_derivatives(self, example_p, rng, V):
        for c in _candidates(example_p):
            x = rng.standard_normal(3)
            assert dq_dv(c, V, x, 'analytic') == pytest.approx(dq_dv(c, V, x, 'numeric'), rel=1e-6)
            gradient = dq_dx(c, V, x, 'analytic')
            np.testing.assert_allclose(dq_dx(c, V, x, 'numeric'), gradient,
                                       rtol=1e-6, atol=1e-8 * np.max(np.abs(gradient)))

    def test_dq_dv_negative(self, example_p, rng):
        for c in _candidates(example_p):
            x = rng.standard_normal(3)
            for V in (1e-3, 0.5, 4.0):
                assert dq_dv(c, V, x, 'analytic') < 0

    def test_unknown_method(self, example_p):
        with pytest.raises(ContractViolationError):
            dq_dv(IlfCandidate.quadratic(example_p), 1.0, np.ones(3), 'spline')


class TestSolver:
    def test_clamps_below_v_min(self, example_p):
        c = IlfCandidate.finite_time(example_p, 0.5)
        solver = IlfBisectionSolver(c, v_min=1e-9)
        result = solver.solve(np.array([1e-25, 0.0, 0.0]))
        assert result.clamped
        assert result.value == 1e-9
        assert solver.clamp_count == 1
        assert solver.bracket == (1e-9, 1.0)

    def test_origin_rejected(self, example_p):
        with pytest.raises(DomainError):
            solve_ilf_bisection(IlfCandidate.hyper(example_p, 0.2), np.zeros(3))

    def test_root_is_upper_end(self, example_p, rng):
        c = IlfCandidate.hyper(example_p, 0.2)
        x = 0.3 * rng.standard_normal(3)
        result = solve_ilf_bisection(c, x)
        lo, hi = result.bracket
        assert hi == result.value
        assert q_eval(c, hi, x) <= 0.0 <= q_eval(c, lo, x)
        assert hi - lo <= 1e-12 * hi

    def test_warm_start_consistent(self, example_p, rng):
        c = IlfCandidate.finite_time(example_p, 0.5)
        solver = IlfBisectionSolver(c)
        x = rng.standard_normal(3)
        cold = solve_ilf_bisection(c, x).value
        for factor in (1.0, 0.99, 0.98):
            warm = solver.solve(factor * x).value
            assert warm == pytest.approx(solve_ilf_bisection(c, factor * x).value, rel=1e-10)
        assert solver.solve(x).value == pytest.approx(cold, rel=1e-10)

    def test_merged_v_continuous_on_boundary(self, example_p, rng):
        solver = IlfBisectionSolver(IlfCandidate.hyper(example_p, 0.2))
        x = _on_unit_ellipsoid(example_p, rng.standard_normal(3))
        inside, _ = merged_v(solver, (1.0 - 1e-9) * x)
        outside, clamped = merged_v(solver, (1.0 + 1e-9) * x)
        assert not clamped
        assert abs(inside - outside) < 1e-6

    def test_merged_v_outer_is_quadratic(self, example_p):
        solver = IlfBisectionSolver(IlfCandidate.hyper(example_p, 0.2))
        x = np.array([2.0, 0.0, 0.0])
        V, _ = merged_v(solver, x)
        assert V == pytest.approx(math.sqrt(4.0 * example_p[0, 0]))

    def test_random_states_bracket_root(self, example_p, rng):
        candidates = _candidates(example_p)
        quadratic = candidates[2]
        hyper_solver = IlfBisectionSolver(candidates[1], v_min=1e-300)
        for k in range(1000):
            c = candidates[k % 4]
            direction = rng.standard_normal(3)
            x = direction / np.linalg.norm(direction) * 10 ** rng.uniform(-1, 2)
            result = solve_ilf_bisection(c, x, v_min=1e-300)
            assert not result.clamped
            lo, hi = result.bracket
            assert hi == result.value
            assert q_eval(c, lo, x) >= 0.0 >= q_eval(c, hi, x)
            assert hi - lo <= 1e-12 * hi
            slope = abs(dq_dv(c, lo, x, 'analytic'))
            assert abs(q_eval(c, hi, x)) <= 2.0 * slope * (hi - lo) + 1e-13
            if c is quadratic:
                assert result.value == pytest.approx(math.sqrt(float(x @ example_p @ x)), rel=1e-9)
            elif c is candidates[1]:
                energy = float(x @ example_p @ x)
                merged, clamped = merged_v(hyper_solver, x)
                assert not clamped
                if energy >= 1.0:
                    assert merged == math.sqrt(energy)
                else:
                    assert merged == pytest.approx(result.value, rel=1e-10)


class TestConditions:
    def test_c4_c5_exact(self, example_p):
        samples = shell_samples(3, 200, seed=1)
        levels = np.logspace(-6, 2, len(samples))
        report = check_c4_c5(IlfCandidate.hyper(example_p, 0.2), IlfCandidate.quadratic(example_p),
                             zip(levels, samples))
        assert report.flags['c4_holds']
        assert report.estimated_constants['c5_margin'] == 0.0
        assert report.holds
        assert report.sample_count == 200

    def test_c4_c5_rejects_origin(self, example_p):
        with pytest.raises(ContractViolationError):
            check_c4_c5(IlfCandidate.hyper(example_p, 0.2), IlfCandidate.quadratic(example_p),
                        [(1.0, np.zeros(3))])

    def test_c7_fails_open_loop(self):
        plant = build_chain(2)
        report = check_differential_conditions(
            IlfCandidate.quadratic(np.eye(2)), linear_field(plant.A), ConditionId.C7, 0.1,
            shell_samples(2, 50, 1.5, 10.0, seed=0))
        assert not report.holds
        assert report.margin < 0

    def test_c7_holds_closed_loop(self, example_p, example_k, plant3):
        A_cl = plant3.closed_loop(example_k)
        c2 = quadratic_decay_rate(example_p, A_cl)
        assert c2 > 0
        report = check_differential_conditions(
            IlfCandidate.quadratic(example_p), linear_field(A_cl), ConditionId.C7, 0.9 * c2,
            shell_samples(3, 200, 2.0, 100.0, seed=3))
        assert report.holds
        assert report.estimated_constants['c_hat'] >= c2 * (1.0 - 1e-6)

    def test_c6_scalar_hyper_loop(self):
        P, K = np.array([[1.0]]), np.array([-2.0])
        plant = build_chain(1)
        spec = ControllerSpec(ControllerVariant.HYPER, P, K, 1.0, v_min=1e-300)
        q1 = spec.inner_candidate
        solver = IlfBisectionSolver(q1, v_min=1e-300)

        def field(x):
            V, _ = merged_v(solver, x)
            return plant.A @ x + plant.B.reshape(-1) * u_hyper(spec, V, x).u

        samples = [np.array([s * r]) for r in np.logspace(-2, -0.05, 50) for s in (1.0, -1.0)]
        report = check_differential_conditions(q1, field, ConditionId.C6, 2.0, samples)
        assert report.holds
        assert report.sample_count == 100
        assert report.skipped_count == 0

    def test_differential_regime_contract(self, example_p):
        with pytest.raises(ContractViolationError):
            check_differential_conditions(IlfCandidate.quadratic(example_p), lambda x: -x,
                                          ConditionId.C9, 1.0, [np.ones(3)])

    def test_empty_branch(self, example_p):
        with pytest.raises(InsufficientDataError):
            check_differential_conditions(IlfCandidate.quadratic(example_p), lambda x: -x,
                                          ConditionId.C7, 1.0, [1e-3 * np.ones(3)])

    def test_c8_scalar(self):
        report = check_norm_bounds(IlfCandidate.quadratic(np.array([[4.0]])), ConditionId.C8,
                                   shell_samples(1, 40, seed=2))
        assert report.estimated_constants['a'] == pytest.approx(1.0, rel=1e-9)
        assert report.estimated_constants['k1'] == pytest.approx(2.0, rel=1e-6)
        assert report.estimated_constants['k2'] == pytest.approx(2.0, rel=1e-6)

    def test_c10_rayleigh(self, example_p):
        eigenvalues = np.linalg.eigvalsh(example_p)
        report = check_norm_bounds(IlfCandidate.quadratic(example_p), ConditionId.C10,
                                   shell_samples(3, 200, 5.0, 100.0, seed=4))
        assert report.holds
        assert report.estimated_constants['k1'] >= math.sqrt(eigenvalues[0]) * (1 - 1e-9)
        assert report.estimated_constants['k2'] <= math.sqrt(eigenvalues[-1]) * (1 + 1e-9)

    def test_c9_positive(self, example_p):
        report = check_norm_bounds(IlfCandidate.hyper(example_p, 0.2), ConditionId.C9,
                                   shell_samples(3, 200, seed=5))
        assert report.holds
        assert report.estimated_constants['k'] > 0
        assert report.skipped_count + report.sample_count == 200

    def test_alpha1_and_decay_rate(self):
        alpha1 = estimate_alpha1(1.0)
        assert 0.0 < alpha1 <= 1.0
        assert quadratic_decay_rate(np.eye(2), -2.0 * np.eye(2)) == pytest.approx(2.0)


class TestBetaRate:
    def test_exponential_series(self):
        t = np.linspace(0.0, 5.0, 51)
        report = beta_rate_margin(t, np.exp(-t))
        assert report.holds
        assert report.flags['nondecreasing']
        assert not report.flags['growth']

    def test_hyperexponential_series(self):
        t = np.linspace(0.0, 2.5, 51)
        report = beta_rate_margin(t, np.exp(-np.expm1(t)))
        assert report.holds
        assert report.flags['growth']

    def test_growing_series(self):
        t = np.linspace(0.0, 1.0, 11)
        report = beta_rate_margin(t, np.exp(t))
        assert not report.holds
        assert report.estimated_constants['beta_min'] < 0

    def test_short_series(self):
        with pytest.raises(InsufficientDataError):
            beta_rate_margin([0.0, 1.0], [1.0, 0.5])


class TestNestedLevels:
    def _trajectory(self, example_p, plant3, K):
        spec = ControllerSpec(ControllerVariant.FINITE_TIME, example_p, K, 0.5,
                              sampling=Sampling.sampled(1.0), v_min=1e-5)
        return integrate(plant3, spec, SimConfig(x0=[1.0, 0.0, 0.0], horizon=3.0, dt=0.01))

    def test_uncontrolled_levels_not_decreasing(self, example_p, plant3):
        trajectory = self._trajectory(example_p, plant3, np.zeros(3))
        levels = nested_level_diagnostics(trajectory, example_p, 0.5, 1.0, [0.0, 1.0, 2.0, 3.0])
        assert [lv.time for lv in levels] == pytest.approx([0.0, 1.0, 2.0, 3.0])
        for lv in levels:
            assert lv.v_tilde == pytest.approx(1.0, abs=1e-9)
            assert lv.rate == pytest.approx(lv.v ** -0.5)
        report = nested_levels_report(levels)
        assert not report.flags['v_decreasing']
        assert not report.holds

    def test_controlled_levels(self, example_p, example_k, plant3):
        trajectory = self._trajectory(example_p, plant3, example_k)
        times = [e.t for e in trajectory.ledger]
        report = nested_levels_report(nested_level_diagnostics(trajectory, example_p, 0.5, 1.0, times))
        assert report.flags['v_decreasing']
        assert report.flags['c_increasing']

    def test_missing_sample(self, example_p, plant3):
        trajectory = self._trajectory(example_p, plant3, np.zeros(3))
        with pytest.raises(MissingSampleError) as info:
            nested_level_diagnostics(trajectory, example_p, 0.5, 1.0, [100.0])
        assert info.value.time == 100.0
