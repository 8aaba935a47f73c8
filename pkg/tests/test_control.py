#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from common.logger import ColorLogger
from common.types import ContractViolationError, IlfSolverError
from ilf_control.control import (
    Branch,
    ControllerSpec,
    ControllerVariant,
    HyperLaw,
    IlfController,
    Sampling,
    control_law,
    sampled_controller,
    u_combined,
    u_finite_time,
    u_hyper,
    u_linear,
)
from ilf_control.lmi import build_chain
from ilf_control.lyapunov import IlfBisectionSolver, IlfCandidate, merged_v, varrho
from ilf_control.sim import SimConfig, integrate

P1 = np.array([[1.0]])
K1 = np.array([-2.0])


class TestLaws:
    def test_linear(self, example_p, example_k):
        spec = ControllerSpec(ControllerVariant.LINEAR, example_p, example_k, 0.5)
        x = np.array([0.1, -0.2, 0.3])
        value = u_linear(spec, x)
        assert value.u == pytest.approx(float(example_k @ x))
        assert value.branch == Branch.LINEAR
        assert control_law(spec, 123.0, x).u == value.u

    def test_finite_time_unit_level_is_linear(self, example_p, example_k):
        spec = ControllerSpec(ControllerVariant.FINITE_TIME, example_p, example_k, 0.5)
        x = np.array([0.4, 0.1, -0.3])
        assert u_finite_time(spec, 1.0, x).u == pytest.approx(float(example_k @ x))

    def test_finite_time_scalar(self):
        spec = ControllerSpec(ControllerVariant.FINITE_TIME, P1, K1, 0.5)
        assert u_finite_time(spec, 0.25, [0.25]).u == pytest.approx(-1.0)

    @pytest.mark.parametrize("x", [1e-3, 0.5, -3.0])
    def test_finite_time_relay_at_unit_mu(self, x):
        spec = ControllerSpec(ControllerVariant.FINITE_TIME, P1, K1, 1.0)
        value = u_finite_time(spec, abs(x), [x])
        assert value.u == pytest.approx(-2.0 * math.copysign(1.0, x))

    def test_finite_time_clamp(self):
        spec = ControllerSpec(ControllerVariant.FINITE_TIME, P1, K1, 0.5, v_min=1e-6)
        value = u_finite_time(spec, 1e-9, [1e-9])
        assert value.clamped
        assert value.u == pytest.approx(-2.0 * 1e-9 / math.sqrt(1e-6))

    def test_hyper_branches(self):
        spec = ControllerSpec(ControllerVariant.HYPER, P1, K1, 1.0)
        outer = u_hyper(spec, 3.0, [3.0])
        assert outer.branch == Branch.OUTER and outer.u == pytest.approx(-6.0)
        V = 0.2
        inner = u_hyper(spec, V, [0.5])
        assert inner.branch == Branch.INNER
        assert inner.u == pytest.approx(-2.0 * varrho(V) * 0.5)

    def test_hyper_continuous_across_unit_ellipsoid(self, example_p, example_k, rng):
        spec = ControllerSpec(ControllerVariant.HYPER, example_p, example_k, 0.2)
        solver = IlfBisectionSolver(spec.inner_candidate)
        z = rng.standard_normal(3)
        x = z / math.sqrt(float(z @ example_p @ z))
        inside = (1.0 - 1e-9) * x
        outside = (1.0 + 1e-9) * x
        u_in = u_hyper(spec, merged_v(solver, inside)[0], inside)
        u_out = u_hyper(spec, merged_v(solver, outside)[0], outside)
        assert u_in.branch == Branch.INNER and u_out.branch == Branch.OUTER
        assert u_in.u == pytest.approx(u_out.u, abs=1e-6 * max(abs(u_out.u), 1.0))

    def test_prefactored_hyper_is_finite_time_at_mapped_level(self, example_p, example_k, rng):
        hyper = ControllerSpec(ControllerVariant.HYPER, example_p, example_k, 0.2, v_min=1e-300)
        finite = ControllerSpec(ControllerVariant.FINITE_TIME, example_p, example_k, 0.2)
        h_solver = IlfBisectionSolver(hyper.inner_candidate, v_min=1e-300)
        f_solver = IlfBisectionSolver(finite.inner_candidate)
        for _ in range(20):
            z = rng.standard_normal(3)
            x = z / math.sqrt(float(z @ example_p @ z)) * 10 ** rng.uniform(-1.5, -0.1)
            V_h = h_solver.solve(x).value
            V_f = f_solver.solve(x).value
            assert V_f * varrho(V_h) == pytest.approx(1.0, rel=1e-9)
            assert u_hyper(hyper, V_h, x).u == pytest.approx(u_finite_time(finite, V_f, x).u, rel=1e-8)

    def test_plain_hyper_law(self):
        spec = ControllerSpec(ControllerVariant.HYPER, P1, K1, 0.5, hyper_law=HyperLaw.PLAIN)
        finite = ControllerSpec(ControllerVariant.FINITE_TIME, P1, K1, 0.5)
        V = 0.2
        r = varrho(V)
        value = u_hyper(spec, V, [0.5])
        assert value.u == pytest.approx(-2.0 * r * 0.5)
        assert value.alternate == pytest.approx(r ** -0.5 * value.u)
        assert value.u == pytest.approx(r ** 0.5 * u_finite_time(finite, 1.0 / r, [0.5]).u)
        assert u_hyper(spec, 3.0, [3.0]).u == pytest.approx(-6.0)

    def test_hyper_law_from_string(self):
        spec = ControllerSpec(ControllerVariant.HYPER, P1, K1, 0.5, hyper_law="plain")
        assert spec.hyper_law == HyperLaw.PLAIN
        with pytest.raises(ContractViolationError):
            ControllerSpec(ControllerVariant.HYPER, P1, K1, 0.5, hyper_law="cubic")

    def test_combined_outer(self):
        spec = ControllerSpec(ControllerVariant.COMBINED, P1, K1, 1.0, nu=1.0)
        value = u_combined(spec, 2.0, [2.0])
        assert value.branch == Branch.OUTER
        assert value.u == pytest.approx(4.0 * K1[0])

    def test_combined_inner_reports_alternate(self):
        spec = ControllerSpec(ControllerVariant.COMBINED, P1, K1, 0.5, nu=1.0)
        V = 0.3
        value = u_combined(spec, V, [0.5])
        r = varrho(V)
        assert value.branch == Branch.INNER
        assert value.u == pytest.approx(-2.0 * r * 0.5)
        assert value.alternate == pytest.approx(r ** -0.5 * value.u)

    def test_combined_requires_outer(self):
        spec = ControllerSpec(ControllerVariant.HYPER, P1, K1, 0.5)
        with pytest.raises(ContractViolationError):
            u_combined(spec, 1.0, [0.5])


class TestSpec:
    def test_candidates(self, example_p, example_k):
        spec = ControllerSpec(ControllerVariant.COMBINED, example_p, example_k, 0.2, nu=0.5)
        assert spec.n == 3
        assert spec.inner_candidate.variant.value == "HyperQ1"
        assert spec.outer_candidate.variant.value == "NearlyFixedQ2bar"
        assert ControllerSpec(ControllerVariant.LINEAR, example_p, example_k, 0.2).outer_candidate is None

    def test_invalid(self, example_p, example_k):
        with pytest.raises(ContractViolationError):
            ControllerSpec(ControllerVariant.COMBINED, example_p, example_k, 0.2)
        with pytest.raises(ContractViolationError):
            ControllerSpec(ControllerVariant.HYPER, example_p, example_k[:2], 0.2)
        with pytest.raises(ContractViolationError):
            ControllerSpec(ControllerVariant.HYPER, example_p, example_k, 0.2, v_min=0.0)
        with pytest.raises(ContractViolationError):
            ControllerSpec(ControllerVariant.HYPER, -example_p, example_k, 0.2)

    def test_sampling(self):
        assert Sampling.continuous().describe() == "Continuous"
        assert Sampling.sampled(0.5).describe() == "Sampled(0.5)"
        with pytest.raises(ContractViolationError):
            Sampling.sampled(0.0)

    def test_wrong_state_dimension(self, example_p, example_k):
        spec = ControllerSpec(ControllerVariant.HYPER, example_p, example_k, 0.2)
        with pytest.raises(ContractViolationError):
            u_hyper(spec, 0.5, [1.0, 0.0])


class TestSampledController:
    def _spec(self, example_p, example_k, period=0.5):
        return ControllerSpec(ControllerVariant.FINITE_TIME, example_p, example_k, 0.5,
                              sampling=Sampling.sampled(period), v_min=1e-6)

    def test_holds_between_samples(self, example_p, example_k, plant3):
        controller = sampled_controller(self._spec(example_p, example_k), plant3)
        x = np.array([0.3, -0.1, 0.2])
        for k in range(11):
            controller.control(k * 0.1, x)
        ledger = controller.ledger_frame()
        assert ledger['t_i'].tolist() == pytest.approx([0.0, 0.5, 1.0])
        assert ledger['V_i'].nunique() == 1
        assert set(ledger['branch']) == {'inner'}
        expected = IlfCandidate.finite_time(example_p, 0.5)
        assert controller.current_v == pytest.approx(
            IlfBisectionSolver(expected, v_min=1e-6).solve(x).value, rel=1e-10)

    def test_uses_current_measurement(self, example_p, example_k, plant3):
        controller = sampled_controller(self._spec(example_p, example_k), plant3)
        first = controller.control(0.0, [0.3, -0.1, 0.2])
        second = controller.control(0.2, [0.6, -0.2, 0.4])
        assert len(controller.ledger) == 1
        assert second.u == pytest.approx(2.0 * first.u)

    def test_period_equal_to_step_matches_continuous(self, example_p, example_k, plant3):
        sim = SimConfig(x0=[0.5, 0.0, 0.0], horizon=1.0, dt=0.01)
        continuous = ControllerSpec(ControllerVariant.FINITE_TIME, example_p, example_k, 0.5, v_min=1e-6)
        sampled = self._spec(example_p, example_k, period=0.01)
        a = integrate(plant3, continuous, sim)
        b = integrate(plant3, sampled, sim)
        assert np.array_equal(a.states, b.states)
        assert len(b.ledger) == len(b.times)

    def test_solver_failure_holds_previous_value(self, example_p, example_k, plant3, monkeypatch):
        logger = ColorLogger(quiet=True)
        controller = IlfController(self._spec(example_p, example_k), logger)
        controller.control(0.0, [0.3, -0.1, 0.2])
        previous = controller.current_v

        def fail(x):
            raise IlfSolverError("no convergence")

        monkeypatch.setattr(controller.inner_solver, 'solve', fail)
        controller.control(0.5, [0.2, -0.1, 0.1])
        assert controller.failure_count == 1
        assert controller.ledger[-1].held
        assert controller.current_v == previous
        assert logger.messages("WARNING")

    def test_origin_uses_linear_feedback(self, example_p, example_k):
        controller = IlfController(self._spec(example_p, example_k))
        value = controller.control(0.0, np.zeros(3))
        assert value.u == 0.0
        assert controller.ledger[0].branch == Branch.ORIGIN

    def test_factory_validation(self, example_p, example_k, plant3):
        continuous = ControllerSpec(ControllerVariant.FINITE_TIME, example_p, example_k, 0.5)
        with pytest.raises(ContractViolationError):
            sampled_controller(continuous, plant3)
        with pytest.raises(ContractViolationError):
            sampled_controller(self._spec(example_p, example_k), build_chain(2))
