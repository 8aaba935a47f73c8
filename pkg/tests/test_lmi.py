#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from common.types import ConfigError, ContractViolationError, DomainError
from ilf_control.lmi import (
    GainCertificate,
    GainSynthesizer,
    LmiKind,
    PlantConfig,
    build_chain,
    chain_gain_from_poles,
    lambda_min,
    lmi_margins,
    max_decay_search,
    max_gamma_search,
    read_certificate,
    read_matrix,
    sym_eigs,
    sym_sqrt,
    synthesize_gains,
    verify_finite_time_lmi,
    verify_hyper_lmi,
    write_certificate,
    write_matrix,
)


@pytest.fixture
def hyper_base(example_p, example_k):
    return GainCertificate.from_gains(example_p, example_k, 0.2, 0.0, LmiKind.HYPER)


class TestPlant:
    def test_chain_structure(self):
        plant = build_chain(3)
        np.testing.assert_array_equal(plant.A, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        np.testing.assert_array_equal(plant.B.reshape(-1), [0, 0, 1])
        assert plant.is_controllable()

    def test_chain_rejects_zero(self):
        with pytest.raises(DomainError):
            build_chain(0)

    def test_dimension_mismatch(self):
        with pytest.raises(ContractViolationError):
            PlantConfig(n=2, A=np.zeros((3, 3)), B=np.ones(3))
        with pytest.raises(ContractViolationError):
            build_chain(3).closed_loop(np.ones(2))

    def test_pole_placement(self, plant3):
        K = chain_gain_from_poles([-1.0, -2.0, -3.0])
        np.testing.assert_allclose(K, [[-6.0, -11.0, -6.0]])
        poles = np.sort(np.linalg.eigvals(plant3.closed_loop(K)).real)
        np.testing.assert_allclose(poles, [-3.0, -2.0, -1.0], rtol=1e-8)


class TestEigen:
    def test_matches_reference(self, rng):
        M = rng.standard_normal((5, 5))
        M = M + M.T
        values, vectors = sym_eigs(M, return_vectors=True)
        np.testing.assert_allclose(values, np.linalg.eigvalsh(M), atol=1e-9)
        np.testing.assert_allclose(M @ vectors, vectors * values, atol=1e-9)
        assert np.sum(values) == pytest.approx(np.trace(M), abs=1e-9)

    def test_trace_and_determinant(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            M = rng.standard_normal((n, n))
            M = M + M.T
            values = sym_eigs(M)
            scale = max(np.linalg.norm(M, 2), 1e-12)
            assert np.sum(values) == pytest.approx(np.trace(M), abs=1e-10 * n * scale)
            det = np.linalg.det(M)
            product = float(np.prod(values))
            assert product == pytest.approx(det, abs=1e-8 * scale ** n)
            if abs(det) > 1e-6 * scale ** n:
                assert np.sign(product) == np.sign(det)
            assert np.all(np.diff(values) >= 0)

    def test_diagonal_and_scalar(self):
        np.testing.assert_allclose(sym_eigs(np.diag([3.0, -1.0, 2.0])), [-1.0, 2.0, 3.0])
        np.testing.assert_allclose(sym_eigs(np.array([[4.0]])), [4.0])

    def test_rejects_asymmetric(self):
        with pytest.raises(DomainError):
            sym_eigs(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ContractViolationError):
            sym_eigs(np.ones((2, 3)))

    def test_sqrt(self, example_p):
        root = sym_sqrt(example_p)
        np.testing.assert_allclose(root @ root, example_p, atol=1e-10)
        with pytest.raises(DomainError):
            sym_sqrt(np.diag([1.0, -1.0]))


class TestVerification:
    def test_finite_time_witness(self, example_p, example_k, plant3):
        base = GainCertificate.from_gains(example_p, example_k, 0.5, 0.0, LmiKind.FINITE_TIME)
        search = max_decay_search(base.X, base.Y, plant3, 0.5, 1e-6)
        assert search.feasible and search.value > 0
        report = verify_finite_time_lmi(base.with_value(search.value), plant3)
        assert report.feasible
        assert report.lmi_max <= report.tolerance
        assert not verify_finite_time_lmi(base.with_value(search.upper + 1e-3), plant3).feasible

    def test_hyper_witness(self, hyper_base, plant3):
        search = max_gamma_search(hyper_base.X, hyper_base.Y, plant3, 0.2, 1e-6)
        assert search.feasible and search.value > 0
        assert search.upper - search.value <= 1e-6
        assert verify_hyper_lmi(hyper_base.with_value(search.value), plant3).feasible
        assert not verify_hyper_lmi(hyper_base.with_value(10.0 * search.upper), plant3).feasible

    def test_consistency(self, hyper_base):
        assert hyper_base.consistency_error() < 1e-10

    def test_open_chain_infeasible(self, example_p, plant3):
        cert = GainCertificate.from_gains(example_p, np.zeros(3), 0.5, 0.1, LmiKind.FINITE_TIME)
        report = verify_finite_time_lmi(cert, plant3)
        assert not report.feasible
        assert report.lmi_max > 0

    def test_scaling_invariance(self, hyper_base, plant3):
        plain = max_gamma_search(hyper_base.X, hyper_base.Y, plant3, 0.2, 1e-6)
        scaled = max_gamma_search(3.0 * hyper_base.X, 3.0 * hyper_base.Y, plant3, 0.2, 1e-6)
        assert scaled.value == pytest.approx(plain.value, abs=2e-6)

    def test_zero_gain_flagged(self, hyper_base, plant3):
        search = max_gamma_search(hyper_base.X, np.zeros((1, 3)), plant3, 0.2, 1e-6)
        assert not search.feasible

    def test_wrong_certificate_kind(self, hyper_base, plant3):
        with pytest.raises(ContractViolationError):
            verify_finite_time_lmi(hyper_base.with_value(0.1), plant3)
        with pytest.raises(ContractViolationError):
            verify_hyper_lmi(hyper_base, plant3)

    def test_margins_for_unit_mu(self, hyper_base, plant3):
        report = lmi_margins(hyper_base.X, hyper_base.Y, plant3, 1.0, 1e-3, LmiKind.HYPER)
        assert len(report.margins) == 3
        assert report.x_min > 0


class TestSynthesis:
    def test_scalar(self):
        result = synthesize_gains(build_chain(1), 1.0, 1.0)
        assert result.found
        assert verify_hyper_lmi(result.certificate, build_chain(1)).feasible
        assert result.certificate.K[0, 0] < -1.0

    def test_chain_small_gamma(self, plant3):
        result = synthesize_gains(plant3, 0.2, 0.05)
        assert result.found
        assert result.certificate.gamma_or_a == 0.05
        assert verify_hyper_lmi(result.certificate, plant3).feasible
        X = result.certificate.X
        H = X @ np.diag([1.4, 1.2, 1.0])
        assert result.x_min >= 1e-3 and result.h_min >= 1e-3
        assert result.x_min == pytest.approx(lambda_min(X), rel=1e-9)
        assert result.h_min == pytest.approx(lambda_min(H + H.T), rel=1e-9)

    def test_meet_delta_scales_up_only(self, plant3, example_p, example_k):
        synthesizer = GainSynthesizer(plant3, 0.2, 0.05)
        X = 1e-6 * np.linalg.inv(example_p)
        X_big, Y_big = synthesizer.meet_delta(X, example_k.reshape(1, -1) @ X)
        assert lambda_min(X_big) >= 1e-3
        np.testing.assert_allclose(Y_big @ np.linalg.inv(X_big), example_k.reshape(1, -1), rtol=1e-8)
        X_same, _ = synthesizer.meet_delta(X_big, Y_big)
        np.testing.assert_array_equal(X_same, X_big)
        assert synthesizer.meet_delta(-X, np.zeros((1, 3))) is None

    def test_unreachable_gamma(self, plant3):
        result = synthesize_gains(plant3, 0.2, 1e3, iterations=5)
        assert not result.found
        assert result.certificate is None

    def test_rejects_non_chain(self):
        rotation = PlantConfig(n=2, A=np.array([[0.0, 1.0], [-1.0, 0.0]]), B=np.array([0.0, 1.0]))
        with pytest.raises(ContractViolationError):
            GainSynthesizer(rotation, 0.5, 0.1)
        uncontrollable = PlantConfig(n=2, A=np.zeros((2, 2)), B=np.array([0.0, 1.0]))
        with pytest.raises(ContractViolationError):
            GainSynthesizer(uncontrollable, 0.5, 0.1)


class TestMatrixIo:
    def test_fixture_shapes(self, example_p, example_k):
        assert example_p.shape == (3, 3)
        assert example_k.shape == (3,)
        assert example_p[0, 0] == pytest.approx(3.3119)

    def test_matrix_file(self, tmp_path, example_p):
        path = tmp_path / "P.txt"
        write_matrix(path, example_p)
        assert path.read_text().splitlines()[0] == "3 3"
        np.testing.assert_array_equal(read_matrix(path), example_p)

    def test_header_mismatch(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\n1 2\n")
        with pytest.raises(ConfigError):
            read_matrix(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            read_matrix(tmp_path / "absent.txt")

    def test_certificate_file(self, tmp_path, hyper_base, example_k):
        path = tmp_path / "cert.txt"
        write_certificate(path, hyper_base.with_value(0.25))
        text = path.read_text()
        assert text.startswith("# HyperLmi")
        assert "[gamma]" in text
        cert = read_certificate(path)
        assert cert.which == LmiKind.HYPER
        assert cert.mu == 0.2 and cert.gamma_or_a == 0.25
        np.testing.assert_array_equal(cert.X, hyper_base.X)
        np.testing.assert_allclose(cert.K.reshape(-1), example_k, rtol=1e-9)

    def test_certificate_missing_section(self, tmp_path):
        path = tmp_path / "cert.txt"
        path.write_text("# FiniteTimeLmi\n[X]\n1 1\n1\n")
        with pytest.raises(ConfigError):
            read_certificate(path)
