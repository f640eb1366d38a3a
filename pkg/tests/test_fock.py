import math

import numpy as np
import pytest

from casimir_coherence.dce import dce_cm
from casimir_coherence.errors import SupportError, TruncationError
from casimir_coherence.fock import (
    DCE_FRAME_ROTATION,
    FockDensityMatrix,
    cm_of_tmsv,
    fock_entropy,
    fock_log_negativity,
    ladder_operators,
    minimal_cutoff,
    partial_transpose,
    quadrature_covariance,
    relative_entropy,
    squeezing_from_f,
    thermal_populations,
    thermal_product_state,
    tmsv_state,
)
from casimir_coherence.measures import gaussian_coherence


def g(n):
    return (n + 1) * math.log(n + 1) - (n * math.log(n) if n > 0 else 0.0)


class TestStates:
    def test_tmsv_is_pure(self):
        rho = tmsv_state(0.1, 15)
        assert rho.purity() == pytest.approx(1.0, abs=1e-12)

    def test_tmsv_marginals_thermal(self):
        r, d = 0.15, 20
        rho = tmsv_state(r, d)
        want = thermal_populations(math.sinh(r) ** 2, d)
        for k in (0, 1):
            red = rho.reduced(k)
            np.testing.assert_allclose(np.diag(red).real, want, atol=1e-12)
            assert np.max(np.abs(red - np.diag(np.diag(red)))) < 1e-15

    def test_tmsv_parameter_range(self):
        with pytest.raises(ValueError):
            tmsv_state(0.5, 20)

    def test_tmsv_truncation(self):
        with pytest.raises(TruncationError):
            tmsv_state(0.3, 5)

    def test_thermal_populations(self):
        p = thermal_populations(0.5, 30)
        assert p.sum() == pytest.approx(1.0)
        assert np.dot(np.arange(30), p) == pytest.approx(0.5, rel=1e-7)
        assert thermal_populations(0.0, 4).tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_thermal_truncation(self):
        with pytest.raises(TruncationError):
            thermal_populations(2.0, 10)

    def test_minimal_cutoff(self):
        assert minimal_cutoff(0.0) == 1
        d = minimal_cutoff(0.1)
        assert (0.1 / 1.1) ** d < 1e-8 <= (0.1 / 1.1) ** (d - 1)
        with pytest.raises(TruncationError):
            minimal_cutoff(5.0)

    def test_validation(self):
        with pytest.raises(ValueError, match="trace"):
            FockDensityMatrix(2, np.eye(4))
        with pytest.raises(ValueError, match="Hermitian"):
            m = np.diag([1.0, 0, 0, 0]).astype(complex)
            m[0, 1] = 0.1j
            FockDensityMatrix(2, m)
        with pytest.raises(ValueError):
            FockDensityMatrix(3, np.eye(4) / 4)
        with pytest.raises(ValueError):
            tmsv_state(0.1, 41)

    def test_top_level_population(self):
        assert tmsv_state(0.1, 12).top_level_population() < 1e-20


class TestOracle:
    @pytest.mark.parametrize("r", [0.02, 0.1, 0.2])
    def test_negativity_is_2r(self, r):
        assert fock_log_negativity(tmsv_state(r, 20)) == pytest.approx(2 * r, abs=1e-6)

    def test_partial_transpose_involution_and_partition(self):
        rho = tmsv_state(0.1, 6)
        pt = partial_transpose(rho, 1)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(pt), np.linalg.eigvalsh(partial_transpose(rho, 0)), atol=1e-14
        )
        with pytest.raises(IndexError):
            partial_transpose(rho, 2)

    def test_product_state_negativity_zero(self):
        assert fock_log_negativity(thermal_product_state(0.1, 0.2, 12)) == pytest.approx(0.0, abs=1e-12)

    def test_entropy_of_thermal(self):
        n = 0.3
        rho = thermal_product_state(n, 0.0, 30)
        assert fock_entropy(rho) == pytest.approx(g(n), abs=1e-7)

    def test_marginal_entropy_of_tmsv(self):
        r = 0.1
        assert fock_entropy(tmsv_state(r, 15).reduced(0)) == pytest.approx(g(math.sinh(r) ** 2), abs=1e-10)

    def test_relative_entropy_self_zero(self):
        rho = thermal_product_state(0.1, 0.2, 12)
        assert relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_support_error(self):
        rho = thermal_product_state(0.1, 0.1, 10)
        sigma = thermal_product_state(0.0, 0.0, 10)
        with pytest.raises(SupportError):
            relative_entropy(rho, sigma)

    def test_cutoff_mismatch(self):
        with pytest.raises(ValueError):
            relative_entropy(tmsv_state(0.1, 10), tmsv_state(0.1, 11))

    def test_coherence_matches_gaussian(self):
        r, d = 0.1, 20
        n = math.sinh(r) ** 2
        rel = relative_entropy(tmsv_state(r, d), thermal_product_state(n, n, d))
        assert rel == pytest.approx(gaussian_coherence(cm_of_tmsv(r)), abs=1e-4)

    def test_thermal_marginals_locally_minimise(self):
        r, d = 0.05, 15
        rho = tmsv_state(r, d)
        n = math.sinh(r) ** 2
        best = relative_entropy(rho, thermal_product_state(n, n, d))
        for s1 in (0.9, 1.0, 1.1):
            for s2 in (0.9, 1.0, 1.1):
                if s1 == s2 == 1.0:
                    continue
                assert relative_entropy(rho, thermal_product_state(n * s1, n * s2, d)) > best


class TestBridge:
    def test_ladder_commutator(self):
        a1, a2 = ladder_operators(6)
        comm = a1 @ a1.conj().T - a1.conj().T @ a1
        # identity except on the truncated top level of mode 1
        want = np.kron(np.r_[np.ones(5), -5.0], np.ones(6))
        np.testing.assert_allclose(comm, np.diag(want), atol=1e-14)
        assert np.allclose(a1 @ a2, a2 @ a1)

    @pytest.mark.parametrize("r", [0.02, 0.1, 0.25])
    def test_quadrature_covariance(self, r):
        cov = quadrature_covariance(tmsv_state(r, 25))
        np.testing.assert_allclose(cov, cm_of_tmsv(r).entries, atol=1e-8)

    def test_frame_rotation_gives_dce_form(self):
        f = 0.05
        rotated = cm_of_tmsv(squeezing_from_f(f)).congruence(DCE_FRAME_ROTATION)
        # vacuum DCE CM equals the TMSV CM scaled by 1 - f^2
        np.testing.assert_allclose(rotated.entries * (1 - f * f), dce_cm(f, 0.0).entries, atol=1e-15)

    def test_cm_of_tmsv_rejects_negative(self):
        with pytest.raises(ValueError):
            cm_of_tmsv(-0.1)
