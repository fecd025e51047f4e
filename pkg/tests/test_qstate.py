import numpy as np
import pytest

from conftest import rand_bloch, rand_pure
from subhelstrom import linalg, qstate


class TestPureFromAngle:
    def test_zero_angle(self):
        assert np.allclose(qstate.pure_from_angle(0.0), [1.0, 0.0])

    def test_quarter_pi(self):
        assert np.allclose(qstate.pure_from_angle(np.pi / 4), np.array([1.0, 1.0]) / np.sqrt(2.0))

    def test_half_pi(self):
        assert np.allclose(qstate.pure_from_angle(np.pi / 2), [0.0, 1.0], atol=1e-15)


class TestOrthogonalComplement:
    def test_zero_angle_sign_convention(self):
        assert np.allclose(qstate.orthogonal_complement(0.0), [0.0, -1.0])

    def test_orthogonality(self):
        for theta in (0.0, 0.3, 1.1, np.pi / 2):
            psi = qstate.pure_from_angle(theta)
            perp = qstate.orthogonal_complement(theta)
            # elementwise form is exact; BLAS vdot may fuse and leave ~1e-18
            assert np.sum(np.conj(psi) * perp) == 0.0

    def test_half_pi(self):
        assert np.allclose(qstate.orthogonal_complement(np.pi / 2), [1.0, 0.0], atol=1e-15)


class TestPrimedBasis:
    def test_x_zero_recovers_computational(self):
        zero_p, one_p = qstate.primed_basis(0.0, 1.3)
        assert np.allclose(zero_p, [1.0, 0.0])
        assert np.allclose(one_p, [0.0, -np.exp(1.3j)])

    def test_plus_minus(self):
        zero_p, one_p = qstate.primed_basis(np.pi / 4, 0.0)
        assert np.allclose(zero_p, np.array([1.0, 1.0]) / np.sqrt(2.0))
        assert np.allclose(one_p, np.array([1.0, -1.0]) / np.sqrt(2.0))

    def test_orthonormal(self):
        zero_p, one_p = qstate.primed_basis(0.7, 1.1)
        assert abs(np.vdot(zero_p, one_p)) <= 1e-15
        assert abs(np.linalg.norm(zero_p) - 1.0) <= 1e-15
        assert abs(np.linalg.norm(one_p) - 1.0) <= 1e-15


class TestBlochMaps:
    def test_origin_is_maximally_mixed(self):
        assert np.allclose(qstate.bloch_to_density((0.0, 0.0, 0.0)), np.eye(2) / 2.0)

    def test_north_pole(self):
        assert np.allclose(qstate.bloch_to_density((0.0, 0.0, 1.0)), np.diag([1.0, 0.0]))

    def test_plus_state(self):
        expected = qstate.projector(np.array([1.0, 1.0]) / np.sqrt(2.0))
        assert np.allclose(qstate.bloch_to_density((1.0, 0.0, 0.0)), expected)

    def test_rejects_overlong_vector(self):
        with pytest.raises(ValueError):
            qstate.bloch_to_density((0.8, 0.8, 0.8))

    def test_density_to_bloch_values(self):
        assert np.allclose(qstate.density_to_bloch(np.eye(2) / 2.0), [0.0, 0.0, 0.0])
        assert np.allclose(qstate.density_to_bloch(np.diag([0.0, 1.0])), [0.0, 0.0, -1.0])

    def test_round_trip(self):
        vec = np.array([0.3, -0.2, 0.5])
        back = qstate.density_to_bloch(qstate.bloch_to_density(vec))
        assert np.max(np.abs(back - vec)) <= 1e-12

    def test_density_to_bloch_rejects_invalid(self):
        with pytest.raises(ValueError):
            qstate.density_to_bloch(np.diag([1.2, -0.2]))
        with pytest.raises(ValueError):
            qstate.density_to_bloch(np.diag([0.7, 0.7]))

    def test_bloch_trace_norm_identity(self):
        rng = np.random.default_rng(59)
        for _ in range(500):
            m = rand_bloch(rng)
            n = rand_bloch(rng)
            tn = linalg.trace_norm(qstate.bloch_to_density(m) - qstate.bloch_to_density(n))
            assert abs(tn - np.linalg.norm(m - n)) <= 1e-10


class TestPureTraceNormIdentity:
    def test_two_and_four_dimensional(self):
        rng = np.random.default_rng(61)
        for k in range(500):
            dim = 2 if k % 2 else 4
            u = rand_pure(rng, dim)
            v = rand_pure(rng, dim)
            tn = linalg.trace_norm(qstate.projector(u) - qstate.projector(v))
            expected = 2.0 * np.sqrt(max(0.0, 1.0 - abs(np.vdot(u, v)) ** 2))
            assert abs(tn - expected) <= 1e-10


class TestHelpers:
    def test_canonical_phase(self):
        psi = np.exp(0.7j) * np.array([0.6, 0.8j])
        fixed = qstate.canonical_phase(psi)
        assert fixed[0].imag == pytest.approx(0.0, abs=1e-15)
        assert fixed[0].real > 0
        assert abs(abs(np.vdot(psi, fixed)) - 1.0) <= 1e-12

    def test_assert_normalized(self):
        with pytest.raises(ValueError):
            qstate.assert_normalized(np.array([1.0, 1.0]))

    def test_assert_density_matrix_accepts_valid(self):
        qstate.assert_density_matrix(np.diag([0.25, 0.75]))
