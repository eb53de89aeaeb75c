import numpy as np
import pytest

from dfswire.channel import (
    DensityMatrix,
    QuantumChannel,
    amplitude_damping,
    apply,
    bob_state,
    builtin_channels,
    builtin_collective_dephasing,
    collective_sz,
    dilate,
    eve_state,
    eve_state_direct,
    identity_channel,
    random_density,
    unitary_channel,
)
from dfswire.errors import CapacityError, DomainError, ShapeError
from dfswire.linalg import frobenius, ket

from conftest import pure, random_ket


def basis_state(bits):
    return DensityMatrix.basis(int(bits, 2), 2 ** len(bits))


class TestDensityMatrix:
    def test_rejects_bad_trace(self):
        with pytest.raises(DomainError, match="trace"):
            DensityMatrix(np.eye(2))

    def test_rejects_negative(self):
        with pytest.raises(DomainError, match="negative"):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.5], [0, 0.5]]))

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            DensityMatrix(np.ones((2, 3)) / 2)

    def test_immutable(self):
        rho = DensityMatrix.maximally_mixed(2)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1


class TestChannelConstruction:
    def test_incomplete_kraus(self):
        with pytest.raises(DomainError, match="complete"):
            QuantumChannel((np.diag([1.0, 0.0]),))

    def test_mixed_shapes(self):
        with pytest.raises(ShapeError):
            QuantumChannel((np.eye(2), np.eye(3)))

    def test_dephasing_one_qubit(self):
        ch = builtin_collective_dephasing(1)
        np.testing.assert_array_equal(ch.kraus[0], np.diag([1, 0]))
        np.testing.assert_array_equal(ch.kraus[1], np.diag([0, 1]))

    def test_dephasing_two_qubits(self):
        p0, p1, p2 = builtin_collective_dephasing(2).kraus
        np.testing.assert_array_equal(p0, np.diag([1, 0, 0, 0]))
        np.testing.assert_array_equal(p1, np.diag([0, 1, 1, 0]))
        np.testing.assert_array_equal(p2, np.diag([0, 0, 0, 1]))

    def test_dephasing_three_qubit_ranks(self):
        ranks = [int(np.trace(p).real) for p in builtin_collective_dephasing(3).kraus]
        assert ranks == [1, 3, 3, 1]

    @pytest.mark.parametrize("n", range(1, 8))
    def test_dephasing_structure(self, n):
        ch = builtin_collective_dephasing(n)
        assert ch.completeness_residual == 0.0
        sz = collective_sz(n)
        for p in ch.kraus:
            np.testing.assert_array_equal(p @ sz, sz @ p)

    @pytest.mark.parametrize("n", [0, 11])
    def test_dephasing_size_cap(self, n):
        with pytest.raises(CapacityError):
            builtin_collective_dephasing(n)


class TestApply:
    def test_identity(self, rng):
        rho = random_density(rng, 3)
        np.testing.assert_array_equal(apply(identity_channel(3), rho).matrix, rho.matrix)

    def test_bell_like_decoheres(self):
        out = apply(builtin_collective_dephasing(2), pure(1, 0, 0, 1))
        np.testing.assert_allclose(out.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)

    def test_dfs_state_unchanged(self, rng):
        a, b = random_ket(rng, 2)
        rho = pure(0, a, b, 0)
        out = apply(builtin_collective_dephasing(2), rho)
        assert frobenius(out.matrix - rho.matrix) < 1e-15

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            apply(identity_channel(2), DensityMatrix.maximally_mixed(3))

    def test_idempotent_dephasing(self, rng):
        for n in (1, 2, 3):
            ch = builtin_collective_dephasing(n)
            rho = random_density(rng, 2**n)
            once = apply(ch, rho)
            twice = apply(ch, once)
            assert frobenius(once.matrix - twice.matrix) < 1e-14

    def test_trace_preserved(self, rng):
        for ch in builtin_channels():
            for _ in range(20):
                out = apply(ch, random_density(rng, ch.dim_in))
                assert abs(np.trace(out.matrix) - 1) < 1e-9


class TestDilation:
    def test_unitary_channel(self, rng):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        d = dilate(unitary_channel(q))
        assert d.env_dim == 1
        np.testing.assert_allclose(d.unitary, q, atol=1e-14)

    def test_dephasing_two_qubits(self):
        d = dilate(builtin_collective_dephasing(2))
        assert d.env_dim == 3
        assert d.unitary.shape == (12, 12)
        assert d.unitarity_residual() < 1e-9
        assert d.embedding_residual() < 1e-9

    def test_amplitude_damping_columns(self):
        g = 0.3
        d = dilate(amplitude_damping(g))
        assert d.unitary.shape == (4, 4)
        # U|0,0_E> = |0,0_E>;  U|1,0_E> = sqrt(1-g)|1,0_E> + sqrt(g)|0,1_E>
        np.testing.assert_allclose(d.unitary[:, 0], [1, 0, 0, 0], atol=1e-15)
        np.testing.assert_allclose(d.unitary[:, 2], [0, np.sqrt(g), np.sqrt(1 - g), 0], atol=1e-15)
        assert d.unitarity_residual() < 1e-9

    def test_all_builtins(self):
        for ch in builtin_channels():
            d = dilate(ch)
            assert d.env_dim == len(ch.kraus)
            assert d.unitarity_residual() < 1e-9
            assert d.embedding_residual() < 1e-9

    def test_env_initial_is_pure_ground(self):
        d = dilate(builtin_collective_dephasing(2))
        np.testing.assert_array_equal(d.env_initial.matrix, np.diag([1, 0, 0]))


class TestViews:
    def test_bob_matches_apply(self, rng):
        for ch in builtin_channels():
            d = dilate(ch)
            for _ in range(20):
                rho = random_density(rng, ch.dim_in)
                assert frobenius(apply(ch, rho).matrix - bob_state(d, rho).matrix) <= 1e-9

    def test_bob_plus_plus(self):
        ch = builtin_collective_dephasing(2)
        rho = pure(1, 1, 1, 1)
        out = bob_state(dilate(ch), rho)
        # weight blocks {00}, {01,10}, {11}: only the middle block keeps coherence
        expected = np.zeros((4, 4))
        expected[0, 0] = expected[3, 3] = 0.25
        expected[1:3, 1:3] = 0.25
        np.testing.assert_allclose(out.matrix, expected, atol=1e-15)

    def test_bob_dfs_codeword(self):
        rho = basis_state("01")
        out = bob_state(dilate(builtin_collective_dephasing(2)), rho)
        np.testing.assert_allclose(out.matrix, rho.matrix, atol=1e-15)

    def test_eve_entry_formula(self, rng):
        for ch in builtin_channels():
            d = dilate(ch)
            for _ in range(10):
                rho = random_density(rng, ch.dim_in)
                assert np.max(np.abs(eve_state(d, rho).matrix - eve_state_direct(ch, rho))) <= 1e-10

    def test_eve_pure_on_dfs(self):
        d = dilate(builtin_collective_dephasing(2))
        e = eve_state(d, basis_state("01")).matrix
        np.testing.assert_allclose(e, np.diag([0, 1, 0]), atol=1e-15)

    def test_eve_distinguishes_00_11(self):
        d = dilate(builtin_collective_dephasing(2))
        e0 = eve_state(d, basis_state("00")).matrix
        e3 = eve_state(d, basis_state("11")).matrix
        np.testing.assert_allclose(e0, np.diag([1, 0, 0]), atol=1e-15)
        np.testing.assert_allclose(e3, np.diag([0, 0, 1]), atol=1e-15)
        assert abs(np.trace(e0 @ e3)) < 1e-15

    def test_eve_single_kraus(self, rng):
        d = dilate(identity_channel(3))
        np.testing.assert_allclose(eve_state(d, random_density(rng, 3)).matrix, [[1]], atol=1e-15)

    def test_view_shape_error(self):
        with pytest.raises(ShapeError):
            eve_state(dilate(identity_channel(2)), np.eye(4) / 4)
