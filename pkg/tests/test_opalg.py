import numpy as np
import pytest

from leolab.opalg import (
    DimensionMismatchError,
    Operator,
    anticommutator,
    commutator,
    derived_seeds,
    hermitian_exponential,
    identity,
    op_norm,
    operator_from_json,
    operator_to_json,
    pauli_on,
    pauli_string,
    random_hermitian,
    tensor,
)

XBAR = Operator(
    (pauli_string("XX").mat + pauli_string("YY").mat) / 2.0,
    frozenset({"hermitian"}),
)


class TestOperator:
    def test_identity_tags(self):
        i4 = identity(4)
        assert i4.dim == 4
        assert i4.is_hermitian()
        np.testing.assert_array_equal(i4.mat, np.eye(4))

    def test_hermitian_tag_rejected_for_nonhermitian(self):
        m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(ValueError):
            Operator(m, frozenset({"hermitian"}))

    def test_unitary_tag_rejected_for_nonunitary(self):
        with pytest.raises(ValueError):
            Operator(2.0 * np.eye(2, dtype=complex), frozenset({"unitary"}))

    def test_diagonal_tag_rejected_for_offdiagonal(self):
        with pytest.raises(ValueError):
            Operator(pauli_string("X").mat, frozenset({"diagonal"}))

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            Operator(np.zeros((2, 3), dtype=complex))

    def test_entries_immutable(self):
        op = identity(2)
        with pytest.raises(ValueError):
            op.mat[0, 0] = 5.0

    def test_dagger(self):
        m = np.array([[1.0, 2.0j], [0.0, 1.0]], dtype=complex)
        op = Operator(m)
        np.testing.assert_array_equal(op.dagger().mat, m.conj().T)


class TestPauliStrings:
    def test_single_site(self):
        np.testing.assert_array_equal(
            pauli_string("X").mat, np.array([[0, 1], [1, 0]], dtype=complex)
        )
        np.testing.assert_array_equal(
            pauli_string("Z").mat, np.diag([1.0, -1.0]).astype(complex)
        )

    def test_first_char_is_qubit_one(self):
        # XI flips the most significant bit: |01> -> |11>
        v = np.zeros(4, dtype=complex)
        v[1] = 1.0
        out = pauli_string("XI").mat @ v
        expect = np.zeros(4, dtype=complex)
        expect[3] = 1.0
        np.testing.assert_allclose(out, expect, atol=0)

    def test_diagonal_tag_for_iz_strings(self):
        assert "diagonal" in pauli_string("ZZ").tags
        assert "diagonal" in pauli_string("IZ").tags
        assert "diagonal" not in pauli_string("XZ").tags

    def test_bad_label(self):
        with pytest.raises(ValueError):
            pauli_string("XQ")
        with pytest.raises(ValueError):
            pauli_string("")

    def test_pauli_on(self):
        np.testing.assert_array_equal(
            pauli_on("X", 0, 2).mat, pauli_string("XI").mat
        )
        np.testing.assert_array_equal(
            pauli_on("Y", 2, 3).mat, pauli_string("IIY").mat
        )


class TestTensor:
    def test_identity_case(self):
        out = tensor(identity(2), identity(2))
        np.testing.assert_array_equal(out.mat, np.eye(4))
        assert out.dim == 4

    def test_diagonal_product(self):
        zz = tensor(pauli_string("Z"), pauli_string("Z"))
        np.testing.assert_array_equal(zz.mat, np.diag([1, -1, -1, 1]).astype(complex))

    def test_column_action(self):
        xi = tensor(pauli_string("X"), identity(2))
        v = np.zeros(4, dtype=complex)
        v[1] = 1.0
        out = xi.mat @ v
        assert out[3] == 1.0 and np.count_nonzero(out) == 1

    def test_tag_propagation(self):
        both = tensor(pauli_string("Z"), pauli_string("Z"))
        assert "hermitian" in both.tags
        assert "unitary" in both.tags
        assert "diagonal" in both.tags
        one = tensor(pauli_string("Z"), Operator(np.eye(2, dtype=complex) * 1j))
        assert "hermitian" not in one.tags

    def test_associative_exact(self):
        a = pauli_string("X")
        b = pauli_string("Y")
        c = pauli_string("Z")
        left = tensor(tensor(a, b), c)
        right = tensor(a, tensor(b, c))
        np.testing.assert_array_equal(left.mat, right.mat)


class TestHermitianExponential:
    def test_zero_matrix(self):
        z = Operator(np.zeros((3, 3), dtype=complex), frozenset({"hermitian"}))
        out = hermitian_exponential(z, 1.7)
        np.testing.assert_allclose(out.mat, np.eye(3), atol=1e-15)

    def test_diagonal_phase(self):
        out = hermitian_exponential(pauli_string("Z"), np.pi)
        np.testing.assert_allclose(out.mat, -np.eye(2), atol=1e-12)

    def test_exchange_logical_x_gives_zz(self):
        out = hermitian_exponential(XBAR, np.pi)
        zz = pauli_string("ZZ").mat
        assert np.linalg.norm(out.mat - zz) <= 1e-12

    def test_requires_hermitian_tag(self):
        with pytest.raises(ValueError):
            hermitian_exponential(Operator(1j * np.eye(2, dtype=complex)), 1.0)

    @pytest.mark.parametrize("seed", range(6))
    def test_unitary_for_large_norm_inputs(self, seed):
        h = random_hermitian(8, seed)
        big = Operator(h.mat * 100.0, frozenset({"hermitian"}))
        u = hermitian_exponential(big, 1.0)
        dev = np.linalg.norm(u.mat.conj().T @ u.mat - np.eye(8))
        assert dev <= 1e-10
        assert "unitary" in u.tags

    @pytest.mark.parametrize("seed", range(4))
    def test_group_property(self, seed):
        h = random_hermitian(5, seed)
        a, b = 0.37, -1.21
        lhs = hermitian_exponential(h, a).mat @ hermitian_exponential(h, b).mat
        rhs = hermitian_exponential(h, a + b).mat
        assert np.linalg.norm(lhs - rhs) <= 1e-10


class TestCommutators:
    def test_identity_commutes(self):
        m = random_hermitian(4, 0)
        out = commutator(identity(4), m)
        assert np.allclose(out.mat, 0.0, atol=0)

    def test_parity_anticommutator(self):
        parity = Operator(np.diag([-1.0, 1.0]).astype(complex))
        flip = pauli_string("X")
        out = anticommutator(parity, flip)
        np.testing.assert_allclose(out.mat, 0.0, atol=0)

    def test_zz_commutes_with_xbar(self):
        out = commutator(pauli_string("ZZ"), XBAR)
        assert np.linalg.norm(out.mat) <= 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            commutator(identity(2), identity(4))
        with pytest.raises(DimensionMismatchError):
            anticommutator(identity(2), identity(4))


class TestOpNorm:
    def test_zero(self):
        z = Operator(np.zeros((3, 3), dtype=complex))
        assert op_norm(z) == 0.0
        assert op_norm(z, "spectral") == 0.0

    def test_identity_frobenius(self):
        assert op_norm(identity(4)) == pytest.approx(2.0, abs=1e-14)

    def test_single_site_x_in_two_qubits(self):
        assert op_norm(pauli_string("XI")) == pytest.approx(2.0, abs=1e-14)

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            op_norm(identity(2), "nuclear")

    @pytest.mark.parametrize("seed", range(5))
    def test_frobenius_squared_is_singular_value_sum(self, seed):
        h = random_hermitian(6, seed)
        fro2 = op_norm(h) ** 2
        sv2 = float(np.sum(np.linalg.svd(h.mat, compute_uv=False) ** 2))
        assert fro2 == pytest.approx(sv2, rel=1e-10)


class TestRandomHermitian:
    def test_one_by_one_is_sign(self):
        for seed in range(8):
            m = random_hermitian(1, seed)
            assert abs(abs(m.mat[0, 0]) - 1.0) <= 1e-12
            assert abs(m.mat[0, 0].imag) <= 1e-15

    def test_deterministic(self):
        a = random_hermitian(4, 7)
        b = random_hermitian(4, 7)
        np.testing.assert_array_equal(a.mat, b.mat)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 11])
    def test_unit_spectral_norm(self, seed):
        m = random_hermitian(8, seed)
        top = float(np.linalg.svd(m.mat, compute_uv=False)[0])
        assert top == pytest.approx(1.0, abs=1e-12)

    def test_hermitian_tag(self):
        assert random_hermitian(5, 3).is_hermitian()

    def test_bad_dim(self):
        with pytest.raises(ValueError):
            random_hermitian(0, 1)


class TestDerivedSeeds:
    def test_deterministic_and_pinned(self, golden):
        assert derived_seeds(3, 3) == golden["recipe"]["derived_seeds"]

    def test_distinct(self):
        seeds = derived_seeds(0, 6)
        assert len(set(seeds)) == 6

    def test_prefix_stability(self):
        assert derived_seeds(5, 2) == derived_seeds(5, 4)[:2]


class TestSerialization:
    @pytest.mark.parametrize("seed", range(4))
    def test_round_trip(self, seed):
        op = random_hermitian(5, seed)
        back = operator_from_json(operator_to_json(op))
        assert np.max(np.abs(back.mat - op.mat)) <= 1e-15

    def test_tags_reapplied(self):
        data = operator_to_json(pauli_string("ZZ"))
        back = operator_from_json(data, tags=("hermitian", "diagonal"))
        assert "hermitian" in back.tags and "diagonal" in back.tags

    def test_malformed(self):
        with pytest.raises(ValueError):
            operator_from_json({"dim": 2, "re": [[1, 0]], "im": [[0, 0]]})
        with pytest.raises(ValueError):
            operator_from_json({"re": [[1]], "im": [[0]]})
