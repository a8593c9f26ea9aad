import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import I2, PLUS, X, Z, E0
from wayaudit.linalg import (
    ToleranceConfig,
    anti_hermitian_exp,
    commutator,
    dagger,
    expectation,
    haar_unitary,
    hermitian_eigensystem,
    numerical_rank,
    random_haar_unitary,
    random_hermitian,
    random_positive_operator,
    random_state_vector,
    tensor_product,
    unitary_completion,
    validate,
    variance,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_tolerance_config_rejects_negative():
    with pytest.raises(ValueError):
        ToleranceConfig(rank_tol=-1.0)


class TestTensorProduct:
    def test_identity(self):
        np.testing.assert_array_equal(tensor_product(I2, I2), np.eye(4))

    def test_diagonal(self):
        out = tensor_product(np.diag([1.0, 2.0]), np.diag([1.0, 3.0]))
        np.testing.assert_allclose(out, np.diag([1.0, 3.0, 2.0, 6.0]))

    def test_spin_pair_block_structure(self):
        out = tensor_product(X, Z)
        expected = np.zeros((4, 4), dtype=complex)
        expected[:2, 2:] = Z
        expected[2:, :2] = Z
        np.testing.assert_array_equal(out, expected)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_mixed_product_property(self, seed):
        rng = np.random.default_rng(seed)
        a, c = random_hermitian(2, rng), random_hermitian(2, rng)
        b, d = random_hermitian(3, rng), random_hermitian(3, rng)
        lhs = tensor_product(a, b) @ tensor_product(c, d)
        rhs = tensor_product(a @ c, b @ d)
        assert np.abs(lhs - rhs).max() <= 1e-12

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_associativity(self, seed):
        rng = np.random.default_rng(seed)
        a = random_hermitian(2, rng)
        b = random_hermitian(3, rng)
        c = random_hermitian(2, rng)
        lhs = tensor_product(tensor_product(a, b), c)
        rhs = tensor_product(a, tensor_product(b, c))
        assert np.abs(lhs - rhs).max() <= 1e-12


class TestCommutator:
    def test_self_commutation(self):
        np.testing.assert_array_equal(commutator(Z, Z), np.zeros((2, 2)))

    def test_identity_commutes(self):
        a = np.array([[1, 2j], [-2j, 5]], dtype=complex)
        np.testing.assert_array_equal(commutator(a, I2), np.zeros((2, 2)))

    def test_spin_pair(self):
        np.testing.assert_allclose(commutator(X, Z), [[0, -2], [2, 0]])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension mismatch"):
            commutator(I2, np.eye(3))

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_antisymmetry_exact(self, seed):
        rng = np.random.default_rng(seed)
        a, b = random_hermitian(3, rng), random_hermitian(3, rng)
        np.testing.assert_array_equal(commutator(a, b), -commutator(b, a))


class TestExpectationVariance:
    def test_eigenstate(self):
        assert expectation(Z, E0) == 1.0

    def test_symmetry(self):
        assert abs(expectation(Z, PLUS)) <= 1e-15

    def test_average_of_eigenvalues(self):
        assert abs(expectation(np.diag([1.0, 2.0]), PLUS) - 1.5) <= 1e-15

    def test_variance_eigenstate(self):
        assert variance(Z, E0) == 0.0

    def test_variance_maximal_spread(self):
        assert abs(variance(Z, PLUS) - 1.0) <= 1e-15

    def test_variance_joint(self):
        # independent oracle: explicit 4-dimensional moments
        op = np.kron(Z, Z)
        state = np.kron(PLUS, E0)
        second = np.vdot(state, op @ op @ state).real
        first = np.vdot(state, op @ state).real
        assert abs(second - first**2 - 1.0) <= 1e-15
        assert abs(variance(op, state) - 1.0) <= 1e-12

    def test_variance_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            variance(np.array([[0, 1], [0, 0]], dtype=complex), E0)

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_moment_identity(self, seed):
        rng = np.random.default_rng(seed)
        a = random_hermitian(4, rng)
        s = random_state_vector(4, rng)
        direct = expectation(a @ a, s).real - expectation(a, s).real ** 2
        v = variance(a, s)
        assert v >= 0.0
        assert abs(v - direct) <= 1e-12


class TestValidate:
    def test_unitary_identity(self):
        report = validate(np.eye(4), "unitary")
        assert report.verdict and report.residual == 0.0

    def test_positive_spectrum_zero_eigenvalue(self):
        report = validate(np.diag([1.0, 0.0]), "positive_spectrum")
        assert not report.verdict

    def test_positive_spectrum_needs_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            validate(np.array([[0, 1], [0, 0]], dtype=complex), "positive_spectrum")

    def test_full_rank_ones(self):
        report = validate(np.ones((3, 3)), "full_rank")
        assert not report.verdict
        assert report.rank == 1

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown"):
            validate(I2, "bogus")


class TestEigensystem:
    def test_z(self):
        values, vectors = hermitian_eigensystem(Z)
        np.testing.assert_allclose(values, [-1.0, 1.0])
        assert abs(abs(np.vdot(vectors[:, 0], [0, 1])) - 1.0) <= 1e-12
        assert abs(abs(np.vdot(vectors[:, 1], [1, 0])) - 1.0) <= 1e-12

    def test_x(self):
        values, vectors = hermitian_eigensystem(X)
        np.testing.assert_allclose(values, [-1.0, 1.0])
        minus = np.array([1.0, -1.0]) / np.sqrt(2.0)
        assert abs(abs(np.vdot(vectors[:, 0], minus)) - 1.0) <= 1e-12
        assert abs(abs(np.vdot(vectors[:, 1], PLUS)) - 1.0) <= 1e-12

    def test_degenerate_diagonal(self):
        values, vectors = hermitian_eigensystem(np.diag([2.0, 2.0, 5.0]))
        np.testing.assert_allclose(values, [2.0, 2.0, 5.0])
        span = vectors[:, :2]
        projector = span @ dagger(span)
        expected = np.diag([1.0, 1.0, 0.0])
        assert np.abs(projector - expected).max() <= 1e-10

    @given(seeds)
    @settings(max_examples=25, deadline=None)
    def test_reconstruction(self, seed):
        rng = np.random.default_rng(seed)
        a = random_hermitian(5, rng)
        values, vectors = hermitian_eigensystem(a)
        rebuilt = (vectors * values) @ dagger(vectors)
        assert np.linalg.norm(a - rebuilt) <= 1e-9 * np.linalg.norm(a)
        assert np.all(np.diff(values) >= 0)
        assert np.abs(dagger(vectors) @ vectors - np.eye(5)).max() <= 1e-10


class TestNumericalRank:
    def test_ones(self):
        assert numerical_rank(np.ones((3, 3)), 1e-10) == 1

    def test_identity(self):
        assert numerical_rank(np.eye(4), 1e-10) == 4

    def test_below_threshold_singular_value(self):
        assert numerical_rank(np.diag([1.0, 1e-14]), 1e-10) == 1

    def test_zero_matrix(self):
        assert numerical_rank(np.zeros((3, 3)), 1e-10) == 0


class TestUnitaryCompletion:
    def test_single_column(self):
        u = unitary_completion([np.array([1.0, 0.0], dtype=complex)])
        assert np.abs(dagger(u) @ u - np.eye(2)).max() <= 1e-12
        np.testing.assert_array_equal(u[:, 0], [1.0, 0.0])

    def test_two_columns_kept_verbatim(self):
        c0 = np.zeros(4, dtype=complex)
        c0[0] = 1.0
        c1 = np.zeros(4, dtype=complex)
        c1[1] = 1.0
        u = unitary_completion([c0, c1])
        np.testing.assert_array_equal(u[:, 0], c0)
        np.testing.assert_array_equal(u[:, 1], c1)
        assert np.abs(dagger(u) @ u - np.eye(4)).max() <= 1e-12

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError, match="orthonormal"):
            unitary_completion(
                [np.array([1.0, 0.0]), np.array([1.0, 1.0]) / np.sqrt(2.0)]
            )

    @given(seeds, st.integers(min_value=1, max_value=4))
    @settings(max_examples=25, deadline=None)
    def test_random_subspaces(self, seed, k):
        rng = np.random.default_rng(seed)
        q = haar_unitary(5, rng)[:, :k]
        cols = [q[:, i] for i in range(k)]
        u = unitary_completion(cols)
        assert np.abs(dagger(u) @ u - np.eye(5)).max() <= 1e-10
        for i in range(k):
            np.testing.assert_array_equal(u[:, i], cols[i])


class TestHaar:
    def test_determinism(self):
        a = random_haar_unitary(4, 123)
        b = random_haar_unitary(4, 123)
        np.testing.assert_array_equal(a, b)

    def test_unitarity(self):
        u = random_haar_unitary(4, 7)
        assert np.linalg.norm(dagger(u) @ u - np.eye(4)) <= 1e-12

    def test_dim_one(self):
        u = random_haar_unitary(1, 99)
        assert u.shape == (1, 1)
        assert abs(abs(u[0, 0]) - 1.0) <= 1e-12

    def test_different_seeds_differ(self):
        assert not np.array_equal(random_haar_unitary(3, 0), random_haar_unitary(3, 1))


class TestAntiHermitianExp:
    def test_zero(self):
        np.testing.assert_allclose(anti_hermitian_exp(np.zeros((3, 3))), np.eye(3))

    def test_diagonal_phase(self):
        out = anti_hermitian_exp(1j * (np.pi / 2) * Z)
        np.testing.assert_allclose(out, np.diag([1j, -1j]), atol=1e-14)

    def test_inverse_property(self):
        rng = np.random.default_rng(11)
        h = random_hermitian(4, rng)
        k = 1j * h
        prod = anti_hermitian_exp(k) @ anti_hermitian_exp(-k)
        assert np.abs(prod - np.eye(4)).max() <= 1e-12

    def test_rejects_non_anti_hermitian(self):
        with pytest.raises(ValueError, match="anti-Hermitian"):
            anti_hermitian_exp(Z)


def test_random_positive_operator_spectrum():
    rng = np.random.default_rng(21)
    op = random_positive_operator(4, rng)
    values = np.linalg.eigvalsh(op)
    assert values[0] >= 0.5 - 1e-9 and values[-1] <= 2.0 + 1e-9
