import numpy as np
import pytest

from switchsync import linalg
from switchsync.errors import InvalidInputError, SingularMatrixError

from refcert import REF_K, REF_KA, REF_P, REF_P_EIGS, REF_Y


def random_symmetric(rng, n, scale=5.0):
    a = rng.normal(scale=scale, size=(n, n))
    return (a + a.T) / 2.0


class TestSymEigenvalues:
    def test_identity(self):
        assert np.allclose(linalg.sym_eigenvalues(np.eye(3)), [1.0, 1.0, 1.0])

    def test_diagonal_sorted_ascending(self):
        w = linalg.sym_eigenvalues(np.diag([5.0, 2.0, 3.0]))
        assert np.allclose(w, [2.0, 3.0, 5.0])

    def test_reference_lyapunov_matrix(self):
        w = linalg.sym_eigenvalues(REF_P)
        assert np.abs(w - REF_P_EIGS).max() < 5e-3

    def test_zero_matrix(self):
        assert np.array_equal(linalg.sym_eigenvalues(np.zeros((4, 4))), np.zeros(4))

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            linalg.sym_eigenvalues([[np.nan, 0.0], [0.0, 1.0]])

    def test_eigenvector_residual(self):
        rng = np.random.default_rng(42)
        for n in range(2, 9):
            m = random_symmetric(rng, n)
            w, v = linalg.sym_eigh(m)
            norm = np.sqrt((m * m).sum())
            for i in range(n):
                residual = np.linalg.norm(m @ v[:, i] - w[i] * v[:, i])
                assert residual <= 1e-10 * norm

    def test_eigenvalue_sum_matches_trace(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            m = random_symmetric(rng, n)
            w = linalg.sym_eigenvalues(m)
            assert abs(w.sum() - np.trace(m)) <= 1e-9 * max(abs(np.trace(m)), 1.0)


class TestPositiveDefinite:
    def test_identity(self):
        assert linalg.is_positive_definite(np.eye(3))

    def test_negated_identity(self):
        assert not linalg.is_positive_definite(-np.eye(3))

    def test_reference_lyapunov_matrix(self):
        assert linalg.is_positive_definite(REF_P)

    def test_agrees_with_min_eigenvalue(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            n = int(rng.integers(2, 7))
            m = random_symmetric(rng, n)
            by_cholesky = linalg.is_positive_definite(m)
            by_eig = linalg.sym_eigenvalues(m)[0] > 0.0
            assert by_cholesky == by_eig


class TestInvert:
    def test_identity(self):
        assert np.allclose(linalg.invert(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        inv = linalg.invert(np.diag([2.0, 4.0, 5.0]))
        assert np.allclose(inv, np.diag([0.5, 0.25, 0.2]))

    def test_round_trip(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            m = rng.normal(size=(n, n)) + n * np.eye(n)
            if linalg.condition_estimate(m) > 1e6:
                continue
            assert np.abs(m @ linalg.invert(m) - np.eye(n)).max() <= 1e-9

    def test_reference_pair_is_mutually_inverse(self):
        # The published pair carries 4-decimal rounding; P entries up to
        # ~780 amplify it, so the product check is the meaningful one.
        assert np.abs(linalg.matmul(REF_P, REF_Y) - np.eye(3)).max() < 0.05
        assert np.abs(linalg.invert(REF_P) - REF_Y).max() < 1e-3

    def test_singular_raises_with_condition(self):
        with pytest.raises(SingularMatrixError) as exc:
            linalg.invert([[1.0, 2.0], [2.0, 4.0]])
        assert exc.value.condition > linalg.MAX_CONDITION

    def test_near_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            linalg.invert(np.diag([1.0, 1e-13]))

    def test_non_square_rejected(self):
        with pytest.raises(InvalidInputError):
            linalg.invert(np.ones((2, 3)))


class TestProducts:
    def test_identity_product(self):
        m = np.arange(9.0).reshape(3, 3)
        assert np.array_equal(linalg.matmul(np.eye(3), m), m)

    def test_double_transpose(self):
        m = np.arange(12.0).reshape(3, 4)
        assert np.array_equal(linalg.transpose(linalg.transpose(m)), m)

    def test_reference_gain_product(self):
        k = linalg.matmul(REF_KA, REF_P)
        assert np.abs(k - REF_K).max() < 1e-2

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            linalg.matmul(np.ones((2, 3)), np.ones((2, 3)))

    def test_symmetrize_is_exact(self):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(4, 4))
        s = linalg.symmetrize(m)
        assert np.array_equal(s, s.T)
