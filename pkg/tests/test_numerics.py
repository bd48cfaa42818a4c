from fractions import Fraction

import numpy as np
import pytest

from netpriv import RankDeficient, ToleranceConfig
from netpriv.numerics import (
    DEFAULT_TOL,
    as_matrix,
    null_space_basis,
    numerical_rank,
    rational_det,
    rational_inverse,
    rational_kernel,
    rational_matmul,
    rational_matrix,
    rational_rank,
)
from support import EXAMPLE_A


def test_tolerance_config_validation():
    with pytest.raises(ValueError):
        ToleranceConfig(rank_rel=0.0)
    with pytest.raises(ValueError):
        ToleranceConfig(rank_rel=1.5)
    with pytest.raises(ValueError):
        ToleranceConfig(rank_abs=-1e-12)


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_matrix([[1.0, float("nan")]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf, 0.0]])


def test_rank_identity_and_zero():
    assert numerical_rank(np.eye(3)) == 3
    assert numerical_rank(np.zeros((2, 3))) == 0


def test_rank_blocked_stack_drops_by_one():
    # removing the last measured node leaves a rank-5 test matrix at the
    # eigenvalue whose eigenvector lives only on that node
    stack = np.vstack([EXAMPLE_A - 9 * np.eye(6), np.eye(6)[:5]])
    assert numerical_rank(stack) == 5


def test_null_space_zero_and_identity():
    basis = null_space_basis(np.zeros((3, 3)))
    assert basis.shape == (3, 3)
    assert np.allclose(basis.conj().T @ basis, np.eye(3))
    assert null_space_basis(np.eye(2)).shape == (2, 0)


def test_null_space_of_shifted_example():
    basis = null_space_basis(EXAMPLE_A - 6 * np.eye(6))
    assert basis.shape == (6, 1)
    nonzero = {i for i in range(6) if abs(basis[i, 0]) > 1e-9}
    assert nonzero == {4, 5}


def test_null_space_residual_and_orthonormality():
    rng = np.random.default_rng(7)
    for _ in range(25):
        rows = int(rng.integers(2, 8))
        cols = int(rng.integers(2, 8))
        inner = int(rng.integers(1, min(rows, cols) + 1))
        m = rng.normal(size=(rows, inner)) @ rng.normal(size=(inner, cols))
        basis = null_space_basis(m, DEFAULT_TOL)
        assert basis.shape[1] == cols - numerical_rank(m, DEFAULT_TOL)
        if basis.shape[1]:
            norm = np.linalg.norm(m, 2)
            residual = np.linalg.norm(m @ basis, axis=0)
            assert np.all(residual <= 10 * DEFAULT_TOL.rank_abs * norm)
            gram = basis.conj().T @ basis
            assert np.allclose(gram, np.eye(basis.shape[1]), atol=1e-10)


def test_rank_matches_transpose():
    rng = np.random.default_rng(11)
    for _ in range(25):
        rows = int(rng.integers(1, 8))
        cols = int(rng.integers(1, 8))
        m = rng.normal(size=(rows, cols))
        if rng.integers(2):
            inner = int(rng.integers(1, min(rows, cols) + 1))
            m = rng.normal(size=(rows, inner)) @ rng.normal(size=(inner, cols))
        assert numerical_rank(m) == numerical_rank(m.T)


def test_rational_kernel_known_lines():
    kernel = rational_kernel([[1, 0], [0, 1], [1, 1]])
    assert kernel == [[Fraction(1)], [Fraction(1)], [Fraction(-1)]]

    kernel = rational_kernel([[1], [0]])
    assert kernel == [[Fraction(0)], [Fraction(1)]]

    kernel = rational_kernel([[1, 0], [2, 0], [0, 1]])
    assert kernel == [[Fraction(2)], [Fraction(-1)], [Fraction(0)]]


def test_rational_kernel_rejects_rank_deficient():
    with pytest.raises(RankDeficient):
        rational_kernel([[1, 2], [2, 4], [3, 6]])


def test_rational_kernel_exact_orthogonality():
    rng = np.random.default_rng(13)
    for _ in range(30):
        n = int(rng.integers(3, 7))
        k = int(rng.integers(1, n))
        w = rng.integers(-5, 6, size=(n, k)).tolist()
        if rational_rank(w) < k:
            continue
        kernel = rational_kernel(w)
        assert len(kernel) == n and len(kernel[0]) == n - k
        assert all(x.denominator == 1 for row in kernel for x in row)
        transposed = [[kernel[i][j] for i in range(n)] for j in range(n - k)]
        prod = rational_matmul(transposed, rational_matrix(w))
        assert all(x == 0 for row in prod for x in row)
        assert rational_rank(kernel) == n - k


def test_rational_rank_invariant_under_row_ops():
    rng = np.random.default_rng(17)
    for _ in range(20):
        rows = int(rng.integers(2, 6))
        cols = int(rng.integers(2, 6))
        m = rng.integers(-4, 5, size=(rows, cols)).tolist()
        base = rational_rank(m)
        perm = rng.permutation(rows)
        scales = [Fraction(int(rng.integers(1, 5)), int(rng.integers(1, 5))) for _ in range(rows)]
        scaled = [[scales[r] * x for x in m[perm[r]]] for r in range(rows)]
        assert rational_rank(scaled) == base


def test_rational_det_and_inverse_round_trip():
    m = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    inv = rational_inverse(m)
    prod = rational_matmul(rational_matrix(m), inv)
    assert prod == rational_matrix(np.eye(3).astype(int).tolist())
    assert rational_det(m) == Fraction(18)
    assert rational_det([[1, 2], [2, 4]]) == 0
    with pytest.raises(RankDeficient):
        rational_inverse([[1, 2], [2, 4]])
