"""Dense linear-algebra primitives: tolerance-based rank and null spaces on
floats, plus an exact path over ``fractions.Fraction`` for integer inputs.

All float-side rank decisions in the package funnel through
:func:`numerical_rank` so that a single tolerance convention applies
everywhere.  The rational helpers never round; they are used where an exact
answer is part of the contract (kernel bases, determinants, similarity
transforms of the hardness construction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .errors import RankDeficient


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds governing rank, eigenvalue-clustering and support decisions.

    rank_rel     relative singular-value cutoff (scaled by sigma_max and the
                 larger matrix dimension)
    rank_abs     absolute singular-value floor
    cluster_rel  eigenvalue clustering radius, relative to the matrix norm
    support_rel  eigenvector entry considered zero below this fraction of the
                 basis' largest entry
    """

    rank_rel: float = 1e-9
    rank_abs: float = 1e-12
    cluster_rel: float = 1e-7
    support_rel: float = 1e-9

    def __post_init__(self):
        for name in ("rank_rel", "rank_abs", "cluster_rel", "support_rel"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.rank_rel >= 1:
            raise ValueError("rank_rel must be < 1")


DEFAULT_TOL = ToleranceConfig()


def as_matrix(entries, dtype=None) -> np.ndarray:
    """Convert to a 2-D ndarray, rejecting empty shapes and NaN/Inf entries."""
    m = np.asarray(entries, dtype=dtype)
    if m.ndim == 1:
        m = m.reshape(1, -1)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix must be at least 1x1, got {m.shape}")
    if m.dtype.kind not in "fc":
        m = m.astype(float)
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def _singular_values(m: np.ndarray) -> np.ndarray:
    if min(m.shape) == 0:
        return np.zeros(0)
    return np.linalg.svd(m, compute_uv=False)


def rank_threshold(sigma: np.ndarray, shape, tol: ToleranceConfig) -> float:
    smax = float(sigma[0]) if sigma.size else 0.0
    return max(tol.rank_abs, tol.rank_rel * smax * max(shape))


def numerical_rank(m, tol: ToleranceConfig = DEFAULT_TOL) -> int:
    """Number of singular values above max(rank_abs, rank_rel*s_max*max(m,n))."""
    m = np.asarray(m)
    s = _singular_values(m)
    if not s.size:
        return 0
    return int(np.count_nonzero(s > rank_threshold(s, m.shape, tol)))


def rank_with_margin(m, tol: ToleranceConfig = DEFAULT_TOL):
    """Rank plus the singular values straddling the cut.

    Returns (rank, smallest kept sigma or None, largest dropped sigma or
    None); the pair lets callers audit how close a rank decision was to
    flipping.
    """
    m = np.asarray(m)
    s = _singular_values(m)
    if not s.size:
        return 0, None, None
    r = int(np.count_nonzero(s > rank_threshold(s, m.shape, tol)))
    kept = float(s[r - 1]) if r > 0 else None
    dropped = float(s[r]) if r < s.size else None
    return r, kept, dropped


def null_space_basis(m, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the numerical null space, one column per dimension.

    Width is cols - numerical_rank(m); a full-column-rank input yields a
    width-0 matrix.
    """
    m = np.asarray(m)
    rows, cols = m.shape
    if cols == 0:
        return np.zeros((0, 0))
    if rows == 0:
        return np.eye(cols)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    r = int(np.count_nonzero(s > rank_threshold(s, m.shape, tol)))
    return vh[r:].conj().T


# ---------------------------------------------------------------------------
# Exact-rational path.  Matrices are lists of lists of Fraction, row-major.

RationalMatrix = list


def rational_matrix(rows) -> RationalMatrix:
    """Deep-convert a nested sequence to Fractions; validates rectangularity."""
    out = [[Fraction(x) for x in row] for row in rows]
    if not out or not out[0]:
        raise ValueError("rational matrix must be at least 1x1")
    width = len(out[0])
    if any(len(row) != width for row in out):
        raise ValueError("ragged rows in rational matrix")
    return out


def rational_shape(m) -> tuple[int, int]:
    return len(m), len(m[0])


def rational_matmul(a, b) -> RationalMatrix:
    n, k = rational_shape(a)
    k2, p = rational_shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch: {n}x{k} @ {k2}x{p}")
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(p)]
            for i in range(n)]


def rational_rank(m) -> int:
    """Rank by exact Gaussian elimination."""
    a = [row[:] for row in rational_matrix(m)]
    rows, cols = rational_shape(a)
    rank = 0
    for col in range(cols):
        piv = next((r for r in range(rank, rows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][col]
        for r in range(rank + 1, rows):
            if a[r][col] != 0:
                f = a[r][col] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def rational_det(m) -> Fraction:
    a = [row[:] for row in rational_matrix(m)]
    n, cols = rational_shape(a)
    if n != cols:
        raise ValueError("determinant requires a square matrix")
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def rational_inverse(m) -> RationalMatrix:
    a = [row[:] for row in rational_matrix(m)]
    n, cols = rational_shape(a)
    if n != cols:
        raise ValueError("inverse requires a square matrix")
    aug = [row + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise RankDeficient("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = aug[col][col]
        aug[col] = [x / inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _primitive_integer(vec: list[Fraction]) -> list[Fraction]:
    """Scale a rational vector to coprime integers with positive leading sign."""
    den = lcm(*(x.denominator for x in vec)) if vec else 1
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def rational_kernel(w) -> RationalMatrix:
    """Integer basis of the left-orthogonal complement of a tall matrix.

    For an n x k input (n > k) of full column rank, returns an n x (n-k)
    integer matrix N with N^T . w == 0 exactly and full column rank, obtained
    by reduced row echelon elimination of w^T over Fractions followed by
    denominator clearing.  Raises RankDeficient when w lacks full column rank.
    """
    w = rational_matrix(w)
    n, k = rational_shape(w)
    if n <= k:
        raise ValueError(f"kernel basis requires more rows than columns, got {n}x{k}")
    # reduced row echelon form of the transpose
    a = [[w[i][j] for i in range(n)] for j in range(k)]
    pivots: list[int] = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, k) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = a[row][col]
        a[row] = [x / inv for x in a[row]]
        for r in range(k):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == k:
            break
    if len(pivots) < k:
        raise RankDeficient("input matrix does not have full column rank")
    free = [c for c in range(n) if c not in pivots]
    columns = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        columns.append(_primitive_integer(v))
    return [[columns[j][i] for j in range(len(free))] for i in range(n)]


def rational_to_float(m) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in m], dtype=float)
