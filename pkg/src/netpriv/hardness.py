"""Constructive hardness reduction: from integer-matrix linear degeneracy to
minimum blocking of a scalar functional.

Given an integer matrix W (n x k, full column rank), the construction builds
a diagonalizable system whose eigenvalue 1 has W's columns as eigenbasis and
whose remaining eigenvectors are strictly positive, together with a scalar
functional f chosen so that W has k linearly dependent rows exactly when the
minimum blocking set of (A, f) has at most n - k nodes.

Everything here runs in exact rational arithmetic, including the brute-force
blocking search used by :func:`verify_reduction`.  The functional entries are
consecutive powers of alpha, so its informative component at low-index nodes
is smaller than its norm by a factor alpha^(1-n); that sits below any usable
relative rank tolerance long before the entries themselves overflow exact
double range, which makes a float rank decision on these instances unsound.
The float conversion (:meth:`ReductionInstance.to_system`) exists for feeding
the regular solvers and warns accordingly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .blocking import BlockingSolution
from .errors import CertificationFailed, RankDeficient, TooLarge
from .fobs import SystemInstance
from .numerics import (
    DEFAULT_TOL,
    ToleranceConfig,
    rational_det,
    rational_inverse,
    rational_kernel,
    rational_matmul,
    rational_matrix,
    rational_rank,
    rational_to_float,
)
from .oracle import DEFAULT_MAX_N

FLOAT_EXACT_LIMIT = 2**53


def _int_rows(w) -> list[list[int]]:
    rows = [[x for x in row] for row in w]
    if not rows or not rows[0]:
        raise ValueError("W must be at least 1x1")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("ragged rows in W")
    out = []
    for row in rows:
        conv = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"W entries must be integers, got {x}")
                x = x.numerator
            if isinstance(x, float):
                if not x.is_integer():
                    raise ValueError(f"W entries must be integers, got {x}")
                x = int(x)
            conv.append(int(x))
        out.append(conv)
    return out


@dataclass(frozen=True)
class ReductionInstance:
    """All exact pieces of one constructed hardness instance."""

    W: tuple[tuple[int, ...], ...]
    W_perp: tuple[tuple[int, ...], ...]
    beta_max: int
    beta_perp_max: int
    eta_star: int
    P: tuple[tuple[int, ...], ...]
    P_inv: tuple[tuple[Fraction, ...], ...]
    gamma: tuple[int, ...]
    alpha: int
    A: tuple[tuple[Fraction, ...], ...]
    f: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.W)

    @property
    def k(self) -> int:
        return len(self.W[0])

    def to_system(self) -> SystemInstance:
        """Float conversion for the solver stage; warns when the functional
        entries exceed exact double-precision range."""
        if max(self.f) > FLOAT_EXACT_LIMIT:
            warnings.warn(
                f"functional entries up to {max(self.f)} exceed 2^53; float "
                "conversion is lossy and rank decisions may be unreliable",
                RuntimeWarning,
                stacklevel=2,
            )
        a = rational_to_float(self.A)
        f = np.array([[float(x) for x in self.f]])
        return SystemInstance(a, f)


def build_reduction_instance(w) -> ReductionInstance:
    """Assemble the exact system/functional pair for an integer matrix W.

    ``beta_perp_max`` and hence ``eta_star`` depend on the particular kernel
    basis :func:`rational_kernel` returns; any valid basis works and the
    values are reported as computed, not normalized.
    """
    rows = _int_rows(w)
    n, k = len(rows), len(rows[0])
    if not 1 <= k < n:
        raise ValueError(f"W must be n x k with 1 <= k < n, got {n}x{k}")
    wf = rational_matrix(rows)
    if rational_rank(wf) < k:
        raise RankDeficient("W does not have full column rank")

    w_perp = rational_kernel(wf)
    beta_max = max(abs(x) for row in rows for x in row)
    beta_perp_max = max(abs(int(x)) for row in w_perp for x in row)

    p = None
    eta_star = None
    for eta in (beta_perp_max + 1, beta_perp_max + 2):
        h = [
            [Fraction(rows[i][j]) for j in range(k)]
            + [w_perp[i][j] + eta for j in range(n - k)]
            for i in range(n)
        ]
        if rational_det(h) != 0:
            p, eta_star = h, eta
            break
    if p is None:
        # det H(eta) is affine in eta and nonzero at eta = 0
        raise AssertionError("both shift candidates produced a singular basis matrix")

    p_inv = rational_inverse(p)
    gamma = [1] * k + list(range(2, n - k + 2))
    gamma_m = [
        [Fraction(gamma[i]) if i == j else Fraction(0) for j in range(n)]
        for i in range(n)
    ]
    a = rational_matmul(rational_matmul(p, gamma_m), p_inv)
    alpha = 1 + k**k * beta_max**k
    f = [alpha**i for i in range(1, n + 1)]

    return ReductionInstance(
        W=tuple(tuple(r) for r in rows),
        W_perp=tuple(tuple(int(x) for x in r) for r in w_perp),
        beta_max=beta_max,
        beta_perp_max=beta_perp_max,
        eta_star=eta_star,
        P=tuple(tuple(int(x) for x in r) for r in p),
        P_inv=tuple(tuple(r) for r in p_inv),
        gamma=tuple(gamma),
        alpha=alpha,
        A=tuple(tuple(r) for r in a),
        f=tuple(f),
    )


def linear_degeneracy_bruteforce(w) -> bool:
    """Whether some k rows of the n x k integer matrix are linearly dependent
    (exact determinant test over all row subsets)."""
    rows = _int_rows(w)
    n, k = len(rows), len(rows[0])
    if not 1 <= k < n:
        raise ValueError(f"W must be n x k with 1 <= k < n, got {n}x{k}")
    for subset in combinations(range(n), k):
        if rational_det([rows[i] for i in subset]) == 0:
            return True
    return False


def exact_blocking_optimum(
    inst: ReductionInstance, max_n: int = DEFAULT_MAX_N
) -> BlockingSolution:
    """Brute-force minimum blocking set of the constructed (A, f) pair with
    every rank decided by exact rational elimination.

    The eigenvalues are known exactly from the construction, so the direct
    stacked-rank test runs with no tolerance at all.  Subsets are enumerated
    by increasing cardinality, lexicographic within a level.
    """
    n = inst.n
    if n > max_n:
        raise TooLarge(f"exact brute force refused for n={n} > {max_n}")
    a = [list(row) for row in inst.A]
    f_row = [Fraction(x) for x in inst.f]
    shifted = {}
    for g in sorted(set(inst.gamma)):
        m = [row[:] for row in a]
        for i in range(n):
            m[i][i] -= g
        shifted[g] = m

    def identity_rows(measured):
        return [[Fraction(int(i == j)) for j in range(n)] for i in measured]

    for card in range(n + 1):
        hits = []
        first_witnesses: tuple[complex, ...] = ()
        for combo in combinations(range(n), card):
            blocked = set(combo)
            eye_rows = identity_rows(j for j in range(n) if j not in blocked)
            witnesses = []
            for g, m in shifted.items():
                base = m + eye_rows
                r0 = rational_rank(base)
                if r0 < n and rational_rank(base + [f_row]) > r0:
                    witnesses.append(complex(g))
                    break
            if witnesses:
                hits.append(frozenset(combo))
                if not first_witnesses:
                    first_witnesses = tuple(witnesses)
        if hits:
            return BlockingSolution(
                blocked=hits[0],
                witness_eigenvalues=first_witnesses,
                all_optima=tuple(hits),
            )
    raise CertificationFailed("blocking the full node set must always be feasible")


@dataclass(frozen=True)
class ReductionReport:
    instance: ReductionInstance
    degenerate: bool
    blocking_optimum: int
    threshold: int
    agreement: bool
    solution: BlockingSolution


def verify_reduction(
    w,
    tol: ToleranceConfig = DEFAULT_TOL,
    max_n: int = DEFAULT_MAX_N,
) -> ReductionReport:
    """Build the instance, brute-force its blocking optimum exactly, and
    check that the optimum being at most n - k coincides with W's degeneracy.

    ``tol`` is accepted for interface symmetry with the float solvers but the
    equivalence itself is decided in exact arithmetic; see the module
    docstring for why a float rank stage cannot be trusted here.
    """
    del tol
    inst = build_reduction_instance(w)
    degenerate = linear_degeneracy_bruteforce(inst.W)
    solution = exact_blocking_optimum(inst, max_n)
    threshold = inst.n - inst.k
    return ReductionReport(
        instance=inst,
        degenerate=degenerate,
        blocking_optimum=solution.cardinality,
        threshold=threshold,
        agreement=(solution.cardinality <= threshold) == degenerate,
        solution=solution,
    )
