"""Shared fixtures: the running example system, random corpora, and
independent brute-force oracles used to pin expected values."""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

import netpriv as npv
from netpriv.errors import MultiplicityBoundExceeded, NotDiagonalizable
from netpriv.numerics import numerical_rank, rational_rank

# 6-node network whose solutions are known exactly
EXAMPLE_A = np.array(
    [
        [1, 0, 0, 0, 0, 0],
        [3, 5, 2, 0, 0, 0],
        [4, 0, 4, 0, 0, 0],
        [2, 0, 0, 2, 0, 0],
        [0, 2, 1, 3, 6, 0],
        [0, 0, 0, 5, 4, 9],
    ],
    dtype=float,
)
# average of states 2..4 (1-based)
EXAMPLE_F_CLUSTER = np.array([[0, 1, 1, 1, 0, 0]]) / 3.0
# target states 3, 4, 5 (1-based)
EXAMPLE_F_TARGETS = np.eye(6)[[2, 3, 4]]


def example_instance(f=None) -> npv.SystemInstance:
    return npv.SystemInstance(EXAMPLE_A, np.eye(6) if f is None else f)


def example_spectrum(tol=npv.DEFAULT_TOL) -> npv.Spectrum:
    return npv.compute_spectrum(EXAMPLE_A, tol)


def oneb(indices) -> list[int]:
    """1-based sorted view of an internal index set."""
    return sorted(int(i) + 1 for i in indices)


def sets_oneb(sets) -> list[list[int]]:
    return sorted(oneb(s) for s in sets)


# ---------------------------------------------------------------------------
# random corpora


def random_diagonalizable(rng, n, lo=-3, hi=3, tol=npv.DEFAULT_TOL):
    """Rejection-sample an integer matrix with a diagonalizable spectrum."""
    while True:
        a = rng.integers(lo, hi + 1, size=(n, n)).astype(float)
        try:
            spectrum = npv.compute_spectrum(a, tol)
        except (NotDiagonalizable, MultiplicityBoundExceeded):
            continue
        return a, spectrum


def unimodular_pair(rng, n, steps=6, cmax=2):
    """Integer matrix with determinant +-1 and its exact integer inverse."""
    t = np.eye(n, dtype=np.int64)
    t_inv = np.eye(n, dtype=np.int64)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-cmax, cmax + 1))
        if c == 0:
            continue
        shear = np.eye(n, dtype=np.int64)
        shear[i, j] = c
        unshear = np.eye(n, dtype=np.int64)
        unshear[i, j] = -c
        t = t @ shear
        t_inv = unshear @ t_inv
    return t, t_inv


def repeated_eigenvalue_instance(rng, n, tol=npv.DEFAULT_TOL):
    """Integer matrix with one eigenvalue of geometric multiplicity 2, built
    by conjugating a diagonal matrix with a unimodular similarity."""
    while True:
        values = rng.choice(np.arange(-4, 5), size=n - 1, replace=False)
        diag = np.concatenate([[values[0]], values]).astype(np.int64)
        t, t_inv = unimodular_pair(rng, n)
        a = (t * diag) @ t_inv  # t @ np.diag(diag) @ t_inv
        a = a.astype(float)
        try:
            spectrum = npv.compute_spectrum(a, tol)
        except (NotDiagonalizable, MultiplicityBoundExceeded):
            continue
        if spectrum.max_multiplicity == 2:
            return a, spectrum


def random_functional(rng, n, r=None, lo=-3, hi=3):
    r = r if r is not None else int(rng.integers(1, 4))
    while True:
        f = rng.integers(lo, hi + 1, size=(r, n)).astype(float)
        if np.all(np.any(f != 0, axis=1)):
            return f


def solver_corpus(n_random=200, n_repeated=50, seed=20240801):
    """The randomized corpus both solvers are validated on."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_random):
        n = int(rng.integers(4, 8))
        a, spectrum = random_diagonalizable(rng, n)
        out.append((npv.SystemInstance(a, random_functional(rng, n)), spectrum))
    for _ in range(n_repeated):
        n = int(rng.integers(4, 8))
        a, spectrum = repeated_eigenvalue_instance(rng, n)
        out.append((npv.SystemInstance(a, random_functional(rng, n)), spectrum))
    return out


# ---------------------------------------------------------------------------
# independent oracles


def synthetic_space(basis, value=0.0) -> npv.EigenSpace:
    """EigenSpace wrapper around a raw basis, for enumeration tests that do
    not need a real system behind it."""
    from netpriv.spectral import _basis_support

    basis = np.asarray(basis, dtype=float)
    return npv.EigenSpace(
        value=complex(value),
        basis=basis,
        multiplicity=basis.shape[1],
        support=_basis_support(basis, npv.DEFAULT_TOL),
    )


def brute_minimal_deficiency(basis, t, tol=npv.DEFAULT_TOL):
    """All minimal subsets of t whose removal drops rank(basis rows in t) by
    exactly one; exhaustive, independent of the seed-and-close enumeration."""
    t = sorted(t)
    r_t = numerical_rank(basis[t, :], tol)
    feasible = []
    for size in range(len(t) + 1):
        for delta in combinations(t, size):
            keep = sorted(set(t) - set(delta))
            rank = numerical_rank(basis[keep, :], tol) if keep else 0
            if rank == r_t - 1:
                feasible.append(frozenset(delta))
    return sorted(
        (d for d in feasible if not any(o < d for o in feasible)),
        key=lambda d: (len(d), tuple(sorted(d))),
    )


def hardness_corpus(cap=500):
    """Deterministic corpus of full-column-rank integer matrices, entries in
    -2..2, n in 3..5, k in 1..3, deduplicated up to row permutation.

    Small shapes are enumerated exhaustively; larger ones are filled from a
    seeded sample so the per-shape quota still covers varied matrices rather
    than a lexicographic corner of the space.  Quotas overshoot slightly and
    the total is trimmed to the cap, since tiny shapes cannot fill a quota.
    """
    shapes = [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3), (5, 1), (5, 2), (5, 3)]
    quota = -(-cap // len(shapes)) + 8
    out = []
    for n, k in shapes:
        seen = set()
        found = []
        if 5 ** (n * k) <= 4000:
            candidates = (
                tuple(sorted(flat[i * k : (i + 1) * k] for i in range(n)))
                for flat in product(tuple(range(-2, 3)), repeat=n * k)
            )
        else:
            rng = np.random.default_rng(1000 + 10 * n + k)
            candidates = (
                tuple(
                    sorted(
                        tuple(int(v) for v in row)
                        for row in rng.integers(-2, 3, size=(n, k))
                    )
                )
                for _ in range(40000)
            )
        for rows in candidates:
            if rows in seen:
                continue
            seen.add(rows)
            if rational_rank([list(r) for r in rows]) < k:
                continue
            found.append([list(r) for r in rows])
            if len(found) >= quota:
                break
        out.extend(found)
    return out[:cap]
