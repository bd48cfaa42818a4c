"""Exact minimum-blocking solver for vector-wise functional privacy.

Per distinct eigenvalue, the minimum blocking sets are exactly the minimal
node sets whose removal drops the rank of the eigenvalue test matrix by one
while the functional still adds a rank.  Enumeration works on the eigenbasis
directly: a blocked set achieves deficiency one iff its complement is a
maximal row subset of the eigenbasis with rank k-1, so we seed with every
(k-1)-subset of linearly independent rows, close each seed to its maximal
rank-preserving superset, and take complements.  Feasibility of a candidate
reduces to the functional hitting the one-dimensional null-space witness.

The same enumeration, restricted to an arbitrary accessible node set T,
solves the subproblem the greedy entry-wise algorithm iterates on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CertificationFailed, EmptyRank, NotDiagonalizable, ZeroFunctional
from .fobs import (
    MeasurementSpec,
    SystemInstance,
    _normalized_rows,
    is_functionally_observable,
    is_vector_protected,
)
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix, null_space_basis, numerical_rank
from .spectral import EigenSpace, Spectrum, compute_spectrum


@dataclass(frozen=True)
class CandidateSet:
    """One minimal deficiency-one blocking set for one eigenvalue.

    witness_basis columns span the null space of the blocked test matrix
    (orthonormal; width k_i minus the restricted rank after blocking).
    """

    eigen_index: int
    delta: frozenset[int]
    witness_basis: np.ndarray

    @property
    def cardinality(self) -> int:
        return len(self.delta)


@dataclass(frozen=True)
class BlockingSolution:
    """A blocked node set with its certificates and every tied optimum."""

    blocked: frozenset[int]
    witness_eigenvalues: tuple[complex, ...]
    all_optima: tuple[frozenset[int], ...]
    per_eigenvalue: tuple[tuple[int, CandidateSet | None], ...] = ()
    sentinel_used: bool = False

    @property
    def cardinality(self) -> int:
        return len(self.blocked)


def _delta_key(delta: frozenset[int]):
    return (len(delta), tuple(sorted(delta)))


def minimal_deficiency_sets(
    space: EigenSpace,
    t,
    tol: ToleranceConfig = DEFAULT_TOL,
    fast_path: bool = True,
    eigen_index: int = -1,
) -> list[CandidateSet]:
    """All minimal sets whose blocking drops the restricted eigenbasis rank
    by exactly one.

    ``t`` is the accessible node set; candidates are subsets of it.  For a
    simple eigenvalue the unique candidate is the eigenvector support inside
    ``t`` (``fast_path=False`` forces the general seed-and-close enumeration,
    which must agree).  Output is sorted by (cardinality, lexicographic) and
    deduplicated.  ``eigen_index`` is stamped onto the candidates so callers
    holding a whole spectrum can trace them back.  Raises EmptyRank when the
    eigenbasis is already zero on ``t``.
    """
    t = sorted({int(i) for i in t})
    x = space.basis
    n, k = x.shape
    if any(not 0 <= i < n for i in t):
        raise ValueError(f"accessible set {t} outside 0..{n - 1}")
    t_set = frozenset(t)

    if space.multiplicity == 1 and fast_path:
        delta = frozenset(j for j in t if j in space.support)
        if not delta:
            raise EmptyRank("eigenbasis has no support on the accessible set")
        deltas = [delta]
    else:
        xt = x[t, :]
        r_t = numerical_rank(xt, tol)
        if r_t == 0:
            raise EmptyRank("eigenbasis has no support on the accessible set")
        support_rows = [j for j in t if j in space.support]
        seen: set[frozenset[int]] = set()
        for seed in combinations(support_rows, r_t - 1):
            if seed and numerical_rank(x[list(seed), :], tol) != r_t - 1:
                continue
            closure = set(seed)
            for j in t:
                if j in closure:
                    continue
                if numerical_rank(x[list(seed) + [j], :], tol) == r_t - 1:
                    closure.add(j)
            seen.add(t_set - frozenset(closure))
        deltas = sorted(seen, key=_delta_key)

    out = []
    for delta in deltas:
        keep = sorted(t_set - delta)
        kernel = null_space_basis(x[keep, :], tol) if keep else np.eye(k)
        out.append(CandidateSet(eigen_index, delta, x @ kernel))
    return out


def _hits_functional(f: np.ndarray, witness: np.ndarray, tol: ToleranceConfig) -> bool:
    """Whether F maps some witness direction away from zero, i.e. whether
    appending F raises the rank of the blocked test matrix."""
    if witness.shape[1] == 0:
        return False
    prod = f @ witness
    cuts = np.maximum(tol.rank_abs, tol.rank_rel * np.linalg.norm(f, axis=1))
    return bool(np.any(np.abs(prod) > cuts[:, None]))


def filter_feasible(
    candidates: list[CandidateSet],
    f,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[CandidateSet]:
    """Keep candidates for which the functional hits the null-space witness."""
    f = as_matrix(f, dtype=float)
    return [c for c in candidates if _hits_functional(f, c.witness_basis, tol)]


def filter_feasible_direct(
    candidates: list[CandidateSet],
    a,
    spectrum: Spectrum,
    f,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list[CandidateSet]:
    """Literal full-rank evaluation of feasibility (debug cross-check path).

    A candidate is kept iff the stacked matrix of the shifted dynamics, the
    unblocked identity rows and the functional has full column rank n.
    """
    a = as_matrix(a, dtype=float)
    f_rows = _normalized_rows(as_matrix(f, dtype=float), tol)
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))))
    eye = np.eye(n)
    keep = []
    for c in candidates:
        lam = spectrum.spaces[c.eigen_index].value
        measured = sorted(set(range(n)) - c.delta)
        stack = np.vstack([(a - lam * eye) / scale, eye[measured], f_rows])
        if numerical_rank(stack, tol) == n:
            keep.append(c)
    return keep


def _conjugate_copy(cands: list[CandidateSet], i: int) -> list[CandidateSet]:
    return [CandidateSet(i, c.delta, np.conj(c.witness_basis)) for c in cands]


def solve_problem1(
    instance: SystemInstance,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    *,
    debug_rank_path: bool = False,
    check_conjugates: bool = False,
) -> BlockingSolution:
    """Minimum blocking set protecting the functional vector-wise.

    Per eigenvalue the best feasible deficiency-one candidate is selected
    (or the full node set as an infeasibility sentinel); the returned set is
    the minimum over eigenvalues, lexicographically smallest among ties, with
    every tied optimum reported.  The result is re-certified through the
    direct rank path before returning.

    ``debug_rank_path`` additionally evaluates feasibility by the literal
    stacked-rank test and insists both paths agree.  ``check_conjugates``
    re-enumerates conjugate eigenspaces instead of reusing their partner's
    candidates, asserting the blocked sets match.
    """
    if spectrum is None:
        spectrum = compute_spectrum(instance.A, tol)
    if not spectrum.diagonalizable:
        raise NotDiagonalizable("the solver requires a diagonalizable state matrix")
    n = instance.n
    full = frozenset(range(n))
    f = instance.F

    feasible_by_eig: dict[int, list[CandidateSet]] = {}
    per_eig: list[tuple[int, CandidateSet | None]] = []
    sentinel_used = False
    for i, space in enumerate(spectrum.spaces):
        partner = space.conjugate_partner
        if partner is not None and partner < i and not check_conjugates:
            feas = _conjugate_copy(feasible_by_eig[partner], i)
        else:
            cands = minimal_deficiency_sets(space, range(n), tol, eigen_index=i)
            feas = filter_feasible(cands, f, tol)
            if debug_rank_path:
                direct = filter_feasible_direct(cands, instance.A, spectrum, f, tol)
                if {c.delta for c in feas} != {c.delta for c in direct}:
                    raise CertificationFailed(
                        f"witness and direct feasibility disagree at eigenvalue "
                        f"{space.value}"
                    )
            if partner is not None and partner < i and check_conjugates:
                if {c.delta for c in feas} != {c.delta for c in feasible_by_eig[partner]}:
                    raise CertificationFailed(
                        f"conjugate eigenspaces produced different candidates at "
                        f"{space.value}"
                    )
        feasible_by_eig[i] = feas
        best = min(feas, key=lambda c: _delta_key(c.delta)) if feas else None
        if best is None:
            sentinel_used = True
        per_eig.append((i, best))

    best_card = min(
        (best.cardinality if best is not None else n) for _, best in per_eig
    )
    optima: set[frozenset[int]] = set()
    for i, feas in feasible_by_eig.items():
        optima.update(c.delta for c in feas if c.cardinality == best_card)
    if not optima:
        # every eigenvalue carried the sentinel: block everything
        optima = {full}
    all_optima = tuple(sorted(optima, key=_delta_key))
    blocked = all_optima[0]

    witnesses = tuple(
        spectrum.spaces[i].value
        for i, feas in sorted(feasible_by_eig.items())
        if any(c.delta == blocked for c in feas)
    )
    if not witnesses:
        cert = is_functionally_observable(
            instance.A, MeasurementSpec.from_blocked(blocked), f, spectrum, tol
        )
        witnesses = tuple(spectrum.spaces[i].value for i in cert.violations)

    if not is_vector_protected(instance, blocked, spectrum, tol):
        raise CertificationFailed(
            f"solver result {sorted(blocked)} failed the independent rank recheck"
        )
    return BlockingSolution(
        blocked=blocked,
        witness_eigenvalues=witnesses,
        all_optima=all_optima,
        per_eigenvalue=tuple(per_eig),
        sentinel_used=sentinel_used,
    )


def _restricted_hits_direct(
    a: np.ndarray,
    space: EigenSpace,
    t_minus_delta,
    f_rows: np.ndarray,
    tol: ToleranceConfig,
) -> bool:
    """Rank-increase test at one eigenvalue with measured rows restricted."""
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))))
    measured = sorted(t_minus_delta)
    eye = np.eye(n)
    base = np.vstack([(a - space.value * eye) / scale, eye[measured]])
    return numerical_rank(np.vstack([base, f_rows]), tol) > numerical_rank(base, tol)


def alg2_restricted(
    a,
    f_row,
    t,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    *,
    debug_rank_path: bool = False,
) -> CandidateSet:
    """Minimum blocking set inside an accessible node set for a scalar
    functional.

    Returns a candidate with an empty ``delta`` when the row is already
    non-inferable from the accessible nodes; otherwise enumerates minimal
    deficiency-one sets within ``t`` per eigenvalue, filters by the row
    hitting the enlarged null-space witness, and returns the global minimum
    (ties: lexicographic, then eigenvalue order).
    """
    a = as_matrix(a, dtype=float)
    f = as_matrix(f_row, dtype=float)
    if f.shape[0] != 1:
        raise ValueError(f"expected a single functional row, got {f.shape}")
    if not np.any(f != 0):
        raise ZeroFunctional("functional row is identically zero")
    if spectrum is None:
        spectrum = compute_spectrum(a, tol)
    if not spectrum.diagonalizable:
        raise NotDiagonalizable("the solver requires a diagonalizable state matrix")
    n = a.shape[0]
    t_set = frozenset(int(i) for i in t)

    cert = is_functionally_observable(
        a, MeasurementSpec.from_blocked(frozenset(range(n)) - t_set), f, spectrum, tol
    )
    if not cert.observable:
        i = cert.violations[0]
        space = spectrum.spaces[i]
        keep = sorted(t_set)
        kernel = (
            null_space_basis(space.basis[keep, :], tol)
            if keep
            else np.eye(space.multiplicity)
        )
        return CandidateSet(i, frozenset(), space.basis @ kernel)

    best: CandidateSet | None = None
    best_key = None
    for i, space in enumerate(spectrum.spaces):
        partner = space.conjugate_partner
        if partner is not None and partner < i:
            continue  # identical candidates as the partner for a real functional
        try:
            cands = minimal_deficiency_sets(space, t_set, tol, eigen_index=i)
        except EmptyRank:
            continue
        feas = [c for c in cands if _hits_functional(f, c.witness_basis, tol)]
        if debug_rank_path:
            f_rows = _normalized_rows(f, tol)
            direct = {
                c.delta
                for c in cands
                if _restricted_hits_direct(a, space, t_set - c.delta, f_rows, tol)
            }
            if {c.delta for c in feas} != direct:
                raise CertificationFailed(
                    f"witness and direct feasibility disagree at eigenvalue {space.value}"
                )
        if not feas:
            continue
        c0 = min(feas, key=lambda c: _delta_key(c.delta))
        key = _delta_key(c0.delta) + (i,)
        if best_key is None or key < best_key:
            best, best_key = c0, key
    if best is None:
        raise CertificationFailed(
            "no feasible blocking set found although the functional is nonzero"
        )
    return best


def union_baseline(
    instance: SystemInstance,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> frozenset[int]:
    """Naive entry-wise solution: union of per-row vector-wise optima."""
    if spectrum is None:
        spectrum = compute_spectrum(instance.A, tol)
    blocked: frozenset[int] = frozenset()
    for i in range(instance.r):
        row_instance = SystemInstance(instance.A, instance.F[i : i + 1])
        blocked |= solve_problem1(row_instance, spectrum, tol).blocked
    return blocked
