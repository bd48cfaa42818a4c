"""Functional observability decisions and privacy predicates.

The triple (A, C, F) is functionally observable exactly when, at every
distinct eigenvalue lam of A,

    rank [A - lam*I; C; F]  ==  rank [A - lam*I; C].

Only distinct eigenvalues need testing: away from the spectrum the first
block already has full column rank and the equality is automatic.  A
functional F x(t) is *protected* by a blocked node set S when the triple
with C = I restricted to the unblocked nodes is NOT functionally observable.

Stacked-rank evaluations equilibrate row scales first (the A block is scaled
by 1/max(1, |A|_max) and every functional row to unit norm); rank is
invariant under nonzero row scaling, and without this the rank tolerance is
meaningless when F rows dwarf the dynamics by many orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotDiagonalizable, ZeroFunctional
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix, rank_with_margin
from .spectral import Spectrum, compute_spectrum


@dataclass(frozen=True)
class SystemInstance:
    """A network system (A) together with the functional privacy matrix (F)."""

    A: np.ndarray
    F: np.ndarray
    node_labels: tuple[str, ...] | None = None
    edges: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        a = as_matrix(self.A, dtype=float)
        f = as_matrix(self.F, dtype=float)
        if a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"A must be square, got {a.shape}")
        if f.shape[1] != a.shape[0]:
            raise DimensionMismatch(
                f"F has {f.shape[1]} columns but A is {a.shape[0]}x{a.shape[0]}"
            )
        zero_rows = np.flatnonzero(~np.any(f != 0, axis=1))
        if zero_rows.size:
            raise ZeroFunctional(
                f"F row(s) {[int(i) + 1 for i in zero_rows]} are identically zero"
            )
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "F", f)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def r(self) -> int:
        return self.F.shape[0]


@dataclass(frozen=True)
class MeasurementSpec:
    """Either a blocked node set (C = identity with those columns zeroed) or
    an explicit output matrix."""

    blocked: frozenset[int] | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.blocked is None) == (self.matrix is None):
            raise ValueError("give exactly one of blocked= or matrix=")
        if self.blocked is not None:
            object.__setattr__(self, "blocked", frozenset(int(i) for i in self.blocked))
        else:
            object.__setattr__(self, "matrix", as_matrix(self.matrix, dtype=float))

    @classmethod
    def from_blocked(cls, indices) -> "MeasurementSpec":
        return cls(blocked=frozenset(indices))

    @classmethod
    def from_matrix(cls, c) -> "MeasurementSpec":
        return cls(matrix=c)

    def output_rows(self, n: int, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
        """Row block representing C, equilibrated for rank computations."""
        if self.blocked is not None:
            bad = [i for i in self.blocked if not 0 <= i < n]
            if bad:
                raise DimensionMismatch(f"blocked indices {bad} outside 0..{n - 1}")
            measured = sorted(set(range(n)) - self.blocked)
            return np.eye(n)[measured]
        c = self.matrix
        if c.shape[1] != n:
            raise DimensionMismatch(f"C has {c.shape[1]} columns, expected {n}")
        return _normalized_rows(c, tol)


def _normalized_rows(m: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Scale each row to unit norm; rows below the absolute floor are dropped
    (they carry no rank) instead of being amplified into noise."""
    norms = np.linalg.norm(m, axis=1)
    keep = norms > tol.rank_abs
    if not np.any(keep):
        return np.zeros((0, m.shape[1]))
    return m[keep] / norms[keep, None]


@dataclass(frozen=True)
class RankPair:
    """Ranks of the eigenvalue test matrices with and without F appended.

    The margins are (smallest kept sigma, largest dropped sigma) of the
    respective stacked matrices, exposing how close each rank decision sat to
    the tolerance boundary.
    """

    eigen_index: int
    eigenvalue: complex
    rank_with_functional: int
    rank_without_functional: int
    margin_with: tuple[float | None, float | None]
    margin_without: tuple[float | None, float | None]

    @property
    def violates(self) -> bool:
        return self.rank_with_functional > self.rank_without_functional


@dataclass(frozen=True)
class ObservabilityCertificate:
    observable: bool
    pairs: tuple[RankPair, ...] = ()

    @property
    def violations(self) -> tuple[int, ...]:
        return tuple(p.eigen_index for p in self.pairs if p.violates)


def _certificate(
    a: np.ndarray,
    c_rows: np.ndarray,
    f_rows: np.ndarray,
    spectrum: Spectrum,
    tol: ToleranceConfig,
) -> ObservabilityCertificate:
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))))
    eye = np.eye(n)
    pairs = []
    for i, space in enumerate(spectrum.spaces):
        top = (a - space.value * eye) / scale
        base = np.vstack([top, c_rows]) if c_rows.size else top
        stacked = np.vstack([base, f_rows]) if f_rows.size else base
        r_without, kept0, drop0 = rank_with_margin(base, tol)
        r_with, kept1, drop1 = rank_with_margin(stacked, tol)
        pairs.append(
            RankPair(i, space.value, r_with, r_without, (kept1, drop1), (kept0, drop0))
        )
    return ObservabilityCertificate(
        observable=not any(p.violates for p in pairs), pairs=tuple(pairs)
    )


def _require_diagonalizable(spectrum: Spectrum):
    if not spectrum.diagonalizable:
        raise NotDiagonalizable("the rank criterion requires a diagonalizable state matrix")


def is_functionally_observable(
    a,
    measurement: MeasurementSpec,
    f,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> ObservabilityCertificate:
    """Decide functional observability of (A, C, F); truth plus certificate.

    The certificate records, for every distinct eigenvalue, the rank of the
    test matrix with and without the functional block, and which eigenvalues
    (if any) violate the equality.
    """
    a = as_matrix(a, dtype=float)
    f = as_matrix(f, dtype=float)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"A must be square, got {a.shape}")
    if f.shape[1] != a.shape[0]:
        raise DimensionMismatch(f"F has {f.shape[1]} columns, expected {a.shape[0]}")
    if spectrum is None:
        spectrum = compute_spectrum(a, tol)
    _require_diagonalizable(spectrum)
    c_rows = measurement.output_rows(a.shape[0], tol)
    return _certificate(a, c_rows, _normalized_rows(f, tol), spectrum, tol)


def is_vector_protected(
    instance: SystemInstance,
    blocked,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> bool:
    """True when blocking `blocked` makes the whole functional non-inferable."""
    cert = is_functionally_observable(
        instance.A, MeasurementSpec.from_blocked(blocked), instance.F, spectrum, tol
    )
    return not cert.observable


def is_entry_protected(
    instance: SystemInstance,
    blocked,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> tuple[bool, ...]:
    """Per-row protection: entry i is True iff row f_i alone is non-inferable.

    The base ranks (without any functional row) are shared across rows, so
    this costs one extra rank evaluation per (row, eigenvalue) pair.
    """
    a = instance.A
    n = instance.n
    if spectrum is None:
        spectrum = compute_spectrum(a, tol)
    _require_diagonalizable(spectrum)
    c_rows = MeasurementSpec.from_blocked(blocked).output_rows(n, tol)
    scale = max(1.0, float(np.max(np.abs(a))))
    eye = np.eye(n)

    base_rank: list[int] = []
    tops: list[np.ndarray] = []
    for space in spectrum.spaces:
        top = (a - space.value * eye) / scale
        base = np.vstack([top, c_rows]) if c_rows.size else top
        base_rank.append(rank_with_margin(base, tol)[0])
        tops.append(base)

    out = []
    for i in range(instance.r):
        row = _normalized_rows(instance.F[i : i + 1], tol)
        protected = False
        for base, r0 in zip(tops, base_rank):
            r1 = rank_with_margin(np.vstack([base, row]), tol)[0]
            if r1 > r0:
                protected = True
                break
        out.append(protected)
    return tuple(out)


def is_observable_classical(a, c, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Observability-matrix rank test: rank col{C, CA, ..., CA^(n-1)} == n.

    Kept independent of the eigenvalue criterion so it can serve as an
    oracle for the F = I equivalence.  Rows are normalized before the rank
    test because high powers of A spread row scales widely.
    """
    a = as_matrix(a, dtype=float)
    c = as_matrix(c, dtype=float)
    n = a.shape[0]
    if a.shape[0] != a.shape[1] or c.shape[1] != n:
        raise DimensionMismatch(f"incompatible shapes A={a.shape}, C={c.shape}")
    blocks = []
    m = c
    for _ in range(n):
        blocks.append(m)
        m = m @ a
    obsv = _normalized_rows(np.vstack(blocks), tol)
    return rank_with_margin(obsv, tol)[0] == n
