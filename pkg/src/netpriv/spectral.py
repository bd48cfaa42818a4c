"""Spectrum computation: distinct-eigenvalue clustering and eigenbases.

Eigenvalues come from a dense general eigensolver and are then greedily
clustered (ascending magnitude, radius ``cluster_rel * ||A||``).  Each
cluster's eigenbasis is recomputed as the SVD null space of ``A - mean*I``
rather than taken from raw eigenvectors, which makes geometric multiplicity
detection robust when eigenvalues coincide or nearly coincide.  Complex
conjugate clusters of a real matrix are detected and cross-linked so that
downstream enumeration can process one representative per pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, MultiplicityBoundExceeded, NotDiagonalizable
from .numerics import DEFAULT_TOL, ToleranceConfig, as_matrix, null_space_basis

DEFAULT_MULTIPLICITY_CAP = 4


@dataclass(frozen=True)
class EigenSpace:
    """One distinct eigenvalue with its eigenbasis.

    value              cluster representative (mean of clustered eigenvalues)
    basis              n x k matrix with orthonormal columns spanning the
                       eigenvectors of ``value``
    multiplicity       k, the geometric multiplicity
    support            row indices where the basis has a nonzero entry
    conjugate_partner  index of the complex-conjugate eigenspace, if any
    """

    value: complex
    basis: np.ndarray
    multiplicity: int
    support: frozenset[int]
    conjugate_partner: int | None = None


@dataclass(frozen=True)
class Spectrum:
    n: int
    spaces: tuple[EigenSpace, ...]
    diagonalizable: bool

    @property
    def max_multiplicity(self) -> int:
        return max(s.multiplicity for s in self.spaces)


def _basis_support(basis: np.ndarray, tol: ToleranceConfig) -> frozenset[int]:
    row_mags = np.max(np.abs(basis), axis=1) if basis.shape[1] else np.zeros(basis.shape[0])
    peak = float(np.max(row_mags)) if row_mags.size else 0.0
    return frozenset(int(i) for i in np.flatnonzero(row_mags > tol.support_rel * peak))


def eigenbasis_support(space: EigenSpace, tol: ToleranceConfig = DEFAULT_TOL) -> frozenset[int]:
    """Indices of rows carrying the eigenbasis; for a simple eigenvalue this
    is the unique minimal deficiency-one blocking set."""
    return _basis_support(space.basis, tol)


def _cluster(eigvals: np.ndarray, radius: float) -> list[complex]:
    """Greedy clustering by ascending magnitude; returns cluster means."""
    order = np.lexsort((eigvals.imag, eigvals.real, np.abs(eigvals)))
    clusters: list[list[complex]] = []
    for lam in eigvals[order]:
        lam = complex(lam)
        best, best_d = None, None
        for idx, members in enumerate(clusters):
            d = abs(lam - sum(members) / len(members))
            if best_d is None or d < best_d:
                best, best_d = idx, d
        if best is not None and best_d <= radius:
            clusters[best].append(lam)
        else:
            clusters.append([lam])
    return [sum(members) / len(members) for members in clusters]


def compute_spectrum(
    a,
    tol: ToleranceConfig = DEFAULT_TOL,
    multiplicity_cap: int = DEFAULT_MULTIPLICITY_CAP,
    require_diagonalizable: bool = True,
) -> Spectrum:
    """Cluster the spectrum of a real square matrix and build eigenbases.

    Raises NotDiagonalizable when the eigenbasis widths do not sum to n
    (unless ``require_diagonalizable`` is False, in which case the flag is
    simply recorded), and MultiplicityBoundExceeded when some geometric
    multiplicity exceeds ``multiplicity_cap``.
    """
    a = as_matrix(a, dtype=float)
    n, cols = a.shape
    if n != cols:
        raise DimensionMismatch(f"state matrix must be square, got {n}x{cols}")

    scale = float(np.linalg.norm(a)) or 1.0
    radius = tol.cluster_rel * scale
    reps = _cluster(np.linalg.eigvals(a), radius)
    # snap near-real representatives so real eigenvalues stay on the real axis
    reps = [complex(r.real, 0.0) if abs(r.imag) <= radius else r for r in reps]

    spaces: list[EigenSpace] = []
    for lam in reps:
        shifted = a - lam * np.eye(n)
        basis = null_space_basis(shifted, tol)
        k = basis.shape[1]
        if k == 0:
            raise NotDiagonalizable(
                f"no eigenvector found at clustered eigenvalue {lam}; "
                "clustering and rank tolerances are inconsistent for this matrix"
            )
        spaces.append(EigenSpace(lam, basis, k, _basis_support(basis, tol)))

    # link complex-conjugate partners
    partner: dict[int, int] = {}
    for i, si in enumerate(spaces):
        if si.value.imag == 0 or i in partner:
            continue
        for j, sj in enumerate(spaces):
            if j != i and abs(si.value.conjugate() - sj.value) <= radius:
                partner[i], partner[j] = j, i
                break
    if partner:
        spaces = [
            EigenSpace(s.value, s.basis, s.multiplicity, s.support, partner.get(i))
            for i, s in enumerate(spaces)
        ]

    total = sum(s.multiplicity for s in spaces)
    diagonalizable = total == n
    if total > n:
        raise NotDiagonalizable(
            f"eigenbasis widths sum to {total} > n={n}; eigenvalue clusters overlap"
        )
    if not diagonalizable and require_diagonalizable:
        raise NotDiagonalizable(
            f"eigenvectors span only {total} of {n} dimensions"
        )
    spectrum = Spectrum(n=n, spaces=tuple(spaces), diagonalizable=diagonalizable)
    if spectrum.max_multiplicity > multiplicity_cap:
        raise MultiplicityBoundExceeded(
            f"geometric multiplicity {spectrum.max_multiplicity} exceeds cap {multiplicity_cap}"
        )
    return spectrum
