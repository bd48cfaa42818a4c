"""Brute-force ground truth for both blocking problems on small instances.

Subsets are enumerated by increasing cardinality, lexicographic within a
level, and feasibility is always decided through the direct stacked-rank
evaluation; the witness shortcut the fast solver uses never runs here, so
the two code paths stay independent where it matters.
"""

from __future__ import annotations

from itertools import combinations

from .blocking import BlockingSolution
from .errors import CertificationFailed, NotDiagonalizable, TooLarge
from .fobs import (
    MeasurementSpec,
    SystemInstance,
    is_entry_protected,
    is_functionally_observable,
)
from .numerics import DEFAULT_TOL, ToleranceConfig
from .spectral import Spectrum, compute_spectrum

DEFAULT_MAX_N = 12


def _prepare(instance, spectrum, tol, max_n):
    if instance.n > max_n:
        raise TooLarge(f"brute force refused for n={instance.n} > {max_n}")
    if spectrum is None:
        spectrum = compute_spectrum(instance.A, tol)
    if not spectrum.diagonalizable:
        raise NotDiagonalizable("the oracle requires a diagonalizable state matrix")
    return spectrum


def brute_force_problem1(
    instance: SystemInstance,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    max_n: int = DEFAULT_MAX_N,
) -> BlockingSolution:
    """Smallest blocked set making the functional vector-wise non-inferable,
    plus every same-cardinality solution."""
    spectrum = _prepare(instance, spectrum, tol, max_n)
    n = instance.n
    for card in range(n + 1):
        hits = []
        first_violations: tuple[int, ...] = ()
        for combo in combinations(range(n), card):
            cert = is_functionally_observable(
                instance.A,
                MeasurementSpec.from_blocked(combo),
                instance.F,
                spectrum,
                tol,
            )
            if not cert.observable:
                hits.append(frozenset(combo))
                if not first_violations:
                    first_violations = cert.violations
        if hits:
            return BlockingSolution(
                blocked=hits[0],
                witness_eigenvalues=tuple(
                    spectrum.spaces[i].value for i in first_violations
                ),
                all_optima=tuple(hits),
            )
    raise CertificationFailed("blocking the full node set must always be feasible")


def brute_force_problem2(
    instance: SystemInstance,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    max_n: int = DEFAULT_MAX_N,
) -> BlockingSolution:
    """Smallest blocked set protecting every functional row individually."""
    spectrum = _prepare(instance, spectrum, tol, max_n)
    n = instance.n
    for card in range(n + 1):
        hits = [
            frozenset(combo)
            for combo in combinations(range(n), card)
            if all(is_entry_protected(instance, combo, spectrum, tol))
        ]
        if hits:
            return BlockingSolution(
                blocked=hits[0],
                witness_eigenvalues=(),
                all_optima=tuple(hits),
            )
    raise CertificationFailed("blocking the full node set must always be feasible")
