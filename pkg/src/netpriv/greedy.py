"""Greedy solver for entry-wise functional privacy.

Each round evaluates, for every still-unprotected functional row, the
cheapest blocking set inside the currently accessible nodes
(:func:`netpriv.blocking.alg2_restricted`), then commits the cheapest row.
Rows that are already non-inferable cost nothing and are retired before any
blocking happens in a round.  The loop ends when no accessible nodes or no
unprotected rows remain; the final blocked set is everything outside the
remaining accessible set, re-certified entry-wise before returning.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocking import BlockingSolution, CandidateSet, alg2_restricted
from .errors import CertificationFailed, NotDiagonalizable
from .fobs import SystemInstance, is_entry_protected
from .numerics import DEFAULT_TOL, ToleranceConfig
from .spectral import Spectrum, compute_spectrum


@dataclass(frozen=True)
class GreedyStep:
    round_index: int
    t_before: frozenset[int]
    evaluations: tuple[tuple[int, CandidateSet], ...]
    chosen_row: int
    chosen: CandidateSet

    @property
    def t_after(self) -> frozenset[int]:
        return self.t_before - self.chosen.delta


@dataclass(frozen=True)
class GreedyTrace:
    steps: tuple[GreedyStep, ...]
    final_t: frozenset[int]
    blocked: frozenset[int]


def solve_problem2_greedy(
    instance: SystemInstance,
    spectrum: Spectrum | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
    *,
    debug_rank_path: bool = False,
) -> tuple[BlockingSolution, GreedyTrace]:
    """Greedy entry-wise blocking set with the full per-round trace."""
    if spectrum is None:
        spectrum = compute_spectrum(instance.A, tol)
    if not spectrum.diagonalizable:
        raise NotDiagonalizable("the solver requires a diagonalizable state matrix")
    n, r = instance.n, instance.r
    t = frozenset(range(n))
    rows = list(range(r))
    steps: list[GreedyStep] = []
    witnesses: list[complex] = []
    k = 0
    while t and rows:
        evals = {
            j: alg2_restricted(
                instance.A,
                instance.F[j : j + 1],
                t,
                spectrum,
                tol,
                debug_rank_path=debug_rank_path,
            )
            for j in rows
        }
        snapshot = tuple(sorted(evals.items()))
        # zero-cost rows first: already non-inferable at the current T
        for j in sorted(j for j in rows if not evals[j].delta):
            steps.append(GreedyStep(k, t, snapshot, j, evals[j]))
            rows.remove(j)
            k += 1
        if not rows:
            break
        j_star = min(rows, key=lambda j: (evals[j].cardinality, j))
        chosen = evals[j_star]
        steps.append(GreedyStep(k, t, snapshot, j_star, chosen))
        witnesses.append(spectrum.spaces[chosen.eigen_index].value)
        t = t - chosen.delta
        rows.remove(j_star)
        k += 1

    blocked = frozenset(range(n)) - t
    flags = is_entry_protected(instance, blocked, spectrum, tol)
    if not all(flags):
        raise CertificationFailed(
            f"greedy result {sorted(blocked)} leaves rows "
            f"{[i for i, ok in enumerate(flags) if not ok]} inferable"
        )
    solution = BlockingSolution(
        blocked=blocked,
        witness_eigenvalues=tuple(witnesses),
        all_optima=(blocked,),
    )
    return solution, GreedyTrace(tuple(steps), t, blocked)
