"""Command-line front end.

Verbs:
  analyze   solve the vector-wise (exact) or entry-wise (greedy) blocking
            problem for a system file and a privacy spec
  check     decide functional observability of an explicit (A, C, F)
  oracle    brute-force solve either problem (size-guarded)
  reduce    build a hardness-reduction instance from an integer matrix W

External formats are 1-based.  System files are either matrix JSON
``{"A": [[...]]}`` or an edge list with whitespace-separated lines
``i j w`` (setting the coupling from node i into node j) and optional
``selfdamp i w`` lines for diagonal entries.  JSON reports carry a
``format_version`` field and are byte-stable apart from the timing entry.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .blocking import BlockingSolution, solve_problem1, union_baseline
from .errors import (
    DimensionMismatch,
    EmptyCluster,
    IndexOutOfRange,
    MultiplicityBoundExceeded,
    NetprivError,
    NotDiagonalizable,
    ParseError,
    RankDeficient,
    TooLarge,
    ZeroFunctional,
)
from .fobs import (
    MeasurementSpec,
    SystemInstance,
    is_entry_protected,
    is_functionally_observable,
)
from .greedy import GreedyTrace, solve_problem2_greedy
from .hardness import build_reduction_instance, verify_reduction
from .numerics import ToleranceConfig, as_matrix
from .oracle import DEFAULT_MAX_N, brute_force_problem1, brute_force_problem2
from .spectral import DEFAULT_MULTIPLICITY_CAP, Spectrum, compute_spectrum

FORMAT_VERSION = 1
ENV_TOL_RANK = "NETPRIV_TOL_RANK"

_USER_ERRORS = (ParseError, IndexOutOfRange, EmptyCluster)
_INFEASIBLE_ERRORS = (
    NotDiagonalizable,
    ZeroFunctional,
    MultiplicityBoundExceeded,
    TooLarge,
    RankDeficient,
    DimensionMismatch,
)


@dataclass(frozen=True)
class AnalysisRequest:
    verb: str
    path: str
    privacy: str | None = None
    problem: str = "vector"
    input_format: str = "auto"
    blocked: str | None = None
    c_file: str | None = None
    tol_rank: float | None = None
    tol_cluster: float | None = None
    max_multiplicity: int = DEFAULT_MULTIPLICITY_CAP
    oracle: bool = False
    oracle_max_n: int = DEFAULT_MAX_N
    output_format: str = "text"
    debug_rank_path: bool = False
    verify: bool = False


# ---------------------------------------------------------------------------
# input parsing


def _load_json(path: str) -> dict:
    try:
        payload = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(f"{path}: expected a JSON object at top level")
    return payload


def _matrix_from_rows(rows, path: str, key: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{path}: '{key}' must be a non-empty list of rows")
    width = len(rows[0])
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ParseError(f"{path}: row {i} of '{key}' has {len(row)} entries, expected {width}")
    try:
        return as_matrix(rows)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path}: bad '{key}' entries: {exc}") from exc


def _parse_edge_list(path: str) -> tuple[np.ndarray, tuple[tuple[int, int], ...]]:
    entries: dict[tuple[int, int], float] = {}
    edges: list[tuple[int, int]] = []
    max_index = 0

    def index(token: str, lineno: int) -> int:
        try:
            i = int(token)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: node index '{token}' is not an integer") from None
        if i < 1:
            raise ParseError(f"{path}:{lineno}: node indices are 1-based, got {i}")
        return i

    def weight(token: str, lineno: int) -> float:
        try:
            w = float(token)
        except ValueError:
            raise ParseError(f"{path}:{lineno}: weight '{token}' is not a number") from None
        if not np.isfinite(w):
            raise ParseError(f"{path}:{lineno}: weight must be finite, got {token}")
        return w

    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "selfdamp":
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'selfdamp i w'")
            i = index(parts[1], lineno)
            entries[(i, i)] = weight(parts[2], lineno)
            max_index = max(max_index, i)
        else:
            if len(parts) != 3:
                raise ParseError(f"{path}:{lineno}: expected 'i j w'")
            i, j = index(parts[0], lineno), index(parts[1], lineno)
            # a line (i, j, w) is the coupling from node i into node j
            entries[(j, i)] = weight(parts[2], lineno)
            edges.append((i - 1, j - 1))
            max_index = max(max_index, i, j)

    if max_index == 0:
        raise ParseError(f"{path}: edge list defines no nodes")
    a = np.zeros((max_index, max_index))
    for (row, col), w in entries.items():
        a[row - 1, col - 1] = w
    return a, tuple(edges)


def parse_system(path: str, fmt: str = "auto") -> SystemInstance:
    """Read a system matrix from a file.

    The returned instance carries the full-state functional (F = I); callers
    replace it once the privacy spec is known.
    """
    if fmt == "auto":
        try:
            head = Path(path).read_text().lstrip()[:1]
        except OSError:
            raise
        fmt = "matrix" if head == "{" else "edges"
    if fmt == "matrix":
        payload = _load_json(path)
        if "A" not in payload:
            raise ParseError(f"{path}: missing key 'A'")
        a = _matrix_from_rows(payload["A"], path, "A")
        if a.shape[0] != a.shape[1]:
            raise ParseError(f"{path}: 'A' must be square, got {a.shape[0]}x{a.shape[1]}")
        labels = payload.get("labels")
        if labels is not None:
            if not isinstance(labels, list) or len(labels) != a.shape[0]:
                raise ParseError(f"{path}: 'labels' must list one name per node")
            labels = tuple(str(x) for x in labels)
        return SystemInstance(a, np.eye(a.shape[0]), node_labels=labels)
    if fmt == "edges":
        a, edges = _parse_edge_list(path)
        return SystemInstance(a, np.eye(a.shape[0]), edges=edges)
    raise ParseError(f"unknown input format '{fmt}'")


def build_privacy(spec: str, n: int) -> np.ndarray:
    """Build the privacy functional matrix F from a preset string.

    Presets: ``full``, ``average``, ``targets=i1,i2,...``,
    ``clusters=[i,j;k,l]`` and ``file=PATH`` (JSON ``{"F": [[...]]}``).
    Indices are 1-based.
    """

    def check_index(i: int) -> int:
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"node index {i} outside 1..{n}")
        return i - 1

    def parse_indices(body: str) -> list[int]:
        try:
            return [check_index(int(tok)) for tok in body.split(",") if tok.strip()]
        except ValueError:
            raise ParseError(f"bad index list '{body}'") from None

    if spec == "full":
        return np.eye(n)
    if spec == "average":
        return np.full((1, n), 1.0 / n)
    if spec.startswith("targets="):
        idx = parse_indices(spec[len("targets="):])
        if not idx:
            raise ParseError("targets= needs at least one index")
        return np.eye(n)[idx]
    if spec.startswith("clusters="):
        body = spec[len("clusters="):].strip()
        if body.startswith("[") and body.endswith("]"):
            body = body[1:-1]
        rows = []
        for part in body.split(";"):
            members = parse_indices(part)
            if not members:
                raise EmptyCluster(f"empty cluster in '{spec}'")
            row = np.zeros(n)
            row[members] = 1.0 / len(members)
            rows.append(row)
        return np.vstack(rows)
    if spec.startswith("file="):
        path = spec[len("file="):]
        payload = _load_json(path)
        if "F" not in payload:
            raise ParseError(f"{path}: missing key 'F'")
        f = _matrix_from_rows(payload["F"], path, "F")
        if f.shape[1] != n:
            raise ParseError(f"{path}: 'F' has {f.shape[1]} columns, expected {n}")
        return f
    raise ParseError(f"unknown privacy spec '{spec}'")


def _parse_blocked(spec: str, n: int) -> frozenset[int]:
    out = set()
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        try:
            i = int(tok)
        except ValueError:
            raise ParseError(f"bad blocked index '{tok}'") from None
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"blocked index {i} outside 1..{n}")
        out.add(i - 1)
    return frozenset(out)


# ---------------------------------------------------------------------------
# report assembly (all external indices 1-based)


def _oneb(indices) -> list[int]:
    return sorted(int(i) + 1 for i in indices)


def _cnum(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _spectrum_summary(spectrum: Spectrum) -> list[dict]:
    return [
        {
            "eigenvalue": _cnum(s.value),
            "multiplicity": s.multiplicity,
            "support": _oneb(s.support),
        }
        for s in spectrum.spaces
    ]


def _solution_summary(sol: BlockingSolution) -> dict:
    return {
        "blocked": _oneb(sol.blocked),
        "cardinality": sol.cardinality,
        "witness_eigenvalues": [_cnum(z) for z in sol.witness_eigenvalues],
        "all_optima": [_oneb(s) for s in sol.all_optima],
        "sentinel_used": sol.sentinel_used,
    }


def _certificate_summary(instance: SystemInstance, blocked, spectrum, tol) -> dict:
    cert = is_functionally_observable(
        instance.A, MeasurementSpec.from_blocked(blocked), instance.F, spectrum, tol
    )
    return {
        "observable": cert.observable,
        "eigenvalue_ranks": [
            {
                "eigenvalue": _cnum(p.eigenvalue),
                "rank_with_functional": p.rank_with_functional,
                "rank_without_functional": p.rank_without_functional,
                "violates": p.violates,
                "margin_with": list(p.margin_with),
                "margin_without": list(p.margin_without),
            }
            for p in cert.pairs
        ],
    }


def _trace_summary(trace: GreedyTrace) -> dict:
    return {
        "steps": [
            {
                "round": step.round_index,
                "accessible_before": _oneb(step.t_before),
                "evaluations": [
                    {
                        "row": j + 1,
                        "delta": _oneb(c.delta),
                        "cardinality": c.cardinality,
                        "eigen_index": c.eigen_index,
                    }
                    for j, c in step.evaluations
                ],
                "chosen_row": step.chosen_row + 1,
                "chosen_delta": _oneb(step.chosen.delta),
                "accessible_after": _oneb(step.t_after),
            }
            for step in trace.steps
        ],
        "final_accessible": _oneb(trace.final_t),
    }


# ---------------------------------------------------------------------------
# verbs


def _tolerances(req: AnalysisRequest) -> ToleranceConfig:
    rank_rel = req.tol_rank
    if rank_rel is None:
        env = os.environ.get(ENV_TOL_RANK)
        if env is not None:
            try:
                rank_rel = float(env)
            except ValueError:
                raise ParseError(f"{ENV_TOL_RANK}='{env}' is not a number") from None
    kwargs = {}
    if rank_rel is not None:
        kwargs["rank_rel"] = rank_rel
    if req.tol_cluster is not None:
        kwargs["cluster_rel"] = req.tol_cluster
    try:
        return ToleranceConfig(**kwargs)
    except ValueError as exc:
        raise ParseError(f"bad tolerance: {exc}") from None


def _analysis_inputs(req: AnalysisRequest, tol: ToleranceConfig):
    system = parse_system(req.path, req.input_format)
    n = system.n
    f = build_privacy(req.privacy or "full", n)
    instance = replace(system, F=f)
    spectrum = compute_spectrum(instance.A, tol, multiplicity_cap=req.max_multiplicity)
    echo = {
        "system": req.path,
        "n": n,
        "privacy": req.privacy or "full",
        "functional_rows": instance.r,
        "problem": req.problem,
        **({"labels": list(instance.node_labels)} if instance.node_labels else {}),
        "tolerances": {
            "rank_rel": tol.rank_rel,
            "rank_abs": tol.rank_abs,
            "cluster_rel": tol.cluster_rel,
            "support_rel": tol.support_rel,
        },
    }
    return instance, spectrum, echo


def _run_analyze(req: AnalysisRequest, tol: ToleranceConfig) -> dict:
    instance, spectrum, echo = _analysis_inputs(req, tol)
    report: dict = {
        "format_version": FORMAT_VERSION,
        "verb": "analyze",
        "inputs": echo,
        "spectrum": _spectrum_summary(spectrum),
    }
    if req.problem == "vector":
        sol = solve_problem1(
            instance, spectrum, tol, debug_rank_path=req.debug_rank_path
        )
        report["solution"] = _solution_summary(sol)
    else:
        sol, trace = solve_problem2_greedy(
            instance, spectrum, tol, debug_rank_path=req.debug_rank_path
        )
        report["solution"] = _solution_summary(sol)
        report["greedy_trace"] = _trace_summary(trace)
        report["entry_protected"] = list(
            is_entry_protected(instance, sol.blocked, spectrum, tol)
        )
        baseline = union_baseline(instance, spectrum, tol)
        report["union_baseline"] = {
            "blocked": _oneb(baseline),
            "cardinality": len(baseline),
        }
    report["certificates"] = _certificate_summary(instance, sol.blocked, spectrum, tol)
    if req.oracle:
        brute = (
            brute_force_problem1(instance, spectrum, tol, req.oracle_max_n)
            if req.problem == "vector"
            else brute_force_problem2(instance, spectrum, tol, req.oracle_max_n)
        )
        report["oracle"] = {
            "cardinality": brute.cardinality,
            "all_optima": [_oneb(s) for s in brute.all_optima],
            "gap": sol.cardinality - brute.cardinality,
        }
    return report


def _run_oracle(req: AnalysisRequest, tol: ToleranceConfig) -> dict:
    instance, spectrum, echo = _analysis_inputs(req, tol)
    brute = (
        brute_force_problem1(instance, spectrum, tol, req.oracle_max_n)
        if req.problem == "vector"
        else brute_force_problem2(instance, spectrum, tol, req.oracle_max_n)
    )
    report = {
        "format_version": FORMAT_VERSION,
        "verb": "oracle",
        "inputs": echo,
        "spectrum": _spectrum_summary(spectrum),
        "solution": _solution_summary(brute),
    }
    if req.problem == "vector":
        report["certificates"] = _certificate_summary(
            instance, brute.blocked, spectrum, tol
        )
    else:
        report["entry_protected"] = list(
            is_entry_protected(instance, brute.blocked, spectrum, tol)
        )
    return report


def _run_check(req: AnalysisRequest, tol: ToleranceConfig) -> dict:
    instance, spectrum, echo = _analysis_inputs(req, tol)
    n = instance.n
    if req.c_file and req.blocked:
        raise ParseError("give either --blocked or --c-file, not both")
    if req.c_file:
        payload = _load_json(req.c_file)
        if "C" not in payload:
            raise ParseError(f"{req.c_file}: missing key 'C'")
        c = _matrix_from_rows(payload["C"], req.c_file, "C")
        measurement = MeasurementSpec.from_matrix(c)
        echo["measurement"] = {"c_file": req.c_file}
    else:
        blocked = _parse_blocked(req.blocked, n) if req.blocked else frozenset()
        measurement = MeasurementSpec.from_blocked(blocked)
        echo["measurement"] = {"blocked": _oneb(blocked)}
    cert = is_functionally_observable(instance.A, measurement, instance.F, spectrum, tol)
    return {
        "format_version": FORMAT_VERSION,
        "verb": "check",
        "inputs": echo,
        "spectrum": _spectrum_summary(spectrum),
        "observable": cert.observable,
        "protected": not cert.observable,
        "eigenvalue_ranks": [
            {
                "eigenvalue": _cnum(p.eigenvalue),
                "rank_with_functional": p.rank_with_functional,
                "rank_without_functional": p.rank_without_functional,
                "violates": p.violates,
            }
            for p in cert.pairs
        ],
    }


def _run_reduce(req: AnalysisRequest, tol: ToleranceConfig) -> dict:
    payload = _load_json(req.path)
    if "W" not in payload:
        raise ParseError(f"{req.path}: missing key 'W'")
    rows = payload["W"]
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{req.path}: 'W' must be a non-empty list of rows")
    try:
        inst = build_reduction_instance(rows)
    except ValueError as exc:
        raise ParseError(f"{req.path}: {exc}") from exc
    report = {
        "format_version": FORMAT_VERSION,
        "verb": "reduce",
        "inputs": {"w_file": req.path, "n": inst.n, "k": inst.k},
        "instance": {
            "W": [list(r) for r in inst.W],
            "W_perp": [list(r) for r in inst.W_perp],
            "beta_max": inst.beta_max,
            "beta_perp_max": inst.beta_perp_max,
            "eta_star": inst.eta_star,
            "alpha": inst.alpha,
            "gamma": list(inst.gamma),
            "P": [list(r) for r in inst.P],
            "A_exact": [[str(x) for x in row] for row in inst.A],
            "A_float": [[float(x) for x in row] for row in inst.A],
            "f": list(inst.f),
        },
    }
    if req.verify:
        ver = verify_reduction(inst.W, tol, req.oracle_max_n)
        report["verification"] = {
            "degenerate": ver.degenerate,
            "blocking_optimum": ver.blocking_optimum,
            "threshold": ver.threshold,
            "agreement": ver.agreement,
            "optima": [_oneb(s) for s in ver.solution.all_optima],
        }
    return report


def run(request: AnalysisRequest) -> tuple[dict, int]:
    """Execute one request; returns the report dict and the exit code."""
    tol = _tolerances(request)
    t0 = time.perf_counter()
    if request.verb == "analyze":
        report = _run_analyze(request, tol)
    elif request.verb == "oracle":
        report = _run_oracle(request, tol)
    elif request.verb == "check":
        report = _run_check(request, tol)
    elif request.verb == "reduce":
        report = _run_reduce(request, tol)
    else:
        raise ParseError(f"unknown verb '{request.verb}'")
    report["timing_s"] = time.perf_counter() - t0
    return report, 0


# ---------------------------------------------------------------------------
# rendering


def _render_text(report: dict, lines: list[str], indent: int = 0):
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            _render_text(value, lines, indent + 1)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(f"{pad}  -")
                _render_text(item, lines, indent + 2)
        else:
            lines.append(f"{pad}{key}: {value}")


def render_report(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    lines: list[str] = []
    _render_text(report, lines)
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netpriv",
        description="Minimum node blocking for functional privacy of linear networks.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text",
                        help="output format (default: text)")
    common.add_argument("--tol-rank", type=float, default=None,
                        help=f"relative rank tolerance (default 1e-9; env {ENV_TOL_RANK})")
    common.add_argument("--tol-cluster", type=float, default=None,
                        help="relative eigenvalue clustering radius (default 1e-7)")
    common.add_argument("--max-multiplicity", type=int, default=DEFAULT_MULTIPLICITY_CAP,
                        help="cap on eigenvalue geometric multiplicity (default 4)")
    common.add_argument("--oracle-max-n", type=int, default=DEFAULT_MAX_N,
                        help="size guard for brute-force search (default 12)")

    system_args = argparse.ArgumentParser(add_help=False)
    system_args.add_argument("path", help="system file (matrix JSON or edge list)")
    system_args.add_argument("--input-format", choices=("auto", "matrix", "edges"),
                             default="auto")
    system_args.add_argument("--privacy", default="full",
                             help="full | average | targets=i,j | clusters=[i,j;k] | file=PATH")

    p = sub.add_parser("analyze", parents=[common, system_args],
                       help="solve a blocking problem")
    p.add_argument("--problem", choices=("vector", "entry"), default="vector",
                   help="vector-wise exact or entry-wise greedy protection")
    p.add_argument("--oracle", action="store_true",
                   help="also run the brute-force oracle and report the gap")
    p.add_argument("--debug-rank-path", action="store_true",
                   help="cross-check witness feasibility against direct rank evaluation")

    p = sub.add_parser("check", parents=[common, system_args],
                       help="decide functional observability of (A, C, F)")
    p.add_argument("--blocked", default=None,
                   help="comma-separated 1-based blocked nodes (C = masked identity)")
    p.add_argument("--c-file", default=None, help="explicit C from JSON {\"C\": [[...]]}")

    p = sub.add_parser("oracle", parents=[common, system_args],
                       help="brute-force solve a blocking problem")
    p.add_argument("--problem", choices=("vector", "entry"), default="vector")

    p = sub.add_parser("reduce", parents=[common],
                       help="build a hardness instance from an integer matrix W")
    p.add_argument("path", help="JSON file {\"W\": [[...]]}")
    p.add_argument("--verify", action="store_true",
                   help="brute-force the constructed instance and check the equivalence")
    return parser


def _request_from_args(args: argparse.Namespace) -> AnalysisRequest:
    return AnalysisRequest(
        verb=args.verb,
        path=args.path,
        privacy=getattr(args, "privacy", None),
        problem=getattr(args, "problem", "vector"),
        input_format=getattr(args, "input_format", "auto"),
        blocked=getattr(args, "blocked", None),
        c_file=getattr(args, "c_file", None),
        tol_rank=args.tol_rank,
        tol_cluster=args.tol_cluster,
        max_multiplicity=args.max_multiplicity,
        oracle=getattr(args, "oracle", False),
        oracle_max_n=args.oracle_max_n,
        output_format=args.format,
        debug_rank_path=getattr(args, "debug_rank_path", False),
        verify=getattr(args, "verify", False),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    request = _request_from_args(args)
    try:
        report, code = run(request)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _INFEASIBLE_ERRORS as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 2
    except NetprivError as exc:
        print(f"error: {exc.__class__.__name__}: {exc}", file=sys.stderr)
        return 2
    print(render_report(report, request.output_format))
    return code


if __name__ == "__main__":
    sys.exit(main())
