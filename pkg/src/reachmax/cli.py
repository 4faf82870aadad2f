"""Command-line front end: solve instance files, run benchmark batches, profile sequences."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .benchgen import BenchSpec, ObjectiveKind, SystemKind, run_bench, vertex_count_of
from .errors import InvalidInstanceFile, ReachmaxError
from .geometry import Box, Polytope, VRep
from .seqlab import FiniteC0Sequence, NoRank, rank_profile
from .solver import ProblemInstance, SolveReport, SolveStatus, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


def _parse_initial_set(node) -> Polytope:
    if not isinstance(node, dict) or "type" not in node:
        raise InvalidInstanceFile('initial_set must be an object with a "type" key')
    kind = node["type"]
    try:
        if kind == "box":
            return Box(np.asarray(node["lower"], dtype=float), np.asarray(node["upper"], dtype=float))
        if kind == "vertices":
            return VRep(np.asarray(node["points"], dtype=float))
    except KeyError as exc:
        raise InvalidInstanceFile(f"initial_set is missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InvalidInstanceFile(f"invalid initial_set: {exc}") from exc
    raise InvalidInstanceFile(f"unknown initial_set type {kind!r}")


def load_instance(path: str, n_override: int | None = None) -> ProblemInstance:
    """Parse a JSON instance file into a ProblemInstance."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInstanceFile(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstanceFile(
            f"malformed JSON in {path}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc
    if not isinstance(doc, dict):
        raise InvalidInstanceFile("instance file must contain a JSON object")
    for key in ("A", "Q", "initial_set"):
        if key not in doc:
            raise InvalidInstanceFile(f'missing required key "{key}"')
    try:
        A = np.asarray(doc["A"], dtype=float)
        Q = np.asarray(doc["Q"], dtype=float)
        if A.ndim != 2:
            raise InvalidInstanceFile("A must be a rectangular array of arrays")
        d = A.shape[0]
        b = np.asarray(doc.get("b", np.zeros(d)), dtype=float)
        q = np.asarray(doc.get("q", np.zeros(d)), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInstanceFile(f"non-numeric or ragged array: {exc}") from exc
    xin = _parse_initial_set(doc["initial_set"])
    n = n_override if n_override is not None else doc.get("N", 100)
    try:
        return ProblemInstance(A=A, b=b, Qmat=Q, qvec=q, Xin=xin, N=n)
    except ValueError as exc:
        raise InvalidInstanceFile(str(exc)) from exc


def report_to_dict(report: SolveReport, n_cap: int) -> dict:
    return {
        "status": report.status.value,
        "nu_opt": report.nu_opt,
        "x_opt": None if report.x_opt is None else [float(v) for v in report.x_opt],
        "k_opt": report.k_opt,
        "k_pos": report.k_pos,
        "K_trace": [[int(k), int(K)] for k, K in report.K_trace],
        "iterations": report.iterations,
        "N": n_cap,
    }


def _print_report_pretty(report: SolveReport, n_cap: int) -> None:
    print(f"status      {report.status.value}")
    if report.status is SolveStatus.FAILED:
        print(f"N           {n_cap}")
        print(f"iterations  {report.iterations}")
        return
    print(f"nu_opt      {report.nu_opt!r}")
    print(f"k_opt       {report.k_opt}")
    print(f"x_opt       {None if report.x_opt is None else [float(v) for v in report.x_opt]}")
    print(f"k_pos       {report.k_pos}")
    print(f"K_trace     {report.K_trace}")
    print(f"iterations  {report.iterations}")


def cmd_solve(args) -> int:
    try:
        inst = load_instance(args.path, args.n)
        report = solve(inst, qp_gap_tol=args.tol_qp)
    except ReachmaxError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        print(json.dumps(report_to_dict(report, inst.N)))
    else:
        _print_report_pretty(report, inst.N)
    return EXIT_FAILED if report.status is SolveStatus.FAILED else EXIT_OK


def _parse_set_flag(text: str) -> tuple[str, int | None]:
    if text == "box":
        return "box", None
    if text.startswith("vertices:"):
        try:
            count = int(text.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"invalid vertex count in {text!r}")
        return "vertices", count
    raise ValueError(f'--set must be "box" or "vertices:<count>", got {text!r}')


def _rank_json(rank) -> int | str:
    return rank.value if isinstance(rank, NoRank) else int(rank)


def cmd_bench(args) -> int:
    try:
        set_kind, count = _parse_set_flag(args.set)
        spec = BenchSpec(
            dim=args.dim,
            system_kind=SystemKind(args.kind),
            objective_kind=ObjectiveKind(args.objective),
            set_kind=set_kind,
            vertex_count=count,
            instance_count=args.count,
            seed=args.seed,
            N=args.n,
        )
    except ValueError as exc:
        print(f"InvalidBenchSpec: {exc}", file=sys.stderr)
        return EXIT_ERROR

    stats, records = run_bench(spec)

    agg_header = [
        "obj_type", "dim", "vertex_count", "status_c_k_f",
        "avg_time_s", "avg_mem_mib", "avg_k_pos", "max_k_pos",
        "avg_iter", "max_iter", "avg_gap", "max_gap", "errors",
    ]
    agg_row = [
        spec.objective_kind.name,
        spec.dim,
        vertex_count_of(spec),
        f"{stats.count_c}/{stats.count_k}/{stats.count_f}",
        f"{stats.avg_time_s:.6f}",
        "" if stats.avg_mem_mib is None else f"{stats.avg_mem_mib:.3f}",
        "" if stats.avg_k_pos is None else f"{stats.avg_k_pos:.2f}",
        "" if stats.max_k_pos is None else stats.max_k_pos,
        "" if stats.avg_iter is None else f"{stats.avg_iter:.2f}",
        "" if stats.max_iter is None else stats.max_iter,
        "" if stats.avg_gap is None else f"{stats.avg_gap:.2f}",
        "" if stats.max_gap is None else stats.max_gap,
        stats.count_error,
    ]

    out = Path(args.out)
    per_instance = out.with_name(out.stem + ".instances" + (out.suffix or ".csv"))
    with out.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(agg_header)
        w.writerow(agg_row)
    with per_instance.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "status", "nu_opt", "k_opt", "k_pos", "K_init", "K_final", "iterations", "time_s"])
        for r in records:
            w.writerow([
                r.index,
                r.status,
                "" if r.nu_opt is None else repr(r.nu_opt),
                "" if r.k_opt is None else r.k_opt,
                "" if r.k_pos is None else r.k_pos,
                "" if r.K_init is None else r.K_init,
                "" if r.K_final is None else r.K_final,
                "" if r.iterations is None else r.iterations,
                f"{r.time_s:.6f}",
            ])
    print(",".join(str(v) for v in agg_row))
    return EXIT_OK


def cmd_analyze_seq(args) -> int:
    try:
        doc = json.loads(Path(args.path).read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"InvalidInstanceFile: cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except json.JSONDecodeError as exc:
        print(
            f"InvalidInstanceFile: malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}",
            file=sys.stderr,
        )
        return EXIT_ERROR
    if not isinstance(doc, list) or not doc:
        print("InvalidInstanceFile: expected a nonempty JSON array of numbers", file=sys.stderr)
        return EXIT_ERROR
    try:
        seq = FiniteC0Sequence(np.asarray(doc, dtype=float))
    except (TypeError, ValueError) as exc:
        print(f"InvalidInstanceFile: {exc}", file=sys.stderr)
        return EXIT_ERROR
    profile = rank_profile(seq)
    print(json.dumps({
        "n": len(seq),
        "k_geq": _rank_json(profile.k_geq),
        "k_gt": _rank_json(profile.k_gt),
        "K_geq": _rank_json(profile.K_geq),
        "K_gt": _rank_json(profile.K_gt),
        "sup_value": profile.sup_value,
        "argmax_set": sorted(profile.argmax_set),
    }))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reachmax")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a JSON instance file")
    p_solve.add_argument("path")
    group = p_solve.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="machine-readable single-line output")
    group.add_argument("--pretty", action="store_true", help="human-readable output (default)")
    p_solve.add_argument("--n", type=int, default=None, help="override the positivity-search cap")
    p_solve.add_argument("--tol-qp", type=float, default=1e-10, dest="tol_qp",
                         help="duality-measure target of the concave QP solver")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run a randomized benchmark batch")
    p_bench.add_argument("--dim", type=int, required=True)
    p_bench.add_argument("--kind", choices=[k.value for k in SystemKind], required=True)
    p_bench.add_argument("--objective", choices=[k.value for k in ObjectiveKind], required=True)
    p_bench.add_argument("--set", default="box", help='"box" or "vertices:<count>"')
    p_bench.add_argument("--count", type=int, default=100)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--n", type=int, default=100, help="positivity-search cap")
    p_bench.add_argument("--out", required=True, help="aggregate CSV path")
    p_bench.set_defaults(func=cmd_bench)

    p_seq = sub.add_parser("analyze-seq", help="rank profile of a JSON array of reals")
    p_seq.add_argument("path")
    p_seq.set_defaults(func=cmd_analyze_seq)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
