"""Command-line entry point.

Subcommands: analyze, simulate, generate, bench, sat-check, validate.
Exit codes: 0 schedulable (or nothing to decide), 2 unschedulable by the
tightest requested bound, 1 on any error. Human-readable output goes to
stderr; stdout carries only machine-readable JSON.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import bounds as bounds_mod
from . import experiments, serialize
from .bounds import AnalysisOptions, ResourceLimit, analyze
from .generate import (
    CnfInstance,
    GenConfig,
    gen_instance,
    parse_dimacs,
    random_cnf,
    sat_brute_force,
    sat_reduction,
)
from .graph import GraphError, PathExplosion, normalize, validate
from .serialize import ParseError, format_weight
from .simulator import check_work_conserving, random_scenario, simulate

BOUND_ALIASES = {"old": "old_b", "new1": "new_b_1", "new2": "new_b_2",
                 "old_b": "old_b", "new_b_1": "new_b_1", "new_b_2": "new_b_2"}


def _fmt(value: Fraction) -> str:
    return f"{format_weight(value)} ({float(value):.6f})"


def _parse_bounds(raw: str) -> tuple[str, ...]:
    out = []
    for token in raw.split(","):
        token = token.strip().lower()
        if token not in BOUND_ALIASES:
            raise argparse.ArgumentTypeError(f"unknown bound {token!r}")
        out.append(BOUND_ALIASES[token])
    return tuple(dict.fromkeys(out))


def cmd_analyze(args) -> int:
    dag, platform = serialize.load_task(args.task)
    dag = normalize(dag)
    options = AnalysisOptions(compute_new_b_2="new_b_2" in args.bounds,
                              strict_paper_pruning=args.strict_paper,
                              max_retained=args.tuple_limit)
    report = analyze(dag, platform, options)
    print("bound      value", file=sys.stderr)
    for name in args.bounds:
        value = getattr(report, name)
        if value is not None:
            print(f"{name:<10} {_fmt(value)}", file=sys.stderr)
    if report.new_b_2 is not None:
        print(f"tuples generated: {report.tuples_generated}, "
              f"retained peak: {report.tuples_retained_peak}", file=sys.stderr)
    payload = serialize.report_to_json(report)
    if "old_b" not in args.bounds:
        payload.pop("old_b", None)
    if "new_b_1" not in args.bounds:
        payload.pop("new_b_1", None)
    tightest = min(getattr(report, b) for b in args.bounds
                   if getattr(report, b) is not None)
    if args.deadline is not None:
        deadline = serialize.parse_weight(args.deadline)
        payload["deadline"] = format_weight(deadline)
        payload["schedulable"] = tightest <= deadline
        verdict = "schedulable" if tightest <= deadline else "NOT schedulable"
        print(f"verdict vs deadline {format_weight(deadline)}: {verdict}",
              file=sys.stderr)
    serialize.dump_json(payload, sys.stdout)
    if args.deadline is not None and not payload["schedulable"]:
        return 2
    return 0


def cmd_simulate(args) -> int:
    dag, platform = serialize.load_task(args.task)
    dag = normalize(dag)
    report = analyze(dag, platform, AnalysisOptions(max_retained=args.tuple_limit))
    rng = random.Random(args.seed)
    worst = None
    worst_rt = None
    for _ in range(args.runs):
        scenario = random_scenario(dag, rng)
        seq = simulate(dag, platform, scenario)
        violation = check_work_conserving(dag, platform, seq, scenario.actual)
        if violation is not None:
            print(f"internal error: {violation}", file=sys.stderr)
            return 1
        if worst_rt is None or seq.response_time > worst_rt:
            worst_rt = seq.response_time
            worst = seq
    assert worst is not None and worst_rt is not None
    safe = worst_rt <= report.new_b_2
    payload = {
        "runs": args.runs,
        "max_observed_response_time": format_weight(worst_rt),
        "bounds": serialize.report_to_json(report),
        "observed_within_new_b_2": safe,
    }
    print(f"max observed response time over {args.runs} runs: {_fmt(worst_rt)}",
          file=sys.stderr)
    print(f"new_b_2 bound: {_fmt(report.new_b_2)} -> "
          f"{'safe' if safe else 'VIOLATED'}", file=sys.stderr)
    if args.emit_worst:
        with open(args.emit_worst, "w") as fh:
            serialize.dump_json(serialize.sequence_to_json(worst), fh)
    serialize.dump_json(payload, sys.stdout)
    return 0 if safe else 1


def cmd_generate(args) -> int:
    config = GenConfig(
        vertex_range=(args.vertices[0], args.vertices[1]),
        pr_range=(args.pr[0], args.pr[1]),
        type_count_range=(args.types[0], args.types[1]),
        cores_range=(args.cores[0], args.cores[1]),
        utilization_range=(args.utilization[0], args.utilization[1]),
        seed=args.seed,
    )
    dag, platform = gen_instance(config)
    payload = serialize.task_to_json(dag, platform)
    if args.out:
        with open(args.out, "w") as fh:
            serialize.dump_json(payload, fh)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        serialize.dump_json(payload, sys.stdout)
    return 0


def cmd_bench(args) -> int:
    base = experiments.desk_config(seed=args.seed)
    spec = experiments.SweepSpec(
        swept_parameter=args.sweep,
        values=tuple(args.values),
        trials_per_point=args.trials,
        base=base,
        bounds_enabled=args.bounds,
        tuple_budget=args.tuple_limit,
    )
    rows = experiments.run_sweep(spec, workers=args.workers)
    prefix = f"{args.out_dir}/sweep_{args.sweep}"
    experiments.write_sweep_csv(rows, prefix + ".csv")
    experiments.write_sweep_json(spec, rows, prefix + ".json")
    written = [prefix + ".csv", prefix + ".json"]
    if not args.no_plots:
        from .plotting import plot_sweep

        written += plot_sweep(rows, prefix)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    for row in rows:
        print(f"{args.sweep}={row.value}: acceptance "
              + " ".join(f"{b}={row.acceptance.get(b)}" for b in args.bounds),
              file=sys.stderr)
    return 0


def cmd_sat_check(args) -> int:
    rng = random.Random(args.seed)
    agree = 0
    results = []
    for i in range(args.trials):
        if args.dimacs:
            with open(args.dimacs) as fh:
                cnf = parse_dimacs(fh.read())
        else:
            cnf = random_cnf(args.vars, args.clauses, rng)
        dag, platform, threshold = sat_reduction(cnf)
        dag = normalize(dag)
        bound = bounds_mod.new_b_2(dag, platform)
        satisfiable = sat_brute_force(cnf)
        ok = (bound > threshold) == satisfiable
        agree += ok
        results.append({"satisfiable": satisfiable,
                        "bound": format_weight(bound),
                        "threshold": format_weight(threshold),
                        "agree": ok})
        if args.dimacs:
            break
    total = len(results)
    print(f"{agree}/{total} iff-agreements", file=sys.stderr)
    serialize.dump_json({"trials": total, "agreements": agree,
                         "results": results}, sys.stdout)
    return 0 if agree == total else 1


def cmd_validate(args) -> int:
    dag, platform = serialize.load_task(args.task)
    validate(dag)
    for t in dag.types:
        if t >= platform.num_types:
            raise GraphError(f"vertex type {t} has no core count")
    print("ok", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="typedsched")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute WCRT bounds for a task file")
    p.add_argument("task")
    p.add_argument("--bounds", type=_parse_bounds,
                   default=("old_b", "new_b_1", "new_b_2"),
                   help="comma list of old,new1,new2")
    p.add_argument("--deadline", help="rational deadline for the verdict")
    p.add_argument("--strict-paper-mode", dest="strict_paper",
                   action="store_true",
                   help="disable reverse eviction in dominance pruning")
    p.add_argument("--tuple-limit", type=int,
                   default=bounds_mod.DEFAULT_TUPLE_LIMIT)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="random-scenario safety campaign")
    p.add_argument("task")
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-worst", help="write the worst sequence JSON here")
    p.add_argument("--tuple-limit", type=int,
                   default=bounds_mod.DEFAULT_TUPLE_LIMIT)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", help="generate a random task file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--vertices", type=int, nargs=2, default=(70, 100))
    p.add_argument("--types", type=int, nargs=2, default=(5, 10))
    p.add_argument("--cores", type=int, nargs=2, default=(2, 11))
    p.add_argument("--pr", type=float, nargs=2, default=(0.08, 0.1))
    p.add_argument("--utilization", type=float, nargs=2, default=(1.0, 3.0))
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run a parameter sweep")
    p.add_argument("--sweep", choices=experiments.SWEEPABLE, required=True)
    p.add_argument("--values", type=float, nargs="+", required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bounds", type=_parse_bounds,
                   default=("old_b", "new_b_1", "new_b_2"))
    p.add_argument("--out-dir", default=".")
    p.add_argument("--workers", type=int, default=None,
                   help=f"defaults to ${experiments.WORKERS_ENV} or 1")
    p.add_argument("--tuple-limit", type=int, default=2_000_000)
    p.add_argument("--no-plots", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sat-check",
                       help="3-SAT reduction self-test against a truth table")
    p.add_argument("--vars", type=int, default=4)
    p.add_argument("--clauses", type=int, default=6)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dimacs", help="check one DIMACS file instead")
    p.set_defaults(func=cmd_sat_check)

    p = sub.add_parser("validate", help="structural check of a task file")
    p.add_argument("task")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bench":
        # values for integer sweeps arrive as floats from argparse
        if args.sweep in ("V", "S", "M"):
            args.values = [int(v) for v in args.values]
    try:
        return args.func(args)
    except (ParseError, GraphError, ResourceLimit, PathExplosion, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
