"""Parameter sweeps over randomly generated workloads.

A sweep varies one generator parameter across a list of values, runs a
number of random (task, platform) instances per value, and aggregates
acceptance ratios (bound <= period), normalized bound values (the
classical bound = 100%), analysis times and search statistics. Results
go to CSV/JSON files; figures are rendered alongside by ``plotting``.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .bounds import AnalysisOptions, ResourceLimit, analyze
from .generate import GenConfig, gen_instance
from .graph import PathExplosion, count_complete_paths

ALL_BOUNDS = ("old_b", "new_b_1", "new_b_2")
SWEEPABLE = ("U", "V", "pr", "S", "M")

WORKERS_ENV = "TYPEDSCHED_WORKERS"


def desk_config(seed: int = 0) -> GenConfig:
    """Shrunken default setting keeping the exact search tractable."""
    return GenConfig(vertex_range=(20, 60), type_count_range=(2, 5), seed=seed)


@dataclass(frozen=True)
class SweepSpec:
    swept_parameter: str  # one of SWEEPABLE
    values: tuple
    trials_per_point: int = 500
    base: GenConfig = field(default_factory=desk_config)
    bounds_enabled: tuple[str, ...] = ALL_BOUNDS
    tuple_budget: int = 2_000_000  # per-instance cap for the exact search
    path_count_limit: int = 1_000_000

    def __post_init__(self):
        if self.swept_parameter not in SWEEPABLE:
            raise ValueError(f"unknown sweep parameter {self.swept_parameter!r}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        for b in self.bounds_enabled:
            if b not in ALL_BOUNDS:
                raise ValueError(f"unknown bound {b!r}")


def _apply_parameter(base: GenConfig, parameter: str, value) -> GenConfig:
    if parameter == "U":
        return replace(base, utilization_range=(float(value), float(value)))
    if parameter == "V":
        return replace(base, vertex_range=(int(value), int(value)))
    if parameter == "pr":
        return replace(base, pr_range=(float(value), float(value)))
    if parameter == "S":
        return replace(base, type_count_range=(int(value), int(value)))
    if parameter == "M":
        return replace(base, cores_range=(int(value), int(value)))
    raise ValueError(parameter)


@dataclass
class SweepRow:
    parameter: str
    value: object
    trials: int
    timeouts: int
    acceptance: dict[str, float]
    normalized: dict[str, float]  # mean bound / old_b, percent
    mean_time_ns: dict[str, float]
    mean_tuples_generated: float | None
    mean_path_count: float | None


def _run_instance(args) -> dict:
    spec, config, seed = args
    rng = random.Random(seed)
    dag, platform = gen_instance(config, rng)
    want_b2 = "new_b_2" in spec.bounds_enabled
    options = AnalysisOptions(compute_new_b_2=want_b2,
                              max_retained=spec.tuple_budget)
    try:
        report = analyze(dag, platform, options)
    except ResourceLimit:
        return {"timeout": True}
    try:
        paths = count_complete_paths(dag, limit=spec.path_count_limit)
    except PathExplosion:
        paths = None
    out = {
        "timeout": False,
        "old_b": report.old_b,
        "new_b_1": report.new_b_1,
        "new_b_2": report.new_b_2,
        "tuples_generated": report.tuples_generated if want_b2 else None,
        "paths": paths,
        "durations_ns": report.durations_ns,
        "period": config.period,
    }
    return out


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_instances(spec: SweepSpec, jobs, workers: int | None):
    if workers is None:
        workers = _worker_count()
    if workers <= 1:
        return [_run_instance(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_instance, jobs, chunksize=4))


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """One SweepRow per swept value, reproducible from (spec, base.seed)."""
    rows = []
    for vi, value in enumerate(spec.values):
        config = _apply_parameter(spec.base, spec.swept_parameter, value)
        jobs = [(spec, config, spec.base.seed * 1_000_003 + vi * 7919 + t)
                for t in range(spec.trials_per_point)]
        results = _map_instances(spec, jobs, workers)
        ok = [r for r in results if not r["timeout"]]
        timeouts = len(results) - len(ok)
        acceptance: dict[str, float] = {}
        normalized: dict[str, float] = {}
        mean_time: dict[str, float] = {}
        for b in spec.bounds_enabled:
            vals = [r[b] for r in ok if r.get(b) is not None]
            if not vals:
                continue
            acceptance[b] = sum(
                1 for r in ok if r.get(b) is not None and r[b] <= r["period"]
            ) / len(vals)
            normalized[b] = float(
                sum(Fraction(r[b], r["old_b"]) for r in ok if r.get(b) is not None)
                / len(vals) * 100)
            times = [r["durations_ns"].get(b) for r in ok]
            times = [t for t in times if t is not None]
            if times:
                mean_time[b] = sum(times) / len(times)
        tuples = [r["tuples_generated"] for r in ok if r["tuples_generated"]]
        paths = [r["paths"] for r in ok if r["paths"] is not None]
        rows.append(SweepRow(
            parameter=spec.swept_parameter,
            value=value,
            trials=len(results),
            timeouts=timeouts,
            acceptance=acceptance,
            normalized=normalized,
            mean_time_ns=mean_time,
            mean_tuples_generated=sum(tuples) / len(tuples) if tuples else None,
            mean_path_count=sum(paths) / len(paths) if paths else None,
        ))
    return rows


def state_space_report(spec: SweepSpec, workers: int | None = None) -> list[dict]:
    """Per-instance complete-path count vs tuples generated by the exact
    search, on instances small enough to count paths."""
    rows: list[dict] = []
    skipped = 0
    for vi, value in enumerate(spec.values):
        config = _apply_parameter(spec.base, spec.swept_parameter, value)
        jobs = [(replace(spec, bounds_enabled=ALL_BOUNDS), config,
                 spec.base.seed * 1_000_003 + vi * 7919 + t)
                for t in range(spec.trials_per_point)]
        for r in _map_instances(spec, jobs, workers):
            if r["timeout"] or r["paths"] is None:
                skipped += 1
                continue
            rows.append({
                "value": value,
                "paths": r["paths"],
                "tuples": r["tuples_generated"],
                "ratio": r["tuples_generated"] / r["paths"] if r["paths"] else None,
            })
    if skipped:
        rows.append({"value": None, "paths": None, "tuples": None,
                     "ratio": None, "skipped": skipped})
    return rows


def write_sweep_csv(rows: list[SweepRow], path: str) -> None:
    fields = ["parameter", "value", "trials", "timeouts"]
    for b in ALL_BOUNDS:
        fields += [f"acceptance_{b}", f"normalized_{b}", f"mean_time_ns_{b}"]
    fields += ["mean_tuples_generated", "mean_path_count"]
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            record = {
                "parameter": row.parameter,
                "value": row.value,
                "trials": row.trials,
                "timeouts": row.timeouts,
                "mean_tuples_generated": row.mean_tuples_generated,
                "mean_path_count": row.mean_path_count,
            }
            for b in ALL_BOUNDS:
                record[f"acceptance_{b}"] = row.acceptance.get(b)
                record[f"normalized_{b}"] = row.normalized.get(b)
                record[f"mean_time_ns_{b}"] = row.mean_time_ns.get(b)
            writer.writerow(record)


def write_sweep_json(spec: SweepSpec, rows: list[SweepRow], path: str) -> None:
    data = {
        "spec": {
            "swept_parameter": spec.swept_parameter,
            "values": list(spec.values),
            "trials_per_point": spec.trials_per_point,
            "bounds_enabled": list(spec.bounds_enabled),
            "base": dataclasses.asdict(replace(spec.base, period=float(spec.base.period))),
        },
        "rows": [dataclasses.asdict(row) for row in rows],
    }
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
