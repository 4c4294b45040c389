"""JSON/CSV interchange formats.

Task files look like::

    { "types": 2,
      "vertices": [ {"id": 0, "wcet": "7/2", "type": 0}, ... ],
      "edges": [ [0, 1], ... ],
      "platform": [2, 3] }

Rational weights serialize as the string "p/q"; integral values may be
plain numbers. Reports carry rationals in the same form and durations
in nanoseconds.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, TextIO

from .bounds import BoundReport
from .graph import Platform, TypedDag, Weight
from .simulator import ExecutionSequence


class ParseError(ValueError):
    pass


def parse_weight(value: Any) -> Weight:
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, bool):
            raise ValueError
        if isinstance(value, (int, float)):
            return Fraction(value)
    except (ValueError, ZeroDivisionError):
        pass
    raise ParseError(f"not a rational weight: {value!r}")


def format_weight(value: Weight):
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def task_to_json(dag: TypedDag, platform: Platform) -> dict:
    return {
        "types": platform.num_types,
        "vertices": [
            {"id": v, "wcet": format_weight(dag.wcets[v]), "type": dag.types[v]}
            for v in range(dag.num_vertices)
        ],
        "edges": sorted([u, v] for u, v in dag.edges),
        "platform": list(platform.core_counts),
    }


def task_from_json(data: dict) -> tuple[TypedDag, Platform]:
    try:
        raw_vertices = data["vertices"]
        raw_edges = data["edges"]
        raw_platform = data["platform"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"missing task field: {exc}") from exc
    if not isinstance(raw_vertices, list) or not isinstance(raw_edges, list):
        raise ParseError("vertices and edges must be lists")
    by_id: dict[int, tuple[Weight, int]] = {}
    for entry in raw_vertices:
        try:
            vid = int(entry["id"])
            by_id[vid] = (parse_weight(entry["wcet"]), int(entry["type"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad vertex entry {entry!r}") from exc
    n = len(by_id)
    if sorted(by_id) != list(range(n)):
        raise ParseError("vertex ids must be dense integers starting at 0")
    try:
        edges = frozenset((int(u), int(v)) for u, v in raw_edges)
        platform = Platform(tuple(int(m) for m in raw_platform))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad edge or platform entry: {exc}") from exc
    declared = data.get("types")
    if declared is not None and int(declared) != platform.num_types:
        raise ParseError("declared type count does not match platform length")
    dag = TypedDag(tuple(by_id[v][0] for v in range(n)),
                   tuple(by_id[v][1] for v in range(n)), edges)
    return dag, platform


def load_task(path: str) -> tuple[TypedDag, Platform]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read task file {path}: {exc}") from exc
    return task_from_json(data)


def dump_json(data: dict, fh: TextIO) -> None:
    """Canonical JSON emission: byte-identical for equal inputs."""
    json.dump(data, fh, indent=2, sort_keys=True)
    fh.write("\n")


def report_to_json(report: BoundReport) -> dict:
    out: dict[str, Any] = {
        "old_b": format_weight(report.old_b),
        "new_b_1": format_weight(report.new_b_1),
        "durations_ns": dict(report.durations_ns),
    }
    if report.new_b_2 is not None:
        out["new_b_2"] = format_weight(report.new_b_2)
        out["tuples_generated"] = report.tuples_generated
        out["tuples_retained_peak"] = report.tuples_retained_peak
    out["complete_path_count"] = (
        report.complete_path_count
        if report.complete_path_count is not None else "not counted")
    return out


def sequence_to_json(sequence: ExecutionSequence) -> dict:
    return {
        "vertices": [
            {
                "id": v,
                "start": format_weight(sequence.start[v]),
                "finish": format_weight(sequence.finish[v]),
                "core_type": sequence.core[v][0],
                "core_index": sequence.core[v][1],
            }
            for v in range(len(sequence.start))
        ],
        "response_time": format_weight(sequence.response_time),
    }


def sequence_to_csv(sequence: ExecutionSequence) -> str:
    """One line per executed interval, suitable for Gantt rendering."""
    lines = ["vertex,core_type,core_index,start,finish"]
    for v in range(len(sequence.start)):
        s, c = sequence.core[v]
        lines.append(f"{v},{s},{c},{float(sequence.start[v])},{float(sequence.finish[v])}")
    return "\n".join(lines) + "\n"
