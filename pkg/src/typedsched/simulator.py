"""Work-conserving list-scheduling simulator for typed DAG tasks.

Executes one task non-preemptively on a platform of typed cores: at
every event instant, finishes are processed first, then eligible
vertices are assigned to free cores of their type in tie-break order.
Execution times come from a scenario and may be shorter than the WCET,
which is exactly what makes timing anomalies possible.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Platform, TypedDag, Weight, topological_order

#: Denominator of the discretization grid for randomly drawn execution
#: times: actual = wcet * k / GRID, k in 1..GRID. Keeps arithmetic exact.
GRID = 64


@dataclass(frozen=True)
class ExecutionScenario:
    """Concrete per-vertex execution times plus the tie-break policy."""

    actual: tuple[Weight, ...]
    tie_break: str = "index"  # "index" or "random"
    seed: int = 0

    def check(self, dag: TypedDag) -> None:
        if len(self.actual) != dag.num_vertices:
            raise ValueError("scenario length does not match vertex count")
        for v, (a, c) in enumerate(zip(self.actual, dag.wcets)):
            if a < 0 or a > c:
                raise ValueError(f"actual time of vertex {v} outside (0, wcet]")
            if a == 0 and c != 0:
                raise ValueError(f"actual time of vertex {v} must be positive")
        if self.tie_break not in ("index", "random"):
            raise ValueError(f"unknown tie-break policy {self.tie_break!r}")


def full_wcet_scenario(dag: TypedDag, tie_break: str = "index",
                       seed: int = 0) -> ExecutionScenario:
    return ExecutionScenario(tuple(dag.wcets), tie_break, seed)


def random_scenario(dag: TypedDag, rng: random.Random,
                    tie_break: str = "random") -> ExecutionScenario:
    """Draw actual times uniformly on the grid c(v)*k/GRID, k in 1..GRID."""
    actual = tuple(
        c * Fraction(rng.randint(1, GRID), GRID) if c > 0 else Fraction(0)
        for c in dag.wcets)
    return ExecutionScenario(actual, tie_break, rng.randrange(2**31))


@dataclass(frozen=True)
class ExecutionSequence:
    """A simulated schedule: per-vertex start/finish and core assignment."""

    start: tuple[Weight, ...]
    finish: tuple[Weight, ...]
    core: tuple[tuple[int, int], ...]  # (type, core index within type)
    response_time: Weight


@dataclass(frozen=True)
class Violation:
    time: Weight
    vertex: int
    reason: str


def simulate(dag: TypedDag, platform: Platform,
             scenario: ExecutionScenario) -> ExecutionSequence:
    """Run the event-driven list schedule; deterministic per scenario."""
    scenario.check(dag)
    n = dag.num_vertices
    if scenario.tie_break == "random":
        priority = list(range(n))
        random.Random(scenario.seed).shuffle(priority)
        rank = {v: i for i, v in enumerate(priority)}
    else:
        rank = {v: v for v in range(n)}

    indeg = [len(dag.predecessors[v]) for v in range(n)]
    eligible: list[tuple[int, int]] = []  # (rank, vertex)
    for v in range(n):
        if indeg[v] == 0:
            heapq.heappush(eligible, (rank[v], v))
    free: list[list[int]] = [sorted(range(platform.cores(s)), reverse=True)
                             for s in range(platform.num_types)]
    start = [Fraction(0)] * n
    finish = [Fraction(0)] * n
    core = [(0, 0)] * n
    running: list[tuple[Weight, int, int]] = []  # (finish, vertex, core idx)
    done = 0
    t = Fraction(0)

    while done < n:
        # Assign eligible vertices to free cores of their type.
        deferred = []
        while eligible:
            _, v = heapq.heappop(eligible)
            s = dag.types[v]
            if free[s]:
                c = free[s].pop()
                start[v] = t
                finish[v] = t + scenario.actual[v]
                core[v] = (s, c)
                heapq.heappush(running, (finish[v], v, c))
            else:
                deferred.append(v)
        for v in deferred:
            heapq.heappush(eligible, (rank[v], v))

        if not running:
            break
        # Advance to the next finish instant; process every finish there.
        t = running[0][0]
        while running and running[0][0] == t:
            _, v, c = heapq.heappop(running)
            free[dag.types[v]].append(c)
            free[dag.types[v]].sort(reverse=True)
            done += 1
            for u in dag.successors[v]:
                indeg[u] -= 1
                if indeg[u] == 0:
                    heapq.heappush(eligible, (rank[u], u))

    if done != n:
        raise ValueError("simulation stalled; graph is not a valid DAG")
    response = finish[dag.sink] if dag.is_normalized else max(finish)
    return ExecutionSequence(tuple(start), tuple(finish), tuple(core), response)


def critical_path_of(dag: TypedDag, sequence: ExecutionSequence) -> tuple[int, ...]:
    """Complete path built backward from the sink, choosing at each step
    a predecessor with the latest finish time (ties: lowest index)."""
    path = [dag.sink]
    v = dag.sink
    while dag.predecessors[v]:
        best = max(sequence.finish[p] for p in dag.predecessors[v])
        v = min(p for p in dag.predecessors[v] if sequence.finish[p] == best)
        path.append(v)
    path.reverse()
    return tuple(path)


def check_work_conserving(dag: TypedDag, platform: Platform,
                          sequence: ExecutionSequence,
                          actual: Sequence[Weight] | None = None) -> Violation | None:
    """Validate a sequence structurally and against the work-conserving
    rule: no eligible vertex of type s may wait while a type-s core idles.

    Returns the first violation found, or None.
    """
    n = dag.num_vertices
    if actual is None:
        actual = [sequence.finish[v] - sequence.start[v] for v in range(n)]
    for v in range(n):
        if sequence.finish[v] != sequence.start[v] + actual[v]:
            return Violation(sequence.start[v], v, "finish != start + actual")
        for p in dag.predecessors[v]:
            if sequence.start[v] < sequence.finish[p]:
                return Violation(sequence.start[v], v, f"starts before predecessor {p} finishes")
    # No overlap on any physical core (zero-length runs never occupy).
    by_core: dict[tuple[int, int], list[tuple[Weight, Weight, int]]] = {}
    for v in range(n):
        if sequence.start[v] < sequence.finish[v]:
            by_core.setdefault(sequence.core[v], []).append(
                (sequence.start[v], sequence.finish[v], v))
    for (s, c), runs in by_core.items():
        if c >= platform.cores(s):
            return Violation(runs[0][0], runs[0][2], f"core index {c} out of range for type {s}")
        runs.sort()
        for (a0, f0, v0), (a1, _, v1) in zip(runs, runs[1:]):
            if a1 < f0:
                return Violation(a1, v1, f"overlaps vertex {v0} on core ({s},{c})")
    # Work conservation, checked at every event instant.
    events = sorted({sequence.start[v] for v in range(n)}
                    | {sequence.finish[v] for v in range(n)})
    for t in events:
        busy = [0] * platform.num_types
        for v in range(n):
            if sequence.start[v] <= t < sequence.finish[v]:
                busy[dag.types[v]] += 1
        for v in range(n):
            if sequence.start[v] <= t:
                continue
            if any(sequence.finish[p] > t for p in dag.predecessors[v]):
                continue
            s = dag.types[v]
            if busy[s] < platform.cores(s):
                return Violation(t, v, f"eligible while a type-{s} core idles")
    return None


def find_anomaly(dag: TypedDag, platform: Platform, rng: random.Random,
                 attempts: int = 200) -> tuple[ExecutionScenario, ExecutionScenario] | None:
    """Search for an execution-time anomaly: a scenario whose response
    time strictly increases when one vertex's actual time is reduced.

    Returns (baseline, shortened) scenarios or None.
    """
    n = dag.num_vertices
    base = full_wcet_scenario(dag)
    base_rt = simulate(dag, platform, base).response_time
    candidates = [v for v in range(n) if dag.wcets[v] > 0]
    for _ in range(attempts):
        v = rng.choice(candidates)
        k = rng.randint(1, GRID - 1)
        actual = list(base.actual)
        actual[v] = dag.wcets[v] * Fraction(k, GRID)
        shortened = ExecutionScenario(tuple(actual), "index", 0)
        if simulate(dag, platform, shortened).response_time > base_rt:
            return base, shortened
    return None
