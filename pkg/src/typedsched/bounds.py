"""Worst-case response time bounds for typed DAG tasks.

Three bounds over a (task, platform) pair, each an exact rational:

* ``old_b``  -- the classical bound from longest path plus per-type
  volume terms; cheap but pessimistic and not self-sustainable.
* ``new_b_1`` -- longest path of the scaled graph plus the volume
  terms; same cost, tighter, self-sustainable.
* ``new_b_2`` -- the path-wise bound maximized over all complete paths.
  Computed either by explicit path enumeration (``new_b_2_bruteforce``,
  the independent oracle) or by the abstract-tuple search with dominance
  pruning (``new_b_2``), which is exact and polynomial for a fixed
  number of types.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import (
    NotAPath,
    Platform,
    Reachability,
    TypedDag,
    UnknownType,
    Weight,
    count_complete_paths,
    enumerate_complete_paths,
    longest_path,
    par_masks,
    reachability,
    topological_order,
    vol_s,
)

#: Sentinel for "no vertex of this type seen yet" in a tuple's delta.
NO_VERTEX = -1


class NotASuccessor(ValueError):
    pass


class VertexMismatch(ValueError):
    pass


class ResourceLimit(RuntimeError):
    """Retained-tuple cap exceeded during the new_b_2 search."""


#: Default cap on simultaneously retained tuples; bounds worst-case
#: memory on adversarial type counts.
DEFAULT_TUPLE_LIMIT = 10_000_000


def _check_types(dag: TypedDag, platform: Platform) -> None:
    for t in dag.types:
        if t >= platform.num_types:
            raise UnknownType(t)


def old_b(dag: TypedDag, platform: Platform) -> Weight:
    """Classical WCRT bound: (1 - 1/max M_s) * len(G) + sum_s vol_s/M_s."""
    _check_types(dag, platform)
    total = Fraction(1, 1) - Fraction(1, platform.max_cores)
    bound = total * longest_path(dag)
    for s in range(platform.num_types):
        bound += Fraction(vol_s(dag, s), platform.cores(s))
    return bound


def scaled_graph(dag: TypedDag, platform: Platform) -> TypedDag:
    """Same topology and types; every weight multiplied by (1 - 1/M_type)."""
    _check_types(dag, platform)
    factors = [Fraction(1) - Fraction(1, platform.cores(s)) for s in range(platform.num_types)]
    wcets = tuple(w * factors[t] for w, t in zip(dag.wcets, dag.types))
    return TypedDag(wcets, dag.types, dag.edges)


def new_b_1(dag: TypedDag, platform: Platform) -> Weight:
    """First new bound: len(scaled graph) + sum_s vol_s/M_s."""
    bound = longest_path(scaled_graph(dag, platform))
    for s in range(platform.num_types):
        bound += Fraction(vol_s(dag, s), platform.cores(s))
    return bound


def ivs(dag: TypedDag, reach: Reachability, path: Sequence[int], s: int) -> set[int]:
    """Interfering vertices of type ``s`` for a path: the union of the
    parallel sets of the path's type-s vertices."""
    masks = par_masks(dag, reach)
    acc = 0
    for v in path:
        if dag.types[v] == s:
            acc |= masks[v]
    out = set()
    while acc:
        lsb = acc & -acc
        out.add(lsb.bit_length() - 1)
        acc ^= lsb
    return out


def path_bound(dag: TypedDag, reach: Reachability, platform: Platform,
               path: Sequence[int]) -> Weight:
    """Per-path response time bound: len(path) + interference terms."""
    _check_types(dag, platform)
    masks = par_masks(dag, reach)
    per_type = [0] * platform.num_types
    bound = Fraction(0)
    for v in path:
        bound += dag.wcets[v]
        per_type[dag.types[v]] |= masks[v]
    for s in range(platform.num_types):
        acc = per_type[s]
        if not acc:
            continue
        interference = Fraction(0)
        while acc:
            lsb = acc & -acc
            interference += dag.wcets[lsb.bit_length() - 1]
            acc ^= lsb
        bound += interference / platform.cores(s)
    return bound


def new_b_2_bruteforce(dag: TypedDag, platform: Platform,
                       limit: int = 1_000_000) -> Weight:
    """Maximum of path_bound over all complete paths, by enumeration.

    Independent oracle for ``new_b_2``; raises PathExplosion when the
    path count exceeds ``limit``.
    """
    reach = reachability(dag)
    best: Weight | None = None
    for path in enumerate_complete_paths(dag, limit):
        b = path_bound(dag, reach, platform, path)
        if best is None or b > best:
            best = b
    assert best is not None
    return best


@dataclass(frozen=True)
class AbstractTuple:
    """Search state abstracting all path prefixes ending at ``vertex``.

    ``delta[s]`` is the prefix's last vertex of type ``s`` (NO_VERTEX if
    none yet); ``r`` is the accumulated per-path bound.
    """

    vertex: int
    delta: tuple[int, ...]
    r: Weight


def source_tuple(dag: TypedDag, num_types: int) -> AbstractTuple:
    src = dag.source
    delta = tuple(src if s == dag.types[src] else NO_VERTEX for s in range(num_types))
    return AbstractTuple(src, delta, dag.wcets[src])


@dataclass
class SearchStats:
    tuples_generated: int = 0
    tuples_retained_peak: int = 0
    tuples_pruned: int = 0
    tuples_evicted: int = 0


class _SearchContext:
    """Precomputed masks and memoized extension increments for one
    (dag, platform) pair."""

    def __init__(self, dag: TypedDag, platform: Platform):
        _check_types(dag, platform)
        self.dag = dag
        self.platform = platform
        self.reach = reachability(dag)
        self.par = par_masks(dag, self.reach)
        self.des = self.reach.des
        # r increment of stepping to v given the previous same-type
        # delta entry d (NO_VERTEX when none): c(v) + sum of weights in
        # par(v) \ par(d), divided by the core count of v's type.
        self._inc: dict[tuple[int, int], Weight] = {}

    def increment(self, v: int, d: int) -> Weight:
        key = (v, d)
        cached = self._inc.get(key)
        if cached is not None:
            return cached
        dag = self.dag
        mask = self.par[v]
        if d != NO_VERTEX:
            mask &= ~self.par[d]
        interference = Fraction(0)
        while mask:
            lsb = mask & -mask
            interference += dag.wcets[lsb.bit_length() - 1]
            mask ^= lsb
        value = dag.wcets[v] + interference / self.platform.cores(dag.types[v])
        self._inc[key] = value
        return value

    def extend(self, t: AbstractTuple, v: int) -> AbstractTuple:
        tv = self.dag.types[v]
        delta = list(t.delta)
        prev = delta[tv]
        delta[tv] = v
        return AbstractTuple(v, tuple(delta), t.r + self.increment(v, prev))

    def dominates(self, t1: AbstractTuple, t2: AbstractTuple) -> bool:
        if t1.r < t2.r:
            return False
        par = self.par
        des = self.des
        for d1, d2 in zip(t1.delta, t2.delta):
            if d1 == NO_VERTEX:
                continue
            if d2 == NO_VERTEX or par[d1] & des[d2]:
                return False
        return True


def extend_tuple(dag: TypedDag, reach: Reachability, platform: Platform,
                 t: AbstractTuple, v: int) -> AbstractTuple:
    """Extend a tuple along the edge (t.vertex, v)."""
    if v not in dag.successors[t.vertex]:
        raise NotASuccessor(f"{v} is not a successor of {t.vertex}")
    return _SearchContext(dag, platform).extend(t, v)


def fold_path(dag: TypedDag, reach: Reachability, platform: Platform,
              path: Sequence[int]) -> AbstractTuple:
    """Fold extend_tuple along a complete path, starting from the source
    tuple; the final ``r`` equals path_bound of the path."""
    ctx = _SearchContext(dag, platform)
    t = source_tuple(dag, platform.num_types)
    if path[0] != t.vertex:
        raise NotAPath("path does not start at the source")
    for v in path[1:]:
        t = ctx.extend(t, v)
    return t


def dominates(dag: TypedDag, reach: Reachability,
              t1: AbstractTuple, t2: AbstractTuple) -> bool:
    """Tuple domination at a shared vertex.

    True iff t1.r >= t2.r and, for every type s, either t1 has not seen
    a type-s vertex, or both have and par(delta1[s]) is disjoint from
    des(delta2[s]).
    """
    if t1.vertex != t2.vertex:
        raise VertexMismatch(f"tuples at different vertices: {t1.vertex} != {t2.vertex}")
    par = par_masks(dag, reach)
    for d1, d2 in zip(t1.delta, t2.delta):
        if d1 == NO_VERTEX:
            continue
        if d2 == NO_VERTEX or par[d1] & reach.des[d2]:
            return False
    return t1.r >= t2.r


def new_b_2(dag: TypedDag, platform: Platform, *,
            prune: bool = True,
            bidirectional: bool = True,
            max_retained: int = DEFAULT_TUPLE_LIMIT,
            stats: SearchStats | None = None) -> Weight:
    """Exact maximum of path_bound over all complete paths.

    Width-first tuple search: vertices are processed in topological
    order, each vertex's tuple bucket expanded to its successors only
    after all predecessors' buckets are complete, then discarded. A new
    tuple is kept only if no retained tuple at the same vertex dominates
    it; with ``bidirectional`` it also evicts the tuples it dominates.
    ``prune=False`` keeps every distinct tuple (exact duplicates merge),
    which is only usable on small instances.
    """
    ctx = _SearchContext(dag, platform)
    if stats is None:
        stats = SearchStats()
    num_types = platform.num_types
    sink = dag.sink
    buckets: list[list[AbstractTuple]] = [[] for _ in range(dag.num_vertices)]
    buckets[dag.source].append(source_tuple(dag, num_types))
    stats.tuples_generated += 1
    retained = 1
    stats.tuples_retained_peak = 1
    types = dag.types
    successors = dag.successors

    for u in topological_order(dag):
        bucket = buckets[u]
        buckets[u] = []
        if u == sink:
            if not bucket:
                raise ValueError("source cannot reach sink")
            return max(t.r for t in bucket)
        retained -= len(bucket)
        for t in bucket:
            for v in successors[u]:
                nt = ctx.extend(t, v)
                stats.tuples_generated += 1
                dest = buckets[v]
                if prune:
                    dominated = False
                    for e in dest:
                        if ctx.dominates(e, nt):
                            dominated = True
                            break
                    if dominated:
                        stats.tuples_pruned += 1
                        continue
                    if bidirectional:
                        kept = [e for e in dest if not ctx.dominates(nt, e)]
                        evicted = len(dest) - len(kept)
                        if evicted:
                            stats.tuples_evicted += evicted
                            retained -= evicted
                            dest = kept
                            buckets[v] = dest
                else:
                    if any(e.delta == nt.delta and e.r == nt.r for e in dest):
                        continue
                dest.append(nt)
                retained += 1
                if retained > stats.tuples_retained_peak:
                    stats.tuples_retained_peak = retained
                if retained > max_retained:
                    raise ResourceLimit(
                        f"more than {max_retained} tuples retained; "
                        "instance exceeds the configured search budget")
    raise AssertionError("topological order did not reach the sink")


@dataclass
class AnalysisOptions:
    compute_new_b_2: bool = True
    strict_paper_pruning: bool = False  # disable reverse eviction
    max_retained: int = DEFAULT_TUPLE_LIMIT
    count_paths: bool = False
    path_count_limit: int = 10_000_000


@dataclass
class BoundReport:
    """All bounds for one (task, platform) pair plus search statistics."""

    old_b: Weight
    new_b_1: Weight
    new_b_2: Weight | None = None
    tuples_generated: int = 0
    tuples_retained_peak: int = 0
    complete_path_count: int | None = None
    durations_ns: dict[str, int] = field(default_factory=dict)

    @property
    def tightest(self) -> Weight:
        return self.new_b_2 if self.new_b_2 is not None else self.new_b_1


def analyze(dag: TypedDag, platform: Platform,
            options: AnalysisOptions | None = None) -> BoundReport:
    """Compute the requested bounds with per-bound wall-clock timings."""
    options = options or AnalysisOptions()

    t0 = time.perf_counter_ns()
    b_old = old_b(dag, platform)
    t1 = time.perf_counter_ns()
    b_new1 = new_b_1(dag, platform)
    t2 = time.perf_counter_ns()
    report = BoundReport(old_b=b_old, new_b_1=b_new1,
                         durations_ns={"old_b": t1 - t0, "new_b_1": t2 - t1})
    if options.compute_new_b_2:
        stats = SearchStats()
        t3 = time.perf_counter_ns()
        report.new_b_2 = new_b_2(
            dag, platform,
            bidirectional=not options.strict_paper_pruning,
            max_retained=options.max_retained,
            stats=stats)
        report.durations_ns["new_b_2"] = time.perf_counter_ns() - t3
        report.tuples_generated = stats.tuples_generated
        report.tuples_retained_peak = stats.tuples_retained_peak
    if options.count_paths:
        report.complete_path_count = count_complete_paths(
            dag, limit=options.path_count_limit)
    return report
