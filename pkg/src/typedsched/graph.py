"""Typed DAG task model and derived graph quantities.

A task is a vertex-weighted, vertex-typed DAG. Every vertex carries an
exact rational worst-case execution time (WCET) and a core type; every
analysis in this package consumes the quantities computed here:
topological order, volumes, longest path, transitive-closure
reachability and per-vertex parallel ("interference") sets.

All arithmetic on time values uses ``fractions.Fraction`` so that bound
comparisons downstream are exact, never tolerance-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

Weight = Fraction


class GraphError(ValueError):
    """Base class for malformed-graph errors."""


class CycleDetected(GraphError):
    def __init__(self, cycle: Sequence[int]):
        self.cycle = list(cycle)
        super().__init__(f"cycle detected: {' -> '.join(map(str, self.cycle))}")


class DanglingEdge(GraphError):
    def __init__(self, edge: tuple[int, int]):
        self.edge = edge
        super().__init__(f"edge {edge} references an unknown vertex")


class EmptyGraph(GraphError):
    pass


class NotAPath(GraphError):
    pass


class NotNormalized(GraphError):
    pass


class PathExplosion(RuntimeError):
    """Raised when complete-path enumeration exceeds its limit."""


class UnknownType(GraphError):
    def __init__(self, type_id: int):
        self.type_id = type_id
        super().__init__(f"no core count configured for type {type_id}")


@dataclass(frozen=True)
class Platform:
    """Core counts per type: ``core_counts[s]`` is the number of type-s cores."""

    core_counts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "core_counts", tuple(int(m) for m in self.core_counts))
        for s, m in enumerate(self.core_counts):
            if m < 1:
                raise ValueError(f"core count for type {s} must be >= 1, got {m}")

    @property
    def num_types(self) -> int:
        return len(self.core_counts)

    def cores(self, s: int) -> int:
        if not 0 <= s < len(self.core_counts):
            raise UnknownType(s)
        return self.core_counts[s]

    @property
    def max_cores(self) -> int:
        return max(self.core_counts)


@dataclass(frozen=True)
class TypedDag:
    """Immutable typed DAG task.

    Vertices are dense integers ``0..n-1``; ``wcets[v]`` and ``types[v]``
    give the WCET and core type of vertex ``v``. Edges are ordered pairs.
    """

    wcets: tuple[Weight, ...]
    types: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    @staticmethod
    def build(vertices, edges) -> "TypedDag":
        """Construct from ``[(wcet, type), ...]`` and an edge iterable."""
        wcets = tuple(Fraction(w) for w, _ in vertices)
        types = tuple(int(t) for _, t in vertices)
        return TypedDag(wcets, types, frozenset((int(u), int(v)) for u, v in edges))

    @property
    def num_vertices(self) -> int:
        return len(self.wcets)

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        succ = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            succ[u].append(v)
        return tuple(tuple(sorted(s)) for s in succ)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        pred = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            pred[v].append(u)
        return tuple(tuple(sorted(p)) for p in pred)

    @cached_property
    def sources(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.num_vertices) if not self.predecessors[v])

    @cached_property
    def sinks(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.num_vertices) if not self.successors[v])

    @property
    def is_normalized(self) -> bool:
        return self.num_vertices > 0 and len(self.sources) == 1 and len(self.sinks) == 1

    @property
    def source(self) -> int:
        if len(self.sources) != 1:
            raise NotNormalized("graph does not have a unique source")
        return self.sources[0]

    @property
    def sink(self) -> int:
        if len(self.sinks) != 1:
            raise NotNormalized("graph does not have a unique sink")
        return self.sinks[0]

    @cached_property
    def num_types(self) -> int:
        return max(self.types, default=-1) + 1


def validate(dag: TypedDag) -> None:
    """Check edge endpoints and acyclicity; raise on the first defect found."""
    n = dag.num_vertices
    for u, v in dag.edges:
        if not (0 <= u < n and 0 <= v < n):
            raise DanglingEdge((u, v))
        if u == v:
            raise CycleDetected([u, u])
    for t in dag.types:
        if t < 0:
            raise GraphError(f"negative vertex type {t}")
    for w in dag.wcets:
        if w < 0:
            raise GraphError(f"negative WCET {w}")
    # Kahn's algorithm; leftover vertices form a cycle.
    indeg = [len(dag.predecessors[v]) for v in range(n)]
    queue = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while queue:
        u = queue.pop()
        seen += 1
        for v in dag.successors[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                queue.append(v)
    if seen != n:
        raise CycleDetected(_find_cycle(dag, indeg))


def _find_cycle(dag: TypedDag, indeg: list[int]) -> list[int]:
    # Walk predecessors inside the unresolved subgraph until a vertex repeats.
    start = next(v for v in range(dag.num_vertices) if indeg[v] > 0)
    seen: dict[int, int] = {}
    walk = [start]
    v = start
    while v not in seen:
        seen[v] = len(walk) - 1
        v = next(p for p in dag.predecessors[v] if indeg[p] > 0)
        walk.append(v)
    cycle = walk[seen[v]:]
    cycle.reverse()
    return cycle


def topological_order(dag: TypedDag) -> list[int]:
    """Topological order of a valid dag, deterministic (lowest index first)."""
    import heapq

    n = dag.num_vertices
    indeg = [len(dag.predecessors[v]) for v in range(n)]
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        u = heapq.heappop(heap)
        order.append(u)
        for v in dag.successors[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, v)
    if len(order) != n:
        raise CycleDetected(_find_cycle(dag, indeg))
    return order


def normalize(dag: TypedDag) -> TypedDag:
    """Return an equivalent dag with a unique source and sink.

    If needed, zero-WCET dummy vertices of type 0 are appended; they are
    ordered relative to every other vertex, so their parallel sets are
    empty and they contribute nothing to any bound. Idempotent.
    """
    if dag.num_vertices == 0:
        raise EmptyGraph("cannot normalize an empty graph")
    validate(dag)
    if dag.is_normalized:
        return dag
    wcets = list(dag.wcets)
    types = list(dag.types)
    edges = set(dag.edges)
    if len(dag.sources) > 1:
        src = len(wcets)
        wcets.append(Fraction(0))
        types.append(0)
        edges.update((src, v) for v in dag.sources)
    if len(dag.sinks) > 1:
        snk = len(wcets)
        wcets.append(Fraction(0))
        types.append(0)
        edges.update((v, snk) for v in dag.sinks)
    return TypedDag(tuple(wcets), tuple(types), frozenset(edges))


def vol(dag: TypedDag) -> Weight:
    """Total WCET of all vertices."""
    return sum(dag.wcets, Fraction(0))


def vol_s(dag: TypedDag, s: int) -> Weight:
    """Total WCET of vertices of type ``s`` (0 for an unused type)."""
    return sum((w for w, t in zip(dag.wcets, dag.types) if t == s), Fraction(0))


def longest_path(dag: TypedDag) -> Weight:
    """Length of the longest complete path, by topological-order DP."""
    if dag.num_vertices == 0:
        raise EmptyGraph("longest_path of an empty graph")
    dist: list[Weight] = [Fraction(0)] * dag.num_vertices
    for v in topological_order(dag):
        best = max((dist[p] for p in dag.predecessors[v]), default=Fraction(0))
        dist[v] = best + dag.wcets[v]
    return max(dist)


def path_length(dag: TypedDag, path: Sequence[int]) -> Weight:
    """Sum of vertex weights along ``path``; rejects non-adjacent steps."""
    for a, b in zip(path, path[1:]):
        if (a, b) not in dag.edges:
            raise NotAPath(f"({a}, {b}) is not an edge")
    return sum((dag.wcets[v] for v in path), Fraction(0))


@dataclass(frozen=True)
class Reachability:
    """Transitive closure of the edge relation as per-vertex bitmasks.

    ``anc[v]`` has bit ``u`` set iff ``u`` is a (strict) ancestor of
    ``v``; ``des[v]`` likewise for descendants.
    """

    anc: tuple[int, ...]
    des: tuple[int, ...]

    def is_ancestor(self, u: int, v: int) -> bool:
        return bool(self.anc[v] >> u & 1)

    def ancestors(self, v: int) -> set[int]:
        return _mask_to_set(self.anc[v])

    def descendants(self, v: int) -> set[int]:
        return _mask_to_set(self.des[v])


def _mask_to_set(mask: int) -> set[int]:
    out = set()
    while mask:
        lsb = mask & -mask
        out.add(lsb.bit_length() - 1)
        mask ^= lsb
    return out


def reachability(dag: TypedDag) -> Reachability:
    """Materialize ancestor/descendant bitmasks for a valid dag."""
    n = dag.num_vertices
    order = topological_order(dag)
    anc = [0] * n
    des = [0] * n
    for v in order:
        m = 0
        for p in dag.predecessors[v]:
            m |= anc[p] | (1 << p)
        anc[v] = m
    for v in reversed(order):
        m = 0
        for s in dag.successors[v]:
            m |= des[s] | (1 << s)
        des[v] = m
    return Reachability(tuple(anc), tuple(des))


def par_masks(dag: TypedDag, reach: Reachability) -> tuple[int, ...]:
    """Bitmask form of the parallel set of every vertex.

    The parallel set of ``v`` holds the same-type vertices that are
    neither ancestors nor descendants of ``v`` (``v`` itself excluded).
    """
    n = dag.num_vertices
    type_mask = [0] * (dag.num_types if n else 0)
    for v, t in enumerate(dag.types):
        type_mask[t] |= 1 << v
    return tuple(
        type_mask[dag.types[v]] & ~(reach.anc[v] | reach.des[v] | (1 << v))
        for v in range(n)
    )


def par_set(dag: TypedDag, reach: Reachability, v: int) -> set[int]:
    """Parallel set of ``v`` as a plain set of vertex ids."""
    return _mask_to_set(par_masks(dag, reach)[v])


def enumerate_complete_paths(dag: TypedDag, limit: int = 1_000_000) -> Iterator[tuple[int, ...]]:
    """Yield every source-to-sink path exactly once.

    Raises PathExplosion as soon as more than ``limit`` paths would be
    produced.
    """
    if not dag.is_normalized:
        raise NotNormalized("path enumeration requires a unique source and sink")
    sink = dag.sink
    count = 0
    stack: list[int] = [dag.source]

    def walk(v: int) -> Iterator[tuple[int, ...]]:
        nonlocal count
        if v == sink:
            count += 1
            if count > limit:
                raise PathExplosion(f"more than {limit} complete paths")
            yield tuple(stack)
            return
        for s in dag.successors[v]:
            stack.append(s)
            yield from walk(s)
            stack.pop()

    yield from walk(dag.source)


def count_complete_paths(dag: TypedDag, limit: int | None = None) -> int:
    """Number of complete paths, by DP (no enumeration).

    With ``limit`` set, raises PathExplosion once the count exceeds it.
    """
    if not dag.is_normalized:
        raise NotNormalized("path counting requires a unique source and sink")
    counts = [0] * dag.num_vertices
    counts[dag.source] = 1
    for v in topological_order(dag):
        for s in dag.successors[v]:
            counts[s] += counts[v]
        if limit is not None and counts[v] > limit:
            raise PathExplosion(f"more than {limit} complete paths")
    return counts[dag.sink]
