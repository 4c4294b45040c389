"""Workload generators: random typed DAG tasks, random platforms,
UUniFast utilization distribution, and the 3-SAT hardness instances.

The random DAG construction fixes a vertex order and adds each forward
edge independently with probability ``p_r``, then normalizes with dummy
source/sink vertices; a larger ``p_r`` therefore yields a more
sequential graph (``p_r = 1`` is a chain).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Platform, TypedDag, Weight, normalize

#: Denominator used when snapping UUniFast samples to exact rationals.
SNAP_DENOMINATOR = 1 << 20


class TooManyVariables(ValueError):
    pass


@dataclass(frozen=True)
class GenConfig:
    """Random-workload parameters; defaults mirror the evaluation setup."""

    vertex_range: tuple[int, int] = (70, 100)
    pr_range: tuple[float, float] = (0.08, 0.1)
    type_count_range: tuple[int, int] = (5, 10)
    cores_range: tuple[int, int] = (2, 11)
    utilization_range: tuple[float, float] = (1.0, 3.0)
    period: Weight = Fraction(100)
    seed: int = 0

    def __post_init__(self):
        for name in ("vertex_range", "type_count_range", "cores_range"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise ValueError(f"bad {name}: [{lo}, {hi}]")
        for name in ("pr_range", "utilization_range"):
            lo, hi = getattr(self, name)
            if not lo <= hi:
                raise ValueError(f"bad {name}: [{lo}, {hi}]")
        if self.period <= 0:
            raise ValueError("period must be positive")


def uunifast(n: int, total: Weight, rng: random.Random | int) -> list[Weight]:
    """Split ``total`` into ``n`` positive rationals by the UUniFast
    recurrence, snapped to the 2^-20 grid; the last value absorbs the
    snapping error so the sum is exactly ``total``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if total <= 0:
        raise ValueError("total must be positive")
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    total = Fraction(total)
    if n == 1:
        return [total]
    for _ in range(100):
        remaining = float(total)
        raw: list[float] = []
        for i in range(n - 1):
            nxt = remaining * rng.random() ** (1.0 / (n - i))
            raw.append(remaining - nxt)
            remaining = nxt
        q = SNAP_DENOMINATOR
        values = [Fraction(max(1, round(x * q)), q) for x in raw]
        last = total - sum(values)
        if last > 0:
            values.append(last)
            return values
    raise ValueError(f"total {total} too small to split into {n} positive parts")


def gen_platform(config: GenConfig, rng: random.Random | None = None) -> Platform:
    if rng is None:
        rng = random.Random(config.seed)
    num_types = rng.randint(*config.type_count_range)
    return Platform(tuple(rng.randint(*config.cores_range) for _ in range(num_types)))


def gen_dag(config: GenConfig, num_types: int | None = None,
            rng: random.Random | None = None) -> TypedDag:
    """Random normalized typed DAG with utilization-driven weights."""
    if rng is None:
        rng = random.Random(config.seed)
    if num_types is None:
        num_types = rng.randint(*config.type_count_range)
    n = rng.randint(*config.vertex_range)
    p_r = rng.uniform(*config.pr_range)
    util = rng.uniform(*config.utilization_range)
    total = Fraction(round(util * SNAP_DENOMINATOR), SNAP_DENOMINATOR) * config.period
    wcets = uunifast(n, total, rng)
    types = [rng.randrange(num_types) for _ in range(n)]
    edges = {(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p_r}
    return normalize(TypedDag(tuple(wcets), tuple(types), frozenset(edges)))


def gen_instance(config: GenConfig,
                 rng: random.Random | None = None) -> tuple[TypedDag, Platform]:
    """Draw a matching (task, platform) pair: one type count for both."""
    if rng is None:
        rng = random.Random(config.seed)
    platform = Platform(tuple(rng.randint(*config.cores_range)
                              for _ in range(rng.randint(*config.type_count_range))))
    dag = gen_dag(config, num_types=platform.num_types, rng=rng)
    return dag, platform


@dataclass(frozen=True)
class CnfInstance:
    """3-CNF formula: clauses are triples of (variable index, polarity)."""

    n: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("every clause must have exactly 3 literals")
            for var, _ in clause:
                if not 0 <= var < self.n:
                    raise ValueError(f"literal variable {var} out of range")

    @property
    def m(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> CnfInstance:
    """Simplified DIMACS: ``p cnf n m`` header, 3 literals per clause line."""
    n = None
    clauses: list[tuple[tuple[int, bool], ...]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad DIMACS header: {line!r}")
            n = int(parts[2])
            continue
        if n is None:
            raise ValueError("clause before DIMACS header")
        lits = [int(x) for x in line.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        clauses.append(tuple((abs(l) - 1, l > 0) for l in lits))
    if n is None:
        raise ValueError("missing DIMACS header")
    return CnfInstance(n, tuple(clauses))


def random_cnf(n: int, m: int, rng: random.Random) -> CnfInstance:
    """Random 3-CNF without tautological clauses.

    Duplicate literals within a clause are fine, but a clause holding
    both a variable and its negation is always true and its gadget
    vertices end up mutually parallel, which voids the reduction's
    threshold property; such clauses are redrawn.
    """
    clauses = []
    for _ in range(m):
        while True:
            clause = tuple((rng.randrange(n), rng.random() < 0.5) for _ in range(3))
            if not any((var, not pol) in clause for var, pol in clause):
                break
        clauses.append(clause)
    return CnfInstance(n, tuple(clauses))


def sat_brute_force(cnf: CnfInstance) -> bool:
    """Truth-table satisfiability check, the oracle for the reduction."""
    if cnf.n > 20:
        raise TooManyVariables(f"{cnf.n} variables is above the 2^20 budget")
    for assignment in range(1 << cnf.n):
        if all(any(bool(assignment >> var & 1) == polarity
                   for var, polarity in clause)
               for clause in cnf.clauses):
            return True
    return False


def sat_reduction(cnf: CnfInstance) -> tuple[TypedDag, Platform, Weight]:
    """Build the typed DAG whose path-wise bound decides the formula.

    The spine v_0..v_n (type 0, weight 1) forces one choice per variable
    between a positive and a negative path, whose vertices have weight
    1/(mn+1) and carry the type of the clause containing the matching
    literal; every clause also contributes an unordered unit-weight
    vertex of its own type. With one core per type, the maximal bound
    exceeds m+n+1 exactly when the formula is satisfiable.

    The threshold property requires non-tautological clauses: a clause
    containing both a variable and its negation places same-type gadget
    vertices on both sides of the choice, inflating the bound.
    """
    m, n = cnf.m, cnf.n
    eps = Fraction(1, m * n + 1)
    vertices: list[tuple[Weight, int]] = []
    edges: set[tuple[int, int]] = set()

    def add(wcet: Weight, vtype: int) -> int:
        vertices.append((wcet, vtype))
        return len(vertices) - 1

    spine = [add(Fraction(1), 0) for _ in range(n + 1)]
    for r in range(m):
        u = add(Fraction(1), r + 1)
        edges.add((spine[0], u))
        edges.add((u, spine[n]))
    for i in range(n):
        for polarity in (True, False):
            # Clauses containing this literal, duplicates collapsed.
            hits = sorted({r for r, clause in enumerate(cnf.clauses)
                           if (i, polarity) in clause})
            prev = spine[i]
            for r in hits:
                w = add(eps, r + 1)
                edges.add((prev, w))
                prev = w
            edges.add((prev, spine[i + 1]))

    dag = TypedDag(*zip(*vertices), frozenset(edges))
    platform = Platform((1,) * (m + 1))
    return dag, platform, Fraction(m + n + 1)
