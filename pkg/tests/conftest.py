import random
from fractions import Fraction

import pytest

from typedsched.generate import GenConfig, gen_instance
from typedsched.graph import Platform, TypedDag, normalize


def example2_graph() -> TypedDag:
    """Synthetic 8-vertex task matching the documented aggregates:
    longest path 19, type-0 volume 11, type-1 volume 34.

    Spine src(2,t0) -> A(9,t1) -> B(6,t1) -> F(1,t0) -> snk(1,t0), plus
    three parallel fillers C(7,t0), D(10,t1), E(9,t1) from src to snk.
    """
    vertices = [
        (Fraction(2), 0),   # 0 src
        (Fraction(9), 1),   # 1 A
        (Fraction(6), 1),   # 2 B
        (Fraction(1), 0),   # 3 F
        (Fraction(1), 0),   # 4 snk
        (Fraction(7), 0),   # 5 C
        (Fraction(10), 1),  # 6 D
        (Fraction(9), 1),   # 7 E
    ]
    edges = [(0, 1), (1, 2), (2, 3), (3, 4),
             (0, 5), (5, 4), (0, 6), (6, 4), (0, 7), (7, 4)]
    return TypedDag.build(vertices, edges)


def diamond(weight=6, vtype=0) -> TypedDag:
    """src -> two parallel mid vertices -> snk; mids share one type."""
    w = Fraction(weight)
    return TypedDag.build(
        [(Fraction(0), 0), (w, vtype), (w, vtype), (Fraction(0), 0)],
        [(0, 1), (0, 2), (1, 3), (2, 3)])


def stacked_diamonds(k: int, vtype=0) -> TypedDag:
    """k same-type diamonds in series: 2^k complete paths."""
    vertices = [(Fraction(1), vtype)]
    edges = []
    prev = 0
    for _ in range(k):
        a = len(vertices)
        vertices += [(Fraction(1), vtype), (Fraction(1), vtype), (Fraction(1), vtype)]
        edges += [(prev, a), (prev, a + 1), (a, a + 2), (a + 1, a + 2)]
        prev = a + 2
    return TypedDag.build(vertices, edges)


def small_instance(seed, max_vertices=12, max_types=3, max_cores=4,
                   pr=(0.15, 0.5)):
    cfg = GenConfig(vertex_range=(4, max_vertices),
                    type_count_range=(1, max_types),
                    cores_range=(1, max_cores),
                    pr_range=pr,
                    utilization_range=(0.5, 2.0),
                    seed=seed)
    return gen_instance(cfg)


@pytest.fixture
def rng():
    return random.Random(12345)
