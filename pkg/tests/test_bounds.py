import random
from fractions import Fraction

import pytest

from conftest import diamond, example2_graph, small_instance
from typedsched import bounds
from typedsched.bounds import (
    AnalysisOptions,
    NotASuccessor,
    ResourceLimit,
    SearchStats,
    VertexMismatch,
    analyze,
    dominates,
    extend_tuple,
    fold_path,
    ivs,
    new_b_1,
    new_b_2,
    new_b_2_bruteforce,
    old_b,
    path_bound,
    scaled_graph,
    source_tuple,
)
from typedsched.graph import (
    Platform,
    TypedDag,
    UnknownType,
    enumerate_complete_paths,
    normalize,
    reachability,
    vol,
)


class TestOldB:
    def test_reference_aggregates(self):
        dag = example2_graph()
        assert old_b(dag, Platform((2, 3))) == Fraction(59, 2)
        assert old_b(dag, Platform((20, 3))) == Fraction(449, 15)

    def test_single_vertex_single_core(self):
        dag = TypedDag.build([(Fraction(5), 0)], [])
        assert old_b(dag, Platform((1,))) == 5

    def test_unknown_type(self):
        dag = TypedDag.build([(1, 0), (1, 1)], [(0, 1)])
        with pytest.raises(UnknownType):
            old_b(dag, Platform((2,)))

    def test_single_type_degeneration(self):
        # with one type the bound is len + (vol - len)/M
        for seed in range(20):
            dag, _ = small_instance(seed, max_types=1)
            for m in (1, 2, 5):
                expected = (bounds.longest_path(dag)
                            + (vol(dag) - bounds.longest_path(dag)) / m)
                assert old_b(dag, Platform((m,))) == expected


class TestScaledGraph:
    def test_all_single_core_zeroes_weights(self):
        dag = example2_graph()
        scaled = scaled_graph(dag, Platform((1, 1)))
        assert all(w == 0 for w in scaled.wcets)

    def test_formula(self):
        dag = TypedDag.build([(4, 0), (4, 1)], [(0, 1)])
        scaled = scaled_graph(dag, Platform((2, 4)))
        assert scaled.wcets == (Fraction(2), Fraction(3))
        assert scaled.edges == dag.edges and scaled.types == dag.types


class TestNewB1:
    def test_single_vertex(self):
        dag = TypedDag.build([(Fraction(5), 0)], [])
        assert new_b_1(dag, Platform((1,))) == 5

    def test_two_vertex_chain(self):
        dag = TypedDag.build([(4, 0), (4, 1)], [(0, 1)])
        assert new_b_1(dag, Platform((2, 4))) == 8

    def test_parallel_same_type(self):
        dag = diamond(weight=6)
        platform = Platform((2,))
        assert new_b_1(dag, platform) == 9
        assert new_b_1(dag, platform) == old_b(dag, platform)


class TestIvs:
    def test_chain_empty(self):
        dag = TypedDag.build([(1, 0), (2, 1), (3, 0)], [(0, 1), (1, 2)])
        reach = reachability(dag)
        for s in range(2):
            assert ivs(dag, reach, [0, 1, 2], s) == set()

    def test_diamond_contains_sibling(self):
        dag = diamond()
        reach = reachability(dag)
        assert ivs(dag, reach, [0, 1, 3], 0) == {2}
        assert ivs(dag, reach, [0, 2, 3], 0) == {1}

    def test_matches_definition_on_random_graphs(self):
        from typedsched.graph import par_set

        for seed in range(30):
            dag, platform = small_instance(seed)
            reach = reachability(dag)
            path = next(enumerate_complete_paths(dag, 100_000))
            for s in range(platform.num_types):
                expected = set()
                for v in path:
                    if dag.types[v] == s:
                        expected |= par_set(dag, reach, v)
                assert ivs(dag, reach, path, s) == expected


class TestPathBound:
    def test_single_vertex(self):
        dag = TypedDag.build([(Fraction(3), 0)], [])
        reach = reachability(dag)
        assert path_bound(dag, reach, Platform((4,)), [0]) == 3

    def test_diamond_either_path(self):
        dag = diamond(weight=6)
        reach = reachability(dag)
        platform = Platform((2,))
        assert path_bound(dag, reach, platform, [0, 1, 3]) == 9
        assert path_bound(dag, reach, platform, [0, 2, 3]) == 9

    def test_cross_type_vertices_excluded(self):
        dag = TypedDag.build(
            [(0, 0), (6, 0), (4, 1), (0, 0)],
            [(0, 1), (0, 2), (1, 3), (2, 3)])
        reach = reachability(dag)
        platform = Platform((1, 1))
        assert path_bound(dag, reach, platform, [0, 1, 3]) == 6
        assert new_b_1(dag, platform) == 10


class TestBruteForce:
    def test_chain_is_unique_path_bound(self):
        dag = TypedDag.build([(1, 0), (2, 1), (3, 0)], [(0, 1), (1, 2)])
        platform = Platform((2, 2))
        reach = reachability(dag)
        assert (new_b_2_bruteforce(dag, platform)
                == path_bound(dag, reach, platform, [0, 1, 2]))

    def test_diamond(self):
        assert new_b_2_bruteforce(diamond(weight=6), Platform((2,))) == 9


class TestExtendTuple:
    def test_chain_accumulates(self):
        dag = TypedDag.build([(1, 0), (2, 1), (3, 0)], [(0, 1), (1, 2)])
        platform = Platform((2, 2))
        reach = reachability(dag)
        t = source_tuple(dag, 2)
        assert t.delta == (0, bounds.NO_VERTEX) and t.r == 1
        t = extend_tuple(dag, reach, platform, t, 1)
        assert t.delta == (0, 1) and t.r == 3
        t = extend_tuple(dag, reach, platform, t, 2)
        assert t.delta == (2, 1) and t.r == 6

    def test_covered_par_set_adds_only_wcet(self):
        # u before v, same type, par(v) a subset of par(u): step pays c(v)
        dag = TypedDag.build(
            [(0, 0), (1, 1), (1, 1), (5, 1), (0, 0)],
            [(0, 1), (1, 2), (0, 3), (3, 4), (2, 4)])
        platform = Platform((1, 1))
        reach = reachability(dag)
        t = source_tuple(dag, 2)
        t = extend_tuple(dag, reach, platform, t, 1)  # pays par(1) = {3}
        r_before = t.r
        t = extend_tuple(dag, reach, platform, t, 2)
        assert t.r == r_before + dag.wcets[2]

    def test_not_a_successor(self):
        dag = diamond()
        reach = reachability(dag)
        with pytest.raises(NotASuccessor):
            extend_tuple(dag, reach, Platform((1,)), source_tuple(dag, 1), 3)

    def test_fold_equals_path_bound_on_random_graphs(self):
        for seed in range(40):
            dag, platform = small_instance(seed)
            reach = reachability(dag)
            for path in enumerate_complete_paths(dag, 50_000):
                t = fold_path(dag, reach, platform, path)
                assert t.r == path_bound(dag, reach, platform, path)


class TestDominates:
    def _setup(self):
        dag = diamond()
        return dag, reachability(dag)

    def test_reflexive(self):
        dag, reach = self._setup()
        t = source_tuple(dag, 1)
        assert dominates(dag, reach, t, t)

    def test_bottom_deltas_dominate(self):
        dag = TypedDag.build(
            [(0, 0), (1, 1), (1, 1), (0, 0)],
            [(0, 1), (0, 2), (1, 3), (2, 3)])
        reach = reachability(dag)
        t1 = bounds.AbstractTuple(3, (3, bounds.NO_VERTEX), Fraction(5))
        t2 = bounds.AbstractTuple(3, (3, 1), Fraction(4))
        assert dominates(dag, reach, t1, t2)

    def test_smaller_r_never_dominates(self):
        dag, reach = self._setup()
        t1 = bounds.AbstractTuple(3, (3,), Fraction(1))
        t2 = bounds.AbstractTuple(3, (3,), Fraction(2))
        assert not dominates(dag, reach, t1, t2)
        assert dominates(dag, reach, t2, t1)

    def test_vertex_mismatch(self):
        dag, reach = self._setup()
        t1 = bounds.AbstractTuple(1, (1,), Fraction(1))
        t2 = bounds.AbstractTuple(2, (2,), Fraction(1))
        with pytest.raises(VertexMismatch):
            dominates(dag, reach, t1, t2)


class TestNewB2:
    def test_single_vertex(self):
        dag = TypedDag.build([(Fraction(4), 0)], [])
        assert new_b_2(dag, Platform((3,))) == 4

    def test_diamond(self):
        assert new_b_2(diamond(weight=6), Platform((2,))) == 9

    def test_matches_bruteforce_on_random_graphs(self):
        for seed in range(100):
            dag, platform = small_instance(seed)
            assert new_b_2(dag, platform) == new_b_2_bruteforce(dag, platform)

    def test_pruning_modes_agree(self):
        for seed in range(40):
            dag, platform = small_instance(seed)
            expected = new_b_2(dag, platform)
            assert new_b_2(dag, platform, prune=False) == expected
            assert new_b_2(dag, platform, bidirectional=False) == expected

    def test_resource_limit(self):
        with pytest.raises(ResourceLimit):
            new_b_2(diamond(), Platform((2,)), prune=False, max_retained=1)

    def test_stats_populated(self):
        stats = SearchStats()
        new_b_2(diamond(), Platform((2,)), stats=stats)
        assert stats.tuples_generated >= 4
        assert stats.tuples_retained_peak >= 1


class TestDominanceChain:
    def test_ordering_on_random_instances(self):
        for seed in range(100):
            dag, platform = small_instance(seed)
            b2 = new_b_2(dag, platform)
            b1 = new_b_1(dag, platform)
            b0 = old_b(dag, platform)
            assert b2 <= b1 <= b0

    def test_self_sustainability_of_new_bounds(self):
        for seed in range(20):
            dag, platform = small_instance(seed)
            for s in range(platform.num_types):
                prev1 = prev2 = None
                for extra in range(4):
                    counts = list(platform.core_counts)
                    counts[s] += extra
                    grown = Platform(tuple(counts))
                    b1, b2 = new_b_1(dag, grown), new_b_2(dag, grown)
                    if prev1 is not None:
                        assert b1 <= prev1 and b2 <= prev2
                    prev1, prev2 = b1, b2


class TestAnalyze:
    def test_reference_report(self):
        dag = normalize(example2_graph())
        report = analyze(dag, Platform((2, 3)))
        assert report.old_b == Fraction(59, 2)
        assert report.new_b_2 <= report.new_b_1 <= report.old_b
        assert report.tuples_generated > 0
        assert set(report.durations_ns) == {"old_b", "new_b_1", "new_b_2"}

    def test_disable_new_b_2(self):
        dag = normalize(example2_graph())
        report = analyze(dag, Platform((2, 3)),
                         AnalysisOptions(compute_new_b_2=False))
        assert report.new_b_2 is None
        assert report.tightest == report.new_b_1

    def test_path_counting(self):
        report = analyze(diamond(), Platform((2,)),
                         AnalysisOptions(count_paths=True))
        assert report.complete_path_count == 2
