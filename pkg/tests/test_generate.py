import random
from fractions import Fraction

import pytest

from typedsched.bounds import new_b_2
from typedsched.generate import (
    CnfInstance,
    GenConfig,
    TooManyVariables,
    gen_dag,
    gen_instance,
    gen_platform,
    parse_dimacs,
    random_cnf,
    sat_brute_force,
    sat_reduction,
    uunifast,
)
from typedsched.graph import normalize, reachability, validate, vol


class TestUunifast:
    def test_single_slot(self):
        assert uunifast(1, Fraction(1, 2), 0) == [Fraction(1, 2)]

    def test_sum_and_positivity(self):
        values = uunifast(5, Fraction(2), 7)
        assert len(values) == 5
        assert sum(values) == 2
        assert all(v > 0 for v in values)

    def test_deterministic_per_seed(self):
        assert uunifast(8, Fraction(100), 42) == uunifast(8, Fraction(100), 42)
        assert uunifast(8, Fraction(100), 42) != uunifast(8, Fraction(100), 43)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            uunifast(0, Fraction(1), 0)
        with pytest.raises(ValueError):
            uunifast(3, Fraction(0), 0)


class TestGenDag:
    def _cfg(self, **kw):
        base = dict(vertex_range=(8, 15), type_count_range=(2, 3),
                    cores_range=(1, 4), pr_range=(0.2, 0.4),
                    utilization_range=(0.5, 2.0), seed=0)
        base.update(kw)
        return GenConfig(**base)

    def test_valid_and_normalized(self):
        for seed in range(20):
            dag = gen_dag(self._cfg(seed=seed))
            validate(dag)
            assert dag.is_normalized

    def test_pr_zero_all_independent(self):
        dag = gen_dag(self._cfg(pr_range=(0.0, 0.0), vertex_range=(10, 10)))
        reach = reachability(dag)
        for u in range(10):
            for v in range(10):
                if u != v:
                    assert not reach.is_ancestor(u, v)

    def test_pr_one_fully_sequential(self):
        dag = gen_dag(self._cfg(pr_range=(1.0, 1.0), vertex_range=(8, 8)))
        reach = reachability(dag)
        # every pair of real vertices is ordered: behaves as a chain
        for u in range(8):
            for v in range(u + 1, 8):
                assert reach.is_ancestor(u, v)

    def test_total_wcet_follows_utilization(self):
        cfg = self._cfg(utilization_range=(1.5, 1.5))
        dag = gen_dag(cfg)
        assert vol(dag) == Fraction(3, 2) * cfg.period


class TestGenPlatform:
    def test_degenerate_ranges(self):
        cfg = GenConfig(type_count_range=(1, 1), cores_range=(1, 1))
        assert gen_platform(cfg).core_counts == (1,)

    def test_default_ranges(self):
        for seed in range(10):
            platform = gen_platform(GenConfig(seed=seed))
            assert 5 <= platform.num_types <= 10
            assert all(2 <= m <= 11 for m in platform.core_counts)

    def test_deterministic(self):
        cfg = GenConfig(seed=5)
        assert gen_platform(cfg) == gen_platform(cfg)


class TestGenInstance:
    def test_type_consistency(self):
        for seed in range(10):
            dag, platform = gen_instance(GenConfig(
                vertex_range=(10, 20), type_count_range=(2, 4), seed=seed))
            assert all(t < platform.num_types for t in dag.types)


class TestCnf:
    def test_clause_arity_enforced(self):
        with pytest.raises(ValueError):
            CnfInstance(2, (((0, True), (1, False)),))

    def test_variable_range_enforced(self):
        with pytest.raises(ValueError):
            CnfInstance(1, (((0, True), (1, True), (0, False)),))

    def test_parse_dimacs(self):
        cnf = parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n")
        assert cnf.n == 3 and cnf.m == 2
        assert cnf.clauses[0] == ((0, True), (1, False), (2, True))

    def test_random_cnf_never_tautological(self, rng):
        for _ in range(50):
            cnf = random_cnf(3, 5, rng)
            for clause in cnf.clauses:
                assert not any((var, not pol) in clause for var, pol in clause)


class TestSatBruteForce:
    def test_empty_is_satisfiable(self):
        assert sat_brute_force(CnfInstance(1, ()))

    def test_contradiction(self):
        cnf = CnfInstance(1, (((0, True),) * 3, ((0, False),) * 3))
        assert not sat_brute_force(cnf)

    def test_figure_style_instance(self):
        # 4 clauses over 3 variables, satisfiable by x1=1, x2=0
        clauses = (
            ((0, True), (1, False), (2, True)),
            ((0, True), (1, False), (2, False)),
            ((0, True), (1, True), (2, False)),
            ((0, False), (1, False), (2, True)),
        )
        assert sat_brute_force(CnfInstance(3, clauses))

    def test_too_many_variables(self):
        with pytest.raises(TooManyVariables):
            sat_brute_force(CnfInstance(21, ()))


class TestSatReduction:
    def _figure_cnf(self):
        return CnfInstance(3, (
            ((0, True), (1, False), (2, True)),
            ((0, True), (1, False), (2, False)),
            ((0, True), (1, True), (2, False)),
            ((0, False), (1, False), (2, True)),
        ))

    def test_structure(self):
        cnf = self._figure_cnf()
        dag, platform, threshold = sat_reduction(cnf)
        assert platform.core_counts == (1,) * 5
        assert threshold == 8
        # spine of n+1 unit vertices of type 0 plus m unit clause vertices
        unit_type0 = [v for v in range(dag.num_vertices)
                      if dag.types[v] == 0 and dag.wcets[v] == 1]
        assert len(unit_type0) == 4
        clause_vertices = [v for v in range(dag.num_vertices)
                           if dag.types[v] > 0 and dag.wcets[v] == 1]
        assert len(clause_vertices) == 4
        validate(dag)

    def test_vertex_count_bound(self, rng):
        for _ in range(20):
            cnf = random_cnf(rng.randint(1, 4), rng.randint(1, 6), rng)
            dag, _, _ = sat_reduction(cnf)
            assert dag.num_vertices <= cnf.m + cnf.n + 1 + 2 * cnf.n * cnf.m

    def test_unsatisfiable_bound_below_threshold(self):
        cnf = CnfInstance(1, (((0, True),) * 3, ((0, False),) * 3))
        assert not sat_brute_force(cnf)
        dag, platform, threshold = sat_reduction(cnf)
        assert threshold == 4
        assert new_b_2(normalize(dag), platform) <= threshold

    def test_iff_property_and_band(self, rng):
        for _ in range(40):
            cnf = random_cnf(rng.randint(1, 4), rng.randint(1, 6), rng)
            dag, platform, threshold = sat_reduction(cnf)
            bound = new_b_2(normalize(dag), platform)
            if sat_brute_force(cnf):
                assert threshold < bound <= threshold + 1
            else:
                assert bound <= threshold
