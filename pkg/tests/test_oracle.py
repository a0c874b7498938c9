import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from collapseiso.graphs import Graph, GraphError, complement, permute
from collapseiso.oracle import (
    BudgetExceeded,
    SearchBudget,
    dedup_graphs,
    enumerate_nonisomorphic,
    oracle_automorphisms,
    oracle_iso,
)
from test_graphs import complete, cycle, graphs, path


class TestOracleIso:
    def test_cycle_vs_two_triangles(self):
        g = cycle(6)
        h = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        assert oracle_iso(g, h) is None

    def test_permuted_pair_found_and_valid(self):
        g = Graph(6, [(0, 1), (1, 2), (2, 3), (0, 3), (1, 4), (4, 5)])
        pi = [3, 0, 5, 1, 4, 2]
        h = permute(g, pi)
        found = oracle_iso(g, h)
        assert found is not None
        assert all(h.has_edge(found[u], found[v]) for u, v in g.edges())

    def test_impossible_forced_pair(self):
        g = path(3)
        # forcing an endpoint onto the middle vertex kills every candidate
        assert oracle_iso(g, g, forced=[(0, 1)]) is None

    def test_forbidden_pairs_respected(self):
        g = complete(3)
        forb = [(0, 0), (0, 1)]
        found = oracle_iso(g, g, forbidden=forb)
        assert found is not None and found[0] == 2

    def test_identity_always_found(self):
        g = Graph(4, [(0, 1), (2, 3)])
        assert oracle_iso(g, g) is not None

    def test_conflicting_constraints_rejected(self):
        with pytest.raises(GraphError):
            oracle_iso(complete(3), complete(3), forced=[(0, 0)], forbidden=[(0, 0)])

    def test_budget_exceeded_raises(self):
        g = complete(7)
        with pytest.raises(BudgetExceeded):
            oracle_iso(g, g, forbidden=[(v, v) for v in range(7)],
                       budget=SearchBudget(max_nodes=3))


class TestAutomorphisms:
    def test_complete_counts(self):
        # nontrivial automorphisms of K_n: n! - 1
        for n in range(2, 7):
            count, _ = oracle_automorphisms(complete(n))
            assert count - 1 == math.factorial(n) - 1

    def test_path_swap(self):
        count, autos = oracle_automorphisms(path(3), want_list=True)
        assert count == 2
        assert tuple(range(3)) in autos

    def test_cycle_dihedral(self):
        count, _ = oracle_automorphisms(cycle(5))
        assert count == 10

    def test_complement_preserves_count(self):
        for g in enumerate_nonisomorphic(4):
            a, _ = oracle_automorphisms(g)
            b, _ = oracle_automorphisms(complement(g))
            assert a == b


class TestEnumeration:
    def test_small_counts(self):
        assert [len(enumerate_nonisomorphic(n)) for n in range(0, 6)] == [0, 1, 2, 4, 11, 34]

    def test_pairwise_nonisomorphic(self):
        gs = enumerate_nonisomorphic(4)
        for i in range(len(gs)):
            for j in range(i + 1, len(gs)):
                assert oracle_iso(gs[i], gs[j]) is None

    def test_dedup_keeps_first_representative(self):
        g = cycle(4)
        h = permute(g, [2, 3, 0, 1])
        out = dedup_graphs([g, h, path(2)])
        assert out[0] is g and len(out) == 2


@given(graphs(max_n=6), st.randoms())
@settings(max_examples=40, deadline=None)
def test_oracle_finds_constructed_isomorphism(g, rnd):
    pi = list(range(g.n))
    rnd.shuffle(pi)
    h = permute(g, pi)
    found = oracle_iso(g, h)
    assert found is not None
    assert all(h.has_edge(found[u], found[v]) for u, v in g.edges())
