import itertools
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from collapseiso.engine import (
    Constraint,
    EngineConfig,
    extract_mapping,
    gi,
    gi_constrained,
    gi_labeled,
    gi_multigraph,
    verify_mapping,
)
from collapseiso.graphs import Graph, MultigraphData, complement, permute
from collapseiso.oracle import enumerate_nonisomorphic, oracle_iso
from test_graphs import complete, cycle, graphs, path, star

TWO_TRIANGLES = Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])


class TestGi:
    def test_permuted_cycle_yes_certified(self):
        g = cycle(5)
        h = permute(g, [2, 4, 0, 3, 1])
        out = gi(g, h)
        assert out.verdict == "yes" and out.certified
        assert verify_mapping(g, h, out.mapping)

    def test_cycle_vs_two_triangles_no(self):
        out = gi(cycle(6), TWO_TRIANGLES)
        assert out.verdict == "no"
        assert out.witness is not None
        assert out.witness.kind in ("tomography-mismatch", "pattern-mismatch", "component-mismatch")

    def test_complete_self(self):
        out = gi(complete(4), complete(4))
        assert out.verdict == "yes" and out.certified

    def test_size_mismatch(self):
        assert gi(complete(3), complete(4)).verdict == "no"

    def test_self_iso_on_corpus(self):
        for g in enumerate_nonisomorphic(4):
            assert gi(g, g).verdict == "yes"

    def test_symmetric_in_arguments(self):
        g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)])
        h = permute(g, [4, 2, 0, 1, 3])
        a, b = gi(g, h), gi(h, g)
        assert a.verdict == b.verdict == "yes"

    def test_dual_reduction_lemma(self):
        # verdict must survive complementation on all same-size pairs, n <= 5
        corpus = [g for n in range(1, 6) for g in enumerate_nonisomorphic(n)]
        for g, h in itertools.combinations(corpus, 2):
            if g.n != h.n:
                continue
            assert gi(g, h).is_iso == gi(complement(g), complement(h)).is_iso


class TestOracleAgreement:
    def test_all_pairs_small_corpus(self):
        corpus = [g for n in range(1, 6) for g in enumerate_nonisomorphic(n)]
        for g, h in itertools.product(corpus, repeat=2):
            if g.n != h.n:
                continue
            want = oracle_iso(g, h) is not None
            for mode in ("sound", "conjecture"):
                out = gi(g, h, EngineConfig(mode=mode))
                assert out.is_iso == want
                assert out.verdict != "disagreement"


class TestGiLabeled:
    def test_complete_label_multisets_match(self):
        g = complete(3)
        out = gi_labeled(g, g, ["l1", "l1", "l2"], ["l1", "l2", "l1"])
        assert out.verdict == "yes"

    def test_complete_label_multisets_differ(self):
        g = complete(3)
        out = gi_labeled(g, g, ["l1", "l1", "l2"], ["l1", "l2", "l2"])
        assert out.verdict == "no"

    def test_labels_constrain_mapping(self):
        g = path(3)
        out = gi_labeled(g, g, ["a", "b", "c"], ["c", "b", "a"])
        assert out.verdict == "yes"
        assert out.mapping == (2, 1, 0)

    def test_randomized_oracle_equivalence(self):
        rng = random.Random(13)
        for _ in range(150):
            n = rng.randint(2, 7)
            g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                          if rng.random() < 0.5])
            pi = list(range(n))
            rng.shuffle(pi)
            h = permute(g, pi)
            lg = [rng.randint(0, 1) for _ in range(n)]
            lh = [rng.randint(0, 1) for _ in range(n)]
            forb = [(v, u) for v in range(n) for u in range(n) if lg[v] != lh[u]]
            want = oracle_iso(g, h, forbidden=forb) is not None
            assert gi_labeled(g, h, lg, lh).is_iso == want


class TestGiConstrained:
    def test_cycle_any_nail_pair(self):
        g = cycle(5)
        for b in range(5):
            out = gi_constrained(g, g, Constraint(((0, b),)))
            assert out.verdict == "yes"
            assert out.mapping[0] == b

    def test_path_end_vs_middle(self):
        g = path(3)
        assert gi_constrained(g, g, Constraint(((0, 1),))).verdict == "no"

    def test_star_center_vs_leaf(self):
        g = star(3)
        assert gi_constrained(g, g, Constraint(((0, 1),))).verdict == "no"

    def test_forbidden_only(self):
        g = complete(3)
        out = gi_constrained(g, g, Constraint((), ((0, 0), (0, 1))))
        assert out.verdict == "yes" and out.mapping[0] == 2

    def test_randomized_oracle_equivalence(self):
        rng = random.Random(29)
        for _ in range(150):
            n = rng.randint(2, 7)
            g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                          if rng.random() < 0.5])
            h = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                          if rng.random() < 0.5])
            if g.m != h.m:
                continue
            a, b = rng.randrange(n), rng.randrange(n)
            want = oracle_iso(g, h, forced=[(a, b)]) is not None
            assert gi_constrained(g, h, Constraint(((a, b),))).is_iso == want


class TestExtractVerify:
    def test_verify_identity(self):
        g = cycle(4)
        assert verify_mapping(g, g, (0, 1, 2, 3))

    def test_verify_rejects_non_edge_preserving(self):
        g = path(3)
        assert not verify_mapping(g, g, (1, 0, 2))

    def test_verify_rejects_constraint_violation(self):
        g = complete(3)
        assert not verify_mapping(g, g, (0, 1, 2), Constraint(forbidden=((0, 0),)))

    def test_extract_unique_labels(self):
        g = path(3)
        pi = extract_mapping(g, g, [b"a", b"b", b"c"], [b"a", b"b", b"c"])
        assert pi == (0, 1, 2)

    def test_extract_complete_graph(self):
        g = complete(4)
        pi = extract_mapping(g, g)
        assert pi is not None and sorted(pi) == [0, 1, 2, 3]

    def test_extract_exhaustion_is_none(self):
        assert extract_mapping(cycle(6), TWO_TRIANGLES) is None


class TestMultigraph:
    def test_simple_passthrough(self):
        a = MultigraphData(3, ((0, 1), (1, 2)), ())
        b = MultigraphData(3, ((0, 1), (0, 2)), ())
        assert gi_multigraph(a, b).verdict == "yes"

    def test_loops_must_correspond(self):
        a = MultigraphData(3, ((0, 1), (1, 2)), (0,))
        b = MultigraphData(3, ((0, 1), (1, 2)), (1,))
        assert gi_multigraph(a, b).verdict == "no"

    def test_loop_positions_respected(self):
        a = MultigraphData(3, ((0, 1), (1, 2)), (0,))
        b = MultigraphData(3, ((0, 1), (1, 2)), (2,))
        out = gi_multigraph(a, b)
        assert out.verdict == "yes" and out.mapping[0] == 2

    def test_multiplicity_checked(self):
        a = MultigraphData(3, ((0, 1), (0, 1), (1, 2)), ())
        b = MultigraphData(3, ((0, 1), (1, 2), (1, 2)), ())
        assert gi_multigraph(a, b).verdict == "yes"
        c = MultigraphData(3, ((0, 1), (0, 2), (1, 2), (1, 2)), ())
        assert gi_multigraph(a, c).verdict == "no"


class TestModesAndWitnesses:
    def test_conjecture_mode_agrees_on_corpus(self):
        corpus = enumerate_nonisomorphic(5)
        rng = random.Random(3)
        for g in corpus:
            pi = list(range(g.n))
            rng.shuffle(pi)
            out = gi(g, permute(g, pi), EngineConfig(mode="conjecture"))
            assert out.verdict == "yes" and out.certified

    def test_no_disagreements_on_small_corpus(self):
        for g in enumerate_nonisomorphic(4):
            for h in enumerate_nonisomorphic(4):
                out = gi(g, h, EngineConfig(mode="conjecture"))
                assert out.verdict in ("yes", "no")

    def test_witness_on_edge_count_mismatch(self):
        g, h = path(3), complete(3)
        out = gi(g, h)
        assert out.verdict == "no" and out.witness is not None


@given(graphs(max_n=8), st.randoms())
@settings(max_examples=40, deadline=None)
def test_gi_yes_on_constructed_pairs(g, rnd):
    pi = list(range(g.n))
    rnd.shuffle(pi)
    h = permute(g, pi)
    out = gi(g, h)
    assert out.verdict == "yes"
    if g.n:
        assert verify_mapping(g, h, out.mapping)
