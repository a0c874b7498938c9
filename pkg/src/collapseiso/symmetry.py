"""Regularity and symmetry classifiers: cheap pattern-based tests (the
conjecture hypotheses) next to the exact oracle-verified definitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .engine import Constraint, EngineConfig, gi_constrained
from .graphs import Graph, edge_degree, nailed_graph
from .oracle import oracle_iso
from .tomography import (
    all_tomography_keys,
    nailed_pattern_key,
    pattern_arc,
)


def is_vertex_regular(g: Graph) -> bool:
    return len({len(g.adj[v]) for v in range(g.n)}) <= 1


def is_edge_regular(g: Graph) -> bool:
    return len({edge_degree(g, u, v) for u, v in g.edges()}) <= 1


def is_vertex_indistinguishable(g: Graph, strong: bool = False) -> bool:
    """All per-vertex tomographies match; with strong=True, all nailed
    patterns match instead (the stricter reading of the definition)."""
    keys = all_tomography_keys(g)
    if not strong:
        return len(set(keys)) <= 1
    pats = {nailed_pattern_key(g, (v,), keys) for v in range(g.n)}
    return len(pats) <= 1


def _constrained_nailed_iso(g, nails_a, nails_b, budget, config, ordered=True):
    """Isomorphism of the two nailed graphs (reachable components) under the
    nail constraint, oracle-verified below the vertex budget."""
    na = nailed_graph(g, nails_a)
    nb = nailed_graph(g, nails_b)
    if na.graph.n != nb.graph.n or na.graph.m != nb.graph.m:
        return False
    fa = tuple(na.local(v) for v in nails_a)
    fb = tuple(nb.local(v) for v in nails_b)
    pairings = [tuple(zip(fa, fb))]
    if not ordered and len(fa) == 2:
        pairings.append(tuple(zip(fa, (fb[1], fb[0]))))
    for forced in pairings:
        if na.graph.n <= budget:
            if oracle_iso(na.graph, nb.graph, forced=forced) is not None:
                return True
        else:
            out = gi_constrained(na.graph, nb.graph, Constraint(forced), config=config)
            if out.is_iso:
                return True
    return False


def is_vertex_symmetric_exact(
    g: Graph, budget: int = 64, config: Optional[EngineConfig] = None
) -> tuple[bool, Optional[tuple[int, int]]]:
    """All constrained nailed-graph isomorphisms hold.  The witness, when
    present, is the lexicographically first failing vertex pair."""
    for j in range(1, g.n):
        if not _constrained_nailed_iso(g, (0,), (j,), budget, config):
            return False, (0, j)
    return True, None


def is_edge_symmetric_exact(
    g: Graph, budget: int = 64, config: Optional[EngineConfig] = None
) -> tuple[bool, Optional[tuple]]:
    es = g.edges()
    for k in range(1, len(es)):
        if not _constrained_nailed_iso(g, es[0], es[k], budget, config, ordered=False):
            return False, (es[0], es[k])
    return True, None


def _arcs(g: Graph) -> list[tuple[int, int]]:
    out = []
    for u, v in g.edges():
        out.append((u, v))
        out.append((v, u))
    return sorted(out)


def is_arc_symmetric_exact(
    g: Graph, budget: int = 64, config: Optional[EngineConfig] = None
) -> tuple[bool, Optional[tuple]]:
    arcs = _arcs(g)
    for k in range(1, len(arcs)):
        if not _constrained_nailed_iso(g, arcs[0], arcs[k], budget, config, ordered=True):
            return False, (arcs[0], arcs[k])
    return True, None


def pattern_symmetry_tests(g: Graph) -> dict[str, bool]:
    """Match-based symmetry flags: the hypotheses of the three symmetry
    conjectures, no oracle involved."""
    keys = all_tomography_keys(g)
    vertex = len(set(keys)) <= 1
    edge = len({nailed_pattern_key(g, e, keys) for e in g.edges()}) <= 1
    arc = len({pattern_arc(g, u, v).key for u, v in _arcs(g)}) <= 1
    return {"vertex": vertex, "edge": edge, "arc": arc}


@dataclass(frozen=True)
class SymmetryReport:
    vertex_regular: bool
    edge_regular: bool
    vertex_indistinguishable: bool
    pattern_vertex_symmetric: bool
    pattern_edge_symmetric: bool
    pattern_arc_symmetric: bool
    vertex_symmetric: Optional[bool] = None
    edge_symmetric: Optional[bool] = None
    arc_symmetric: Optional[bool] = None
    witnesses: dict = None

    def to_jsonable(self) -> dict:
        d = {
            "vertex_regular": self.vertex_regular,
            "edge_regular": self.edge_regular,
            "vertex_indistinguishable": self.vertex_indistinguishable,
            "pattern": {
                "vertex_symmetric": self.pattern_vertex_symmetric,
                "edge_symmetric": self.pattern_edge_symmetric,
                "arc_symmetric": self.pattern_arc_symmetric,
            },
            "exact": {
                "vertex_symmetric": self.vertex_symmetric,
                "edge_symmetric": self.edge_symmetric,
                "arc_symmetric": self.arc_symmetric,
            },
            "witnesses": {k: list(v) for k, v in (self.witnesses or {}).items()},
        }
        return d


def classify(
    g: Graph,
    exact_budget: int = 64,
    with_exact: bool = True,
    config: Optional[EngineConfig] = None,
) -> SymmetryReport:
    if with_exact and g.n > exact_budget:
        raise SearchBudgetError(g.n, exact_budget)
    flags = pattern_symmetry_tests(g)
    vs = es = ar = None
    witnesses = {}
    if with_exact:
        vs, wv = is_vertex_symmetric_exact(g, exact_budget, config)
        es, we = is_edge_symmetric_exact(g, exact_budget, config)
        ar, wa = is_arc_symmetric_exact(g, exact_budget, config)
        if wv:
            witnesses["vertex"] = wv
        if we:
            witnesses["edge"] = we
        if wa:
            witnesses["arc"] = wa
    return SymmetryReport(
        vertex_regular=is_vertex_regular(g),
        edge_regular=is_edge_regular(g),
        vertex_indistinguishable=is_vertex_indistinguishable(g),
        pattern_vertex_symmetric=flags["vertex"],
        pattern_edge_symmetric=flags["edge"],
        pattern_arc_symmetric=flags["arc"],
        vertex_symmetric=vs,
        edge_symmetric=es,
        arc_symmetric=ar,
        witnesses=witnesses,
    )


class SearchBudgetError(Exception):
    def __init__(self, n, budget):
        super().__init__(f"exact symmetry checks need n <= {budget}, got {n}")
        self.n = n
        self.budget = budget
