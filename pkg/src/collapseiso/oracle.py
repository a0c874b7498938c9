"""Ground truth by exhaustive pruned backtracking: constrained isomorphism,
automorphism counting, and small-graph enumeration with deduplication."""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .graphs import Graph, GraphError
from .tomography import all_tomography_keys


class BudgetExceeded(Exception):
    """Search stopped before exhausting the space; never a false No."""


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: Optional[int] = None
    max_seconds: Optional[float] = None


def _check_constraints(forced, forbidden, n1, n2):
    seen_a, seen_b = {}, {}
    for a, b in forced:
        if not (0 <= a < n1 and 0 <= b < n2):
            raise GraphError(f"constraint pair ({a}, {b}) out of range")
        if seen_a.setdefault(a, b) != b or seen_b.setdefault(b, a) != a:
            raise GraphError("forced pairs do not form a partial bijection")
    fset = set(forced)
    for a, b in forbidden:
        if (a, b) in fset:
            raise GraphError(f"pair ({a}, {b}) both forced and forbidden")


class _Search:
    def __init__(self, g, h, forced, forbidden, budget):
        self.g, self.h = g, h
        self.budget = budget or SearchBudget()
        self.nodes = 0
        self.t0 = time.monotonic()
        # candidate sets: same degree, same tomography key, not forbidden
        kg = all_tomography_keys(g)
        kh = all_tomography_keys(h)
        forb = set(forbidden)
        self.cands = []
        for v in range(g.n):
            cs = [u for u in range(h.n) if kh[u] == kg[v] and (v, u) not in forb]
            self.cands.append(cs)
        for a, b in forced:
            self.cands[a] = [b] if b in self.cands[a] else []
        self.order = sorted(range(g.n), key=lambda v: (len(self.cands[v]), v))

    def _tick(self):
        self.nodes += 1
        b = self.budget
        if b.max_nodes is not None and self.nodes > b.max_nodes:
            raise BudgetExceeded(f"node budget {b.max_nodes} exceeded")
        if b.max_seconds is not None and self.nodes % 256 == 0:
            if time.monotonic() - self.t0 > b.max_seconds:
                raise BudgetExceeded(f"time budget {b.max_seconds}s exceeded")

    def run(self, count_all=False, collect=None):
        """Backtrack over candidate maps; returns first bijection, or the
        number of bijections when count_all is set."""
        g, h = self.g, self.h
        mapping = [-1] * g.n
        used = [False] * h.n
        found = [0]

        def rec(i):
            self._tick()
            if i == g.n:
                found[0] += 1
                if collect is not None:
                    collect.append(tuple(mapping))
                return None if count_all else tuple(mapping)
            v = self.order[i]
            gs = g.neighbor_set(v)
            for u in self.cands[v]:
                if used[u]:
                    continue
                ok = True
                for w in range(g.n):
                    mw = mapping[w]
                    if mw >= 0 and ((w in gs) != h.has_edge(mw, u)):
                        ok = False
                        break
                if not ok:
                    continue
                mapping[v] = u
                used[u] = True
                res = rec(i + 1)
                mapping[v] = -1
                used[u] = False
                if res is not None and not count_all:
                    return res
            return None

        res = rec(0)
        return found[0] if count_all else res


def oracle_iso(
    g: Graph,
    h: Graph,
    forced: Iterable[tuple[int, int]] = (),
    forbidden: Iterable[tuple[int, int]] = (),
    budget: Optional[SearchBudget] = None,
) -> Optional[tuple[int, ...]]:
    """A bijection respecting the constraints, or None by exhaustion."""
    forced = tuple(forced)
    forbidden = tuple(forbidden)
    _check_constraints(forced, forbidden, g.n, h.n)
    if g.n != h.n or g.m != h.m:
        return None
    return _Search(g, h, forced, forbidden, budget).run()


def oracle_automorphisms(
    g: Graph,
    forced: Iterable[tuple[int, int]] = (),
    forbidden: Iterable[tuple[int, int]] = (),
    budget: Optional[SearchBudget] = None,
    want_list: bool = False,
) -> tuple[int, Optional[list[tuple[int, ...]]]]:
    """Total automorphism count (identity included) and, on request, the
    full list."""
    forced = tuple(forced)
    forbidden = tuple(forbidden)
    _check_constraints(forced, forbidden, g.n, g.n)
    collect: Optional[list] = [] if want_list else None
    count = _Search(g, g, forced, forbidden, budget).run(count_all=True, collect=collect)
    return count, collect


def _all_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def dedup_graphs(graphs: Iterable[Graph], budget: Optional[SearchBudget] = None) -> list[Graph]:
    """One representative per isomorphism class, in input order."""
    buckets: dict[tuple, list[Graph]] = {}
    out = []
    for g in graphs:
        sig = (g.n, g.m, tuple(sorted(all_tomography_keys(g))))
        reps = buckets.setdefault(sig, [])
        if not any(oracle_iso(g, r, budget=budget) is not None for r in reps):
            reps.append(g)
            out.append(g)
    return out


def enumerate_nonisomorphic(n: int, budget: Optional[SearchBudget] = None) -> list[Graph]:
    """Exactly one representative per isomorphism class on n labeled
    vertices, deterministically ordered by adjacency-mask enumeration."""
    if n <= 0:
        return []
    return dedup_graphs(_all_graphs(n), budget=budget)
