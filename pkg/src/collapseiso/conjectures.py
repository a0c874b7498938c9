"""Counterexample search for the five pattern conjectures over enumerated
small-graph corpora, with machine-readable, seed-deterministic reports."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .graphs import Graph, emit_graph6, nailed_graph, parse_graph6
from .oracle import oracle_iso, enumerate_nonisomorphic, dedup_graphs
from .symmetry import (
    is_arc_symmetric_exact,
    is_edge_symmetric_exact,
    is_vertex_indistinguishable,
    is_vertex_symmetric_exact,
)
from .tomography import (
    all_tomography_keys,
    digest,
    key_bytes,
    key_mset,
    nailed_pattern_key,
    pattern_arc,
)

CONJECTURE_NAMES = {
    1: "iso-pat",
    2: "nail-iso-pat",
    3: "sym-pat",
    4: "edge-sym-pat",
    5: "arc-sym-pat",
}


class LemmaViolation(RuntimeError):
    """A proven implication failed on a corpus graph: implementation bug."""


@dataclass
class ConjectureReport:
    conjecture_id: int
    name: str
    corpus: dict
    checked: int
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0
    seed: int = 0
    extras: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {
            "id": self.conjecture_id,
            "name": self.name,
            "corpus": self.corpus,
            "checked": self.checked,
            "counterexamples": self.counterexamples,
            "seconds": round(self.seconds, 3),
            "seed": self.seed,
            "extras": self.extras,
        }

    def summary_line(self) -> str:
        return (
            f"conjecture {self.conjecture_id} ({self.name}): "
            f"{self.checked} instances checked, "
            f"{len(self.counterexamples)} counterexamples, "
            f"{self.seconds:.2f}s"
        )


_corpus_cache: dict[int, list[Graph]] = {}


def graphs_of_order(n: int) -> list[Graph]:
    if n not in _corpus_cache:
        _corpus_cache[n] = enumerate_nonisomorphic(n)
    return _corpus_cache[n]


def build_corpus(
    n_min: int = 1,
    n_max: int = 5,
    files: Sequence[str] = (),
) -> list[Graph]:
    """Enumerated isomorphism-class representatives plus any externally
    supplied graph6 corpora, deduplicated, in deterministic order."""
    graphs: list[Graph] = []
    for n in range(n_min, n_max + 1):
        graphs.extend(graphs_of_order(n))
    extra = []
    for path in files:
        with open(path, "rb") as fh:
            for line in fh.read().splitlines():
                line = line.strip()
                if line:
                    extra.append(parse_graph6(line))
    if extra:
        graphs = dedup_graphs(graphs + extra)
    return graphs


def _corpus_descriptor(graphs: Sequence[Graph], files=()) -> dict:
    ns = [g.n for g in graphs] or [0]
    return {
        "n_min": min(ns),
        "n_max": max(ns),
        "count": len(graphs),
        "files": list(files),
    }


def _nailed_constrained_iso(g, nails_g, h, nails_h, ordered=True) -> bool:
    na = nailed_graph(g, nails_g)
    nb = nailed_graph(h, nails_h)
    if na.graph.n != nb.graph.n:
        return False
    fa = tuple(na.local(v) for v in nails_g)
    fb = tuple(nb.local(v) for v in nails_h)
    pairings = [tuple(zip(fa, fb))]
    if not ordered and len(fa) == 2:
        pairings.append(tuple(zip(fa, (fb[1], fb[0]))))
    return any(
        oracle_iso(na.graph, nb.graph, forced=forced) is not None for forced in pairings
    )


def check_conjecture_1(graphs: Sequence[Graph], seed: int = 0) -> ConjectureReport:
    """Matching normal collapse patterns must imply isomorphism."""
    t0 = time.monotonic()
    rep = ConjectureReport(1, CONJECTURE_NAMES[1], _corpus_descriptor(graphs), 0, seed=seed)
    keys = [
        digest(key_mset(key_bytes(k) for k in all_tomography_keys(g))) for g in graphs
    ]
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            rep.checked += 1
            if keys[i] != keys[j]:
                continue
            if oracle_iso(graphs[i], graphs[j]) is None:
                rep.counterexamples.append(
                    {
                        "graphs": [
                            emit_graph6(graphs[i]).decode(),
                            emit_graph6(graphs[j]).decode(),
                        ],
                        "witness": "patterns match, exhaustive search finds no bijection",
                    }
                )
    rep.seconds = time.monotonic() - t0
    return rep


def check_conjecture_2(graphs: Sequence[Graph], seed: int = 0) -> ConjectureReport:
    """Matching nailed patterns must imply constrained isomorphism of the
    nailed graphs."""
    t0 = time.monotonic()
    rep = ConjectureReport(2, CONJECTURE_NAMES[2], _corpus_descriptor(graphs), 0, seed=seed)
    tomkeys = [all_tomography_keys(g) for g in graphs]
    nkeys = [
        [nailed_pattern_key(g, (v,), tomkeys[i]) for v in range(g.n)]
        for i, g in enumerate(graphs)
    ]
    for i in range(len(graphs)):
        for j in range(i, len(graphs)):
            for va in range(graphs[i].n):
                for vb in range(graphs[j].n):
                    if i == j and vb <= va:
                        continue
                    rep.checked += 1
                    if nkeys[i][va] != nkeys[j][vb]:
                        continue
                    if not _nailed_constrained_iso(graphs[i], (va,), graphs[j], (vb,)):
                        rep.counterexamples.append(
                            {
                                "graphs": [
                                    emit_graph6(graphs[i]).decode(),
                                    emit_graph6(graphs[j]).decode(),
                                ],
                                "nails": [va, vb],
                                "witness": "nailed patterns match, constrained search refutes",
                            }
                        )
    rep.seconds = time.monotonic() - t0
    return rep


def check_conjecture_3(
    graphs: Sequence[Graph], seed: int = 0, budget: int = 64
) -> ConjectureReport:
    """Equal tomographies everywhere must imply exact vertex symmetry."""
    t0 = time.monotonic()
    rep = ConjectureReport(3, CONJECTURE_NAMES[3], _corpus_descriptor(graphs), 0, seed=seed)
    divergent = 0
    for g in graphs:
        rep.checked += 1
        hyp = is_vertex_indistinguishable(g)
        exact, wit = is_vertex_symmetric_exact(g, budget)
        if exact and not hyp:
            raise LemmaViolation(
                f"vertex symmetric graph with unequal tomographies: {emit_graph6(g)!r}"
            )
        if hyp != is_vertex_indistinguishable(g, strong=True):
            divergent += 1
        if hyp and not exact:
            rep.counterexamples.append(
                {
                    "graphs": [emit_graph6(g).decode()],
                    "witness": f"tomographies all match, vertex pair {wit} not exchangeable",
                }
            )
    rep.extras["tomography_vs_nailed_pattern_divergences"] = divergent
    rep.seconds = time.monotonic() - t0
    return rep


def check_conjecture_4(
    graphs: Sequence[Graph], seed: int = 0, budget: int = 64
) -> ConjectureReport:
    """Equal edge-nailed patterns everywhere must imply edge symmetry."""
    t0 = time.monotonic()
    rep = ConjectureReport(4, CONJECTURE_NAMES[4], _corpus_descriptor(graphs), 0, seed=seed)
    for g in graphs:
        rep.checked += 1
        keys = all_tomography_keys(g)
        hyp = len({nailed_pattern_key(g, e, keys) for e in g.edges()}) <= 1
        exact, wit = is_edge_symmetric_exact(g, budget)
        if exact and not hyp:
            raise LemmaViolation(
                f"edge symmetric graph with unequal edge patterns: {emit_graph6(g)!r}"
            )
        if hyp and not exact:
            rep.counterexamples.append(
                {
                    "graphs": [emit_graph6(g).decode()],
                    "witness": f"edge patterns all match, edge pair {wit} not exchangeable",
                }
            )
    rep.seconds = time.monotonic() - t0
    return rep


def check_conjecture_5(
    graphs: Sequence[Graph], seed: int = 0, budget: int = 64
) -> ConjectureReport:
    """Equal arc patterns everywhere must imply arc symmetry."""
    t0 = time.monotonic()
    rep = ConjectureReport(5, CONJECTURE_NAMES[5], _corpus_descriptor(graphs), 0, seed=seed)
    for g in graphs:
        rep.checked += 1
        arcs = []
        for u, v in g.edges():
            arcs.append((u, v))
            arcs.append((v, u))
        hyp = len({pattern_arc(g, u, v).key for u, v in arcs}) <= 1
        exact, wit = is_arc_symmetric_exact(g, budget)
        if exact and not hyp:
            raise LemmaViolation(
                f"arc symmetric graph with unequal arc patterns: {emit_graph6(g)!r}"
            )
        if hyp and not exact:
            rep.counterexamples.append(
                {
                    "graphs": [emit_graph6(g).decode()],
                    "witness": f"arc patterns all match, arc pair {wit} not exchangeable",
                }
            )
    rep.seconds = time.monotonic() - t0
    return rep


def check_random_pairs(
    count: int, n: int = 12, seed: int = 0
) -> ConjectureReport:
    """Spot-check of the iso-pat direction on random same-size pairs."""
    t0 = time.monotonic()
    rng = random.Random(seed)
    rep = ConjectureReport(
        1, "iso-pat-random", {"n_min": n, "n_max": n, "count": count, "files": []}, 0, seed=seed
    )
    for _ in range(count):
        g = _random_graph(rng, n)
        h = _random_graph(rng, n)
        rep.checked += 1
        kg = digest(key_mset(key_bytes(k) for k in all_tomography_keys(g)))
        kh = digest(key_mset(key_bytes(k) for k in all_tomography_keys(h)))
        if kg != kh:
            continue
        if oracle_iso(g, h) is None:
            rep.counterexamples.append(
                {
                    "graphs": [emit_graph6(g).decode(), emit_graph6(h).decode()],
                    "witness": "patterns match, exhaustive search finds no bijection",
                }
            )
    rep.seconds = time.monotonic() - t0
    return rep


def _random_graph(rng: random.Random, n: int, p: float = 0.4) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph(n, edges)


_CHECKS = {
    1: check_conjecture_1,
    2: check_conjecture_2,
    3: lambda graphs, seed=0: check_conjecture_3(graphs, seed),
    4: lambda graphs, seed=0: check_conjecture_4(graphs, seed),
    5: lambda graphs, seed=0: check_conjecture_5(graphs, seed),
}


def _run_one(args):
    cid, graphs, seed = args
    return _CHECKS[cid](graphs, seed=seed)


def run_suite(
    n_max: int = 5,
    ids: Iterable[int] = (1, 2, 3, 4, 5),
    corpus_files: Sequence[str] = (),
    jobs: int = 1,
    seed: int = 0,
    random_pairs: int = 0,
    random_n: int = 12,
) -> list[ConjectureReport]:
    ids = sorted(set(ids))
    for cid in ids:
        if cid not in _CHECKS:
            raise ValueError(f"unknown conjecture id {cid}")
    graphs = build_corpus(1, n_max, corpus_files) if n_max >= 1 else list(
        build_corpus(1, 0, corpus_files)
    )
    tasks = [(cid, graphs, seed) for cid in ids]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, tasks))
    else:
        reports = [_run_one(t) for t in tasks]
    for rep in reports:
        rep.corpus["files"] = list(corpus_files)
    if random_pairs:
        reports.append(check_random_pairs(random_pairs, random_n, seed))
    return reports


def reverify_counterexample(cid: int, entry: dict) -> bool:
    """Feed a reported counterexample back standalone: the hypothesis must
    still match and the oracle must still refute the conclusion."""
    graphs = [parse_graph6(s) for s in entry["graphs"]]
    if cid == 1:
        g, h = graphs
        kg = digest(key_mset(key_bytes(k) for k in all_tomography_keys(g)))
        kh = digest(key_mset(key_bytes(k) for k in all_tomography_keys(h)))
        return kg == kh and oracle_iso(g, h) is None
    if cid == 2:
        g, h = graphs
        va, vb = entry["nails"]
        ka = nailed_pattern_key(g, (va,), all_tomography_keys(g))
        kb = nailed_pattern_key(h, (vb,), all_tomography_keys(h))
        return ka == kb and not _nailed_constrained_iso(g, (va,), h, (vb,))
    (g,) = graphs
    if cid == 3:
        return is_vertex_indistinguishable(g) and not is_vertex_symmetric_exact(g)[0]
    if cid == 4:
        keys = all_tomography_keys(g)
        hyp = len({nailed_pattern_key(g, e, keys) for e in g.edges()}) <= 1
        return hyp and not is_edge_symmetric_exact(g)[0]
    if cid == 5:
        arcs = [(u, v) for u, v in g.edges()] + [(v, u) for u, v in g.edges()]
        hyp = len({pattern_arc(g, u, v).key for u, v in arcs}) <= 1
        return hyp and not is_arc_symmetric_exact(g)[0]
    raise ValueError(f"unknown conjecture id {cid}")
