"""Label-driven isomorphism engine.

The verdict path follows the two recursive procedures: an unconstrained pass
that either takes the symmetric branch (all labeled tomographies equal) or
recurses on the rarest nailed-pattern class via extension labeling, and a
constrained pass that relabels a nailed graph layer by layer.  Every Yes is
certified by an extracted, verified bijection; every No traces back to a
tomography/pattern mismatch or an exhausted certified extraction.
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graphs import (
    Graph,
    bfs_layers,
    complement,
    components,
    extension,
    induced_subgraph,
    MultigraphData,
)
from .oracle import SearchBudget, oracle_iso
from .tomography import (
    LabelTable,
    all_tomography_keys,
    canonical_key,
    digest,
    key_bytes,
    key_int,
    key_list,
    key_mset,
    nailed_pattern_key,
    varied_pattern,
)

_UNIFORM = b""
_MASK = b"\x00mask"


class ResourceExhausted(Exception):
    """Recursion depth exceeded beyond the oracle-fallback size."""


@dataclass(frozen=True)
class Constraint:
    forced: tuple[tuple[int, int], ...] = ()
    forbidden: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class EngineConfig:
    mode: str = "sound"  # "sound" | "conjecture"
    depth_limit: Optional[int] = None  # default 2*ceil(log2 n) + 8
    pattern_variant: str = "plain"  # "plain" | "varied"
    oracle_fallback: int = 64
    randomized_anchors: bool = False
    seed: int = 0


@dataclass(frozen=True)
class Witness:
    kind: str
    detail: dict = field(default_factory=dict)

    def to_jsonable(self) -> dict:
        return {"kind": self.kind, "detail": {k: str(v) for k, v in self.detail.items()}}


@dataclass(frozen=True)
class IsoOutcome:
    verdict: str  # "yes" | "no" | "disagreement"
    mapping: Optional[tuple[int, ...]] = None
    witness: Optional[Witness] = None
    disagreements: tuple = ()
    certified: bool = False

    @property
    def is_iso(self) -> bool:
        return self.verdict == "yes"

    def to_jsonable(self) -> dict:
        return {
            "verdict": self.verdict,
            "mapping": list(self.mapping) if self.mapping is not None else None,
            "witness": self.witness.to_jsonable() if self.witness else None,
            "disagreements": [d for d in self.disagreements],
            "certified": self.certified,
        }


class _DepthExceeded(Exception):
    pass


def verify_mapping(
    g: Graph,
    h: Graph,
    pi: Sequence[int],
    constraint: Optional[Constraint] = None,
    labels_g: Optional[Sequence[bytes]] = None,
    labels_h: Optional[Sequence[bytes]] = None,
) -> bool:
    """Exact edge preservation in both directions plus constraint and label
    compliance.  O(|E|)."""
    if len(pi) != g.n or sorted(pi) != list(range(h.n)):
        return False
    if g.m != h.m:
        return False
    for u, v in g.edges():
        if not h.has_edge(pi[u], pi[v]):
            return False
    if constraint is not None:
        for a, b in constraint.forced:
            if pi[a] != b:
                return False
        for a, b in constraint.forbidden:
            if pi[a] == b:
                return False
    if labels_g is not None and labels_h is not None:
        for v in range(g.n):
            if labels_g[v] != labels_h[pi[v]]:
                return False
    return True


# ---------------------------------------------------------------------------
# extraction: individualization-refinement guided by final labels

def _refine_stable(g: Graph, h: Graph, cg: list[bytes], ch: list[bytes]):
    """Simultaneous color refinement; None when class histograms diverge."""
    while True:
        if sorted(cg) != sorted(ch):
            return None
        before = len(set(cg) | set(ch))
        cg = [
            digest(key_list((key_bytes(cg[v]), key_mset(key_bytes(cg[u]) for u in g.adj[v]))))
            for v in range(g.n)
        ]
        ch = [
            digest(key_list((key_bytes(ch[v]), key_mset(key_bytes(ch[u]) for u in h.adj[v]))))
            for v in range(h.n)
        ]
        after = len(set(cg) | set(ch))
        if after == before:
            if sorted(cg) != sorted(ch):
                return None
            return cg, ch


def _ir_search(g, h, cg, ch, forbidden):
    refined = _refine_stable(g, h, cg, ch)
    if refined is None:
        return None
    cg, ch = refined
    classes: dict[bytes, list[int]] = {}
    for v in range(g.n):
        classes.setdefault(cg[v], []).append(v)
    split = None
    for c in sorted(classes):
        if len(classes[c]) > 1:
            if split is None or len(classes[c]) < len(classes[split]):
                split = c
    if split is None:
        by_color = {c: v for v, c in enumerate(ch)}
        pi = [by_color[c] for c in cg]
        if verify_mapping(g, h, pi) and not any(pi[a] == b for a, b in forbidden):
            return tuple(pi)
        return None
    v = classes[split][0]
    for u in range(h.n):
        if ch[u] != split or (v, u) in forbidden:
            continue
        mark = digest(split + b"!")
        cg2, ch2 = list(cg), list(ch)
        cg2[v] = mark
        ch2[u] = mark
        res = _ir_search(g, h, cg2, ch2, forbidden)
        if res is not None:
            return res
    return None


def extract_mapping(
    g: Graph,
    h: Graph,
    labels_g: Optional[Sequence[bytes]] = None,
    labels_h: Optional[Sequence[bytes]] = None,
    forced: Sequence[tuple[int, int]] = (),
    forbidden: Sequence[tuple[int, int]] = (),
) -> Optional[tuple[int, ...]]:
    """Label-guided backtracking: candidates for a vertex are exactly the
    vertices with equal refined label; ties are split by individualization
    with backtracking.  Complete, because every label is an isomorphism
    invariant."""
    if g.n != h.n:
        return None
    tg = all_tomography_keys(g)
    th = all_tomography_keys(h)
    lg = labels_g if labels_g is not None else [_UNIFORM] * g.n
    lh = labels_h if labels_h is not None else [_UNIFORM] * h.n
    cg = [digest(key_list((key_bytes(lg[v]), key_bytes(tg[v])))) for v in range(g.n)]
    ch = [digest(key_list((key_bytes(lh[v]), key_bytes(th[v])))) for v in range(h.n)]
    for i, (a, b) in enumerate(forced):
        mark = digest(b"forced%d" % i)
        cg[a] = mark
        ch[b] = mark
    return _ir_search(g, h, cg, ch, frozenset(forbidden))


# ---------------------------------------------------------------------------
# the engine

class _Engine:
    def __init__(self, cfg: EngineConfig, top_n: int):
        self.cfg = cfg
        self.labels = LabelTable()
        self.ext_memo: dict[tuple[bytes, bytes], bool] = {}
        self.disagreements: list[dict] = []
        self._tomcache: dict[int, list[bytes]] = {}
        self._pins: list[Graph] = []
        n = max(top_n, 2)
        self.depth_limit = (
            cfg.depth_limit
            if cfg.depth_limit is not None
            else 2 * math.ceil(math.log2(n)) + 8
        )
        self.rng = random.Random(cfg.seed)

    # -- caches ------------------------------------------------------------

    def _tomkeys(self, g: Graph) -> list[bytes]:
        keys = self._tomcache.get(id(g))
        if keys is None:
            keys = all_tomography_keys(g)
            self._tomcache[id(g)] = keys
            self._pins.append(g)
        return keys

    def _labeled_tomkeys(self, g: Graph, labels: Sequence[bytes]) -> list[bytes]:
        base = self._tomkeys(g)
        return [
            digest(key_list((key_bytes(labels[v]), key_bytes(base[v]))))
            for v in range(g.n)
        ]

    def _nail_key(self, g: Graph, nails, labels, ltk=None) -> bytes:
        if self.cfg.pattern_variant == "varied":
            return digest(varied_pattern(g, nails, list(labels)).key)
        if ltk is None:
            ltk = self._labeled_tomkeys(g, labels)
        return digest(nailed_pattern_key(g, nails, ltk))

    def _check_depth(self, depth: int):
        if depth > self.depth_limit:
            raise _DepthExceeded()

    @staticmethod
    def _child_depth(parent_n: int, child_n: int, depth: int) -> int:
        # depth only meters non-shrinking recursion: strictly smaller
        # subproblems terminate on their own (well-founded on n)
        return depth if child_n < parent_n else depth + 1

    def _intern(self, parts: Sequence[bytes]) -> bytes:
        return self.labels.intern(key_list(key_bytes(p) for p in parts))

    # -- unconstrained pass ------------------------------------------------

    def gi_labeled(self, g, h, lg, lh, depth):
        self._check_depth(depth)
        if g.n != h.n:
            return False, Witness("size-mismatch", {"n1": g.n, "n2": h.n})
        if g.n == 0:
            return True, None
        if g.m != h.m:
            return False, Witness("tomography-mismatch", {"m1": g.m, "m2": h.m})
        if len(components(g)) > 1 or len(components(h)) > 1:
            return self._match_components(g, h, lg, lh, depth)
        ltg = self._labeled_tomkeys(g, lg)
        lth = self._labeled_tomkeys(h, lh)
        if sorted(ltg) != sorted(lth):
            return False, Witness("tomography-mismatch", {"step": 1})
        if all(k == ltg[0] for k in ltg) and all(k == ltg[0] for k in lth):
            return self._symmetric_branch(g, h, lg, lh, depth)
        # step 2: rarest nailed-pattern class, extension labeling, recurse
        pg = [self._nail_key(g, (v,), lg, ltg) for v in range(g.n)]
        ph = [self._nail_key(h, (v,), lh, lth) for v in range(h.n)]
        if sorted(pg) != sorted(ph):
            return False, Witness("pattern-mismatch", {"step": 2})
        counts: dict[bytes, int] = {}
        for k in pg:
            counts[k] = counts.get(k, 0) + 1
        rarest = min(counts, key=lambda k: (counts[k], k))
        beta = [v for v in range(g.n) if pg[v] == rarest]
        beta_h = [u for u in range(h.n) if ph[u] == rarest]
        exts = [(extension(g, beta, v), lg) for v in beta]
        exts += [(extension(h, beta_h, u), lh) for u in beta_h]
        classes = self._classify_extensions(exts, depth, g.n)
        sub_g, vmap_g = induced_subgraph(g, beta)
        sub_h, vmap_h = induced_subgraph(h, beta_h)
        lg2 = [
            self._intern((lg[v], key_int(classes[i])))
            for i, v in enumerate(vmap_g)
        ]
        lh2 = [
            self._intern((lh[u], key_int(classes[len(beta) + j])))
            for j, u in enumerate(vmap_h)
        ]
        return self.gi_labeled(sub_g, sub_h, lg2, lh2, self._child_depth(g.n, sub_g.n, depth))

    def _symmetric_branch(self, g, h, lg, lh, depth):
        n = g.n
        if n == 1:
            return True, None
        w = g.degree(0)
        if 2 * w > n:
            tg, th = complement(g), complement(h)
        else:
            tg, th = g, h
        anchors = list(range(n))
        if self.cfg.randomized_anchors:
            self.rng.shuffle(anchors)
        if self.cfg.mode == "conjecture":
            ok, wit = self.gi_constrained(tg, th, (0,), (anchors[0],), lg, lh, depth + 1)
            if ok:
                return True, None
            for b in anchors[1:]:
                ok2, _ = self.gi_constrained(tg, th, (0,), (b,), lg, lh, depth + 1)
                if ok2:
                    self.disagreements.append(
                        {"kind": "anchored-no-overturned", "anchor": anchors[0], "retry": b}
                    )
                    return True, None
            return False, wit or Witness("anchors-exhausted")
        last = None
        for b in anchors:
            ok, wit = self.gi_constrained(tg, th, (0,), (b,), lg, lh, depth + 1)
            if ok:
                return True, None
            last = wit
        return False, last or Witness("anchors-exhausted")

    def _match_components(self, g, h, lg, lh, depth):
        comps_g = components(g)
        comps_h = components(h)
        if sorted(len(c) for c in comps_g) != sorted(len(c) for c in comps_h):
            return False, Witness("component-mismatch", {"sizes": "differ"})
        mismatch = Witness("component-mismatch", {"sizes": "equal"})

        def item(graph, labels, comp):
            sub, vmap = induced_subgraph(graph, comp)
            sl = [labels[v] for v in vmap]
            ltk = self._labeled_tomkeys(sub, sl)
            sig = (sub.n, sub.m, digest(key_mset(key_bytes(k) for k in ltk)))
            return sig, sub, sl

        items_g = [item(g, lg, c) for c in comps_g]
        items_h = [item(h, lh, c) for c in comps_h]
        groups: dict = {}
        for sig, sub, sl in items_g:
            groups.setdefault(sig, ([], []))[0].append((sub, sl))
        for sig, sub, sl in items_h:
            groups.setdefault(sig, ([], []))[1].append((sub, sl))
        for sig, (gs, hs) in groups.items():
            if len(gs) != len(hs):
                return False, mismatch
        for sig, (gs, hs) in sorted(groups.items(), key=lambda kv: kv[0][:2]):
            if not self._match_group(gs, hs, depth):
                return False, mismatch
        return True, None

    def _match_group(self, gs, hs, depth):
        used = [False] * len(hs)
        memo: dict[tuple[int, int], bool] = {}

        def ok(i, j):
            if (i, j) not in memo:
                memo[(i, j)] = self.gi_labeled(gs[i][0], hs[j][0], gs[i][1], hs[j][1], depth)[0]
            return memo[(i, j)]

        def rec(i):
            if i == len(gs):
                return True
            for j in range(len(hs)):
                if not used[j] and ok(i, j):
                    used[j] = True
                    if rec(i + 1):
                        return True
                    used[j] = False
            return False

        return rec(0)

    # -- constrained pass --------------------------------------------------

    def gi_constrained(self, g, h, nails_g, nails_h, lg, lh, depth):
        self._check_depth(depth)
        layers_g = bfs_layers(g, nails_g)
        layers_h = bfs_layers(h, nails_h)
        reach_g = sorted(v for layer in layers_g for v in layer)
        reach_h = sorted(v for layer in layers_h for v in layer)
        if len(reach_g) != len(reach_h):
            return False, Witness("component-mismatch", {"nailed": True})
        if len(reach_g) < g.n or len(reach_h) < h.n:
            # the nails only see one part; the rest must match on its own
            sub_g, vmap_g = induced_subgraph(g, reach_g)
            sub_h, vmap_h = induced_subgraph(h, reach_h)
            inv_g = {v: i for i, v in enumerate(vmap_g)}
            inv_h = {v: i for i, v in enumerate(vmap_h)}
            ok, wit = self.gi_constrained(
                sub_g, sub_h,
                tuple(inv_g[v] for v in nails_g),
                tuple(inv_h[v] for v in nails_h),
                [lg[v] for v in vmap_g], [lh[v] for v in vmap_h],
                self._child_depth(g.n, sub_g.n, depth),
            )
            if not ok:
                return False, wit
            rest_g = [v for v in range(g.n) if v not in inv_g]
            rest_h = [v for v in range(h.n) if v not in inv_h]
            rg, rmap_g = induced_subgraph(g, rest_g)
            rh, rmap_h = induced_subgraph(h, rest_h)
            return self.gi_labeled(
                rg, rh, [lg[v] for v in rmap_g], [lh[v] for v in rmap_h],
                self._child_depth(g.n, rg.n, depth),
            )
        pk_g = self._nail_key(g, nails_g, lg)
        pk_h = self._nail_key(h, nails_h, lh)
        if pk_g != pk_h:
            return False, Witness("pattern-mismatch", {"nailed": True})
        depth_g = len(layers_g) - 1
        if len(layers_h) - 1 != depth_g:
            return False, Witness("pattern-mismatch", {"layers": "differ"})
        if depth_g == 0:
            # nothing below the trigger: decide by direct comparison
            pi = {a: b for a, b in zip(nails_g, nails_h)}
            for a, b in pi.items():
                if lg[a] != lh[b]:
                    return False, Witness("nail-label-mismatch")
            for a in pi:
                for a2 in g.adj[a]:
                    if not h.has_edge(pi[a], pi[a2]):
                        return False, Witness("nail-edge-mismatch")
            return True, None
        if depth_g == 1 and len(nails_g) == 1:
            sub_g, vmap_g = induced_subgraph(g, layers_g[1])
            sub_h, vmap_h = induced_subgraph(h, layers_h[1])
            return self.gi_labeled(
                sub_g, sub_h, [lg[v] for v in vmap_g], [lh[v] for v in vmap_h],
                self._child_depth(g.n, sub_g.n, depth),
            )
        cur_g, cur_h = list(lg), list(lh)
        for x in range(depth_g - 1, -1, -1):
            if x == 0 and len(nails_g) == 1:
                # the extension against layers 0..0 is the whole nailed graph
                # again; resolve its class by the labeled pattern under the
                # refined labels instead of recursing into the same problem
                a, b = nails_g[0], nails_h[0]
                cur_g[a] = self._intern((lg[a], self._nail_key(g, nails_g, cur_g)))
                cur_h[b] = self._intern((lh[b], self._nail_key(h, nails_h, cur_h)))
                break
            base_g = [v for k in range(x + 1) for v in layers_g[k]]
            base_h = [v for k in range(x + 1) for v in layers_h[k]]
            exts = [(extension(g, base_g, v), cur_g) for v in layers_g[x]]
            split = len(exts)
            exts += [(extension(h, base_h, u), cur_h) for u in layers_h[x]]
            classes = self._classify_extensions(exts, depth, g.n)
            for i, v in enumerate(layers_g[x]):
                cur_g[v] = self._intern((lg[v], key_int(classes[i])))
            for j, u in enumerate(layers_h[x]):
                cur_h[u] = self._intern((lh[u], key_int(classes[split + j])))
        for a, b in zip(nails_g, nails_h):
            if cur_g[a] != cur_h[b]:
                return False, Witness("nail-label-mismatch")
        return True, None

    # -- extension classification -------------------------------------------

    def _classify_extensions(self, exts, depth, parent_n):
        """Partition extensions into constrained-isomorphism classes; base
        point labels are masked while comparing.  Pair verdicts are memoized
        by the pair of extension pattern keys; conjecture mode trusts key
        equality outright instead of recursing to verify it."""
        prepared = []
        for ext, labels in exts:
            local = [
                _MASK if i == ext.base_local else labels[v]
                for i, v in enumerate(ext.vmap)
            ]
            cheap = self._nail_key(ext.graph, (ext.base_local,), local)
            exact = digest(key_list((
                key_int(ext.graph.n),
                key_list(key_list((key_int(u), key_int(v))) for u, v in ext.graph.edges()),
                key_list(key_bytes(l) for l in local),
                key_int(ext.base_local),
            )))
            prepared.append((cheap, exact, ext.graph, ext.base_local, local))
        reps: list[tuple] = []
        assignment = []
        for cheap, exact, graph, base, local in prepared:
            cls = None
            for ci, (rkey, rexact, rg, rb, rl) in enumerate(reps):
                if rkey != cheap:
                    # distinct nailed patterns: distinct classes, a sound split
                    continue
                if self.cfg.mode == "conjecture":
                    cls = ci
                    break
                mk = (min(exact, rexact), max(exact, rexact))
                verdict = self.ext_memo.get(mk)
                if verdict is None:
                    # complete certified check; exhaustion is a sound split
                    pi = extract_mapping(
                        graph, rg, local, rl, forced=((base, rb),)
                    )
                    verdict = pi is not None
                    self.ext_memo[mk] = verdict
                if verdict:
                    cls = ci
                    break
            if cls is None:
                cls = len(reps)
                reps.append((cheap, exact, graph, base, local))
            assignment.append(cls)
        return assignment


# ---------------------------------------------------------------------------
# public entry points

def _env_budget() -> Optional[SearchBudget]:
    raw = os.environ.get("COLLAPSE_ISO_BUDGET")
    if raw:
        return SearchBudget(max_nodes=int(raw))
    return None


def _labels_from(labeling, n) -> list[bytes]:
    if labeling is None:
        return [_UNIFORM] * n
    if len(labeling) != n:
        raise ValueError("labeling must cover every vertex")
    return [canonical_key(x) for x in labeling]


def _run(g, h, lg, lh, constraint, config) -> IsoOutcome:
    cfg = config or EngineConfig()
    eng = _Engine(cfg, g.n)
    forced = constraint.forced if constraint else ()
    forbidden = constraint.forbidden if constraint else ()
    try:
        if forced:
            verdict, wit = eng.gi_constrained(
                g, h, tuple(a for a, _ in forced), tuple(b for _, b in forced), lg, lh, 0
            )
        else:
            verdict, wit = eng.gi_labeled(g, h, lg, lh, 0)
    except _DepthExceeded:
        if g.n > cfg.oracle_fallback:
            raise ResourceExhausted(
                f"depth limit {eng.depth_limit} exceeded at n={g.n} "
                f"(> oracle fallback {cfg.oracle_fallback})"
            ) from None
        forb = list(forbidden)
        forb += [
            (v, u) for v in range(g.n) for u in range(h.n) if lg[v] != lh[u]
        ]
        pi = oracle_iso(g, h, forced=forced, forbidden=forb, budget=_env_budget())
        if pi is None:
            return IsoOutcome("no", None, Witness("oracle-exhausted"), tuple(eng.disagreements))
        return IsoOutcome("yes", pi, None, tuple(eng.disagreements), certified=True)
    if not verdict:
        return IsoOutcome("no", None, wit, tuple(eng.disagreements))
    pi = extract_mapping(g, h, lg, lh, forced=forced, forbidden=forbidden)
    if pi is not None and verify_mapping(g, h, pi, Constraint(tuple(forced), tuple(forbidden)), lg, lh):
        return IsoOutcome("yes", pi, None, tuple(eng.disagreements), certified=True)
    if forbidden:
        # forbidden pairs are outside the label algebra; extraction decides
        return IsoOutcome("no", None, Witness("extraction-exhausted"), tuple(eng.disagreements))
    if cfg.mode == "conjecture":
        sound = _run(g, h, lg, lh, constraint, EngineConfig(
            mode="sound",
            depth_limit=cfg.depth_limit,
            pattern_variant=cfg.pattern_variant,
            oracle_fallback=cfg.oracle_fallback,
        ))
        rec = {"kind": "conjecture-vs-sound", "sound_verdict": sound.verdict}
        return IsoOutcome(
            sound.verdict, sound.mapping, sound.witness,
            sound.disagreements + (rec,), sound.certified,
        )
    rec = {"kind": "extraction-refuted", "note": "patterns match but no bijection exists"}
    return IsoOutcome(
        "disagreement", None, Witness("extraction-exhausted"),
        tuple(eng.disagreements) + (rec,),
    )


def gi(g: Graph, h: Graph, config: Optional[EngineConfig] = None) -> IsoOutcome:
    return _run(g, h, _labels_from(None, g.n), _labels_from(None, h.n), None, config)


def gi_labeled(
    g: Graph,
    h: Graph,
    labeling_g: Sequence,
    labeling_h: Sequence,
    config: Optional[EngineConfig] = None,
) -> IsoOutcome:
    return _run(
        g, h, _labels_from(labeling_g, g.n), _labels_from(labeling_h, h.n), None, config
    )


def gi_constrained(
    g: Graph,
    h: Graph,
    constraint: Constraint,
    labeling_g: Optional[Sequence] = None,
    labeling_h: Optional[Sequence] = None,
    config: Optional[EngineConfig] = None,
) -> IsoOutcome:
    return _run(
        g, h,
        _labels_from(labeling_g, g.n), _labels_from(labeling_h, h.n),
        constraint, config,
    )


# ---------------------------------------------------------------------------
# multigraph preprocessing

@dataclass(frozen=True)
class StrippedFeatures:
    loops: dict[int, int]
    multiplicity: dict[tuple[int, int], int]

    @property
    def empty(self) -> bool:
        return not self.loops and not self.multiplicity


def preprocess_multigraph(raw: MultigraphData) -> tuple[Graph, StrippedFeatures]:
    """Strip self-loops and duplicate edges, recording what was removed so a
    candidate bijection can be checked against the original multigraph."""
    loops: dict[int, int] = {}
    for v in raw.loops:
        loops[v] = loops.get(v, 0) + 1
    mult: dict[tuple[int, int], int] = {}
    for e in raw.edges:
        mult[e] = mult.get(e, 0) + 1
    simple = Graph(raw.n, sorted(mult))
    extra = {e: c for e, c in mult.items() if c > 1}
    return simple, StrippedFeatures(loops, extra)


def features_respected(fa: StrippedFeatures, fb: StrippedFeatures, pi: Sequence[int]) -> bool:
    if {pi[v]: c for v, c in fa.loops.items()} != fb.loops:
        return False
    mapped = {
        (min(pi[u], pi[v]), max(pi[u], pi[v])): c
        for (u, v), c in fa.multiplicity.items()
    }
    return mapped == fb.multiplicity


def gi_multigraph(
    raw_g: MultigraphData,
    raw_h: MultigraphData,
    config: Optional[EngineConfig] = None,
) -> IsoOutcome:
    """Isomorphism for inputs that may carry self-loops and multi-edges:
    strip, solve on the simple graphs with loop counts as labels, then check
    the stripped features against the bijection (searching alternatives via
    the oracle when the first bijection fails the feature check)."""
    g, fg = preprocess_multigraph(raw_g)
    h, fh = preprocess_multigraph(raw_h)
    lab_g = [fg.loops.get(v, 0) for v in range(g.n)]
    lab_h = [fh.loops.get(v, 0) for v in range(h.n)]
    out = gi_labeled(g, h, lab_g, lab_h, config)
    if not out.is_iso:
        return out
    if features_respected(fg, fh, out.mapping):
        return out
    from .oracle import _Search  # exhaustive fallback at desk scale

    forb = [(v, u) for v in range(g.n) for u in range(h.n) if lab_g[v] != lab_h[u]]
    found: list = []
    _Search(g, h, (), tuple(forb), _env_budget()).run(count_all=True, collect=found)
    for pi in found:
        if features_respected(fg, fh, pi):
            return IsoOutcome("yes", pi, None, out.disagreements, certified=True)
    return IsoOutcome(
        "no", None, Witness("multigraph-features", {"note": "no bijection respects loops/multiplicities"}),
        out.disagreements,
    )
