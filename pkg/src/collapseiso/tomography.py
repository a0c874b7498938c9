"""Collapse tomographies and collapse patterns, plus the canonical-key
machinery that turns the multiset "match" relation into byte equality."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .graphs import (
    Graph,
    bfs_layers,
    collapse,
    extension,
    induced_subgraph,
)


# ---------------------------------------------------------------------------
# canonical keys
#
# Keys are deterministic byte strings with a length-safe recursive encoding:
# equal keys <=> the encoded structures match (recursively sorted multisets),
# and byte order gives the total order used for rarest-class tie-breaking.

def key_int(i: int) -> bytes:
    return b"i%d;" % i


def key_bytes(b: bytes) -> bytes:
    return b"s%d:" % len(b) + b


def key_none() -> bytes:
    return b"n"


def key_list(items: Iterable[bytes]) -> bytes:
    return b"[" + b"".join(items) + b"]"


def key_mset(items: Iterable[bytes]) -> bytes:
    return b"{" + b"".join(sorted(items)) + b"}"


def digest(key: bytes) -> bytes:
    """Fixed-width compression of a key; used when keys aggregate keys."""
    return b"#" + hashlib.blake2b(key, digest_size=12).digest()


class MSet:
    """Marks a collection as a multiset for canonical_key."""

    def __init__(self, items):
        self.items = list(items)


def canonical_key(x) -> bytes:
    """Canonical key of a nested structure of ints, strings, lists and
    multisets.  Equal keys exactly when the structures match."""
    if x is None:
        return key_none()
    if isinstance(x, bool):
        return key_int(int(x))
    if isinstance(x, int):
        return key_int(x)
    if isinstance(x, bytes):
        return key_bytes(x)
    if isinstance(x, str):
        return key_bytes(x.encode("utf-8"))
    if isinstance(x, (list, tuple)):
        return key_list(canonical_key(i) for i in x)
    if isinstance(x, (set, frozenset, MSet)):
        items = x.items if isinstance(x, MSet) else x
        return key_mset(canonical_key(i) for i in items)
    key = getattr(x, "key", None)
    if isinstance(key, bytes):
        return key
    raise TypeError(f"cannot key {type(x).__name__}")


def intern_label(structure_key: bytes) -> bytes:
    """Content-addressed label token: deterministic under concurrency and
    stable across runs, equal tokens iff equal originating keys."""
    return b"T" + hashlib.blake2b(structure_key, digest_size=12).digest()


class LabelTable:
    """Reverse map from label tokens to their originating structured keys,
    for traces and display.  Insertions are idempotent, so concurrent
    lookup-or-insert is deterministic."""

    def __init__(self):
        self._by_token: dict[bytes, bytes] = {}

    def intern(self, structure_key: bytes) -> bytes:
        tok = intern_label(structure_key)
        self._by_token.setdefault(tok, structure_key)
        return tok

    def origin(self, token: bytes) -> Optional[bytes]:
        return self._by_token.get(token)

    def __len__(self) -> int:
        return len(self._by_token)


# ---------------------------------------------------------------------------
# vertex / edge properties

def vertex_property(g: Graph) -> tuple[int, ...]:
    """Sorted multiset of all vertex degrees."""
    return tuple(sorted(len(g.adj[v]) for v in range(g.n)))


def edge_property(g: Graph) -> tuple[int, ...]:
    """Sorted multiset of all edge degrees."""
    out = []
    for u in range(g.n):
        su = g.neighbor_set(u)
        for v in g.adj[u]:
            if u < v:
                sv = g.neighbor_set(v)
                out.append(len(su) + len(sv) - len(su & sv))
    return tuple(sorted(out))


def _layer_properties(g: Graph, layer: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(P_V, P_E) of the induced subgraph on one collapse layer."""
    lset = frozenset(layer)
    nbr = {v: g.neighbor_set(v) & lset for v in layer}
    pv = sorted(len(nbr[v]) for v in layer)
    pe = []
    for u in layer:
        nu = nbr[u]
        for v in nu:
            if u < v:
                nv = nbr[v]
                pe.append(len(nu) + len(nv) - len(nu & nv))
    return tuple(pv), tuple(sorted(pe))


# ---------------------------------------------------------------------------
# tomography

@dataclass(frozen=True)
class Tomography:
    """Per-layer (label?, P_V, P_E) of a single-trigger collapse.

    Layer 0 is excluded: the entries range over layers 1..l.  When a
    labeling is present, every entry carries the trigger's label.
    """

    trigger: int
    entries: tuple[tuple[Optional[bytes], tuple[int, ...], tuple[int, ...]], ...]

    @property
    def key(self) -> bytes:
        return key_list(
            key_list((
                key_none() if lab is None else key_bytes(lab),
                key_mset(key_int(d) for d in pv),
                key_mset(key_int(d) for d in pe),
            ))
            for lab, pv, pe in self.entries
        )

    def to_jsonable(self) -> dict:
        return {
            "trigger": self.trigger,
            "layers": [
                {
                    "label": lab.hex() if lab is not None else None,
                    "vertex_property": list(pv),
                    "edge_property": list(pe),
                }
                for lab, pv, pe in self.entries
            ],
            "key": digest(self.key).hex(),
        }


def tomography(g: Graph, trigger: int, labels: Optional[Sequence[bytes]] = None) -> Tomography:
    layers = bfs_layers(g, (trigger,))
    lab = labels[trigger] if labels is not None else None
    entries = []
    for layer in layers[1:]:
        pv, pe = _layer_properties(g, layer)
        entries.append((lab, pv, pe))
    return Tomography(trigger, tuple(entries))


def all_tomography_keys(g: Graph, labels: Optional[Sequence[bytes]] = None) -> list[bytes]:
    """Digest of the (labeled) tomography key for every vertex."""
    return [digest(tomography(g, v, labels).key) for v in range(g.n)]


# ---------------------------------------------------------------------------
# patterns

@dataclass(frozen=True)
class Pattern:
    """Canonical form of a collapse pattern.

    kind "normal": multiset of tomography keys; "nailed": layer-ordered list
    of multisets of tomography keys; "arc": ordered triple of nailed
    patterns; "varied": layer-ordered list of multisets of tomography
    triples.
    """

    kind: str
    key: bytes

    def to_jsonable(self) -> dict:
        return {"kind": self.kind, "key": digest(self.key).hex()}


def match(a, b) -> bool:
    """Pattern match relation: canonical-key equality of same-kind patterns."""
    kind_a = getattr(a, "kind", type(a).__name__)
    kind_b = getattr(b, "kind", type(b).__name__)
    if kind_a != kind_b:
        raise ValueError(f"cannot match {kind_a} against {kind_b}")
    return canonical_key(a) == canonical_key(b)


def pattern_normal(
    g: Graph,
    labels: Optional[Sequence[bytes]] = None,
    _tomkeys: Optional[Sequence[bytes]] = None,
) -> Pattern:
    keys = _tomkeys if _tomkeys is not None else all_tomography_keys(g, labels)
    return Pattern("normal", key_mset(key_bytes(k) for k in keys))


def nailed_pattern_key(
    g: Graph,
    nails: Sequence[int],
    tomkeys: Sequence[bytes],
) -> bytes:
    """Layer-indexed multisets of per-vertex tomography keys (layers 0..l,
    tomographies measured in the full graph)."""
    layers = bfs_layers(g, nails)
    return key_list(
        key_mset(key_bytes(tomkeys[v]) for v in layer) for layer in layers
    )


def pattern_nailed(
    g: Graph,
    nails: Sequence[int],
    labels: Optional[Sequence[bytes]] = None,
    _tomkeys: Optional[Sequence[bytes]] = None,
) -> Pattern:
    keys = _tomkeys if _tomkeys is not None else all_tomography_keys(g, labels)
    return Pattern("nailed", nailed_pattern_key(g, nails, keys))


def _delete_edge(g: Graph, u: int, v: int) -> Graph:
    if not g.has_edge(u, v):
        raise ValueError(f"({u}, {v}) is not an edge")
    return Graph(g.n, [e for e in g.edges() if e != (min(u, v), max(u, v))])


def pattern_arc(g: Graph, u: int, v: int, labels: Optional[Sequence[bytes]] = None) -> Pattern:
    """Ordered triple: edge-nailed pattern, then the two patterns nailed at
    each endpoint of the graph with the trigger edge deleted."""
    gm = _delete_edge(g, u, v)
    p_edge = pattern_nailed(g, (u, v), labels)
    p_u = pattern_nailed(gm, (u,), labels)
    p_v = pattern_nailed(gm, (v,), labels)
    return Pattern("arc", key_list((p_edge.key, p_u.key, p_v.key)))


def varied_pattern(
    g: Graph,
    nails: Sequence[int],
    labels: Optional[Sequence[bytes]] = None,
) -> Pattern:
    """Per layer j and vertex v: the triple of v's tomography in the full
    graph, in the layer-j induced subgraph, and in v's extension against
    the layer-j base set."""
    col = collapse(g, nails)
    base_keys = all_tomography_keys(g, labels)
    layer_msets = []
    for j, layer in enumerate(col.layers):
        sub, vmap = induced_subgraph(g, layer)
        inv = {v: i for i, v in enumerate(vmap)}
        sub_labels = None
        if labels is not None:
            sub_labels = [labels[v] for v in vmap]
        triples = []
        for v in layer:
            ext = extension(g, layer, v)
            ext_labels = None
            if labels is not None:
                ext_labels = [labels[x] for x in ext.vmap]
            t_full = base_keys[v]
            t_layer = digest(tomography(sub, inv[v], sub_labels).key)
            t_ext = digest(tomography(ext.graph, ext.base_local, ext_labels).key)
            triples.append(key_list((key_bytes(t_full), key_bytes(t_layer), key_bytes(t_ext))))
        layer_msets.append(key_mset(triples))
    return Pattern("varied", key_list(layer_msets))
