"""Immutable simple undirected graphs plus the structural derivations the
rest of the package is built on: degree classes, induced subgraphs,
extensions, collapses and nailed graphs, complements, permutation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Malformed graph input (bad bytes, self-loop, duplicate edge, ...)."""


class Graph:
    """Simple undirected graph over dense 0-based vertex ids.

    Adjacency is stored as a tuple of sorted tuples; instances are immutable
    and hashable, so they are safe to share across workers.
    """

    __slots__ = ("n", "adj", "_adjsets", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"vertex id out of range: ({u}, {v}) with n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            m += 1
        self.n = n
        self.adj = tuple(tuple(sorted(s)) for s in nbrs)
        self._adjsets = tuple(frozenset(s) for s in nbrs)
        self._m = m

    @property
    def m(self) -> int:
        return self._m

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex id out of range: {v}")
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._adjsets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjsets[u] if 0 <= u < self.n else False

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, lexicographically sorted."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __reduce__(self):
        return (Graph, (self.n, tuple(self.edges())))


# ---------------------------------------------------------------------------
# parsing / emission

_G6_HEADER = b">>graph6<<"


def _g6_encode_n(n: int) -> bytes:
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    if n <= 68719476735:
        return bytes([126, 126]) + bytes(((n >> (6 * k)) & 63) + 63 for k in range(5, -1, -1))
    raise GraphError("graph too large for graph6")


def _g6_decode_n(data: bytes) -> tuple[int, int]:
    """Return (n, number of bytes consumed by the size header)."""
    if not data:
        raise GraphError("empty graph6 input")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise GraphError("truncated graph6 size header")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        return n, 8
    if len(data) < 4:
        raise GraphError("truncated graph6 size header")
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, 4


def parse_graph6(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(_G6_HEADER):
        data = data[len(_G6_HEADER):].strip()
    n, off = _g6_decode_n(data)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = data[off:]
    if len(body) != nbytes:
        raise GraphError(f"graph6 body length {len(body)}, expected {nbytes} for n={n}")
    bits = []
    for b in body:
        if not 63 <= b <= 126:
            raise GraphError(f"invalid graph6 byte {b}")
        x = b - 63
        bits.extend((x >> k) & 1 for k in range(5, -1, -1))
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


def emit_graph6(g: Graph) -> bytes:
    out = bytearray(_g6_encode_n(g.n))
    bits = []
    for j in range(1, g.n):
        sj = g._adjsets[j]
        for i in range(j):
            bits.append(1 if i in sj else 0)
    for k in range(0, len(bits), 6):
        chunk = bits[k:k + 6]
        chunk += [0] * (6 - len(chunk))
        x = 0
        for b in chunk:
            x = (x << 1) | b
        out.append(x + 63)
    return bytes(out)


@dataclass(frozen=True)
class MultigraphData:
    """Raw edge-list content before self-loop / multi-edge stripping."""

    n: int
    edges: tuple[tuple[int, int], ...]
    loops: tuple[int, ...]


def _edge_list_lines(text: bytes | str):
    if isinstance(text, bytes):
        text = text.decode("ascii")
    declared = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                try:
                    declared = int(body[2:])
                except ValueError as e:
                    raise GraphError(f"line {lineno}: bad n= directive") from e
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as e:
            raise GraphError(f"line {lineno}: non-integer vertex id") from e
        if u < 0 or v < 0:
            raise GraphError(f"line {lineno}: negative vertex id")
        yield declared, (u, v)
    yield declared, None


def parse_edge_list(text: bytes | str) -> Graph:
    declared = None
    edges = []
    for decl, pair in _edge_list_lines(text):
        declared = decl if decl is not None else declared
        if pair is not None:
            edges.append(pair)
    top = max((max(u, v) for u, v in edges), default=-1)
    n = max(top + 1, declared or 0)
    return Graph(n, edges)  # Graph rejects self-loops and duplicates


def parse_edge_list_multigraph(text: bytes | str) -> MultigraphData:
    """Lenient parse: keep self-loops and duplicate edges for later stripping."""
    declared = None
    edges = []
    loops = []
    for decl, pair in _edge_list_lines(text):
        declared = decl if decl is not None else declared
        if pair is None:
            continue
        u, v = pair
        if u == v:
            loops.append(u)
        else:
            edges.append((min(u, v), max(u, v)))
    top = max(
        max((max(u, v) for u, v in edges), default=-1),
        max(loops, default=-1),
    )
    n = max(top + 1, declared or 0)
    return MultigraphData(n, tuple(edges), tuple(loops))


def emit_edge_list(g: Graph) -> bytes:
    # the n= directive keeps trailing isolated vertices across a round trip
    lines = [f"# n={g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return ("\n".join(lines) + "\n").encode("ascii")


FORMATS = ("graph6", "edge_list")


def parse_graph(text: bytes | str, fmt: str = "graph6") -> Graph:
    if fmt == "graph6":
        return parse_graph6(text)
    if fmt == "edge_list":
        return parse_edge_list(text)
    raise GraphError(f"unknown format {fmt!r}")


def emit_graph(g: Graph, fmt: str = "graph6") -> bytes:
    if fmt == "graph6":
        return emit_graph6(g)
    if fmt == "edge_list":
        return emit_edge_list(g)
    raise GraphError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# structural derivations

def edge_degree(g: Graph, u: int, v: int) -> int:
    """|N(u)| + |N(v)| - |N(u) ∩ N(v)| for an existing edge (u, v)."""
    if not g.has_edge(u, v):
        raise GraphError(f"({u}, {v}) is not an edge")
    nu, nv = g.neighbor_set(u), g.neighbor_set(v)
    return len(nu) + len(nv) - len(nu & nv)


def complement(g: Graph) -> Graph:
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if v not in g._adjsets[u]
    ]
    return Graph(g.n, edges)


def degree_class(g: Graph, w: int) -> tuple[int, ...]:
    return tuple(v for v in range(g.n) if len(g.adj[v]) == w)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, tuple[int, ...]]:
    """Induced subgraph plus the remap table (local id -> original id)."""
    vs = tuple(sorted(set(vertices)))
    for v in vs:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex id out of range: {v}")
    local = {v: i for i, v in enumerate(vs)}
    edges = [
        (local[u], local[v])
        for u in vs
        for v in g.adj[u]
        if u < v and v in local
    ]
    return Graph(len(vs), edges), vs


def permute(g: Graph, pi: Sequence[int]) -> Graph:
    if sorted(pi) != list(range(g.n)):
        raise GraphError("not a bijection on [0, n)")
    return Graph(g.n, [(pi[u], pi[v]) for u, v in g.edges()])


def components(g: Graph) -> list[tuple[int, ...]]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp = []
        stack = [s]
        seen[s] = True
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    return out


def bfs_layers(g: Graph, triggers: Sequence[int]) -> list[tuple[int, ...]]:
    """Layer 0 is the trigger set, layer k+1 the unvisited neighbors of layer k."""
    trig = tuple(sorted(set(triggers)))
    if not trig:
        raise GraphError("empty trigger set")
    for v in trig:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex id out of range: {v}")
    seen = set(trig)
    layers = [trig]
    frontier = trig
    while True:
        nxt = set()
        for u in frontier:
            for w in g.adj[u]:
                if w not in seen:
                    nxt.add(w)
        if not nxt:
            break
        seen |= nxt
        frontier = tuple(sorted(nxt))
        layers.append(frontier)
    return layers


@dataclass(frozen=True)
class CollapseLayers:
    """BFS-style layering of the trigger's reachable component."""

    graph: Graph
    trigger: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]

    @property
    def depth(self) -> int:
        """Index of the last layer."""
        return len(self.layers) - 1

    def reachable(self) -> tuple[int, ...]:
        return tuple(sorted(v for layer in self.layers for v in layer))

    def layer_graph(self, k: int) -> tuple[Graph, tuple[int, ...]]:
        """Induced subgraph of layer k (within-layer edges only) plus remap."""
        return induced_subgraph(self.graph, self.layers[k])


def collapse(g: Graph, triggers: Sequence[int]) -> CollapseLayers:
    return CollapseLayers(g, tuple(sorted(set(triggers))), tuple(bfs_layers(g, triggers)))


@dataclass(frozen=True)
class NailedGraph:
    """Reachable component of the nails, with its layering retained.

    The component's induced subgraph equals the collapse with the edges
    between consecutive layers added back; unreachable parts are dropped.
    """

    nails: tuple[int, ...]
    layers: tuple[tuple[int, ...], ...]
    graph: Graph
    vmap: tuple[int, ...]

    def local(self, v: int) -> int:
        return self.vmap.index(v)

    def local_layers(self) -> tuple[tuple[int, ...], ...]:
        inv = {v: i for i, v in enumerate(self.vmap)}
        return tuple(tuple(inv[v] for v in layer) for layer in self.layers)


def nailed_graph(g: Graph, triggers: Sequence[int]) -> NailedGraph:
    layers = tuple(bfs_layers(g, triggers))
    reach = sorted(v for layer in layers for v in layer)
    sub, vmap = induced_subgraph(g, reach)
    return NailedGraph(tuple(sorted(set(triggers))), layers, sub, vmap)


@dataclass(frozen=True)
class Extension:
    """Closure of a base point's outside neighborhood against a base set.

    Vertex set: the base point, its neighbors outside the base set, and
    transitively the full neighborhoods of every vertex outside the base
    set.  Edge set: parent edges with at least one endpoint outside the
    base set and both endpoints inside the extension.
    """

    base_point: int
    base_set: tuple[int, ...]
    vertices: tuple[int, ...]
    graph: Graph
    vmap: tuple[int, ...]

    @property
    def base_local(self) -> int:
        return self.vmap.index(self.base_point)


def extension(g: Graph, beta: Sequence[int], v: int) -> Extension:
    bset = frozenset(beta)
    if v not in bset:
        raise GraphError(f"base point {v} not in the base set")
    vs = {v}
    work = deque()
    for w in g.adj[v]:
        if w not in bset:
            vs.add(w)
            work.append(w)
    while work:
        u = work.popleft()
        for w in g.adj[u]:
            if w not in vs:
                vs.add(w)
                if w not in bset:
                    work.append(w)
    verts = tuple(sorted(vs))
    local = {x: i for i, x in enumerate(verts)}
    edges = []
    for u in verts:
        for w in g.adj[u]:
            if u < w and w in vs and (u not in bset or w not in bset):
                edges.append((local[u], local[w]))
    return Extension(v, tuple(sorted(bset)), verts, Graph(len(verts), edges), verts)
