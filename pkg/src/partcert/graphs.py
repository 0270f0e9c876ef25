"""Graph representation and elementary exact operations.

Graphs are immutable: vertex count plus one adjacency bitmask per
vertex (Python ints, so any width works; the compiled kernels kick in
for n <= 64).  All predicates are popcount-style mask operations.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels
from .errors import InvalidParameters, InvalidVertex, ParseError, SelfLoop

MAX_VERTICES = 1 << 16

__all__ = [
    "Graph",
    "Embedding",
    "SetClassification",
    "HomogeneousSet",
    "build_graph",
    "complement",
    "induced",
    "classify_set",
    "find_induced_copy",
    "is_induced_embedding",
    "max_homogeneous",
    "encode_graph6",
    "decode_graph6",
    "encode_edgelist",
    "decode_edgelist",
    "empty_graph",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "disjoint_union",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1."""

    n: int
    adj: tuple  # adj[v] = bitmask of neighbours of v

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self):
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1)
            while rest:
                low = rest & -rest
                yield (u, u + 1 + (low.bit_length() - 1))
                rest &= rest - 1

    def edge_count(self) -> int:
        return sum(self.degree(v) for v in range(self.n)) // 2

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def __repr__(self):  # short, tests print graphs a lot
        return f"Graph(n={self.n}, m={self.edge_count()})"


@dataclass(frozen=True)
class Embedding:
    """Injective map pattern vertex -> host vertex preserving both
    adjacency and non-adjacency."""

    mapping: tuple

    def image(self):
        return frozenset(self.mapping)


@dataclass(frozen=True)
class SetClassification:
    is_clique: bool
    is_stable: bool
    edge_count: int
    nonedge_count: int


@dataclass(frozen=True)
class HomogeneousSet:
    size: int
    witness: frozenset
    kind: str  # "clique" | "stable"


def _check_vertex(v, n):
    if not 0 <= v < n:
        raise InvalidVertex(f"vertex {v} outside 0..{n - 1}")


def build_graph(n, edges) -> Graph:
    """Graph with exactly the given edges."""
    if not 0 <= n <= MAX_VERTICES:
        raise InvalidParameters(f"vertex count {n} outside 0..{MAX_VERTICES}")
    adj = [0] * n
    for u, v in edges:
        _check_vertex(u, n)
        _check_vertex(v, n)
        if u == v:
            raise SelfLoop(f"self-loop at {u}")
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def from_masks(n, adj) -> Graph:
    """Trusted fast constructor (masks already symmetric, no loops)."""
    return Graph(n, tuple(adj))


def complement(g: Graph) -> Graph:
    full = g.vertex_mask()
    return Graph(g.n, tuple((full & ~g.adj[v]) & ~(1 << v) for v in range(g.n)))


def induced(g: Graph, vertices):
    """Induced subgraph on the given vertex set.

    Returns (subgraph, order) where order[i] is the original label of
    the subgraph's vertex i (ascending).
    """
    order = sorted(set(vertices))
    for v in order:
        _check_vertex(v, g.n)
    pos = {v: i for i, v in enumerate(order)}
    adj = [0] * len(order)
    for i, v in enumerate(order):
        rest = g.adj[v]
        while rest:
            low = rest & -rest
            w = low.bit_length() - 1
            rest &= rest - 1
            j = pos.get(w)
            if j is not None:
                adj[i] |= 1 << j
    return Graph(len(order), tuple(adj)), order


def classify_set(g: Graph, vertices) -> SetClassification:
    """Edge/non-edge census of the unordered pairs inside a vertex set."""
    vs = sorted(set(vertices))
    for v in vs:
        _check_vertex(v, g.n)
    mask = 0
    for v in vs:
        mask |= 1 << v
    edges = 0
    for v in vs:
        edges += (g.adj[v] & mask).bit_count()
    edges //= 2
    pairs = len(vs) * (len(vs) - 1) // 2
    nonedges = pairs - edges
    return SetClassification(
        is_clique=nonedges == 0, is_stable=edges == 0, edge_count=edges, nonedge_count=nonedges
    )


def find_induced_copy(host: Graph, pattern: Graph):
    """Some induced embedding of pattern into host, or None."""
    m = _kernels.find_induced(host.n, host.adj, pattern.n, pattern.adj)
    if m is None:
        return None
    return Embedding(m)


def is_induced_embedding(host: Graph, pattern: Graph, emb: Embedding) -> bool:
    """Independent re-validation used by certificate checks."""
    m = emb.mapping
    if len(m) != pattern.n or len(set(m)) != pattern.n:
        return False
    if any(not 0 <= w < host.n for w in m):
        return False
    for u in range(pattern.n):
        for v in range(u + 1, pattern.n):
            if pattern.has_edge(u, v) != host.has_edge(m[u], m[v]):
                return False
    return True


def _mask_to_set(mask):
    out = set()
    while mask:
        low = mask & -mask
        out.add(low.bit_length() - 1)
        mask &= mask - 1
    return frozenset(out)


def max_homogeneous(g: Graph) -> HomogeneousSet:
    """Largest clique or stable set, exactly (branch and bound twice).

    Ties go to the clique.  h(empty graph) = 0.
    """
    csize, cmask = _kernels.max_clique(g.n, g.adj)
    co = complement(g)
    ssize, smask = _kernels.max_clique(co.n, co.adj)
    if csize >= ssize:
        return HomogeneousSet(csize, _mask_to_set(cmask), "clique")
    return HomogeneousSet(ssize, _mask_to_set(smask), "stable")


# ---------------------------------------------------------------------------
# graph6 (bit-exact per the standard format) and plain edge-list text


def _g6_size_bytes(n):
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    if n <= 68719476735:
        return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])
    raise InvalidParameters(f"graph6 cannot encode n = {n}")


def encode_graph6(g: Graph) -> str:
    """graph6 text: size bytes, then column-major upper-triangle bits
    x(0,1), x(0,2), x(1,2), x(0,3), ... in 6-bit groups, each + 63."""
    out = bytearray(_g6_size_bytes(g.n))
    acc = 0
    nbits = 0
    for v in range(1, g.n):
        col = g.adj[v]
        for u in range(v):
            acc = (acc << 1) | (col >> u & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = 0
                nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def decode_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    try:
        data = s.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ParseError("graph6 text is not ASCII") from exc
    if not data:
        raise ParseError("empty graph6 text")
    if any(b < 63 or b > 126 for b in data):
        raise ParseError("graph6 byte outside printable range")
    if data[0] == 126:
        if len(data) >= 2 and data[1] == 126:
            if len(data) < 8:
                raise ParseError("truncated graph6 size")
            n = 0
            for b in data[2:8]:
                n = (n << 6) | (b - 63)
            body = data[8:]
        else:
            if len(data) < 4:
                raise ParseError("truncated graph6 size")
            n = 0
            for b in data[1:4]:
                n = (n << 6) | (b - 63)
            body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    if n > MAX_VERTICES:
        raise ParseError(f"graph6 vertex count {n} exceeds supported {MAX_VERTICES}")
    npairs = n * (n - 1) // 2
    need = (npairs + 5) // 6
    if len(body) != need:
        raise ParseError(f"graph6 body has {len(body)} bytes, expected {need}")
    bits = 0
    for b in body:
        bits = (bits << 6) | (b - 63)
    pad = 6 * need - npairs
    bits >>= pad
    adj = [0] * n
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits >> (npairs - 1 - idx) & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            idx += 1
    return Graph(n, tuple(adj))


def encode_edgelist(g: Graph) -> str:
    lines = [f"{g.n} {g.edge_count()}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def decode_edgelist(text: str) -> Graph:
    rows = [r for r in (line.strip() for line in text.splitlines()) if r]
    if not rows:
        raise ParseError("empty edge-list text")
    try:
        n, m = (int(tok) for tok in rows[0].split())
    except ValueError as exc:
        raise ParseError(f"bad edge-list header: {rows[0]!r}") from exc
    if len(rows) - 1 != m:
        raise ParseError(f"edge-list declares {m} edges, found {len(rows) - 1}")
    edges = []
    for row in rows[1:]:
        try:
            u, v = (int(tok) for tok in row.split())
        except ValueError as exc:
            raise ParseError(f"bad edge-list row: {row!r}") from exc
        edges.append((u, v))
    return build_graph(n, edges)


# ---------------------------------------------------------------------------
# common small graphs


def empty_graph(n) -> Graph:
    return build_graph(n, [])


def complete_graph(n) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n) -> Graph:
    if n < 3:
        raise InvalidParameters("cycles need at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves) -> Graph:
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def disjoint_union(*graphs) -> Graph:
    adj = []
    offset = 0
    for g in graphs:
        adj.extend(a << offset for a in g.adj)
        offset += g.n
    return Graph(offset, tuple(adj))
