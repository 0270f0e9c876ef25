"""Constellations and their templates.

A constellation prescribes a finite placed graph (J, with a part index,
an adjacency flag per placed vertex, and a clique/stable flag per
part); a template in a host graph realizes it: a partition plus an
induced embedding whose placed vertices are complete or anticomplete to
the rest of their own part, the rest of each part being a clique or a
stable set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import InvalidParameters
from .graphs import Graph, build_graph, complete_graph, decode_graph6, encode_graph6
from .solver import UNLIMITED

__all__ = [
    "Constellation",
    "Template",
    "TemplateSearch",
    "is_irreducible",
    "find_template",
    "validate_template",
    "matching_pairs_constellation",
    "empty_constellation",
]


@dataclass(frozen=True)
class Constellation:
    j: Graph
    phi: tuple  # part index per vertex of j, values in 0..l-1
    alpha: tuple  # 0/1 per vertex of j
    beta: tuple  # 0/1 per part
    l: int
    s: int

    def __post_init__(self):
        if len(self.phi) != self.j.n or len(self.alpha) != self.j.n:
            raise InvalidParameters("phi and alpha must label every vertex of j")
        if len(self.beta) != self.l:
            raise InvalidParameters("beta must label every part")
        if any(not 0 <= p < self.l for p in self.phi):
            raise InvalidParameters("phi values must lie in 0..l-1")
        if any(a not in (0, 1) for a in self.alpha + self.beta):
            raise InvalidParameters("alpha and beta are 0/1 valued")
        for i in range(self.l):
            if sum(1 for p in self.phi if p == i) > self.s:
                raise InvalidParameters(f"fiber {i} exceeds size bound {self.s}")

    def fiber(self, i):
        return tuple(v for v in range(self.j.n) if self.phi[v] == i)

    def to_json(self, indent=None) -> str:
        return json.dumps(
            {
                "J": encode_graph6(self.j),
                "phi": list(self.phi),
                "alpha": list(self.alpha),
                "beta": list(self.beta),
                "l": self.l,
                "s": self.s,
            },
            sort_keys=True,
            indent=indent,
        )

    @staticmethod
    def from_json(text: str) -> "Constellation":
        doc = json.loads(text)
        return Constellation(
            j=decode_graph6(doc["J"]),
            phi=tuple(doc["phi"]),
            alpha=tuple(doc["alpha"]),
            beta=tuple(doc["beta"]),
            l=doc["l"],
            s=doc["s"],
        )


def empty_constellation(l: int, beta=None) -> Constellation:
    """No placed vertices; templates are plain homogeneous partitions."""
    if beta is None:
        beta = (1,) * l
    return Constellation(build_graph(0, []), (), (), tuple(beta), l, 0)


def matching_pairs_constellation(l: int) -> Constellation:
    """Complete graph on l paired vertices minus a perfect matching, one
    pair per part, everything flagged 1.

    Its templates are partitions into at-most-one-non-edge parts whose
    designated non-edge endpoints are pairwise adjacent across parts.
    """
    j = complete_graph(2 * l)
    adj = list(j.adj)
    for i in range(l):
        u, v = 2 * i, 2 * i + 1
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
    j = Graph(2 * l, tuple(adj))
    phi = tuple(i for i in range(l) for _ in (0, 1))
    return Constellation(j, phi, (1,) * (2 * l), (1,) * l, l, 2)


def is_irreducible(c: Constellation, strict_variant: bool = False) -> bool:
    """A placed vertex matching its part flag must have a fiber-mate
    excusing it: an adjacent mate with alpha 0, or a non-adjacent mate
    when the checked vertex (literal reading; the mate, with
    strict_variant) has alpha 1."""
    for v in range(c.j.n):
        if c.beta[c.phi[v]] != c.alpha[v]:
            continue
        excused = False
        for u in range(c.j.n):
            if u == v or c.phi[u] != c.phi[v]:
                continue
            if c.j.has_edge(u, v) and c.alpha[u] == 0:
                excused = True
                break
            witness_flag = c.alpha[u] if strict_variant else c.alpha[v]
            if not c.j.has_edge(u, v) and witness_flag == 1:
                excused = True
                break
        if not excused:
            return False
    return True


@dataclass(frozen=True)
class Template:
    placed: tuple  # ((j_vertex, host_vertex), ...) for the placed subset
    parts: tuple  # l frozensets partitioning the host's vertices


@dataclass(frozen=True)
class TemplateSearch:
    status: str  # "found" | "none" | "unknown"
    template: Template | None
    nodes: int


def _subsets_by_size(n):
    verts = range(n)
    for size in range(n, -1, -1):
        yield from combinations(verts, size)


def find_template(g: Graph, c: Constellation, allow_missing=False, budget=None) -> TemplateSearch:
    """Search for a template of c in g.

    With allow_missing, placements of every subset of the constellation
    graph are tried (largest first), which decides membership in the
    hereditary closure of template-admitting graphs: a subset placement
    in g extends to a full template in a supergraph and conversely.
    Budget counts attempted placements across both phases.
    """
    limit = UNLIMITED if budget is None else int(budget)
    nodes = 0
    exhausted = False

    def fill_parts(w, mapping):
        """Assign unplaced host vertices to parts under the alpha/beta
        contract."""
        nonlocal nodes, exhausted
        l = c.l
        placed_by_part = [[] for _ in range(l)]
        for v in w:
            placed_by_part[c.phi[v]].append(v)
        req_adj = [0] * l
        req_non = [0] * l
        for p in range(l):
            for v in placed_by_part[p]:
                if c.alpha[v]:
                    req_adj[p] |= 1 << mapping[v]
                else:
                    req_non[p] |= 1 << mapping[v]
        image = 0
        for v in w:
            image |= 1 << mapping[v]
        rest = [u for u in range(g.n) if not image >> u & 1]
        masks = [0] * l  # unplaced members only

        def can_place(u, p):
            if (g.adj[u] & req_adj[p]) != req_adj[p]:
                return False
            if g.adj[u] & req_non[p]:
                return False
            if c.beta[p]:
                return masks[p] & ~g.adj[u] == 0
            return masks[p] & g.adj[u] == 0

        def recurse(i):
            nonlocal nodes, exhausted
            if i == len(rest):
                parts = []
                for p in range(l):
                    members = {mapping[v] for v in placed_by_part[p]}
                    m = masks[p]
                    while m:
                        low = m & -m
                        members.add(low.bit_length() - 1)
                        m &= m - 1
                    parts.append(frozenset(members))
                return Template(
                    placed=tuple(sorted((v, mapping[v]) for v in w)), parts=tuple(parts)
                )
            u = rest[i]
            for p in range(l):
                nodes += 1
                if nodes > limit:
                    exhausted = True
                    return None
                if can_place(u, p):
                    masks[p] |= 1 << u
                    result = recurse(i + 1)
                    masks[p] &= ~(1 << u)
                    if result is not None or exhausted:
                        return result
            return None

        return recurse(0)

    def place(w, depth, mapping, used):
        nonlocal nodes, exhausted
        if depth == len(w):
            return fill_parts(w, mapping)
        v = w[depth]
        for host in range(g.n):
            if used >> host & 1:
                continue
            nodes += 1
            if nodes > limit:
                exhausted = True
                return None
            ok = True
            for prev in w[:depth]:
                if c.j.has_edge(v, prev) != g.has_edge(host, mapping[prev]):
                    ok = False
                    break
            if ok:
                mapping[v] = host
                result = place(w, depth + 1, mapping, used | (1 << host))
                del mapping[v]
                if result is not None or exhausted:
                    return result
        return None

    subsets = _subsets_by_size(c.j.n) if allow_missing else ((tuple(range(c.j.n)),))
    for w in subsets:
        template = place(w, 0, {}, 0)
        if template is not None:
            return TemplateSearch("found", template, nodes)
        if exhausted:
            return TemplateSearch("unknown", None, limit)
    return TemplateSearch("none", None, nodes)


def validate_template(g: Graph, c: Constellation, t: Template) -> bool:
    """Independent re-check of every template clause."""
    if len(t.parts) != c.l:
        return False
    seen = set()
    for part in t.parts:
        if part & seen:
            return False
        seen |= part
    if seen != set(range(g.n)):
        return False
    placed = dict(t.placed)
    if len(placed) != len(t.placed):
        return False
    hosts = list(placed.values())
    if len(set(hosts)) != len(hosts):
        return False
    for v1 in placed:
        for v2 in placed:
            if v1 < v2 and c.j.has_edge(v1, v2) != g.has_edge(placed[v1], placed[v2]):
                return False
    image = set(hosts)
    for v, host in placed.items():
        p = c.phi[v]
        if host not in t.parts[p]:
            return False
        outside = t.parts[p] - image
        for u in outside:
            if g.has_edge(host, u) != bool(c.alpha[v]):
                return False
    for p in range(c.l):
        outside = sorted(t.parts[p] - image)
        for a, b in combinations(outside, 2):
            if g.has_edge(a, b) != bool(c.beta[p]):
                return False
    return True
