"""Hereditary per-part membership constraints for the partition solver.

Each kind is a hereditary family (closed under induced subgraphs), so
the backtracking solver may prune a part as soon as its current induced
subgraph leaves the family.  Kinds with a compiled fast path in the
solver: stable sets, cliques, at-most-one-non-edge, and P3-free
(recognised inside forb_list).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels
from .graphs import (
    Graph,
    complement,
    complete_graph,
    cycle_graph,
    empty_graph,
    find_induced_copy,
    induced,
    path_graph,
)

K1 = complete_graph(1)
K2 = complete_graph(2)
S2 = empty_graph(2)
S3 = empty_graph(3)
P3 = path_graph(3)
P3_COMPLEMENT = complement(P3)
C4 = cycle_graph(4)


@dataclass(frozen=True)
class PartConstraint:
    """A named hereditary family; payload graphs where the kind needs one."""

    kind: str
    payload: tuple = ()

    def describe(self) -> str:
        if self.payload:
            inner = ",".join(f"{g.n}v{g.edge_count()}e" for g in self.payload)
            return f"{self.kind}({inner})"
        return self.kind


def stable() -> PartConstraint:
    return PartConstraint("stable")


def clique() -> PartConstraint:
    return PartConstraint("clique")


def at_most_one_nonedge() -> PartConstraint:
    return PartConstraint("one_nonedge")


def iota(j: Graph) -> PartConstraint:
    """Graphs isomorphic to induced subgraphs of j."""
    return PartConstraint("iota", (j,))


def union_clique(j: Graph) -> PartConstraint:
    """Disjoint union of an induced subgraph of j with a clique."""
    return PartConstraint("union_clique", (j,))


def join_clique(j: Graph) -> PartConstraint:
    """Join of an induced subgraph of j with a clique."""
    return PartConstraint("join_clique", (j,))


def clique_plus_pendant() -> PartConstraint:
    """Complete graphs, or complete after removing one vertex of degree <= 1."""
    return PartConstraint("clique_plus_pendant")


def clique_or_antistar() -> PartConstraint:
    """Complete graphs, or a complete graph plus one isolated vertex.

    An antistar is the complement of a star K_{1,m}, which is exactly
    K_m plus an isolated vertex; induced subgraphs of antistars are the
    same shapes, so the family is already hereditary.
    """
    return PartConstraint("clique_or_antistar")


def forb_list(*patterns: Graph) -> PartConstraint:
    """Graphs with no induced copy of any listed pattern."""
    return PartConstraint("forb_list", tuple(patterns))


def p3_free() -> PartConstraint:
    return forb_list(P3)


def _is_complete(g: Graph) -> bool:
    full = g.vertex_mask()
    return all((g.adj[v] | (1 << v)) == full for v in range(g.n))


def _is_edgeless(g: Graph) -> bool:
    return all(a == 0 for a in g.adj)


def _in_iota(g: Graph, j: Graph) -> bool:
    return g.n <= j.n and find_induced_copy(j, g) is not None


def _components(g: Graph):
    seen = 0
    out = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        comp = 1 << v
        frontier = comp
        while frontier:
            nxt = 0
            while frontier:
                low = frontier & -frontier
                frontier &= frontier - 1
                nxt |= g.adj[low.bit_length() - 1]
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        out.append(comp)
    return out


def _mask_vertices(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask &= mask - 1
    return out


def satisfies_constraint(g: Graph, c: PartConstraint) -> bool:
    """Exact membership of g in the constraint's family."""
    kind = c.kind
    if kind == "stable":
        return _is_edgeless(g)
    if kind == "clique":
        return _is_complete(g)
    if kind == "one_nonedge":
        pairs = g.n * (g.n - 1) // 2
        return pairs - g.edge_count() <= 1
    if kind == "iota":
        return _in_iota(g, c.payload[0])
    if kind == "union_clique":
        j = c.payload[0]
        if _in_iota(g, j):
            return True
        for comp in _components(g):
            vs = _mask_vertices(comp)
            sub, _ = induced(g, vs)
            if not _is_complete(sub):
                continue
            rest, _ = induced(g, [v for v in range(g.n) if not comp >> v & 1])
            if _in_iota(rest, j):
                return True
        return False
    if kind == "join_clique":
        j = c.payload[0]
        full = g.vertex_mask()
        universal = [v for v in range(g.n) if (g.adj[v] | (1 << v)) == full]
        core, _ = induced(g, [v for v in range(g.n) if v not in set(universal)])
        # removing every universal vertex is optimal: the family of
        # induced subgraphs of j is hereditary
        return _in_iota(core, j)
    if kind == "clique_plus_pendant":
        if _is_complete(g):
            return True
        for v in range(g.n):
            if g.degree(v) <= 1:
                rest, _ = induced(g, [u for u in range(g.n) if u != v])
                if _is_complete(rest):
                    return True
        return False
    if kind == "clique_or_antistar":
        if _is_complete(g):
            return True
        for v in range(g.n):
            if g.degree(v) == 0:
                rest, _ = induced(g, [u for u in range(g.n) if u != v])
                if _is_complete(rest):
                    return True
        return False
    if kind == "forb_list":
        return all(find_induced_copy(g, pat) is None for pat in c.payload)
    raise ValueError(f"unknown constraint kind {kind!r}")


def native_code(c: PartConstraint):
    """Solver fast-path code for the constraint, or None."""
    if c.kind == "stable":
        return _kernels.STABLE
    if c.kind == "clique":
        return _kernels.CLIQUE
    if c.kind == "one_nonedge":
        return _kernels.ONE_NONEDGE
    if c.kind == "forb_list" and len(c.payload) == 1:
        pat = c.payload[0]
        if pat.n == 3 and pat.edge_count() == 2:  # the only 3-vertex 2-edge graph
            return _kernels.CLUSTER
    return None
