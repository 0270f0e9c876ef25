"""Backtracking partition engine and everything built on it.

The engine assigns vertices (most constrained first: degree nearest
n/2) to pattern parts, pruning a part as soon as its induced subgraph
leaves the part's hereditary family.  Parts with equal constraints are
interchangeable, so an empty part is only tried when it is the first
empty part of its equality group; find_all therefore enumerates each
unordered partition exactly once.

Budgets count attempted (vertex, part) placements.  A blown budget
yields status "unknown", never a wrong "none".
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from . import _kernels
from .constraints import clique, iota, native_code, satisfies_constraint, stable
from .errors import HypothesisUnmet, InvalidParameters
from .graphs import Embedding, Graph, classify_set, complement, induced
from .isoclasses import canonical_key, iso_representatives

UNLIMITED = 1 << 62

__all__ = [
    "SolveResult",
    "pattern_partition",
    "st_member",
    "chi_c",
    "ChiCResult",
    "is_reduced",
    "ReducedResult",
    "minimal_dangerous",
    "is_s_star",
    "find_witness",
    "Witness",
]


@dataclass(frozen=True)
class SolveResult:
    status: str  # "found" | "none" | "all" | "unknown"
    partitions: tuple  # tuples of frozensets, one per part (may be empty sets)
    nodes: int

    @property
    def first(self):
        return self.partitions[0] if self.partitions else None


def _mask_to_fset(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask &= mask - 1
    return frozenset(out)


def _prev_same(constraints):
    prev = [-1] * len(constraints)
    for p, c in enumerate(constraints):
        for q in range(p - 1, -1, -1):
            if constraints[q] == c:
                prev[p] = q
                break
    return prev


def _solve_generic(g, constraints, prev_same, budget, find_all):
    """Mixed native/generic traversal; mirrors the kernel contract."""
    n, adj = g.n, g.adj
    k = len(constraints)
    codes = [native_code(c) for c in constraints]
    deg = [adj[v].bit_count() for v in range(n)]
    order = sorted(range(n), key=lambda v: (abs(2 * deg[v] - n), v))
    masks = [0] * k
    nonedges = [0] * k
    solutions = []
    nodes = 0
    exhausted = False
    stop = False

    def can_add(p, v):
        code = codes[p]
        m = masks[p]
        if code == _kernels.STABLE:
            return adj[v] & m == 0, 0
        if code == _kernels.CLIQUE:
            return m & ~adj[v] == 0, 0
        if code == _kernels.ONE_NONEDGE:
            extra = (m & ~adj[v]).bit_count()
            return nonedges[p] + extra <= 1, extra
        if code == _kernels.CLUSTER:
            t = adj[v] & m
            if t == 0:
                return True, 0
            u = (t & -t).bit_length() - 1
            return t == ((adj[u] & m) | (1 << u)), 0
        sub, _ = induced(g, _mask_to_fset(m | (1 << v)))
        return satisfies_constraint(sub, constraints[p]), 0

    def recurse(i):
        nonlocal nodes, exhausted, stop
        if i == n:
            solutions.append(tuple(masks))
            if not find_all:
                stop = True
            return
        v = order[i]
        for p in range(k):
            if masks[p] == 0 and prev_same[p] != -1 and masks[prev_same[p]] == 0:
                continue
            nodes += 1
            if nodes > budget:
                exhausted = True
                stop = True
                return
            ok, extra = can_add(p, v)
            if ok:
                masks[p] |= 1 << v
                nonedges[p] += extra
                recurse(i + 1)
                nonedges[p] -= extra
                masks[p] &= ~(1 << v)
                if stop:
                    return

    recurse(0)
    if exhausted:
        return _kernels.UNKNOWN, nodes, solutions
    if solutions and not find_all:
        return _kernels.FOUND, nodes, solutions
    return _kernels.DONE, nodes, solutions


def pattern_partition(g: Graph, pattern, find_all=False, budget=None) -> SolveResult:
    """Search for vertex partitions of g whose i-th part induces a member
    of pattern[i]'s family.  Empty parts are allowed."""
    constraints = tuple(pattern)
    if not constraints:
        raise InvalidParameters("pattern must be nonempty")
    budget_int = UNLIMITED if budget is None else int(budget)
    prev = _prev_same(constraints)
    codes = [native_code(c) for c in constraints]
    if all(code is not None for code in codes):
        status, nodes, sols = _kernels.solve_partition(
            g.n, g.adj, codes, prev, budget_int, find_all
        )
    else:
        status, nodes, sols = _solve_generic(g, constraints, prev, budget_int, find_all)
    partitions = tuple(tuple(_mask_to_fset(m) for m in sol) for sol in sols)
    if status == _kernels.UNKNOWN:
        return SolveResult("unknown", partitions, nodes)
    if find_all:
        return SolveResult("all", partitions, nodes)
    if status == _kernels.FOUND:
        return SolveResult("found", partitions, nodes)
    return SolveResult("none", (), nodes)


def st_member(g: Graph, s: int, t: int) -> bool:
    """g in H(s,t): partitionable into s stable sets and t cliques."""
    if s < 0 or t < 0:
        raise InvalidParameters("s and t must be nonnegative")
    if s + t == 0:
        return g.n == 0
    pattern = (stable(),) * s + (clique(),) * t
    result = pattern_partition(g, pattern)
    if result.status == "unknown":  # unreachable with the default budget
        raise InvalidParameters("st_member needs a definitive verdict")
    return result.status == "found"


@dataclass(frozen=True)
class ChiCResult:
    value: int
    witness: tuple | None  # (s, t) with g not in H(s, t), at l = value


def chi_c(h: Graph, l_max: int) -> ChiCResult:
    """Witnessing partition number, exhaustively over all s + t = l <= l_max."""
    if l_max < 1:
        raise InvalidParameters("l_max must be >= 1")
    best = 0
    best_witness = None
    for l in range(1, l_max + 1):
        for s in range(l, -1, -1):
            if not st_member(h, s, l - s):
                best = l
                best_witness = (s, l - s)
                break
    return ChiCResult(best, best_witness)


@dataclass(frozen=True)
class ReducedResult:
    reduced: bool
    good_s: int | None


def is_reduced(j: Graph, h: Graph, l: int) -> ReducedResult:
    """j is reduced for Forb(h) at level l iff some s in [0, l-1] admits no
    partition of h into an induced-subgraph-of-j part, s stable parts and
    l-1-s clique parts."""
    if l < 1:
        raise InvalidParameters("l must be >= 1")
    for s in range(l):
        pattern = (iota(j),) + (stable(),) * s + (clique(),) * (l - 1 - s)
        if pattern_partition(h, pattern).status == "none":
            return ReducedResult(True, s)
    return ReducedResult(False, None)


def minimal_dangerous(h: Graph, l: int, n_max: int):
    """All dangerous graphs with at most n_max vertices that are minimal
    under the induced-subgraph order, one representative per isomorphism
    class, sorted by (vertex count, canonical key)."""
    if n_max > 8:
        raise InvalidParameters("n_max is capped at 8")
    dangerous_by_key = {}

    def dangerous(graph):
        key = canonical_key(graph)
        if key not in dangerous_by_key:
            dangerous_by_key[key] = not is_reduced(graph, h, l).reduced
        return dangerous_by_key[key]

    out = []
    for n in range(1, n_max + 1):
        for rep in iso_representatives(n):
            if not dangerous(rep):
                continue
            minimal = True
            for v in range(rep.n):
                sub, _ = induced(rep, [u for u in range(rep.n) if u != v])
                if dangerous(sub):
                    minimal = False
                    break
            if minimal:
                out.append(rep)
    # contract check: returned graphs are dangerous with all deletions reduced
    for rep in out:
        assert dangerous(rep)
        for v in range(rep.n):
            sub, _ = induced(rep, [u for u in range(rep.n) if u != v])
            assert not dangerous(sub)
    return sorted(out, key=lambda g: (g.n, canonical_key(g)))


def is_s_star(g: Graph, s: int):
    """Smallest core certifying g is an s-star, or None.

    Adopted semantics: a set S with |S| <= s whose removal leaves a
    homogeneous set, every S-vertex complete or anticomplete to it.
    """
    if s < 0:
        raise InvalidParameters("s must be >= 0")
    full = g.vertex_mask()
    for size in range(min(s, g.n) + 1):
        for combo in combinations(range(g.n), size):
            core = 0
            for v in combo:
                core |= 1 << v
            rest = full & ~core
            cls = classify_set(g, _mask_to_fset(rest))
            if not (cls.is_clique or cls.is_stable):
                continue
            ok = True
            for v in combo:
                link = g.adj[v] & rest
                if link != 0 and link != rest:
                    ok = False
                    break
            if ok:
                return frozenset(combo)
    return None


# ---------------------------------------------------------------------------
# Ramsey-style witness finders: each follows its size-free construction and
# returns None when an ingredient (a large homogeneous set, a big enough
# star...) is missing, instead of computing existential thresholds.


@dataclass(frozen=True)
class Witness:
    graph: Graph  # induced subgraph of the host, relabelled
    embedding: Embedding  # into the host
    shape: str


def _max_clique_set(g: Graph):
    size, mask = _kernels.max_clique(g.n, g.adj)
    return size, sorted(_mask_to_fset(mask))


def _max_stable_set(g: Graph):
    return _max_clique_set(complement(g))


def _witness_from(g, vertices, shape):
    vs = sorted(vertices)
    sub, order = induced(g, vs)
    return Witness(sub, Embedding(tuple(order)), shape)


def _nonedge_count(g: Graph) -> int:
    return g.n * (g.n - 1) // 2 - g.edge_count()


def _clique_in(g, vertex_pool, want):
    """A clique of `want` vertices inside the pool, or None."""
    if want <= 0:
        return []
    pool = sorted(vertex_pool)
    if len(pool) < want:
        return None
    sub, order = induced(g, pool)
    size, members = _max_clique_set(sub)
    if size < want:
        return None
    return [order[i] for i in members[:want]]


def _is_star_graph(g: Graph) -> bool:
    if g.n == 0:
        return False
    for c in range(g.n):
        if g.degree(c) == g.n - 1:
            rest = [v for v in range(g.n) if v != c]
            if classify_set(g, rest).is_stable:
                return True
    return False


def _find_two_nonedge(g: Graph, h: int):
    if _nonedge_count(g) < 2:
        raise HypothesisUnmet("host needs at least two non-edges")
    size, stable_set = _max_stable_set(g)
    if size >= h:
        return _witness_from(g, stable_set[:h], "edgeless")
    for v in range(g.n):
        nonnbrs = [w for w in range(g.n) if w != v and not g.has_edge(v, w)]
        members = _clique_in(g, nonnbrs, h - 1)
        if members is not None:
            return _witness_from(g, [v] + members, "antistar")
    # a small two-non-edge core joined with a clique of common neighbours
    for trio in combinations(range(g.n), 3):
        cls = classify_set(g, trio)
        if cls.edge_count == 0:
            shape = "join_s3_clique"
        elif cls.edge_count == 1:
            shape = "join_p3bar_clique"
        else:
            continue
        common = [
            w for w in range(g.n) if w not in trio and all(g.has_edge(w, u) for u in trio)
        ]
        members = _clique_in(g, common, h - 3)
        if members is not None:
            return _witness_from(g, list(trio) + members, shape)
    if h >= 4:
        for quad in combinations(range(g.n), 4):
            sub, _ = induced(g, quad)
            if not all(sub.degree(i) == 2 for i in range(4)):
                continue  # induced C4 is the only 2-regular 4-vertex graph
            common = [
                w for w in range(g.n) if w not in quad and all(g.has_edge(w, u) for u in quad)
            ]
            members = _clique_in(g, common, h - 4)
            if members is not None:
                return _witness_from(g, list(quad) + members, "join_c4_clique")
    return None


def _find_nonclique_in_host(host: Graph, h: int, flipped: bool):
    """One-edge or star witness from a maximum stable set, as in the
    homogeneous-set extraction argument."""
    _, stable_set = _max_stable_set(host)
    sset = set(stable_set)
    suffix = "_in_complement" if flipped else ""
    for v in range(host.n):
        if v in sset:
            continue
        nbrs = [w for w in stable_set if host.has_edge(v, w)]
        nonnbrs = [w for w in stable_set if not host.has_edge(v, w)]
        if len(nbrs) >= h - 1:
            return [v] + nbrs[: h - 1], "star" + suffix
        if len(nbrs) >= 1 and len(nonnbrs) >= h - 2:
            return [v, nbrs[0]] + nonnbrs[: h - 2], "one_edge" + suffix
    return None


def _find_nonclique(g: Graph, h: int):
    if g.edge_count() == 0 or _nonedge_count(g) == 0:
        raise HypothesisUnmet("host must be neither complete nor edgeless")
    ssize, _ = _max_stable_set(g)
    csize, _ = _max_clique_set(g)
    if ssize >= csize:
        host, flipped = g, False
    else:
        host, flipped = complement(g), True
    found = _find_nonclique_in_host(host, h, flipped)
    if found is None:
        return None
    vertices, shape = found
    return _witness_from(g, vertices, shape)


def _best_star(host: Graph):
    """Maximum induced star: (centre, leaves) with the most leaves.

    The leaf set is a maximum stable subset of the centre's
    neighbourhood, hence maximal: no outside vertex adjacent to the
    centre is anticomplete to it."""
    best = None
    for c in range(host.n):
        nbrs = sorted(_mask_to_fset(host.adj[c]))
        if not nbrs:
            continue
        sub, order = induced(host, nbrs)
        size, members = _max_stable_set(sub)
        leaves = [order[i] for i in members]
        if best is None or len(leaves) > len(best[1]):
            best = (c, leaves)
    return best


def _find_nonstar_in_host(host: Graph, h: int, flipped: bool):
    star = _best_star(host)
    if star is None:
        return None
    u, leaves = star
    leafset = set(leaves)
    suffix = "_in_complement" if flipped else ""
    for v in range(host.n):
        if v == u or v in leafset:
            continue
        nbrs = [w for w in leaves if host.has_edge(v, w)]
        nonnbrs = [w for w in leaves if not host.has_edge(v, w)]
        if len(nbrs) >= h - 2:
            return [u, v] + nbrs[: h - 2], "join_pair_stable" + suffix
        if len(nbrs) >= 1 and len(nonnbrs) >= h - 2:
            return [v, nbrs[0]] + nonnbrs[: h - 2], "one_edge" + suffix
        if not nbrs and len(leaves) >= h - 2:
            # v is anticomplete to the leaves; star maximality forces uv
            # off, giving a star with one edge deleted
            assert not host.has_edge(u, v)
            return [u] + leaves[: h - 2] + [v], "star_minus_edge" + suffix
    return None


def _find_nonstar(g: Graph, h: int):
    co = complement(g)
    for side in (g, co):
        if side.edge_count() == 0 or _is_star_graph(side):
            raise HypothesisUnmet("host and complement must be neither edgeless nor stars")
    for host, flipped in ((g, False), (co, True)):
        found = _find_nonstar_in_host(host, h, flipped)
        if found is not None:
            vertices, shape = found
            return _witness_from(g, vertices, shape)
    return None


def find_witness(g: Graph, h_size: int, kind: str):
    """Constructive witness of the promised h_size-vertex shape, or None
    when the host is too small for the construction's ingredients."""
    if h_size < 3:
        raise InvalidParameters("h_size must be >= 3")
    if kind == "two_nonedge":
        return _find_two_nonedge(g, h_size)
    if kind == "nonclique":
        return _find_nonclique(g, h_size)
    if kind == "nonstar":
        return _find_nonstar(g, h_size)
    raise InvalidParameters(f"unknown witness kind {kind!r}")
