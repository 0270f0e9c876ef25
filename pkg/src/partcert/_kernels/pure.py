"""Pure-Python search kernels.

Bit-exact twins of the compiled kernels in ``_fast.pyx``: identical
traversal order, identical node counting, identical witnesses.  The
compiled module handles graphs with at most 64 vertices (one machine
word per adjacency row); these versions take Python-int bitmask rows of
any width.

Shared search contract (any change here must be mirrored in _fast.pyx):

* max_clique: branch and bound with greedy colour-class bound; colour
  classes built lowest-bit-first, candidates expanded highest colour
  first, best clique replaced only on strict improvement.
* find_induced: pattern vertices by (descending degree, index); host
  candidates ascending; candidate masks refined per placement.
* solve_partition: vertices by (|2*deg - n|, index) ascending, parts in
  pattern order, an empty part is skipped unless the previous part with
  an equal constraint is nonempty, one budget unit per attempted
  (vertex, part) placement, counted before the feasibility test.
"""

from __future__ import annotations

COMPILED = False

# part constraint codes understood by the native solver
STABLE = 0
CLIQUE = 1
ONE_NONEDGE = 2
CLUSTER = 3

# solve_partition statuses
DONE = 0  # search space exhausted (no solution / all solutions collected)
FOUND = 1  # stopped at first solution
UNKNOWN = 2  # budget ran out


def max_clique(n, adj):
    """Exact maximum clique of the bitmask graph; returns (size, mask)."""
    best_size = 0
    best_mask = 0
    if n == 0:
        return 0, 0

    def expand(cur_mask, cur_size, cand):
        nonlocal best_size, best_mask
        if cand == 0:
            if cur_size > best_size:
                best_size = cur_size
                best_mask = cur_mask
            return
        # greedy colouring of cand: colour classes are independent sets
        order = []
        colors = []
        rem = cand
        c = 0
        while rem:
            c += 1
            avail = rem
            while avail:
                v = (avail & -avail).bit_length() - 1
                order.append(v)
                colors.append(c)
                avail &= ~adj[v]
                avail &= ~(1 << v)
                rem &= ~(1 << v)
        for i in range(len(order) - 1, -1, -1):
            if cur_size + colors[i] <= best_size:
                return
            v = order[i]
            expand(cur_mask | (1 << v), cur_size + 1, cand & adj[v])
            cand &= ~(1 << v)

    expand(0, 0, (1 << n) - 1)
    return best_size, best_mask


def find_induced(host_n, host_adj, pat_n, pat_adj):
    """First induced embedding of the pattern into the host, or None.

    Returns a tuple m with m[u] = host vertex for pattern vertex u.
    """
    if pat_n == 0:
        return ()
    if pat_n > host_n:
        return None
    pat_deg = [pat_adj[u].bit_count() for u in range(pat_n)]
    order = sorted(range(pat_n), key=lambda u: (-pat_deg[u], u))
    host_all = (1 << host_n) - 1
    init = []
    for u in order:
        m = 0
        for w in range(host_n):
            if host_adj[w].bit_count() >= pat_deg[u]:
                m |= 1 << w
        init.append(m)

    mapping = [0] * pat_n

    def place(depth, cands):
        if depth == pat_n:
            return True
        u = order[depth]
        avail = cands[depth]
        while avail:
            w = (avail & -avail).bit_length() - 1
            avail &= avail - 1
            mapping[u] = w
            ok = True
            new_cands = list(cands)
            for d2 in range(depth + 1, pat_n):
                x = order[d2]
                if pat_adj[u] >> x & 1:
                    nm = new_cands[d2] & host_adj[w]
                else:
                    nm = new_cands[d2] & ~host_adj[w]
                nm &= ~(1 << w) & host_all
                if nm == 0:
                    ok = False
                    break
                new_cands[d2] = nm
            if ok and place(depth + 1, new_cands):
                return True
        return False

    if place(0, init):
        return tuple(mapping)
    return None


def solve_partition(n, adj, codes, prev_same, budget, find_all):
    """Backtracking search for partitions with native per-part constraints.

    codes: per-part constraint code (STABLE/CLIQUE/ONE_NONEDGE/CLUSTER).
    prev_same[p]: largest q < p whose constraint equals part p's (else -1);
    an empty part is only tried when prev_same points at a nonempty part,
    which enumerates each orbit of interchangeable parts exactly once.
    Returns (status, nodes, solutions); solutions are tuples of part
    bitmasks (all k parts, empty parts allowed).
    """
    k = len(codes)
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
        if code == STABLE:
            return adj[v] & m == 0, 0
        if code == CLIQUE:
            return m & ~adj[v] == 0, 0
        if code == ONE_NONEDGE:
            extra = (m & ~adj[v]).bit_count()
            return nonedges[p] + extra <= 1, extra
        # CLUSTER: v's neighbourhood inside the part must be empty or a
        # whole clique component
        t = adj[v] & m
        if t == 0:
            return True, 0
        u = (t & -t).bit_length() - 1
        return t == ((adj[u] & m) | (1 << u)), 0

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
        return UNKNOWN, nodes, solutions
    if solutions and not find_all:
        return FOUND, nodes, solutions
    return DONE, nodes, solutions
