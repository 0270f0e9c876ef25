# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernels (n <= 64, one machine word per adjacency row).

Bit-exact twins of partcert._kernels.pure: identical traversal order,
node counting and witnesses.  Keep the two files in sync.
"""

COMPILED = True

STABLE = 0
CLIQUE = 1
ONE_NONEDGE = 2
CLUSTER = 3

DONE = 0
FOUND = 1
UNKNOWN = 2

cdef extern from *:
    int __builtin_ctzll(unsigned long long)
    int __builtin_popcountll(unsigned long long)

ctypedef unsigned long long u64


cdef inline u64 _full_mask(int n):
    if n == 0:
        return 0
    return ((<u64>1 << (n - 1)) << 1) - 1


# ---------------------------------------------------------------------------
# maximum clique

cdef u64 _clique_best_mask
cdef int _clique_best_size


cdef void _clique_expand(u64 *adj, u64 cur_mask, int cur_size, u64 cand):
    global _clique_best_mask, _clique_best_size
    cdef int order[64]
    cdef int colors[64]
    cdef int cnt = 0, c = 0, i, v
    cdef u64 rem, avail
    if cand == 0:
        if cur_size > _clique_best_size:
            _clique_best_size = cur_size
            _clique_best_mask = cur_mask
        return
    rem = cand
    while rem:
        c += 1
        avail = rem
        while avail:
            v = __builtin_ctzll(avail)
            order[cnt] = v
            colors[cnt] = c
            cnt += 1
            avail &= ~adj[v]
            avail &= ~(<u64>1 << v)
            rem &= ~(<u64>1 << v)
    for i in range(cnt - 1, -1, -1):
        if cur_size + colors[i] <= _clique_best_size:
            return
        v = order[i]
        _clique_expand(adj, cur_mask | (<u64>1 << v), cur_size + 1, cand & adj[v])
        cand &= ~(<u64>1 << v)


def max_clique(int n, adj_rows):
    """Exact maximum clique; returns (size, mask)."""
    global _clique_best_mask, _clique_best_size
    cdef u64 adj[64]
    cdef int v
    if n == 0:
        return 0, 0
    for v in range(n):
        adj[v] = <u64>adj_rows[v]
    _clique_best_size = 0
    _clique_best_mask = 0
    _clique_expand(adj, 0, 0, _full_mask(n))
    return _clique_best_size, int(_clique_best_mask)


# ---------------------------------------------------------------------------
# induced subgraph embedding

cdef bint _induced_place(
    u64 *host_adj,
    u64 *pat_adj,
    int *order,
    int *mapping,
    u64 *cands,
    int depth,
    int pat_n,
    u64 host_all,
):
    cdef int u, w, d2, x
    cdef bint ok
    cdef u64 avail, nm
    if depth == pat_n:
        return True
    u = order[depth]
    avail = cands[depth * 64 + depth]
    while avail:
        w = __builtin_ctzll(avail)
        avail &= avail - 1
        mapping[u] = w
        ok = True
        for d2 in range(depth + 1, pat_n):
            x = order[d2]
            if (pat_adj[u] >> x) & 1:
                nm = cands[depth * 64 + d2] & host_adj[w]
            else:
                nm = cands[depth * 64 + d2] & ~host_adj[w]
            nm &= ~(<u64>1 << w) & host_all
            if nm == 0:
                ok = False
                break
            cands[(depth + 1) * 64 + d2] = nm
        if ok and _induced_place(
            host_adj, pat_adj, order, mapping, cands, depth + 1, pat_n, host_all
        ):
            return True
    return False


def find_induced(int host_n, host_rows, int pat_n, pat_rows):
    """First induced embedding of the pattern into the host, or None."""
    cdef u64 host_adj[64]
    cdef u64 pat_adj[64]
    cdef int order[64]
    cdef int mapping[64]
    cdef u64 cands[4160]  # (pat_n + 1) rows of 64 candidate masks
    cdef int u, w, i
    cdef u64 m
    if pat_n == 0:
        return ()
    if pat_n > host_n:
        return None
    for u in range(host_n):
        host_adj[u] = <u64>host_rows[u]
    pydeg = []
    for u in range(pat_n):
        pat_adj[u] = <u64>pat_rows[u]
        pydeg.append(__builtin_popcountll(pat_adj[u]))
    pyorder = sorted(range(pat_n), key=lambda x: (-pydeg[x], x))
    for i in range(pat_n):
        order[i] = pyorder[i]
    cdef u64 host_all = _full_mask(host_n)
    for i in range(pat_n):
        u = order[i]
        m = 0
        for w in range(host_n):
            if __builtin_popcountll(host_adj[w]) >= pydeg[u]:
                m |= <u64>1 << w
        cands[i] = m
    if _induced_place(host_adj, pat_adj, order, mapping, cands, 0, pat_n, host_all):
        return tuple(mapping[u] for u in range(pat_n))
    return None


# ---------------------------------------------------------------------------
# native partition solver

cdef struct SolveState:
    int n
    int k
    long long budget
    long long nodes
    bint find_all
    bint exhausted
    bint stop


cdef inline bint _can_add(
    u64 *adj, int *codes, u64 *masks, int *nonedges, int p, int v, int *extra_out
):
    cdef int code = codes[p]
    cdef u64 m = masks[p]
    cdef u64 t
    cdef int u, extra
    extra_out[0] = 0
    if code == STABLE:
        return (adj[v] & m) == 0
    if code == CLIQUE:
        return (m & ~adj[v]) == 0
    if code == ONE_NONEDGE:
        extra = __builtin_popcountll(m & ~adj[v])
        extra_out[0] = extra
        return nonedges[p] + extra <= 1
    t = adj[v] & m
    if t == 0:
        return True
    u = __builtin_ctzll(t)
    return t == ((adj[u] & m) | (<u64>1 << u))


cdef void _solve_recurse(
    SolveState *st,
    u64 *adj,
    int *codes,
    int *prev_same,
    int *order,
    u64 *masks,
    int *nonedges,
    int i,
    list solutions,
):
    cdef int v, p, extra
    if i == st.n:
        solutions.append(tuple(int(masks[p]) for p in range(st.k)))
        if not st.find_all:
            st.stop = True
        return
    v = order[i]
    for p in range(st.k):
        if masks[p] == 0 and prev_same[p] != -1 and masks[prev_same[p]] == 0:
            continue
        st.nodes += 1
        if st.nodes > st.budget:
            st.exhausted = True
            st.stop = True
            return
        if _can_add(adj, codes, masks, nonedges, p, v, &extra):
            masks[p] |= <u64>1 << v
            nonedges[p] += extra
            _solve_recurse(st, adj, codes, prev_same, order, masks, nonedges, i + 1, solutions)
            nonedges[p] -= extra
            masks[p] &= ~(<u64>1 << v)
            if st.stop:
                return


def solve_partition(int n, adj_rows, pycodes, pyprev, long long budget, bint find_all):
    """Backtracking partition search; see the pure twin for the contract."""
    cdef u64 adj[64]
    cdef int codes[64]
    cdef int prev_same[64]
    cdef int order[64]
    cdef u64 masks[64]
    cdef int nonedges[64]
    cdef int v, p, i
    cdef int k = len(pycodes)
    cdef SolveState st
    pydeg = []
    for v in range(n):
        adj[v] = <u64>adj_rows[v]
        pydeg.append(__builtin_popcountll(adj[v]))
    for p in range(k):
        codes[p] = pycodes[p]
        prev_same[p] = pyprev[p]
        masks[p] = 0
        nonedges[p] = 0
    pyorder = sorted(range(n), key=lambda x: (abs(2 * pydeg[x] - n), x))
    for i in range(n):
        order[i] = pyorder[i]
    st.n = n
    st.k = k
    st.budget = budget
    st.nodes = 0
    st.find_all = find_all
    st.exhausted = False
    st.stop = False
    solutions = []
    _solve_recurse(&st, adj, codes, prev_same, order, masks, nonedges, 0, solutions)
    if st.exhausted:
        return UNKNOWN, st.nodes, solutions
    if solutions and not find_all:
        return FOUND, st.nodes, solutions
    return DONE, st.nodes, solutions
