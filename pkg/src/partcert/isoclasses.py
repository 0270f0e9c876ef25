"""Canonical forms and isomorphism-class enumeration for small graphs.

Canonical key = minimum, over all vertex permutations, of the packed
upper-triangle adjacency bits (row-major).  Brute permutation search,
batched through numpy, is enough up to the 8-vertex cap used by the
dangerous-graph enumeration (12346 classes).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np

from .errors import InvalidParameters
from .graphs import Graph

__all__ = ["canonical_key", "iso_representatives"]

_MAX_N = 8


@lru_cache(maxsize=None)
def _perm_array(n):
    return np.array(list(permutations(range(n))), dtype=np.int64)


@lru_cache(maxsize=None)
def _triu_weights(n):
    iu, ju = np.triu_indices(n, 1)
    npairs = len(iu)
    weights = (1 << np.arange(npairs - 1, -1, -1)).astype(np.int64)
    return iu, ju, weights


def _matrix(g: Graph):
    a = np.zeros((g.n, g.n), dtype=bool)
    for v in range(g.n):
        rest = g.adj[v]
        while rest:
            low = rest & -rest
            a[v, low.bit_length() - 1] = True
            rest &= rest - 1
    return a


def canonical_key(g: Graph):
    """(n, min packed bits) — equal iff the graphs are isomorphic."""
    n = g.n
    if n > _MAX_N:
        raise InvalidParameters(f"canonical_key capped at {_MAX_N} vertices")
    if n <= 1:
        return (n, 0)
    a = _matrix(g)
    perms = _perm_array(n)
    iu, ju, weights = _triu_weights(n)
    permuted = a[perms[:, :, None], perms[:, None, :]]
    keys = permuted[:, iu, ju] @ weights
    return (n, int(keys.min()))


@lru_cache(maxsize=None)
def iso_representatives(n):
    """One representative per isomorphism class on exactly n vertices,
    sorted by canonical key."""
    if n > _MAX_N:
        raise InvalidParameters(f"iso_representatives capped at {_MAX_N} vertices")
    if n == 0:
        return (Graph(0, ()),)
    if n == 1:
        return (Graph(1, (0,)),)
    seen = {}
    for rep in iso_representatives(n - 1):
        for mask in range(1 << (n - 1)):
            adj = list(rep.adj) + [mask]
            rest = mask
            while rest:
                low = rest & -rest
                adj[low.bit_length() - 1] |= 1 << (n - 1)
                rest &= rest - 1
            g = Graph(n, tuple(adj))
            key = canonical_key(g)
            if key not in seen:
                seen[key] = g
    return tuple(seen[k] for k in sorted(seen))
