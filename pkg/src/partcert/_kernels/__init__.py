"""Kernel backend selection.

At import time the compiled extension (``_fast``) is preferred when it
built; the pure-Python twins are the fallback.  The compiled kernels
only accept graphs with n <= 64, so the per-call dispatchers route wider
inputs to the pure versions regardless of backend.

Set PARTCERT_BACKEND=pure in the environment to force the fallback
(used by the benchmark and the equivalence tests).
"""

from __future__ import annotations

import os

from . import pure

STABLE = pure.STABLE
CLIQUE = pure.CLIQUE
ONE_NONEDGE = pure.ONE_NONEDGE
CLUSTER = pure.CLUSTER
DONE = pure.DONE
FOUND = pure.FOUND
UNKNOWN = pure.UNKNOWN

_fast = None
if os.environ.get("PARTCERT_BACKEND", "auto") != "pure":
    try:
        import importlib

        _fast = importlib.import_module(__name__ + "._fast")
    except ImportError:
        _fast = None

BACKEND = "compiled" if _fast is not None else "pure"


def max_clique(n, adj):
    if _fast is not None and n <= 64:
        return _fast.max_clique(n, list(adj))
    return pure.max_clique(n, adj)


def find_induced(host_n, host_adj, pat_n, pat_adj):
    if _fast is not None and host_n <= 64 and pat_n <= 64:
        return _fast.find_induced(host_n, list(host_adj), pat_n, list(pat_adj))
    return pure.find_induced(host_n, host_adj, pat_n, pat_adj)


def solve_partition(n, adj, codes, prev_same, budget, find_all):
    if _fast is not None and n <= 64 and len(codes) <= 64:
        return _fast.solve_partition(
            n, list(adj), list(codes), list(prev_same), budget, find_all
        )
    return pure.solve_partition(n, adj, codes, prev_same, budget, find_all)
