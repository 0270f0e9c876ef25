"""partcert: constructions and exact certification of graphs with
prescribed hereditary partition structure.

Builds partition systems, ARS/EPS graphs and P3-jumbles by seeded
randomized procedures, and certifies every finite combinatorial
property they are designed to satisfy (partition axioms, criticality
probes, jumble conditions), at desk scale, with budgeted exact
searches.
"""

from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
