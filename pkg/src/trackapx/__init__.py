"""Approximation toolkit for tracking paths, fault tolerant feedback vertex
set, and vertex multicut in forests and chordal graphs.

Every approximation pipeline follows the same scheme: solve an exact
rational covering-LP relaxation, filter or round the fractional solution,
and combine with a bootstrap feedback vertex set.  Brute-force oracles
verify every guarantee at desk scale.
"""

from .graph import (
    Path,
    PathGroup,
    VertexSelection,
    WeightedGraph,
    find_cycle,
    is_acyclic_after_removal,
    unique_forest_path,
)
from .lp import CoveringLP, FractionalSolution, scale_and_cap, solve, threshold_filter

__version__ = "0.1.0"

__all__ = [
    "WeightedGraph",
    "Path",
    "PathGroup",
    "VertexSelection",
    "find_cycle",
    "unique_forest_path",
    "is_acyclic_after_removal",
    "CoveringLP",
    "FractionalSolution",
    "solve",
    "threshold_filter",
    "scale_and_cap",
    "__version__",
]
