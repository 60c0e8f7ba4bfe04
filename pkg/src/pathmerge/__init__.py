"""Edge-disjoint path systems in DAGs and merging minimization."""

from .graph import Dag, Edge, Path, PairSpec
from .menger import PathSystem, menger_paths, min_cut
from .merging import MergedSubpath, count_mergings, merging_edges

__all__ = [
    "Dag",
    "Edge",
    "Path",
    "PairSpec",
    "PathSystem",
    "MergedSubpath",
    "menger_paths",
    "min_cut",
    "count_mergings",
    "merging_edges",
]
