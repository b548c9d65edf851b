"""Density-based clustering on a simulated quantum-search execution model."""

__version__ = "0.1.0"

from .classical import run_classical
from .datagen import DatasetSpec
from .grid import SearchSpace, TileGrid, build_grid, dynamic_search_space, search_space
from .grover import GroverOutcome, QueryLedger, gebs_nearest_higher, grover_find_all, grover_find_one
from .metrics import scores
from .model import ClusterResult, Params, Point, PointCloud, Role
from .pipeline import PipelineRun, run_quantum

__all__ = [
    "ClusterResult",
    "DatasetSpec",
    "GroverOutcome",
    "Params",
    "PipelineRun",
    "Point",
    "PointCloud",
    "QueryLedger",
    "Role",
    "SearchSpace",
    "TileGrid",
    "build_grid",
    "dynamic_search_space",
    "gebs_nearest_higher",
    "grover_find_all",
    "grover_find_one",
    "run_classical",
    "run_quantum",
    "scores",
    "search_space",
]
