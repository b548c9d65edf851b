"""Uniform rectangular tiling and search-space computation.

Tiles are axis-aligned boxes of edge ``tile_edge`` with half-open membership
[low, high) per axis; the topmost boundary is closed so every point lands in
exactly one tile.  Search spaces are the tile sets covering the axis-aligned
box that circumscribes a query circle (a harmless superset of the circle; the
search predicates do the exact filtering).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, IndexOutOfRange
from .model import PointCloud

_EMPTY = np.empty(0, dtype=np.int64)


@dataclass(frozen=True)
class TileGrid:
    origin: np.ndarray  # (d,) lower corner of the bounding box
    tile_edge: float
    dims: np.ndarray  # (d,) tile counts per axis
    buckets: dict[int, np.ndarray]  # flat tile index -> ascending point indices

    @property
    def n_tiles(self) -> int:
        return int(np.prod(self.dims))

    def bucket(self, tile: int) -> np.ndarray:
        return self.buckets.get(tile, _EMPTY)


@dataclass(frozen=True)
class SearchSpace:
    tiles: frozenset[int]
    point_count: int


def build_grid(points: PointCloud, tile_edge: float) -> TileGrid:
    if tile_edge <= 0:
        raise EmptyInput(f"tile_edge must be positive, got {tile_edge}")
    origin = points.coords.min(axis=0)
    span = points.coords.max(axis=0) - origin
    dims = np.floor(span / tile_edge).astype(np.int64) + 1
    multi = np.floor((points.coords - origin) / tile_edge).astype(np.int64)
    np.clip(multi, 0, dims - 1, out=multi)
    flat = np.ravel_multi_index(multi.T, dims)
    order = np.argsort(flat, kind="stable")
    buckets: dict[int, np.ndarray] = {}
    uniq, starts = np.unique(flat[order], return_index=True)
    for k, (tile, start) in enumerate(zip(uniq, starts)):
        stop = starts[k + 1] if k + 1 < len(starts) else len(order)
        buckets[int(tile)] = np.sort(order[start:stop])
    return TileGrid(origin=origin, tile_edge=tile_edge, dims=dims, buckets=buckets)


def _tiles_for_box(grid: TileGrid, lo_corner: np.ndarray, hi_corner: np.ndarray) -> frozenset[int]:
    """All tiles intersecting [lo_corner, hi_corner], clipped to the grid."""
    lo = np.floor((lo_corner - grid.origin) / grid.tile_edge).astype(np.int64)
    hi = np.floor((hi_corner - grid.origin) / grid.tile_edge).astype(np.int64)
    lo = np.maximum(lo, 0)
    hi = np.minimum(hi, grid.dims - 1)
    if np.any(lo > hi):
        return frozenset()
    ranges = [range(int(a), int(b) + 1) for a, b in zip(lo, hi)]
    return frozenset(
        int(np.ravel_multi_index(idx, grid.dims)) for idx in itertools.product(*ranges)
    )


def _space_from_tiles(grid: TileGrid, tiles: frozenset[int]) -> SearchSpace:
    count = sum(len(grid.bucket(t)) for t in tiles)
    return SearchSpace(tiles=tiles, point_count=count)


def search_space(grid: TileGrid, center, radius: float) -> SearchSpace:
    """Tiles covering the square of half-width ``radius`` around ``center``."""
    if radius <= 0:
        raise EmptyInput(f"radius must be positive, got {radius}")
    center = np.asarray(center, dtype=np.float64)
    return _space_from_tiles(grid, _tiles_for_box(grid, center - radius, center + radius))


def dynamic_search_space(
    grid: TileGrid, points: PointCloud, members, d_m: float
) -> SearchSpace:
    """Tiles covering the minimum bounding box of the 2*d_m windows of members."""
    members = np.asarray(members, dtype=np.int64).reshape(-1)
    if members.size == 0:
        raise EmptyInput("dynamic search space needs at least one member")
    if members.min() < 0 or members.max() >= points.n:
        raise IndexOutOfRange("cluster member index out of range")
    lo = points.coords[members].min(axis=0) - d_m
    hi = points.coords[members].max(axis=0) + d_m
    return _space_from_tiles(grid, _tiles_for_box(grid, lo, hi))


def space_points(grid: TileGrid, space: SearchSpace) -> np.ndarray:
    """Ascending point indices bucketed in the space's tiles."""
    if not space.tiles:
        return _EMPTY
    parts = [grid.bucket(t) for t in sorted(space.tiles)]
    return np.sort(np.concatenate(parts)) if parts else _EMPTY
