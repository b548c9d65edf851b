"""Deterministic reference clustering pipeline (the classical O(m)-per-query baseline).

Serves as the correctness oracle for the quantum-simulated pipeline: both share
the exact integer distance comparisons, the index-ordered density summation and
the (distance, index) nearest-higher tie-break, so their outputs are bit-equal.
"""

from __future__ import annotations

import numpy as np

from .grid import TileGrid, build_grid, search_space, space_points
from .model import NO_INDEX, ClusterResult, Params, PointCloud, Role, density_from_neighbors


def local_density(points: PointCloud, grid: TileGrid, params: Params) -> None:
    """Fill ``points.density``: own energy plus half the energy within d_c (strict)."""
    dc_sq = params.dc_sq
    for j in range(points.n):
        space = search_space(grid, points.coords[j], params.d_c)
        idx = space_points(grid, space)
        s = points.sq_dists_from(j, idx)
        neighbors = idx[(s < dc_sq) & (idx != j)]
        points.density[j] = density_from_neighbors(points.energy, j, neighbors)


def nearest_higher_scan(
    points: PointCloud,
    grid: TileGrid,
    params: Params,
    j: int,
    *,
    global_scan: bool = False,
) -> tuple[int | None, int]:
    """Nearest point with strictly greater density within d_m (ties: lower index).

    Returns (index or None, exact squared distance or -1).  With ``global_scan``
    the d_m cap is dropped and the whole dataset is scanned instead.
    """
    if global_scan:
        idx = np.arange(points.n, dtype=np.int64)
    else:
        space = search_space(grid, points.coords[j], params.d_m)
        idx = space_points(grid, space)
    s = points.sq_dists_from(j, idx)
    mask = points.density[idx] > points.density[j]
    if not global_scan:
        mask &= s <= params.dm_sq
    if not np.any(mask):
        return None, NO_INDEX
    cand_idx = idx[mask]
    cand_s = s[mask]
    best = np.lexsort((cand_idx, cand_s))[0]
    return int(cand_idx[best]), int(cand_s[best])


def compute_nearest_highers(
    points: PointCloud, grid: TileGrid, params: Params, *, global_scan: bool = False
) -> None:
    for j in range(points.n):
        nh, s = nearest_higher_scan(points, grid, params, j, global_scan=global_scan)
        points.nh_index[j] = NO_INDEX if nh is None else nh
        points.nh_sq[j] = s


def classify_seeds_outliers(points: PointCloud, params: Params) -> None:
    """Roles from the two threshold rules; everything else becomes a follower.

    Seed: nearest higher farther than d_c (or absent) and density > rho_c.
    Outlier: nearest higher farther than delta*d_c (or absent) and density < rho_c.
    Both inequalities are strict, so the rules are mutually exclusive.
    """
    no_nh = points.nh_sq < 0
    seed = (no_nh | (points.nh_sq > params.dc_sq)) & (points.density > params.rho_c)
    outlier = (no_nh | (points.nh_sq > params.dm_sq)) & (points.density < params.rho_c)
    points.role[:] = int(Role.FOLLOWER)
    points.role[outlier] = int(Role.OUTLIER)
    points.role[seed] = int(Role.SEED)


def ordered_seeds(points: PointCloud) -> list[int]:
    """Seed indices by descending density, then ascending index (= cluster ids)."""
    seeds = np.flatnonzero(points.role == int(Role.SEED))
    order = np.lexsort((seeds, -points.density[seeds]))
    return [int(s) for s in seeds[order]]


def assign_clusters(points: PointCloud, grid: TileGrid, params: Params) -> ClusterResult:
    """Grow each cluster from its seed by repeatedly absorbing followers.

    A follower joins once its nearest higher is already in the cluster; points
    never reached (and outliers) keep label -1.  Seeds label only themselves.
    """
    del grid, params  # follower links were range-capped when annotated
    seeds = ordered_seeds(points)
    labels = np.full(points.n, NO_INDEX, dtype=np.int64)
    followers: dict[int, list[int]] = {}
    claimable = (points.role != int(Role.OUTLIER)) & (points.role != int(Role.SEED))
    for i in np.flatnonzero(claimable & (points.nh_index >= 0)):
        followers.setdefault(int(points.nh_index[i]), []).append(int(i))
    for cid, seed in enumerate(seeds):
        labels[seed] = cid
        frontier = [seed]
        while frontier:
            nxt = []
            for q in frontier:
                for p in followers.get(q, ()):
                    if labels[p] < 0:
                        labels[p] = cid
                        nxt.append(p)
            frontier = nxt
    points.cluster_id[:] = labels
    outliers = [int(i) for i in np.flatnonzero(points.role == int(Role.OUTLIER))]
    return ClusterResult(labels=labels, seeds=seeds, outliers=outliers, n_clusters=len(seeds))


def run_classical(
    points: PointCloud,
    params: Params,
    *,
    grid: TileGrid | None = None,
    nh_global: bool = False,
) -> ClusterResult:
    """Run all four phases on a fresh annotation state."""
    points.reset_annotations()
    if grid is None:
        grid = build_grid(points, params.effective_tile_edge())
    local_density(points, grid, params)
    compute_nearest_highers(points, grid, params, global_scan=nh_global)
    classify_seeds_outliers(points, params)
    return assign_clusters(points, grid, params)
