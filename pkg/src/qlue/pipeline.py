"""The full quantum-simulated clustering pipeline built on the search model.

Phase 1 collects each point's d_c neighborhood with repeated searches, phase 2
finds nearest highers with the Grover-enhanced binary search, phase 3 classifies
seeds and outliers with two whole-dataset searches, and phase 4 grows clusters
inside dynamic search spaces.  Under the deterministic execution model the
resulting labels are identical to the classical reference pipeline; only the
query ledger reflects the quantum cost model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classical import ordered_seeds
from .grid import TileGrid, build_grid, dynamic_search_space, search_space, space_points
from .grover import QueryLedger, gebs_nearest_higher, grover_find_all
from .model import NO_INDEX, ClusterResult, Params, PointCloud, Role, density_from_neighbors

PHASE_DENSITY = "local_density"
PHASE_NH = "nearest_higher"
PHASE_CLASSIFY = "classify"
PHASE_ASSIGN = "assign"


@dataclass
class PipelineRun:
    result: ClusterResult
    ledger: QueryLedger
    params: Params
    rng_seed: int


def q_local_density(
    points: PointCloud,
    grid: TileGrid,
    params: Params,
    ledger: QueryLedger,
    rng: np.random.Generator,
) -> None:
    dc_sq = params.dc_sq
    for j in range(points.n):
        space = search_space(grid, points.coords[j], params.d_c)
        idx = space_points(grid, space)  # includes j: the register holds the whole space
        s = points.sq_dists_from(j, idx)
        marked = (s < dc_sq) & (idx != j)  # own energy enters at full weight separately
        pos = np.full(points.n, -1, dtype=np.int64)
        pos[idx] = np.arange(idx.size)
        found = grover_find_all(idx, lambda d: marked[pos[d]], ledger, rng, PHASE_DENSITY)
        points.density[j] = density_from_neighbors(points.energy, j, found)


def q_nearest_highers(
    points: PointCloud,
    grid: TileGrid,
    params: Params,
    ledger: QueryLedger,
    rng: np.random.Generator,
) -> None:
    for j in range(points.n):
        space = search_space(grid, points.coords[j], params.d_m)
        idx = space_points(grid, space)
        nh, s = gebs_nearest_higher(points, idx, j, params, ledger, rng, PHASE_NH)
        points.nh_index[j] = NO_INDEX if nh is None else nh
        points.nh_sq[j] = s


def q_classify(
    points: PointCloud,
    params: Params,
    ledger: QueryLedger,
    rng: np.random.Generator,
) -> None:
    """Two whole-dataset searches: one per threshold rule of the role assignment."""
    domain = np.arange(points.n, dtype=np.int64)
    no_nh = points.nh_sq < 0
    seed_mask = (no_nh | (points.nh_sq > params.dc_sq)) & (points.density > params.rho_c)
    outlier_mask = (no_nh | (points.nh_sq > params.dm_sq)) & (points.density < params.rho_c)
    seeds = grover_find_all(domain, lambda d: seed_mask[d], ledger, rng, PHASE_CLASSIFY)
    outliers = grover_find_all(domain, lambda d: outlier_mask[d], ledger, rng, PHASE_CLASSIFY)
    points.role[:] = int(Role.FOLLOWER)
    points.role[outliers] = int(Role.OUTLIER)
    points.role[seeds] = int(Role.SEED)


def q_assign_clusters(
    points: PointCloud,
    grid: TileGrid,
    params: Params,
    ledger: QueryLedger,
    rng: np.random.Generator,
) -> ClusterResult:
    """Per seed: search the dynamic search space for followers of the cluster.

    The domain of each pass is the unlabeled non-outlier content of the current
    DSS; every batch of finds joins the cluster and widens the DSS.  Points
    claimed by an earlier seed are excluded from later searches (first claim
    wins, in seed order), and an empty domain is skipped without a search.
    """
    seeds = ordered_seeds(points)
    labels = np.full(points.n, NO_INDEX, dtype=np.int64)
    in_cluster = np.zeros(points.n, dtype=bool)
    searchable = points.role != int(Role.OUTLIER)
    for cid, seed in enumerate(seeds):
        labels[seed] = cid
    for cid, seed in enumerate(seeds):
        members = [seed]
        in_cluster[:] = False
        in_cluster[seed] = True
        while True:
            space = dynamic_search_space(grid, points, members, params.d_m)
            idx = space_points(grid, space)
            idx = idx[searchable[idx] & (labels[idx] < 0)]
            if idx.size == 0:
                break
            nh = points.nh_index
            follower_mask = (nh >= 0) & in_cluster[np.clip(nh, 0, None)]
            found = grover_find_all(
                idx, lambda d: follower_mask[d], ledger, rng, PHASE_ASSIGN
            )
            if not found:
                break
            labels[found] = cid
            in_cluster[found] = True
            members.extend(found)
    points.cluster_id[:] = labels
    outliers = [int(i) for i in np.flatnonzero(points.role == int(Role.OUTLIER))]
    return ClusterResult(labels=labels, seeds=seeds, outliers=outliers, n_clusters=len(seeds))


def run_quantum(
    points: PointCloud,
    params: Params,
    rng_seed: int = 0,
    *,
    grid: TileGrid | None = None,
) -> PipelineRun:
    """Run all four phases with a fresh ledger and a seeded measurement RNG."""
    points.reset_annotations()
    if grid is None:
        grid = build_grid(points, params.effective_tile_edge())
    ledger = QueryLedger()
    rng = np.random.default_rng(rng_seed)
    q_local_density(points, grid, params, ledger, rng)
    q_nearest_highers(points, grid, params, ledger, rng)
    q_classify(points, params, ledger, rng)
    result = q_assign_clusters(points, grid, params, ledger, rng)
    return PipelineRun(result=result, ledger=ledger, params=params, rng_seed=rng_seed)
