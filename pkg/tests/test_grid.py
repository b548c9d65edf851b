import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlue.errors import EmptyInput, IndexOutOfRange
from qlue.grid import build_grid, dynamic_search_space, search_space, space_points
from qlue.model import PointCloud


def cloud(coords):
    coords = np.asarray(coords, dtype=float)
    return PointCloud(coords, np.ones(len(coords)))


def test_single_point_grid():
    grid = build_grid(cloud([[0.0, 0.0]]), 10.0)
    assert list(grid.dims) == [1, 1]
    assert {k: list(v) for k, v in grid.buckets.items()} == {0: [0]}


def test_half_open_bucketing():
    grid = build_grid(cloud([[0.0, 0.0], [15.0, 0.0]]), 10.0)
    assert grid.n_tiles == 2
    assert sorted(len(b) for b in grid.buckets.values()) == [1, 1]


def test_gaussian_partition_property():
    rng = np.random.default_rng(0)
    pts = cloud(rng.normal(0, 50, (750, 2)))
    grid = build_grid(pts, 20.0)
    seen = np.concatenate([b for b in grid.buckets.values()])
    assert len(seen) == 750
    assert len(np.unique(seen)) == 750


def test_build_grid_errors():
    with pytest.raises(EmptyInput):
        build_grid(cloud([[0.0, 0.0]]), 0.0)


def test_search_space_inside_one_tile():
    pts = cloud([[5.0, 5.0], [15.0, 5.0]])
    grid = build_grid(pts, 10.0)
    space = search_space(grid, [5.0, 5.0], 3.0)
    assert len(space.tiles) == 1
    assert space.point_count == 1


def test_search_space_corner_junction_touches_four_tiles():
    coords = [[x + 0.5, y + 0.5] for x in range(0, 40, 10) for y in range(0, 40, 10)]
    grid = build_grid(cloud(coords), 10.0)
    for radius in (0.1, 3.0, 9.0):
        space = search_space(grid, [20.0, 20.0], radius)
        assert len(space.tiles) >= 4


def test_search_space_outside_grid_clips_to_empty():
    grid = build_grid(cloud([[0.0, 0.0], [9.0, 9.0]]), 10.0)
    space = search_space(grid, [100.0, 100.0], 5.0)
    assert space.tiles == frozenset() and space.point_count == 0


def test_search_space_coverage_brute_force():
    rng = np.random.default_rng(3)
    pts = cloud(rng.uniform(-50, 50, (300, 2)))
    grid = build_grid(pts, 7.0)
    for _ in range(50):
        center = rng.uniform(-60, 60, 2)
        radius = float(rng.uniform(0.5, 25))
        space = search_space(grid, center, radius)
        covered = set(space_points(grid, space).tolist())
        dist = np.linalg.norm(pts.coords - center, axis=1)
        for i in np.flatnonzero(dist < radius):
            assert int(i) in covered


def test_search_space_monotone_in_radius():
    rng = np.random.default_rng(4)
    pts = cloud(rng.uniform(0, 100, (100, 2)))
    grid = build_grid(pts, 9.0)
    center = [41.0, 57.0]
    tiles = [search_space(grid, center, r).tiles for r in (1.0, 5.0, 12.0, 30.0)]
    for small, big in zip(tiles, tiles[1:]):
        assert small <= big


def test_dynamic_search_space_single_member_matches_search_space():
    rng = np.random.default_rng(5)
    pts = cloud(rng.uniform(0, 60, (40, 2)))
    grid = build_grid(pts, 8.0)
    for j in (0, 7, 23):
        dss = dynamic_search_space(grid, pts, [j], 12.0)
        circle = search_space(grid, pts.coords[j], 12.0)
        assert dss.tiles == circle.tiles


def test_dynamic_search_space_duplicate_members_degenerate():
    pts = cloud([[10.0, 10.0], [10.0, 10.0], [40.0, 40.0]])
    grid = build_grid(pts, 10.0)
    one = dynamic_search_space(grid, pts, [0], 10.0)
    two = dynamic_search_space(grid, pts, [0, 1], 10.0)
    assert one.tiles == two.tiles


def test_dynamic_search_space_box_brute_force():
    pts = cloud([[5.0, 5.0], [15.0, 5.0], [25.0, 5.0], [5.0, 25.0]])
    grid = build_grid(pts, 10.0)
    d_m = 10.0
    dss = dynamic_search_space(grid, pts, [0, 1, 2], d_m)
    lo = pts.coords[[0, 1, 2]].min(axis=0) - d_m
    hi = pts.coords[[0, 1, 2]].max(axis=0) + d_m
    expected = set()
    for tile in range(grid.n_tiles):
        corner = np.array(np.unravel_index(tile, grid.dims)) * grid.tile_edge + grid.origin
        if np.all(corner <= hi) and np.all(corner + grid.tile_edge >= lo):
            expected.add(tile)
    assert dss.tiles == frozenset(expected)


def test_dynamic_search_space_monotone_under_members():
    rng = np.random.default_rng(6)
    pts = cloud(rng.uniform(0, 80, (30, 2)))
    grid = build_grid(pts, 10.0)
    members = [3]
    prev = dynamic_search_space(grid, pts, members, 8.0).tiles
    for p in (11, 4, 27, 9):
        members.append(p)
        cur = dynamic_search_space(grid, pts, members, 8.0).tiles
        assert prev <= cur
        prev = cur


def test_dynamic_search_space_errors():
    pts = cloud([[0.0, 0.0]])
    grid = build_grid(pts, 5.0)
    with pytest.raises(EmptyInput):
        dynamic_search_space(grid, pts, [], 5.0)
    with pytest.raises(IndexOutOfRange):
        dynamic_search_space(grid, pts, [5], 5.0)


@given(
    st.lists(
        st.tuples(st.floats(-200, 200, allow_nan=False), st.floats(-200, 200, allow_nan=False)),
        min_size=1,
        max_size=60,
    ),
    st.floats(0.5, 40),
)
def test_partition_property(points, edge):
    pts = cloud(points)
    grid = build_grid(pts, float(edge))
    seen = np.concatenate([b for b in grid.buckets.values()])
    assert len(seen) == pts.n
    assert len(np.unique(seen)) == pts.n
    # membership per the half-open rule
    for tile, bucket in grid.buckets.items():
        corner = np.array(np.unravel_index(tile, grid.dims)) * grid.tile_edge + grid.origin
        for i in bucket:
            rel = pts.coords[i] - corner
            at_top = np.array(np.unravel_index(tile, grid.dims)) == grid.dims - 1
            assert np.all(rel >= -1e-9)
            assert np.all((rel < grid.tile_edge) | at_top)
