import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qlue.errors import EmptyInput, IndexOutOfRange, InvalidData
from qlue.model import (
    ClusterResult,
    Params,
    PointCloud,
    Role,
    density_from_neighbors,
    quantize_coords,
    read_csv,
    write_csv,
)


def test_params_derived_dm_exact():
    p = Params(d_c=20.0, rho_c=25.0, delta=2.0)
    assert p.d_m == 2.0 * 20.0
    assert p.dc_sq == (20 * p.scale) ** 2
    assert p.dm_sq == (40 * p.scale) ** 2


@pytest.mark.parametrize(
    "kwargs",
    [
        {"d_c": 0.0, "rho_c": 1.0},
        {"d_c": -3.0, "rho_c": 1.0},
        {"d_c": 1.0, "rho_c": 0.0},
        {"d_c": 1.0, "rho_c": 1.0, "delta": 0.0},
        {"d_c": 1.0, "rho_c": 1.0, "tile_edge": -1.0},
        {"d_c": 1.0, "rho_c": 1.0, "precision_bits": 0},
        {"d_c": 1e-9, "rho_c": 1.0},  # below coordinate precision
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(InvalidData):
        Params(**kwargs)


def test_quantization_snaps_to_grid():
    coords, icoords = quantize_coords(np.array([[0.123456789, -7.5]]), 16)
    assert icoords[0, 0] == round(0.123456789 * 65536)
    assert coords[0, 0] == icoords[0, 0] / 65536
    assert coords[0, 1] == -7.5  # exactly representable


def test_quantization_rejects_bad_coords():
    with pytest.raises(InvalidData):
        quantize_coords(np.array([[np.nan, 0.0]]), 16)
    with pytest.raises(InvalidData):
        quantize_coords(np.array([[1e12, 0.0]]), 16)


def test_pointcloud_validation():
    with pytest.raises(EmptyInput):
        PointCloud(np.empty((0, 2)), np.empty(0))
    with pytest.raises(InvalidData):
        PointCloud([[0, 0]], [-1.0])
    with pytest.raises(InvalidData):
        PointCloud([[0, 0]], [1.0], true_labels=[-2])


def test_point_view_and_annotations():
    pts = PointCloud([[0.0, 0.0], [3.0, 4.0]], [1.0, 2.0])
    pts.density[:] = [5.0, 6.0]
    pts.nh_index[0] = 1
    pts.nh_sq[0] = pts.sq_dists_from(0, np.array([1]))[0]
    pts.role[0] = int(Role.FOLLOWER)
    p = pts.point(0)
    assert p.nh_index == 1 and p.role is Role.FOLLOWER
    assert p.nh_distance == pytest.approx(5.0)
    assert pts.point(1).nh_distance == math.inf
    with pytest.raises(IndexOutOfRange):
        pts.point(2)


def test_sq_dists_exact_integers():
    pts = PointCloud([[0.0, 0.0], [1.5, 2.0]], [1.0, 1.0])
    s = pts.sq_dists_from(0, np.array([1]))
    scale = 1 << 16
    assert s[0] == (round(1.5 * scale)) ** 2 + (round(2.0 * scale)) ** 2


def test_csv_round_trip():
    pts = PointCloud([[0.25, -1.75], [3.5, 2.0]], [1.0, 0.5], true_labels=[0, -1])
    buf = io.StringIO()
    write_csv(pts, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "x1,x2,energy,true_label"
    back = read_csv(io.StringIO(text))
    assert np.array_equal(back.coords, pts.coords)
    assert np.array_equal(back.energy, pts.energy)
    assert np.array_equal(back.true_labels, pts.true_labels)


def test_csv_errors():
    with pytest.raises(EmptyInput):
        read_csv(io.StringIO(""))
    with pytest.raises(EmptyInput):
        read_csv(io.StringIO("x1,x2,energy\n"))
    with pytest.raises(InvalidData):
        read_csv(io.StringIO("x1,x2\n1,2\n"))
    with pytest.raises(InvalidData):
        read_csv(io.StringIO("x1,x2,energy\n1,oops,3\n"))


def test_density_helper_order_independent():
    energy = np.array([0.1, 0.2, 0.3, 0.4])
    a = density_from_neighbors(energy, 0, [3, 1, 2])
    b = density_from_neighbors(energy, 0, [1, 2, 3])
    assert a == b == pytest.approx(0.1 + 0.5 * 0.9)


def test_cluster_result_summary():
    r = ClusterResult(labels=np.array([0, 0, -1]), seeds=[0], outliers=[2], n_clusters=1)
    s = r.summary()
    assert s == {"n_clusters": 1, "seeds": [0], "outlier_count": 1}


@given(
    st.lists(
        st.tuples(
            st.floats(-1000, 1000, allow_nan=False),
            st.floats(-1000, 1000, allow_nan=False),
        ),
        min_size=1,
        max_size=30,
    )
)
def test_quantization_round_trips_fixed_point(points):
    coords, icoords = quantize_coords(np.array(points), 16)
    again, iagain = quantize_coords(coords, 16)
    assert np.array_equal(icoords, iagain)
    assert np.array_equal(coords, again)
