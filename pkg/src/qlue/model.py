"""Domain model: points with energies, clustering annotations, and run parameters.

Coordinates are quantized to ``precision_bits`` fractional bits on ingestion and
mirrored as scaled int64 arrays, so every squared distance is an exact integer
(in units of 2^-2*precision_bits).  All distance comparisons throughout the
package happen on those integers, which makes the classical and the
quantum-simulated pipelines agree bit-exactly.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyInput, IndexOutOfRange, InvalidData

NO_INDEX = -1  # sentinel for "no nearest higher" / "no cluster"


class Role(enum.IntEnum):
    UNASSIGNED = 0
    SEED = 1
    OUTLIER = 2
    FOLLOWER = 3


@dataclass(frozen=True)
class Params:
    """Clustering parameters.

    d_c: critical radius for the density neighborhood.
    delta: outlier delta factor; the nearest-higher search radius is d_m = delta * d_c.
    rho_c: critical density threshold separating seeds from outliers.
    tile_edge: spatial tile edge; defaults to d_c.
    precision_bits: fractional bits of the coordinate fixed-point encoding.
    """

    d_c: float
    rho_c: float
    delta: float = 2.0
    tile_edge: float | None = None
    precision_bits: int = 16

    def __post_init__(self):
        if not (self.d_c > 0 and math.isfinite(self.d_c)):
            raise InvalidData(f"d_c must be positive, got {self.d_c}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise InvalidData(f"delta must be positive, got {self.delta}")
        if not (self.rho_c > 0 and math.isfinite(self.rho_c)):
            raise InvalidData(f"rho_c must be positive, got {self.rho_c}")
        if self.tile_edge is not None and not self.tile_edge > 0:
            raise InvalidData(f"tile_edge must be positive, got {self.tile_edge}")
        if self.precision_bits < 1:
            raise InvalidData("precision_bits must be >= 1")
        if round(self.d_c * self.scale) < 1 or round(self.d_m * self.scale) < 1:
            raise InvalidData("d_c is below the coordinate precision 2^-precision_bits")

    @property
    def d_m(self) -> float:
        return self.delta * self.d_c

    @property
    def scale(self) -> int:
        return 1 << self.precision_bits

    @property
    def dc_sq(self) -> int:
        """Quantized d_c^2 in squared fixed-point units (exact integer)."""
        return round(self.d_c * self.scale) ** 2

    @property
    def dm_sq(self) -> int:
        """Quantized d_m^2 in squared fixed-point units (exact integer)."""
        return round(self.d_m * self.scale) ** 2

    def effective_tile_edge(self) -> float:
        return self.tile_edge if self.tile_edge is not None else self.d_c

    def to_dict(self) -> dict:
        return {
            "d_c": self.d_c,
            "rho_c": self.rho_c,
            "delta": self.delta,
            "tile_edge": self.tile_edge,
            "precision_bits": self.precision_bits,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Params":
        return cls(**d)


@dataclass
class Point:
    """Read-only snapshot of one point and its clustering annotations."""

    index: int
    coords: np.ndarray
    energy: float
    density: float
    nh_index: int | None
    nh_distance: float
    role: Role
    cluster_id: int | None


def quantize_coords(coords: np.ndarray, precision_bits: int) -> tuple[np.ndarray, np.ndarray]:
    """Round coordinates to the fixed-point grid; returns (float coords, int64 coords).

    The int64 mirror is range-checked so that any squared distance between two
    points stays an exact int64 (no overflow), which the whole package relies on.
    """
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2:
        raise InvalidData(f"coords must be 2-d (n, d), got shape {coords.shape}")
    if not np.all(np.isfinite(coords)):
        raise InvalidData("non-finite coordinate in dataset")
    scale = 1 << precision_bits
    icoords = np.rint(coords * scale).astype(np.int64)
    d = coords.shape[1]
    limit = math.isqrt(2**62 // max(d, 1)) // 2
    if np.abs(icoords).max(initial=0) > limit:
        raise InvalidData(
            f"coordinate magnitude too large for exact int64 distances at "
            f"precision_bits={precision_bits} (|x| <= {limit / scale:.6g} required)"
        )
    return icoords.astype(np.float64) / scale, icoords


class PointCloud:
    """A dataset of points with parallel annotation arrays.

    Annotation fields (density, nh_index, nh_sq, role, cluster_id) are written
    by the pipeline phases; everything else is immutable after construction.
    """

    def __init__(self, coords, energy, true_labels=None, precision_bits: int = 16):
        coords = np.atleast_2d(np.asarray(coords, dtype=np.float64))
        if coords.size == 0:
            raise EmptyInput("dataset has no points")
        self.coords, self.icoords = quantize_coords(coords, precision_bits)
        self.precision_bits = precision_bits
        self.energy = np.asarray(energy, dtype=np.float64).reshape(-1)
        if self.energy.shape[0] != self.n:
            raise InvalidData("energy length does not match point count")
        if not np.all(np.isfinite(self.energy)) or np.any(self.energy < 0):
            raise InvalidData("energies must be finite and non-negative")
        if true_labels is None:
            self.true_labels = None
        else:
            self.true_labels = np.asarray(true_labels, dtype=np.int64).reshape(-1)
            if self.true_labels.shape[0] != self.n:
                raise InvalidData("true_labels length does not match point count")
            if np.any(self.true_labels < -1):
                raise InvalidData("true labels must be >= -1 (-1 = noise)")
        self.reset_annotations()

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]

    def reset_annotations(self) -> None:
        self.density = np.zeros(self.n, dtype=np.float64)
        self.nh_index = np.full(self.n, NO_INDEX, dtype=np.int64)
        self.nh_sq = np.full(self.n, NO_INDEX, dtype=np.int64)  # -1 = no nearest higher
        self.role = np.full(self.n, int(Role.UNASSIGNED), dtype=np.int8)
        self.cluster_id = np.full(self.n, NO_INDEX, dtype=np.int64)

    def nh_distance(self) -> np.ndarray:
        """Nearest-higher distances in real units; +inf where none exists."""
        out = np.full(self.n, np.inf)
        mask = self.nh_sq >= 0
        out[mask] = np.sqrt(self.nh_sq[mask].astype(np.float64)) / (1 << self.precision_bits)
        return out

    def sq_dists_from(self, j: int, indices: np.ndarray) -> np.ndarray:
        """Exact integer squared distances from point j to the given indices."""
        diff = self.icoords[indices] - self.icoords[j]
        return np.sum(diff * diff, axis=1)

    def point(self, i: int) -> Point:
        if not 0 <= i < self.n:
            raise IndexOutOfRange(f"point index {i} out of range [0, {self.n})")
        nh = int(self.nh_index[i])
        nh_d = math.inf if self.nh_sq[i] < 0 else math.sqrt(self.nh_sq[i]) / (1 << self.precision_bits)
        cid = int(self.cluster_id[i])
        return Point(
            index=i,
            coords=self.coords[i].copy(),
            energy=float(self.energy[i]),
            density=float(self.density[i]),
            nh_index=None if nh < 0 else nh,
            nh_distance=nh_d,
            role=Role(self.role[i]),
            cluster_id=None if cid < 0 else cid,
        )

    # ---- dataset file format: x1,...,xd,energy[,true_label] ----

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            write_csv(self, f)

    @classmethod
    def from_csv(cls, path: str | Path, precision_bits: int = 16) -> "PointCloud":
        with open(path, "r", newline="", encoding="utf-8") as f:
            return read_csv(f, precision_bits=precision_bits)


def write_csv(points: PointCloud, f: io.TextIOBase) -> None:
    writer = csv.writer(f, lineterminator="\n")
    header = [f"x{i + 1}" for i in range(points.dim)] + ["energy"]
    if points.true_labels is not None:
        header.append("true_label")
    writer.writerow(header)
    for i in range(points.n):
        row = [repr(c) for c in points.coords[i]] + [repr(float(points.energy[i]))]
        if points.true_labels is not None:
            row.append(str(int(points.true_labels[i])))
        writer.writerow(row)


def read_csv(f: io.TextIOBase, precision_bits: int = 16) -> PointCloud:
    reader = csv.reader(f)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInput("dataset file is empty") from None
    header = [h.strip() for h in header]
    if "energy" not in header:
        raise InvalidData("dataset header must contain an 'energy' column")
    e_col = header.index("energy")
    coord_cols = list(range(e_col))
    label_col = header.index("true_label") if "true_label" in header else None
    coords, energies, labels = [], [], []
    for row in reader:
        if not row:
            continue
        try:
            coords.append([float(row[c]) for c in coord_cols])
            energies.append(float(row[e_col]))
            if label_col is not None:
                labels.append(int(row[label_col]))
        except (ValueError, IndexError) as exc:
            raise InvalidData(f"malformed dataset row {row!r}") from exc
    if not coords:
        raise EmptyInput("dataset file has a header but no points")
    return PointCloud(
        np.array(coords),
        np.array(energies),
        true_labels=np.array(labels) if label_col is not None else None,
        precision_bits=precision_bits,
    )


@dataclass
class ClusterResult:
    """Final labeling: -1 = outlier/unreached, >= 0 = cluster id (one per seed)."""

    labels: np.ndarray
    seeds: list[int]
    outliers: list[int]
    n_clusters: int

    def summary(self) -> dict:
        return {
            "n_clusters": self.n_clusters,
            "seeds": [int(s) for s in self.seeds],
            "outlier_count": len(self.outliers),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)

    def write_csv(self, points: PointCloud, path: str | Path) -> None:
        """Per-point result rows: index,label,role,density,nh_index,nh_distance."""
        nh_d = points.nh_distance()
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["index", "label", "role", "density", "nh_index", "nh_distance"])
            for i in range(points.n):
                writer.writerow(
                    [
                        i,
                        int(self.labels[i]),
                        Role(points.role[i]).name.lower(),
                        repr(float(points.density[i])),
                        int(points.nh_index[i]),
                        repr(float(nh_d[i])),
                    ]
                )


def density_from_neighbors(energy: np.ndarray, j: int, neighbor_indices) -> float:
    """Local density: own energy plus half the energy of the given neighbors.

    Neighbors are summed in ascending index order so the result does not depend
    on the order a search produced them in (bit-exact across pipelines).
    """
    idx = np.sort(np.asarray(neighbor_indices, dtype=np.int64))
    return float(energy[j] + 0.5 * np.sum(energy[idx]))
