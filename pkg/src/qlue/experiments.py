"""Experiment runners: parameter sweeps, the non-centroidal study, lattice scaling.

Each runner takes a declarative config, executes its sweep cell by cell with a
per-cell derived RNG seed, and returns a RunReport that the CLI persists as
JSON plus plot-ready CSV.  Reports carry no wall-clock inside the payload used
for reproducibility comparisons; the wall time is a separate field.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .classical import run_classical
from .datagen import gen_circles, gen_lattice, gen_moons, gen_noisy_gaussian, gen_two_gaussians
from .errors import InvalidInput
from .grid import build_grid, search_space, space_points
from .grover import QueryLedger, grover_find_all
from .metrics import scores
from .model import ClusterResult, Params, PointCloud
from .pipeline import run_quantum

EXPERIMENTS = ("noise", "overlap", "noncentroidal", "lattice-scaling", "single")


@dataclass
class ExperimentConfig:
    experiment: str = "noise"
    engine: str = "classical"  # classical | quantum (identical labels, different ledger)
    rng_seed: int = 1234
    repetitions: int = 30
    d_c: float = 20.0
    rho_c: float = 25.0
    delta: float = 2.0
    # noise sweep
    sigma_grid: list = field(default_factory=lambda: [10.0, 32.0])
    noise_ratio_grid: list = field(default_factory=lambda: [0.0, 0.1, 0.33, 0.67, 1.0])
    n_cluster: int = 750
    amplitude: float = 500.0
    square: float = 500.0
    # overlap sweep
    overlap_sigma: float = 30.0
    separation_ratio_grid: list = field(default_factory=lambda: [0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0])
    size_ratio_grid: list = field(default_factory=lambda: [1.0])
    n1: int = 500
    # non-centroidal
    n_per_cluster: int = 500
    jitter: float = 0.05
    # lattice scaling
    edge_grid: list = field(default_factory=lambda: [3, 10])
    dim_grid: list = field(default_factory=lambda: [1, 2, 3, 4, 5])

    def params(self) -> Params:
        return Params(d_c=self.d_c, rho_c=self.rho_c, delta=self.delta)

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise InvalidInput(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.engine not in ("classical", "quantum"):
            raise InvalidInput(f"engine must be 'classical' or 'quantum', got {self.engine!r}")
        if self.repetitions < 1:
            raise InvalidInput("repetitions must be >= 1")
        grids = {
            "noise": (self.sigma_grid, self.noise_ratio_grid),
            "overlap": (self.separation_ratio_grid, self.size_ratio_grid),
            "lattice-scaling": (self.edge_grid, self.dim_grid),
        }
        for g in grids.get(self.experiment, ()):
            if not g:
                raise InvalidInput(f"{self.experiment} sweep grids must be non-empty")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise InvalidInput(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


@dataclass
class RunReport:
    config: dict
    cells: list
    wall_time_s: float
    artifacts: list

    def payload(self) -> dict:
        """Deterministic content (excludes wall time) for reproducibility checks."""
        return {"config": self.config, "cells": self.cells, "artifacts": self.artifacts}

    def to_dict(self) -> dict:
        return {**self.payload(), "wall_time_s": self.wall_time_s}


def _cell_seed(base: int, *key: int) -> int:
    return int(np.random.SeedSequence([base, *key]).generate_state(1)[0])


def _cluster(points: PointCloud, params: Params, engine: str, seed: int) -> tuple[ClusterResult, QueryLedger | None]:
    if engine == "quantum":
        run = run_quantum(points, params, rng_seed=seed)
        return run.result, run.ledger
    return run_classical(points, params), None


def _aggregate(cell: dict, fh: list, fc: list, ledgers: list) -> dict:
    out = dict(cell)
    out["mean_fh"] = float(np.mean(fh))
    out["std_fh"] = float(np.std(fh))
    out["mean_fc"] = float(np.mean(fc))
    out["std_fc"] = float(np.std(fc))
    if ledgers:
        out["mean_oracle_calls"] = float(np.mean([l.oracle_calls for l in ledgers]))
        out["mean_classical_equivalent_calls"] = float(
            np.mean([l.classical_equivalent_calls for l in ledgers])
        )
    return out


def run_noise_sweep(config: ExperimentConfig) -> RunReport:
    """Single Gaussian cluster vs uniform noise: F_H over (sigma, N_N/N_C) cells."""
    config.validate()
    t0 = time.perf_counter()
    params = config.params()
    cells = []
    for si, sigma in enumerate(config.sigma_grid):
        for ri, ratio in enumerate(config.noise_ratio_grid):
            fh, fc, ledgers = [], [], []
            for rep in range(config.repetitions):
                seed = _cell_seed(config.rng_seed, 0, si, ri, rep)
                points = gen_noisy_gaussian(
                    n_cluster=config.n_cluster,
                    n_noise=round(ratio * config.n_cluster),
                    sigma=sigma,
                    amplitude=config.amplitude,
                    square=config.square,
                    seed=seed,
                )
                result, ledger = _cluster(points, params, config.engine, seed)
                h, c = scores(result.labels, points.true_labels, points.energy)
                fh.append(h)
                fc.append(c)
                if ledger:
                    ledgers.append(ledger)
            cells.append(_aggregate({"sigma": sigma, "noise_ratio": ratio}, fh, fc, ledgers))
    return RunReport(config.to_dict(), cells, time.perf_counter() - t0, [])


def run_overlap_sweep(config: ExperimentConfig) -> RunReport:
    """Two Gaussian clusters: F_H over (r/sigma, N1/N2) cells."""
    config.validate()
    t0 = time.perf_counter()
    params = config.params()
    cells = []
    for qi, size_ratio in enumerate(config.size_ratio_grid):
        n2 = round(config.n1 / size_ratio)
        for ri, sep_ratio in enumerate(config.separation_ratio_grid):
            fh, fc, ledgers = [], [], []
            for rep in range(config.repetitions):
                seed = _cell_seed(config.rng_seed, 1, qi, ri, rep)
                points = gen_two_gaussians(
                    n1=config.n1,
                    n2=n2,
                    sigma=config.overlap_sigma,
                    separation=sep_ratio * config.overlap_sigma,
                    seed=seed,
                )
                result, ledger = _cluster(points, params, config.engine, seed)
                h, c = scores(result.labels, points.true_labels, points.energy)
                fh.append(h)
                fc.append(c)
                if ledger:
                    ledgers.append(ledger)
            cells.append(
                _aggregate(
                    {"size_ratio": size_ratio, "separation_ratio": sep_ratio}, fh, fc, ledgers
                )
            )
    return RunReport(config.to_dict(), cells, time.perf_counter() - t0, [])


def run_noncentroidal(config: ExperimentConfig, out_dir: Path | None = None) -> RunReport:
    """Moons and circles under uniform and gradient energy profiles.

    Scoring uses unit energies (the profile is an input to the clustering, not
    part of the ground truth).  Labeled point dumps are written when out_dir is
    given.
    """
    config.validate()
    t0 = time.perf_counter()
    params = config.params()
    cells, artifacts = [], []
    for family, gen in (("moons", gen_moons), ("circles", gen_circles)):
        for profile in ("uniform", "gradient"):
            points = gen(
                n_per_cluster=config.n_per_cluster,
                profile=profile,
                jitter=config.jitter,
                seed=config.rng_seed,
            )
            result, _ = _cluster(points, params, config.engine, config.rng_seed)
            fh, fc = scores(result.labels, points.true_labels, energies=None)
            cells.append(
                {
                    "family": family,
                    "profile": profile,
                    "mean_fh": fh,
                    "std_fh": 0.0,
                    "mean_fc": fc,
                    "std_fc": 0.0,
                    "n_clusters": result.n_clusters,
                }
            )
            if out_dir is not None:
                dump = Path(out_dir) / f"{family}_{profile}_points.csv"
                _dump_labeled_points(points, result, dump)
                artifacts.append(str(dump))
    return RunReport(config.to_dict(), cells, time.perf_counter() - t0, artifacts)


def _dump_labeled_points(points: PointCloud, result: ClusterResult, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        cols = [f"x{i + 1}" for i in range(points.dim)]
        f.write(",".join(cols + ["energy", "true_label", "pred_label"]) + "\n")
        for i in range(points.n):
            row = [repr(c) for c in points.coords[i]]
            row += [repr(float(points.energy[i]))]
            row += [str(int(points.true_labels[i])), str(int(result.labels[i]))]
            f.write(",".join(row) + "\n")


def loglog_slope(x, y) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    lx -= lx.mean()
    return float(np.sum(lx * (ly - ly.mean())) / np.sum(lx * lx))


def run_lattice_scaling(config: ExperimentConfig) -> RunReport:
    """Unstructured search for one designated point on a^d lattices.

    For each lattice the whole dataset forms one search space; a find-all run
    for the single target records the quantum charge next to the classical
    O(m) scan equivalent, giving the sqrt(m) versus m scaling pair.
    """
    config.validate()
    t0 = time.perf_counter()
    cells = []
    for a in config.edge_grid:
        ms, q_calls, c_calls = [], [], []
        for d in config.dim_grid:
            points = gen_lattice(int(a), int(d))
            grid = build_grid(points, tile_edge=float(a))
            space = search_space(grid, points.coords.mean(axis=0), radius=float(a))
            idx = space_points(grid, space)
            target = int(np.argmin(np.sum((points.coords - points.coords.mean(0)) ** 2, axis=1)))
            ledger = QueryLedger()
            rng = np.random.default_rng(_cell_seed(config.rng_seed, 2, int(a), int(d)))
            found = grover_find_all(idx, lambda dom: dom == target, ledger, rng, "lattice")
            assert found == [target]
            m = int(points.n)
            ms.append(m)
            q_calls.append(ledger.oracle_calls)
            c_calls.append(ledger.classical_equivalent_calls)
            cells.append(
                {
                    "a": int(a),
                    "d": int(d),
                    "m": m,
                    "quantum_calls": ledger.oracle_calls,
                    "classical_calls": ledger.classical_equivalent_calls,
                }
            )
        cells.append(
            {
                "a": int(a),
                "quantum_slope": loglog_slope(ms, q_calls),
                "classical_slope": loglog_slope(ms, c_calls),
            }
        )
    return RunReport(config.to_dict(), cells, time.perf_counter() - t0, [])


def write_cells_csv(report: RunReport, path: str | Path, columns: list[str]) -> None:
    """Plot-ready CSV of the report cells that carry all requested columns."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(",".join(columns) + "\n")
        for cell in report.cells:
            if all(c in cell for c in columns):
                f.write(",".join(repr(cell[c]) if isinstance(cell[c], float) else str(cell[c]) for c in columns) + "\n")
