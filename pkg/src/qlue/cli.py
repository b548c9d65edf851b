"""Command-line experiment runner.

Verbs: generate, cluster, sweep-noise, sweep-overlap, noncentroidal,
lattice-scaling.  Each run writes its outputs under one directory together with
a manifest; sweep verbs accept a JSON config file plus flag overrides.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .classical import run_classical
from .datagen import DatasetSpec
from .errors import QlueError
from .experiments import (
    ExperimentConfig,
    RunReport,
    run_lattice_scaling,
    run_noise_sweep,
    run_noncentroidal,
    run_overlap_sweep,
    write_cells_csv,
)
from .model import Params, PointCloud
from .pipeline import run_quantum


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_manifest(out_dir: Path, entries: dict) -> None:
    _write_json(out_dir / "manifest.json", {"version": __version__, **entries})


def _load_config(args, experiment: str) -> ExperimentConfig:
    base = {}
    if args.config:
        with open(args.config, encoding="utf-8") as f:
            base = json.load(f)
    base["experiment"] = experiment
    for key in ("engine", "rng_seed", "repetitions"):
        val = getattr(args, key.replace("rng_seed", "seed"), None)
        if val is not None:
            base[key] = val
    config = ExperimentConfig.from_dict(base)
    config.validate()
    return config


def _finish_report(report: RunReport, out_dir: Path, csv_columns: list[str], csv_name: str) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "report.json", report.to_dict())
    write_cells_csv(report, out_dir / csv_name, csv_columns)
    _write_manifest(out_dir, {"config": report.config, "artifacts": report.artifacts})
    print(f"wrote {out_dir / 'report.json'}")


def cmd_generate(args) -> int:
    params = json.loads(args.params) if args.params else {}
    spec = DatasetSpec(family=args.family, params=params, seed=args.seed or 0)
    points = spec.generate()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    points.to_csv(out)
    print(f"wrote {out} ({points.n} points, d={points.dim})")
    return 0


def cmd_cluster(args) -> int:
    dataset = Path(args.dataset)
    points = PointCloud.from_csv(dataset)
    params = Params(d_c=args.d_c, rho_c=args.rho_c, delta=args.delta)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = args.seed if args.seed is not None else 0
    if args.engine == "quantum":
        run = run_quantum(points, params, rng_seed=seed)
        result = run.result
        (out_dir / "ledger.json").write_text(run.ledger.to_json() + "\n", encoding="utf-8")
    else:
        result = run_classical(points, params)
    result.write_csv(points, out_dir / "result.csv")
    _write_json(out_dir / "summary.json", result.summary())
    _write_manifest(
        out_dir,
        {
            "dataset": str(dataset),
            "dataset_sha256": _sha256(dataset),
            "params": params.to_dict(),
            "engine": args.engine,
            "rng_seed": seed,
        },
    )
    print(f"{result.n_clusters} clusters, {len(result.outliers)} outliers -> {out_dir}")
    return 0


def cmd_sweep_noise(args) -> int:
    config = _load_config(args, "noise")
    report = run_noise_sweep(config)
    _finish_report(
        report, Path(args.out), ["sigma", "noise_ratio", "mean_fh", "std_fh"], "noise_sweep.csv"
    )
    return 0


def cmd_sweep_overlap(args) -> int:
    config = _load_config(args, "overlap")
    report = run_overlap_sweep(config)
    _finish_report(
        report,
        Path(args.out),
        ["size_ratio", "separation_ratio", "mean_fh", "std_fh"],
        "overlap_sweep.csv",
    )
    return 0


def cmd_noncentroidal(args) -> int:
    config = _load_config(args, "noncentroidal")
    report = run_noncentroidal(config, out_dir=Path(args.out))
    _finish_report(
        report, Path(args.out), ["family", "profile", "mean_fh", "mean_fc", "n_clusters"], "noncentroidal.csv"
    )
    return 0


def cmd_lattice_scaling(args) -> int:
    config = _load_config(args, "lattice-scaling")
    report = run_lattice_scaling(config)
    _finish_report(
        report, Path(args.out), ["a", "d", "m", "classical_calls", "quantum_calls"], "lattice_scaling.csv"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlue", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic dataset CSV")
    gen.add_argument("--family", required=True,
                     choices=["noisy_gaussian", "two_gaussians", "moons", "circles", "lattice"])
    gen.add_argument("--params", help="JSON dict of generator arguments")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(fn=cmd_generate)

    clu = sub.add_parser("cluster", help="cluster one dataset CSV")
    clu.add_argument("dataset")
    clu.add_argument("--engine", choices=["classical", "quantum"], default="classical")
    clu.add_argument("--d-c", dest="d_c", type=float, default=20.0)
    clu.add_argument("--rho-c", dest="rho_c", type=float, default=25.0)
    clu.add_argument("--delta", type=float, default=2.0)
    clu.add_argument("--seed", type=int, default=None)
    clu.add_argument("--out", required=True)
    clu.set_defaults(fn=cmd_cluster)

    for name, fn in (
        ("sweep-noise", cmd_sweep_noise),
        ("sweep-overlap", cmd_sweep_overlap),
        ("noncentroidal", cmd_noncentroidal),
        ("lattice-scaling", cmd_lattice_scaling),
    ):
        sw = sub.add_parser(name, help=f"run the {name} experiment")
        sw.add_argument("--config", help="JSON config file (flags override)")
        sw.add_argument("--engine", choices=["classical", "quantum"], default=None)
        sw.add_argument("--seed", type=int, default=None)
        sw.add_argument("--repetitions", type=int, default=None)
        sw.add_argument("--out", required=True)
        sw.set_defaults(fn=fn)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except QlueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
