"""Seeded synthetic dataset generators with ground-truth labels and energy profiles.

Gaussian families draw from N(mu, sigma*I) -- sigma scales the covariance
matrix directly -- and assign energies from the sampling density, which is what
makes seeds sit on the true cluster cores.  Moons and circles are parametric
arcs placed in a coordinate frame where the gradient energy formulas
(E = x2, E = 60 - x2, E = |x2 - 200|/10, E = |x2 + 100|/5) are non-negative and
give each cluster a single most energetic point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidData
from .model import PointCloud

MOON_SCALE = 60.0  # unit moons -> x2 in [0, 90]; gap between arcs ~30 length units
MOON_X2_OFFSET = 30.0
MOON_X1_OFFSET = -30.0
CIRCLE_RADIUS = 200.0  # outer radius; inner = factor * outer
CIRCLE_FACTOR = 0.5
DEFAULT_JITTER = 0.05  # Gaussian jitter in unit-figure space


def gaussian_pdf(x: np.ndarray, mean: np.ndarray, sigma: float) -> np.ndarray:
    """Multivariate normal density with covariance sigma * I."""
    x = np.atleast_2d(x)
    d = x.shape[1]
    sq = np.sum((x - mean) ** 2, axis=1)
    return np.exp(-sq / (2.0 * sigma)) / ((2.0 * np.pi) ** (d / 2) * sigma ** (d / 2))


def gen_noisy_gaussian(
    n_cluster: int = 750,
    n_noise: int = 250,
    sigma: float = 32.0,
    amplitude: float = 500.0,
    square: float = 500.0,
    seed: int = 0,
    dim: int = 2,
    precision_bits: int = 16,
) -> PointCloud:
    """One Gaussian cluster (label 0) plus uniform noise on a square (label -1).

    Cluster energies are amplitude * pdf at the sampled location; noise energies
    are uniform in [0, 1).
    """
    if n_cluster < 0 or n_noise < 0 or sigma <= 0:
        raise InvalidData("counts must be >= 0 and sigma > 0")
    rng = np.random.default_rng(seed)
    mean = np.zeros(dim)
    cluster = rng.standard_normal((n_cluster, dim)) * np.sqrt(sigma) + mean
    noise = rng.uniform(-square / 2, square / 2, size=(n_noise, dim))
    coords = np.vstack([cluster, noise])
    energy = np.concatenate(
        [amplitude * gaussian_pdf(cluster, mean, sigma), rng.uniform(0.0, 1.0, n_noise)]
    )
    labels = np.concatenate([np.zeros(n_cluster, np.int64), np.full(n_noise, -1, np.int64)])
    return PointCloud(coords, energy, true_labels=labels, precision_bits=precision_bits)


def gen_two_gaussians(
    n1: int = 500,
    n2: int = 500,
    sigma: float = 30.0,
    separation: float = 60.0,
    seed: int = 0,
    precision_bits: int = 16,
) -> PointCloud:
    """Two clusters at (+r/2, 0) and (-r/2, 0); energy = own-cluster pdf value."""
    if n1 < 0 or n2 < 0 or sigma <= 0:
        raise InvalidData("counts must be >= 0 and sigma > 0")
    rng = np.random.default_rng(seed)
    mu1 = np.array([separation / 2.0, 0.0])
    mu2 = np.array([-separation / 2.0, 0.0])
    c1 = rng.standard_normal((n1, 2)) * np.sqrt(sigma) + mu1
    c2 = rng.standard_normal((n2, 2)) * np.sqrt(sigma) + mu2
    coords = np.vstack([c1, c2])
    energy = np.concatenate([gaussian_pdf(c1, mu1, sigma), gaussian_pdf(c2, mu2, sigma)])
    labels = np.concatenate([np.zeros(n1, np.int64), np.ones(n2, np.int64)])
    return PointCloud(coords, energy, true_labels=labels, precision_bits=precision_bits)


def gen_moons(
    n_per_cluster: int = 500,
    profile: str = "gradient",
    jitter: float = DEFAULT_JITTER,
    seed: int = 0,
    precision_bits: int = 16,
) -> PointCloud:
    """Two interleaved half-circle arcs (upper = label 0, lower = label 1).

    Gradient profile: E = x2 on the upper moon (top point is the most
    energetic), E = 60 - x2 on the lower moon (bottom point), clamped at zero
    where jitter pushes past the formula's root.
    """
    _check_profile(profile)
    rng = np.random.default_rng(seed)
    theta = np.linspace(0.0, np.pi, n_per_cluster)
    upper = np.column_stack([np.cos(theta), np.sin(theta)])
    lower = np.column_stack([1.0 - np.cos(theta), 0.5 - np.sin(theta)])
    unit = np.vstack([upper, lower]) + rng.normal(0.0, jitter, (2 * n_per_cluster, 2))
    coords = unit * MOON_SCALE + np.array([MOON_X1_OFFSET, MOON_X2_OFFSET])
    labels = np.repeat(np.array([0, 1], np.int64), n_per_cluster)
    if profile == "uniform":
        energy = np.ones(2 * n_per_cluster)
    else:
        x2 = coords[:, 1]
        energy = np.where(labels == 0, x2, 60.0 - x2)
        energy = np.maximum(energy, 0.0)
    return PointCloud(coords, energy, true_labels=labels, precision_bits=precision_bits)


def gen_circles(
    n_per_cluster: int = 500,
    profile: str = "gradient",
    jitter: float = DEFAULT_JITTER,
    seed: int = 0,
    precision_bits: int = 16,
) -> PointCloud:
    """Two concentric circles (outer = label 0, inner = label 1).

    Gradient profile: E = |x2 + 100|/5 on the outer circle (top point is the
    most energetic), E = |x2 - 200|/10 on the inner one (bottom point).
    """
    _check_profile(profile)
    rng = np.random.default_rng(seed)
    phi = np.linspace(0.0, 2.0 * np.pi, n_per_cluster, endpoint=False)
    ring = np.column_stack([np.cos(phi), np.sin(phi)])
    unit = np.vstack([ring, CIRCLE_FACTOR * ring])
    unit = unit + rng.normal(0.0, jitter, unit.shape)
    coords = unit * CIRCLE_RADIUS
    labels = np.repeat(np.array([0, 1], np.int64), n_per_cluster)
    if profile == "uniform":
        energy = np.ones(2 * n_per_cluster)
    else:
        x2 = coords[:, 1]
        energy = np.where(labels == 0, np.abs(x2 + 100.0) / 5.0, np.abs(x2 - 200.0) / 10.0)
    return PointCloud(coords, energy, true_labels=labels, precision_bits=precision_bits)


def gen_lattice(a: int, d: int, precision_bits: int = 16) -> PointCloud:
    """Unit-spaced a^d lattice with unit energies (the scaling benchmark family)."""
    if a < 1 or d < 1:
        raise InvalidData("lattice needs a >= 1 points per edge and d >= 1")
    axes = [np.arange(a, dtype=np.float64)] * d
    coords = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    return PointCloud(coords, np.ones(coords.shape[0]), precision_bits=precision_bits)


def _check_profile(profile: str) -> None:
    if profile not in ("uniform", "gradient"):
        raise InvalidData(f"profile must be 'uniform' or 'gradient', got {profile!r}")


@dataclass(frozen=True)
class DatasetSpec:
    """Declarative description of a generator call (serialized into run configs)."""

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    _FAMILIES = {
        "noisy_gaussian": gen_noisy_gaussian,
        "two_gaussians": gen_two_gaussians,
        "moons": gen_moons,
        "circles": gen_circles,
        "lattice": gen_lattice,
    }

    def generate(self) -> PointCloud:
        if self.family not in self._FAMILIES:
            raise InvalidData(
                f"unknown family {self.family!r}; choose from {sorted(self._FAMILIES)}"
            )
        fn = self._FAMILIES[self.family]
        if self.family == "lattice":
            return fn(**self.params)
        return fn(seed=self.seed, **self.params)

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "seed": self.seed}
