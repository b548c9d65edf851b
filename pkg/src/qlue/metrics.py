"""Energy-aware homogeneity and completeness scores.

Both scores ratio the energy-weighted mutual information between the predicted
and true partitions against one of the marginal entropies; with unit energies
they reduce to the standard count-based homogeneity/completeness pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput


@dataclass
class ContingencyTable:
    """Energy totals per (predicted a, true b) cell with marginals."""

    e_ab: np.ndarray  # (n_pred, n_true)
    e_a: np.ndarray  # predicted-cluster energies
    e_b: np.ndarray  # true-cluster energies
    e_total: float


def noise_handling(labels: np.ndarray) -> np.ndarray:
    """Treat -1 as one regular class of its own: remap it to a fresh class id.

    Points flagged -1 on both sides then meet in a shared noise/noise cell of
    the table; a -1 appearing on only one side simply forms its own class there.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if np.any(labels < -1):
        raise InvalidInput("labels must be >= -1")
    out = labels.copy()
    out[labels == -1] = labels.max(initial=-1) + 1
    return out


def contingency(pred_labels, true_labels, energies) -> ContingencyTable:
    pred = noise_handling(pred_labels)
    true = noise_handling(true_labels)
    energies = np.asarray(energies, dtype=np.float64).reshape(-1)
    if not (pred.shape == true.shape == energies.shape):
        raise InvalidInput("labels and energies must have equal lengths")
    if np.any(energies < 0) or not np.all(np.isfinite(energies)):
        raise InvalidInput("energies must be finite and non-negative")
    total = float(energies.sum())
    if total <= 0:
        raise InvalidInput("total energy must be positive")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(true, return_inverse=True)
    e_ab = np.zeros((pi.max() + 1, ti.max() + 1))
    np.add.at(e_ab, (pi, ti), energies)
    return ContingencyTable(e_ab=e_ab, e_a=e_ab.sum(axis=1), e_b=e_ab.sum(axis=0), e_total=total)


def _entropy(weights: np.ndarray, total: float) -> float:
    """Base-2 Shannon entropy of weights/total with 0*log(0) = 0."""
    p = weights[weights > 0] / total
    return float(-np.sum(p * np.log2(p)))


def scores(pred_labels, true_labels, energies=None) -> tuple[float, float]:
    """(homogeneity, completeness) of the prediction, weighted by point energies.

    energies=None scores every point with unit weight.  A zero-entropy
    denominator yields 1.0 by convention.
    """
    pred_labels = np.asarray(pred_labels)
    if energies is None:
        energies = np.ones(pred_labels.shape[0])
    table = contingency(pred_labels, true_labels, energies)
    h_pred = _entropy(table.e_a, table.e_total)
    h_true = _entropy(table.e_b, table.e_total)
    h_joint = _entropy(table.e_ab.reshape(-1), table.e_total)
    mutual = h_pred + h_true - h_joint
    homogeneity = mutual / h_true if h_true > 0 else 1.0
    completeness = mutual / h_pred if h_pred > 0 else 1.0
    clip = lambda v: float(min(max(v, 0.0), 1.0))  # guard float wobble at the ends
    return clip(homogeneity), clip(completeness)
