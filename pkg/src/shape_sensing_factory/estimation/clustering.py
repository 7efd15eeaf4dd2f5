"""One-dimensional Gaussian-mixture clustering with BIC model selection."""
import math
import warnings
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.mixture import GaussianMixture

from shape_sensing_factory.sensing.angles import TWO_PI, circular_mean, modone


@dataclass
class Partition:
    """Class label per input value; classes are numbered by increasing mean."""

    labels: np.ndarray
    means: List[float]

    @property
    def k(self) -> int:
        return len(self.means)

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.labels == c)


def _fit(x: np.ndarray, k: int, reg_covar: float, random_state: int) -> GaussianMixture:
    quantiles = np.quantile(x[:, 0], (np.arange(k) + 0.5) / k).reshape(-1, 1)
    gmm = GaussianMixture(
        n_components=k,
        covariance_type="full",
        means_init=quantiles,
        reg_covar=reg_covar,
        random_state=random_state,
        max_iter=500,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        gmm.fit(x)
    return gmm


def _relabel(values: np.ndarray, labels: np.ndarray) -> Partition:
    """Drop empty components and renumber by increasing mean."""
    used = sorted(set(labels.tolist()), key=lambda c: (float(values[labels == c].mean()), c))
    remap = {old: new for new, old in enumerate(used)}
    new_labels = np.array([remap[c] for c in labels.tolist()], dtype=int)
    means = [float(values[new_labels == c].mean()) for c in range(len(used))]
    return Partition(labels=new_labels, means=means)


def _merge_close(values: np.ndarray, part: Partition, tolerance: float) -> Partition:
    """Merge neighbouring classes whose means differ by at most ``tolerance`` relative."""
    if tolerance <= 0 or part.k < 2:
        return part
    labels = part.labels.copy()
    means = list(part.means)
    c = 0
    while c < len(means) - 1:
        m1, m2 = means[c], means[c + 1]
        if abs(m2 - m1) <= tolerance * max(abs(m1), abs(m2)):
            labels[labels == c + 1] = c
            labels[labels > c + 1] -= 1
            means[c] = float(values[labels == c].mean())
            del means[c + 1]
        else:
            c += 1
    return Partition(labels=labels, means=means)


def cluster_1d(
    values: Sequence[float],
    k_max: int = 12,
    reg_covar: float = 1e-6,
    random_state: int = 0,
    merge_tolerance: float = 0.0,
) -> Partition:
    """
    Fit mixtures with K = 1..min(k_max, distinct values) components by EM, keep the
    one with the lowest BIC and assign each value to its most probable component.
    Ties between components go to the one with the lower mean.
    """
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return Partition(labels=np.zeros(0, dtype=int), means=[])
    n_distinct = len(np.unique(x))
    if n_distinct == 1:
        return Partition(labels=np.zeros(x.size, dtype=int), means=[float(x[0])])

    data = x.reshape(-1, 1)
    best, best_bic = None, math.inf
    for k in range(1, min(k_max, n_distinct, x.size) + 1):
        gmm = _fit(data, k, reg_covar, random_state)
        bic = gmm.bic(data)
        if bic < best_bic:
            best, best_bic = gmm, bic

    order = np.argsort(best.means_[:, 0], kind="stable")
    proba = best.predict_proba(data)[:, order]
    labels = np.argmax(proba, axis=1)
    return _merge_close(x, _relabel(x, labels), merge_tolerance)


def _circular_gap(a: float, b: float) -> float:
    d = modone(b - a)
    return min(d, TWO_PI - d)


def _merge_circular(a: np.ndarray, labels: np.ndarray, tolerance: float) -> Partition:
    """
    Repeatedly merge the two classes whose circular means are nearest on the circle,
    while that arc is at most ``tolerance`` radians. Classes come back numbered by
    increasing mean in [0, 2π).
    """
    labels = labels.copy()
    while True:
        classes = sorted(set(labels.tolist()))
        means = {c: circular_mean(a[labels == c]) for c in classes}
        if tolerance <= 0 or len(classes) < 2:
            break
        ring = sorted(classes, key=lambda c: (means[c], c))
        pairs = list(zip(ring, ring[1:] + ring[:1])) if len(ring) > 2 else [(ring[0], ring[1])]
        gap, keep, drop = min((_circular_gap(means[p], means[q]), p, q) for p, q in pairs)
        if gap > tolerance:
            break
        labels[labels == drop] = keep

    order = sorted(means, key=lambda c: (means[c], c))
    remap = {old: new for new, old in enumerate(order)}
    new_labels = np.array([remap[c] for c in labels.tolist()], dtype=int)
    return Partition(labels=new_labels, means=[means[c] for c in order])


def cluster_angles(
    angles: Sequence[float],
    k_max: int = 12,
    reg_covar: float = 1e-6,
    random_state: int = 0,
    merge_tolerance: float = 0.0,
) -> Partition:
    """
    Cluster directions on the circle: cut it in the middle of the widest empty arc,
    cluster the unrolled values, then merge classes whose circular means lie within
    ``merge_tolerance`` radians of each other. Means are reported in [0, 2π).
    """
    a = np.array([modone(v) for v in angles], dtype=float)
    if a.size == 0:
        return Partition(labels=np.zeros(0, dtype=int), means=[])
    s = np.sort(a)
    gaps = np.diff(np.append(s, s[0] + TWO_PI))
    widest = int(np.argmax(gaps))
    cut = s[widest] + gaps[widest] / 2.0
    unrolled = np.array([modone(v - cut) for v in a])

    part = cluster_1d(unrolled, k_max, reg_covar, random_state)
    return _merge_circular(a, part.labels, merge_tolerance)
