"""Domain types shared by all modules, partition semantics, and clustering
quality metrics.

Partitions map node indices 0..n-1 to cluster labels 1..k. All types are
immutable after construction and all operations are pure functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DataError


class PairIndex(NamedTuple):
    """Undirected node pair with i < j (no self-loops)."""

    i: int
    j: int


@dataclass(frozen=True)
class SampleSet:
    """Node feature matrix (n x d) with optional ground-truth labels."""

    features: np.ndarray
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        feats = np.asarray(self.features, dtype=float)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise DataError("features must be a nonempty 2-D matrix")
        if not np.all(np.isfinite(feats)):
            raise DataError("features contain non-finite entries")
        object.__setattr__(self, "features", feats)
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (feats.shape[0],):
                raise DataError("labels length must match the number of rows")
            k = int(labels.max(initial=0))
            if labels.min(initial=1) < 1 or len(np.unique(labels)) != k:
                raise DataError("labels must cover 1..k with every value used")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class Partition:
    """Surjective label map onto {1..k}; use validate_partition to build one
    from arbitrary labels."""

    labels: np.ndarray
    k: int

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        if labels.ndim != 1 or labels.size == 0:
            raise DataError("partition labels must be a nonempty vector")
        uniq = np.unique(labels)
        if uniq[0] < 1 or uniq[-1] != self.k or len(uniq) != self.k:
            raise DataError("labels must be a surjection onto {1..k}")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.labels.size


@dataclass(frozen=True)
class ScoreReport:
    nmi: float
    pairwise_precision: float
    pairwise_recall: float
    pairwise_f1: float
    k_predicted: int

    def to_dict(self) -> dict:
        return {
            "nmi": self.nmi,
            "pairwise_precision": self.pairwise_precision,
            "pairwise_recall": self.pairwise_recall,
            "pairwise_f1": self.pairwise_f1,
            "k_predicted": self.k_predicted,
        }


def validate_partition(labels) -> Partition:
    """Canonicalize arbitrary integer labels to the dense range 1..k, ordered
    by first appearance. Idempotent."""
    labels = np.asarray(labels, dtype=int)
    if labels.ndim != 1 or labels.size == 0:
        raise DataError("partition labels must be a nonempty vector")
    _, first = np.unique(labels, return_index=True)
    order = labels[np.sort(first)]
    remap = {int(lab): pos + 1 for pos, lab in enumerate(order)}
    dense = np.array([remap[int(lab)] for lab in labels], dtype=int)
    return Partition(labels=dense, k=len(order))


def same_cluster(p: Partition, e: PairIndex) -> int:
    """Pairwise co-membership indicator: 1 iff both endpoints share a label."""
    if not (0 <= e.i < e.j < p.n):
        raise DataError(f"pair ({e.i},{e.j}) out of range for n={p.n}")
    return int(p.labels[e.i] == p.labels[e.j])


def _entropy(counts: np.ndarray) -> float:
    # natural log; 0*log(0) == 0
    total = counts.sum()
    probs = counts[counts > 0] / total
    return float(-np.sum(probs * np.log(probs)))


def nmi(a: Partition, b: Partition) -> float:
    """Normalized mutual information, arithmetic-mean normalizer, natural log.

    Both sides single-cluster is defined as 1.0 (identical up to relabeling).
    """
    if a.n != b.n:
        raise DataError("partitions must cover the same nodes")
    table = np.zeros((a.k, b.k))
    np.add.at(table, (a.labels - 1, b.labels - 1), 1.0)
    n = float(a.n)
    ha = _entropy(table.sum(axis=1))
    hb = _entropy(table.sum(axis=0))
    if ha + hb == 0.0:
        return 1.0
    outer = np.outer(table.sum(axis=1), table.sum(axis=0))
    mask = table > 0
    mi = float(np.sum(table[mask] / n * np.log(n * table[mask] / outer[mask])))
    return float(min(1.0, max(0.0, mi / (0.5 * (ha + hb)))))


def score(predicted: Partition, truth: Partition) -> ScoreReport:
    """Clustering quality of ``predicted`` against ``truth``.

    Pairwise metrics treat every same-cluster pair as a positive.
    """
    if predicted.n != truth.n:
        raise DataError("partitions must cover the same nodes")
    iu = np.triu_indices(predicted.n, k=1)
    pred_same = predicted.labels[iu[0]] == predicted.labels[iu[1]]
    true_same = truth.labels[iu[0]] == truth.labels[iu[1]]
    tp = float(np.sum(pred_same & true_same))
    pred_pos = float(np.sum(pred_same))
    true_pos = float(np.sum(true_same))
    precision = tp / pred_pos if pred_pos > 0 else 0.0
    recall = tp / true_pos if true_pos > 0 else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return ScoreReport(
        nmi=nmi(predicted, truth),
        pairwise_precision=precision,
        pairwise_recall=recall,
        pairwise_f1=f1,
        k_predicted=predicted.k,
    )
