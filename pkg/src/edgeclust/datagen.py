"""Synthetic dataset generators (node-level 2-D shapes and a direct
edge-level planted-partition sampler) plus CSV ingestion for real data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import SampleSet, validate_partition
from .edge_features import EdgeFeatureSet, all_pairs
from .errors import ConfigError, DataError

SYNTHETIC_KINDS = ("crossbones", "grid", "blobs", "circles")


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str
    n: int
    k: int = 2
    noise: float = 0.03
    segment_length: float = 1.0
    cross_angle_deg: float = 90.0
    spacing: float = 0.5

    def __post_init__(self):
        if self.kind not in SYNTHETIC_KINDS:
            raise ConfigError(f"unknown synthetic kind {self.kind!r}")
        if self.n < self.k or self.k < 1:
            raise ConfigError("need n >= k >= 1")
        if self.noise < 0:
            raise ConfigError("noise must be >= 0")


@dataclass(frozen=True)
class EdgeLevelSpec:
    sizes: Sequence[int]
    p1: object  # density with sample()/logpdf_many()
    p0: object

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ConfigError("cluster sizes must be positive")
        if self.p1.d != self.p0.d:
            raise ConfigError("P1 and P0 must share a dimension")
        object.__setattr__(self, "sizes", sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def k(self) -> int:
        return len(self.sizes)


def _balanced_counts(n: int, k: int) -> np.ndarray:
    counts = np.full(k, n // k)
    counts[: n % k] += 1
    return counts


def _segment_points(count: int, center: np.ndarray, direction: np.ndarray,
                    length: float, noise: float, rng: np.random.Generator):
    t = rng.uniform(-0.5, 0.5, size=count) * length
    pts = center + t[:, None] * direction
    if noise > 0:
        pts = pts + rng.normal(0.0, noise * length, size=pts.shape)
    return pts


def gen_synthetic(spec: SyntheticSpec, rng: np.random.Generator) -> SampleSet:
    """2-D labeled sample sets; crossbones and grid are the crossing-segment
    regimes where scalar similarity functions fail."""
    counts = _balanced_counts(spec.n, spec.k)
    if spec.kind == "crossbones":
        if spec.k != 2:
            raise ConfigError("crossbones has exactly 2 clusters")
        half = math.radians(spec.cross_angle_deg) / 2.0
        dirs = [np.array([math.cos(half), math.sin(half)]),
                np.array([math.cos(half), -math.sin(half)])]
        chunks = [
            _segment_points(counts[c], np.zeros(2), dirs[c],
                            spec.segment_length, spec.noise, rng)
            for c in range(2)
        ]
    elif spec.kind == "grid":
        # alternating horizontal/vertical segments on a lattice; with spacing
        # below the segment length, neighbors cross each other
        cols = int(math.ceil(math.sqrt(spec.k)))
        chunks = []
        for c in range(spec.k):
            row, col = divmod(c, cols)
            center = np.array([col * spec.spacing, row * spec.spacing])
            direction = np.array([1.0, 0.0]) if c % 2 == 0 else np.array([0.0, 1.0])
            chunks.append(_segment_points(counts[c], center, direction,
                                          spec.segment_length, spec.noise, rng))
    elif spec.kind == "blobs":
        centers = np.stack([
            [math.cos(2 * math.pi * c / spec.k) * 4.0,
             math.sin(2 * math.pi * c / spec.k) * 4.0]
            for c in range(spec.k)
        ])
        chunks = [centers[c] + rng.normal(0.0, max(spec.noise, 1e-12), size=(counts[c], 2))
                  for c in range(spec.k)]
    else:  # circles
        chunks = []
        for c in range(spec.k):
            radius = 1.0 + 2.0 * c
            angles = rng.uniform(0.0, 2 * math.pi, size=counts[c])
            pts = radius * np.column_stack([np.cos(angles), np.sin(angles)])
            if spec.noise > 0:
                pts = pts + rng.normal(0.0, spec.noise, size=pts.shape)
            chunks.append(pts)
    features = np.concatenate(chunks, axis=0)
    labels = np.concatenate([np.full(counts[c], c + 1, dtype=int)
                             for c in range(spec.k)])
    return SampleSet(features=features, labels=labels)


def gen_edge_level(spec: EdgeLevelSpec, rng: np.random.Generator):
    """Draw every pair's edge vector i.i.d. from P1 (same-cluster) or P0
    (cross-cluster) under the planted partition."""
    labels = np.concatenate([np.full(s, c + 1, dtype=int)
                             for c, s in enumerate(spec.sizes)])
    truth = validate_partition(labels)
    pairs = all_pairs(spec.n)
    same = labels[pairs[:, 0]] == labels[pairs[:, 1]]
    vectors = np.empty((len(pairs), spec.p1.d))
    n_same = int(same.sum())
    vectors[same] = spec.p1.sample(rng, n_same)
    vectors[~same] = spec.p0.sample(rng, len(pairs) - n_same)
    return EdgeFeatureSet(pairs=pairs, vectors=vectors), truth


def _looks_numeric(cells) -> bool:
    try:
        for cell in cells:
            float(cell)
    except ValueError:
        return False
    return True


def load_csv(path, has_labels: bool = False) -> SampleSet:
    """Parse a numeric CSV into a SampleSet; the last column is the label
    when flagged. A non-numeric first row is treated as a header."""
    rows = []
    width = None
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            cells = line.split(",")
            if lineno == 1 and not _looks_numeric(cells):
                continue  # header
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise DataError(f"{path}:{lineno}: expected {width} columns, "
                                f"found {len(cells)}")
            parsed = []
            for col, cell in enumerate(cells, start=1):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DataError(f"{path}:{lineno}: column {col}: "
                                    f"non-numeric value {cell.strip()!r}") from None
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path}: no data rows")
    data = np.array(rows, dtype=float)
    if has_labels:
        if data.shape[1] < 2:
            raise DataError(f"{path}: need at least one feature column "
                            "besides the label")
        raw_labels = data[:, -1]
        if not np.all(raw_labels == np.round(raw_labels)):
            raise DataError(f"{path}: label column must be integer-valued")
        dense = validate_partition(raw_labels.astype(int)).labels
        return SampleSet(features=data[:, :-1], labels=dense)
    return SampleSet(features=data)


def save_csv(s: SampleSet, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row_idx in range(s.n):
            cells = [f"{v:.17g}" for v in s.features[row_idx]]
            if s.labels is not None:
                cells.append(str(int(s.labels[row_idx])))
            fh.write(",".join(cells) + "\n")


def save_labeled_pairs(pairs: np.ndarray, same: np.ndarray, path) -> None:
    """Write the labeled-pair format: ``i,j,same`` with same in {0,1}."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for (i, j), s in zip(pairs, same):
            fh.write(f"{i},{j},{int(s)}\n")


def load_labeled_pairs(path):
    pairs, same = [], []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 'i,j,same'")
            try:
                i, j, s = int(parts[0]), int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from exc
            if s not in (0, 1):
                raise DataError(f"{path}:{lineno}: same flag must be 0 or 1")
            pairs.append((i, j))
            same.append(bool(s))
    if not pairs:
        raise DataError(f"{path}: no pairs")
    return np.array(pairs, dtype=int), np.array(same, dtype=bool)
