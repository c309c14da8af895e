"""End-to-end pipeline: sample training pairs, fit edge densities, build the
signed log-odds graph over hold-out samples, cluster, and score."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import corrclust
from .baselines import SpectralConfig, kmeans, spectral
from .core import SampleSet, score, validate_partition
from .datagen import EdgeLevelSpec, SyntheticSpec, gen_edge_level, gen_synthetic, load_csv
from .density import build_signed_graph, kde_fit
from .edge_features import (EdgeFeatureSet, all_pairs, build_edge_features,
                            canonical_kind, pca_fit, pca_transform,
                            sample_labeled_pairs)
from .analysis import log_likelihood
from .densities import parse_density
from .errors import ConfigError, DataError, EdgeclustError

ALGORITHMS = ("lp", "pivot", "oracle")
ORACLE_MAX_N = 12


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one pipeline run; every field is echoed into
    the report."""

    dataset: str                 # synthetic kind, csv path, or "edge_level"
    seed: int
    similarity: str = "abs_diff"
    sparsify: float = 0.0
    pca: Optional[float] = None  # variance target, None disables
    algo: str = "lp"
    pairs: int = 5000
    holdout: int = 100
    train_pool: int = 200
    k: Optional[int] = None      # synthetic generation / baseline input
    noise: float = 0.03
    baselines: bool = False
    knn: int = 20
    csv_has_labels: bool = True
    edge_spec: Optional[dict] = None  # sizes + p1/p0 density descriptors

    def __post_init__(self):
        object.__setattr__(self, "similarity", canonical_kind(self.similarity))
        if self.algo not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algo!r}")
        if self.sparsify < 0:
            raise ConfigError("sparsify threshold must be >= 0")
        if self.pca is not None and not (0.0 < self.pca <= 1.0):
            raise ConfigError("pca variance target must be in (0, 1]")
        if self.pairs < 1:
            raise ConfigError("need at least one training pair")
        if self.holdout < 2:
            raise ConfigError("need at least two hold-out samples")


@dataclass(frozen=True)
class ResultsReport:
    config: dict
    labels: list
    k_predicted: int
    scores: dict                       # method name -> ScoreReport dict
    certificate: Optional[dict]
    likelihood: Optional[dict]
    timing: dict                       # stage -> wall seconds

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "config": self.config,
            "labels": self.labels,
            "k_predicted": self.k_predicted,
            "scores": self.scores,
            "certificate": self.certificate,
            "likelihood": self.likelihood,
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), sort_keys=True, indent=2)


def _stage(name, timing, fn):
    start = time.perf_counter()
    try:
        result = fn()
    except EdgeclustError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc
    timing[name] = time.perf_counter() - start
    return result


def _prepare_node_level(cfg: RunConfig, rng: np.random.Generator):
    if cfg.dataset in ("crossbones", "grid", "blobs", "circles"):
        k = cfg.k if cfg.k is not None else (2 if cfg.dataset != "grid" else 6)
        spec = SyntheticSpec(kind=cfg.dataset, n=cfg.train_pool + cfg.holdout,
                             k=k, noise=cfg.noise)
        full = gen_synthetic(spec, rng)
    else:
        full = load_csv(cfg.dataset, has_labels=cfg.csv_has_labels)
        if full.labels is None:
            raise DataError("training pairs need labeled data")
        if full.n < cfg.holdout + 2:
            raise DataError("dataset too small for the requested hold-out size")
    perm = rng.permutation(full.n)
    hold_idx = np.sort(perm[:cfg.holdout])
    train_idx = np.sort(perm[cfg.holdout:])
    if cfg.dataset not in ("crossbones", "grid", "blobs", "circles"):
        train_idx = train_idx[:max(cfg.train_pool, 2)] if cfg.train_pool else train_idx
    train = SampleSet(features=full.features[train_idx],
                      labels=validate_partition(full.labels[train_idx]).labels)
    holdout = SampleSet(features=full.features[hold_idx],
                        labels=validate_partition(full.labels[hold_idx]).labels)
    return train, holdout


def run_pipeline(cfg: RunConfig) -> ResultsReport:
    """Run every stage under one seeded generator; deterministic per config."""
    rng = np.random.default_rng(cfg.seed)
    timing: dict = {}

    if cfg.dataset == "edge_level":
        if cfg.edge_spec is None:
            raise ConfigError("edge_level dataset needs an edge_spec")
        spec = EdgeLevelSpec(sizes=cfg.edge_spec["sizes"],
                             p1=parse_density(cfg.edge_spec["p1"]),
                             p0=parse_density(cfg.edge_spec["p0"]))
        features, truth = _stage("data", timing, lambda: gen_edge_level(spec, rng))
        holdout_set = None

        def fit_pairs():
            total = len(features)
            m = min(cfg.pairs, total)
            chosen = np.sort(rng.choice(total, size=m, replace=False))
            same = (truth.labels[features.pairs[chosen, 0]]
                    == truth.labels[features.pairs[chosen, 1]])
            return features.vectors[chosen][same], features.vectors[chosen][~same]

        same_vecs, diff_vecs = _stage("pairs", timing, fit_pairs)
    else:
        train, holdout_set = _stage("data", timing,
                                    lambda: _prepare_node_level(cfg, rng))
        truth = validate_partition(holdout_set.labels)

        def sample_training():
            lp = sample_labeled_pairs(train, cfg.pairs, rng, cfg.similarity)
            return lp.same_vectors, lp.diff_vectors

        same_vecs, diff_vecs = _stage("pairs", timing, sample_training)

        def holdout_features():
            return build_edge_features(holdout_set, all_pairs(holdout_set.n),
                                       cfg.similarity)

        features = _stage("edges", timing, holdout_features)

    def fit_models():
        sv, dv = same_vecs, diff_vecs
        if sv.shape[0] < 2 or dv.shape[0] < 2:
            raise DataError("training pairs left fewer than 2 vectors on one "
                            "side; increase the pair budget")
        pca_model = None
        feats = features
        if cfg.pca is not None:
            pca_model = pca_fit(np.vstack([sv, dv]), cfg.pca)
            sv = pca_transform(pca_model, sv)
            dv = pca_transform(pca_model, dv)
            feats = EdgeFeatureSet(pairs=features.pairs,
                                   vectors=pca_transform(pca_model, features.vectors))
        return kde_fit(sv), kde_fit(dv), feats

    p1, p0, eval_features = _stage("fit", timing, fit_models)

    graph = _stage("graph", timing,
                   lambda: build_signed_graph(eval_features, p1, p0,
                                              sparsify_below=cfg.sparsify,
                                              n=truth.n))

    def cluster():
        if cfg.algo == "lp":
            return corrclust.solve(graph)
        if cfg.algo == "pivot":
            return corrclust.kwik_cluster(graph, rng), None
        if graph.n > ORACLE_MAX_N:
            raise ConfigError(f"oracle algorithm is capped at n = {ORACLE_MAX_N}")
        part, _ = corrclust.brute_force_optimum(graph)
        return part, None

    partition, certificate = _stage("solve", timing, cluster)

    scores = {}

    def evaluate():
        scores["structured"] = score(partition, truth).to_dict()
        if cfg.baselines and holdout_set is not None:
            k = cfg.k if cfg.k is not None else truth.k
            scores["kmeans"] = score(kmeans(holdout_set, k, rng), truth).to_dict()
            cfg_spec = SpectralConfig(k=k, knn=cfg.knn)
            scores["spectral"] = score(spectral(holdout_set, cfg_spec, rng),
                                       truth).to_dict()

    _stage("score", timing, evaluate)

    likelihood = _stage(
        "likelihood", timing,
        lambda: log_likelihood(partition, eval_features, p1, p0).to_dict())

    report = ResultsReport(
        config=asdict(cfg),
        labels=[int(v) for v in partition.labels],
        k_predicted=partition.k,
        scores=scores,
        certificate=certificate.to_dict() if certificate is not None else None,
        likelihood=likelihood,
        timing={k: float(v) for k, v in timing.items()},
    )
    _check_finite(report.to_dict(include_timing=False))
    return report


def _check_finite(obj):
    if isinstance(obj, dict):
        for v in obj.values():
            _check_finite(v)
    elif isinstance(obj, list):
        for v in obj:
            _check_finite(v)
    elif isinstance(obj, float) and not np.isfinite(obj):
        raise DataError("report contains a non-finite numeric value")
