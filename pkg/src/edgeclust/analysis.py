"""Likelihood computations on the edge-feature model, the decomposition of
the log-likelihood into the log-odds-graph term minus disagreement costs, and
the restricted-KL expected-disagreement estimator."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import Partition
from .density import SignedWeightedGraph
from .edge_features import EdgeFeatureSet
from .errors import DataError
from .utils import worker_count

_SUBSTREAMS = 16


@dataclass(frozen=True)
class LikelihoodReport:
    log_likelihood_theta: float
    log_likelihood_g0: float
    disagreement_term: float

    def to_dict(self) -> dict:
        return {
            "log_likelihood_theta": self.log_likelihood_theta,
            "log_likelihood_g0": self.log_likelihood_g0,
            "disagreement_term": self.disagreement_term,
        }


@dataclass(frozen=True)
class ExpectedDisReport:
    n0: int
    n1: int
    estimate: float
    std_error: float
    sample_count: int

    def to_dict(self) -> dict:
        return {
            "n0": self.n0,
            "n1": self.n1,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "sample_count": self.sample_count,
        }


def log_likelihood(p: Partition, features: EdgeFeatureSet, p1, p0) -> LikelihoodReport:
    """Log-likelihood of a partition and its decomposition against the
    most-likely (generally invalid) pairwise labeling.

    log_likelihood_theta sums theta-selected log-densities over the pairs;
    log_likelihood_g0 takes the larger log-density on every pair; the
    disagreement term collects the absolute log-odds of every pair whose
    co-membership bit contradicts the log-odds sign (ties never disagree).
    """
    if len(features) == 0:
        raise DataError("no pairs to evaluate")
    if int(features.pairs.max()) >= p.n:
        raise DataError("features reference nodes outside the partition")
    l1 = p1.logpdf_many(features.vectors)
    l0 = p0.logpdf_many(features.vectors)
    theta = p.labels[features.pairs[:, 0]] == p.labels[features.pairs[:, 1]]
    ll_theta = float(np.sum(np.where(theta, l1, l0)))
    ll_g0 = float(np.sum(np.maximum(l1, l0)))
    r = l1 - l0
    disagree = np.where(theta, r < 0, r > 0)
    term = float(np.sum(np.abs(r[disagree])))
    return LikelihoodReport(log_likelihood_theta=ll_theta,
                            log_likelihood_g0=ll_g0,
                            disagreement_term=term)


def empirical_dis(g: SignedWeightedGraph, truth: Partition) -> float:
    """Disagreement cost of the log-odds graph against the true partition:
    the quantity whose expectation the restricted-KL formula computes."""
    from .corrclust import disagreement_cost
    return disagreement_cost(g, truth)


def _one_sided_terms(p_from, p_to, draws: np.ndarray) -> np.ndarray:
    lf = p_from.logpdf_many(draws)
    lt = p_to.logpdf_many(draws)
    ratio = lt - lf
    return np.where(ratio >= 0.0, ratio, 0.0)


def expected_dis(p1, p0, n1: int, n0: int, samples: int,
                 rng: np.random.Generator) -> ExpectedDisReport:
    """Monte Carlo estimate of the expected disagreement
    -n1*KL(P1||P0)|_{P1<=P0} - n0*KL(P0||P1)|_{P0<=P1}.

    Draws are split across fixed seeded substreams so the result does not
    depend on how many workers execute them.
    """
    if samples < 1000:
        raise DataError("need at least 1000 Monte Carlo samples")
    if n1 < 0 or n0 < 0:
        raise DataError("pair counts must be nonnegative")
    seeds = rng.spawn(2 * _SUBSTREAMS)
    per = [samples // _SUBSTREAMS + (1 if t < samples % _SUBSTREAMS else 0)
           for t in range(_SUBSTREAMS)]

    def draw_terms(t):
        sub1 = seeds[2 * t]
        sub0 = seeds[2 * t + 1]
        t1 = _one_sided_terms(p1, p0, p1.sample(sub1, per[t]))
        t0 = _one_sided_terms(p0, p1, p0.sample(sub0, per[t]))
        return t1, t0

    workers = min(worker_count(), _SUBSTREAMS)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(draw_terms, range(_SUBSTREAMS)))
    else:
        results = [draw_terms(t) for t in range(_SUBSTREAMS)]
    terms1 = np.concatenate([r[0] for r in results])
    terms0 = np.concatenate([r[1] for r in results])

    estimate = n1 * float(terms1.mean()) + n0 * float(terms0.mean())
    var = (n1 ** 2 * float(terms1.var(ddof=1)) / samples
           + n0 ** 2 * float(terms0.var(ddof=1)) / samples)
    return ExpectedDisReport(n0=n0, n1=n1, estimate=estimate,
                             std_error=float(np.sqrt(var)),
                             sample_count=samples)
