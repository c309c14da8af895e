"""Command-line surface. Each subcommand reads and writes the documented
file formats so the stages can be scripted independently; ``pipeline`` runs
them end to end in one process.

Exit codes: 0 success, 2 bad config, 3 data error, 4 solver non-convergence.
"""
from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import corrclust
from .baselines import SpectralConfig, kmeans, spectral
from .core import SampleSet, score, validate_partition
from .datagen import (SyntheticSpec, gen_synthetic, load_csv,
                      load_labeled_pairs, save_csv, save_labeled_pairs)
from .density import (DensityModel, build_signed_graph, kde_fit,
                      read_graph_tsv, write_graph_tsv)
from .edge_features import (all_pairs, build_edge_features, canonical_kind,
                            edge_vectors, pca_fit, pca_transform,
                            _sample_pair_indices)
from .errors import ConfigError, DataError, EdgeclustError, SolverError
from .pipeline import RunConfig, run_pipeline
from .plotting import render_svg


def _parse_pca(value):
    if value is None or value == "off":
        return None
    try:
        out = float(value)
    except ValueError:
        raise ConfigError("--pca expects a float in (0,1] or 'off'") from None
    if not (0.0 < out <= 1.0):
        raise ConfigError("--pca variance target must be in (0, 1]")
    return out


def _write_labels(labels, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for lab in labels:
            fh.write(f"{int(lab)}\n")


def _read_labels(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return np.array([int(line.strip()) for line in fh if line.strip()],
                            dtype=int)
        except ValueError:
            raise DataError(f"{path}: labels file must hold one integer "
                            "per line") from None


@click.group()
def cli():
    """Edge-feature structured clustering toolkit."""


@cli.command()
@click.option("--kind", type=click.Choice(["crossbones", "grid", "blobs", "circles"]),
              required=True)
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, default=None)
@click.option("--noise", type=float, default=0.03, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def gen(kind, n, k, noise, seed, out):
    """Generate a labeled synthetic dataset as CSV."""
    if k is None:
        k = 6 if kind == "grid" else 2
    spec = SyntheticSpec(kind=kind, n=n, k=k, noise=noise)
    s = gen_synthetic(spec, np.random.default_rng(seed))
    save_csv(s, out)


@cli.command()
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--pairs", "m", type=int, default=5000, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def pairs(data, m, seed, out):
    """Sample labeled training pairs (i,j,same) from a labeled CSV."""
    s = load_csv(data, has_labels=True)
    if m < 1:
        raise ConfigError("--pairs must be >= 1")
    rng = np.random.default_rng(seed)
    idx = _sample_pair_indices(s.n, m, rng)
    same = s.labels[idx[:, 0]] == s.labels[idx[:, 1]]
    save_labeled_pairs(idx, same, out)


@cli.command()
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--pairs-file", type=click.Path(exists=True), required=True)
@click.option("--similarity", type=click.Choice(["absdiff", "euclid"]),
              default="absdiff", show_default=True)
@click.option("--pca", default="off", show_default=True,
              help="variance target in (0,1], or 'off'")
@click.option("--out", type=click.Path(), required=True)
def fit(data, pairs_file, similarity, pca, out):
    """Fit the P1/P0 kernel density models from labeled pairs."""
    kind = canonical_kind(similarity)
    s = load_csv(data, has_labels=True)
    idx, same = load_labeled_pairs(pairs_file)
    if idx.max() >= s.n:
        raise DataError("pair indices exceed the dataset size")
    vecs = edge_vectors(s.features, idx, kind)
    sv, dv = vecs[same], vecs[~same]
    if sv.shape[0] < 2 or dv.shape[0] < 2:
        raise DataError("need >= 2 same-cluster and >= 2 cross-cluster pairs")
    target = _parse_pca(pca)
    payload = {"similarity": np.array(kind)}
    if target is not None:
        model = pca_fit(np.vstack([sv, dv]), target)
        sv = pca_transform(model, sv)
        dv = pca_transform(model, dv)
        payload.update(pca_mean=model.mean, pca_components=model.components,
                       pca_variance=model.explained_variance)
    p1 = kde_fit(sv)
    p0 = kde_fit(dv)
    payload.update(p1_points=p1.training_points, p1_bw=p1.bandwidths,
                   p0_points=p0.training_points, p0_bw=p0.bandwidths)
    np.savez(out, **payload)


def _load_model(path):
    with np.load(path) as data:
        p1 = DensityModel(training_points=data["p1_points"], bandwidths=data["p1_bw"])
        p0 = DensityModel(training_points=data["p0_points"], bandwidths=data["p0_bw"])
        kind = str(data["similarity"])
        pca = None
        if "pca_mean" in data:
            from .edge_features import PcaModel
            pca = PcaModel(mean=data["pca_mean"],
                           components=data["pca_components"],
                           explained_variance=data["pca_variance"])
        return p1, p0, kind, pca


@cli.command()
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--model", type=click.Path(exists=True), required=True)
@click.option("--sparsify", type=float, default=0.0, show_default=True)
@click.option("--has-labels/--no-labels", default=True, show_default=True)
@click.option("--out", type=click.Path(), required=True)
def graph(data, model, sparsify, has_labels, out):
    """Build the signed log-odds graph over every pair of samples in DATA."""
    s = load_csv(data, has_labels=has_labels)
    p1, p0, kind, pca = _load_model(model)
    feats = build_edge_features(s, all_pairs(s.n), kind)
    if pca is not None:
        from .edge_features import EdgeFeatureSet
        feats = EdgeFeatureSet(pairs=feats.pairs,
                               vectors=pca_transform(pca, feats.vectors))
    g = build_signed_graph(feats, p1, p0, sparsify_below=sparsify, n=s.n)
    write_graph_tsv(g, out)


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--algo", type=click.Choice(["lp", "pivot", "oracle"]),
              default="lp", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n", type=int, default=None, help="node count override")
@click.option("--out", type=click.Path(), required=True)
@click.option("--certificate", type=click.Path(), default=None)
def cluster(graph_path, algo, seed, n, out, certificate):
    """Cluster a signed graph and write one label per node."""
    g = read_graph_tsv(graph_path, n=n)
    if algo == "lp":
        part, cert = corrclust.solve(g)
        if certificate:
            with open(certificate, "w", encoding="utf-8") as fh:
                json.dump(cert.to_dict(), fh, sort_keys=True, indent=2)
    elif algo == "pivot":
        part = corrclust.kwik_cluster(g, np.random.default_rng(seed))
    else:
        if g.n > 12:
            raise ConfigError("oracle algorithm is capped at n = 12")
        part, _ = corrclust.brute_force_optimum(g)
    _write_labels(part.labels, out)


@cli.command()
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--method", type=click.Choice(["kmeans", "spectral"]), required=True)
@click.option("--k", type=int, required=True)
@click.option("--knn", type=int, default=20, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
def baseline(data, method, k, knn, seed, out):
    """Run a baseline clustering on the node features of DATA."""
    s = load_csv(data, has_labels=True)
    rng = np.random.default_rng(seed)
    if method == "kmeans":
        part = kmeans(s, k, rng)
    else:
        part = spectral(s, SpectralConfig(k=k, knn=knn), rng)
    _write_labels(part.labels, out)


@cli.command("eval")
@click.option("--pred", type=click.Path(exists=True), required=True)
@click.option("--truth", type=click.Path(exists=True), required=True,
              help="labels file or labeled CSV")
@click.option("--out", type=click.Path(), default=None)
def eval_cmd(pred, truth, out):
    """Score predicted labels against ground truth."""
    predicted = validate_partition(_read_labels(pred))
    if truth.endswith(".csv"):
        truth_labels = load_csv(truth, has_labels=True).labels
    else:
        truth_labels = _read_labels(truth)
    report = score(predicted, validate_partition(truth_labels))
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@cli.command()
@click.option("--graph", "graph_path", type=click.Path(exists=True), required=True)
@click.option("--labels", type=click.Path(exists=True), required=True)
@click.option("--n", type=int, default=None)
@click.option("--out", type=click.Path(), default=None)
def certify(graph_path, labels, n, out):
    """LP lower bound and disagreement cost of a given labeling."""
    g = read_graph_tsv(graph_path, n=n)
    part = validate_partition(_read_labels(labels))
    metric = corrclust.lp_relax(g)
    cost = corrclust.disagreement_cost(g, part)
    c1 = corrclust.c1_constant(g.n)
    cert = corrclust.SolveCertificate(
        lp_lower_bound=metric.objective, rounded_cost=cost, c1=c1,
        bound_rhs=c1 * float(np.log(g.n + 1)) * metric.objective, n=g.n)
    text = json.dumps(cert.to_dict(), sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


@cli.command()
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--labels", type=click.Path(exists=True), default=None,
              help="labels file; defaults to the CSV's own labels")
@click.option("--out", type=click.Path(), required=True)
def plot(data, labels, out):
    """Render a cluster scatter plot as a standalone SVG."""
    s = load_csv(data, has_labels=labels is None)
    if labels is not None:
        part = validate_partition(_read_labels(labels))
    else:
        part = validate_partition(s.labels)
    render_svg(SampleSet(features=s.features), part, out)


@cli.command()
@click.option("--kind", type=click.Choice(["crossbones", "grid", "blobs", "circles"]),
              default=None)
@click.option("--data", type=click.Path(exists=True), default=None)
@click.option("--edge-spec", type=click.Path(exists=True), default=None,
              help="JSON file with sizes, p1, p0 density descriptors")
@click.option("--seed", type=int, required=True)
@click.option("--similarity", type=click.Choice(["absdiff", "euclid"]),
              default="absdiff", show_default=True)
@click.option("--sparsify", type=float, default=0.0, show_default=True)
@click.option("--pca", default="off", show_default=True)
@click.option("--algo", type=click.Choice(["lp", "pivot", "oracle"]),
              default="lp", show_default=True)
@click.option("--pairs", type=int, default=5000, show_default=True)
@click.option("--holdout", type=int, default=100, show_default=True)
@click.option("--train-pool", type=int, default=200, show_default=True)
@click.option("--k", type=int, default=None)
@click.option("--noise", type=float, default=0.03, show_default=True)
@click.option("--baselines/--no-baselines", default=False, show_default=True)
@click.option("--knn", type=int, default=20, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def pipeline(kind, data, edge_spec, seed, similarity, sparsify, pca, algo,
             pairs, holdout, train_pool, k, noise, baselines, knn, out):
    """Run the full pipeline and emit a JSON report."""
    sources = [s for s in (kind, data, edge_spec) if s is not None]
    if len(sources) != 1:
        raise ConfigError("choose exactly one of --kind, --data, --edge-spec")
    edge_spec_dict = None
    if edge_spec is not None:
        with open(edge_spec, "r", encoding="utf-8") as fh:
            edge_spec_dict = json.load(fh)
        dataset = "edge_level"
    else:
        dataset = kind if kind is not None else data
    cfg = RunConfig(dataset=dataset, seed=seed, similarity=similarity,
                    sparsify=sparsify, pca=_parse_pca(pca), algo=algo,
                    pairs=pairs, holdout=holdout, train_pool=train_pool,
                    k=k, noise=noise, baselines=baselines, knn=knn,
                    edge_spec=edge_spec_dict)
    report = run_pipeline(cfg)
    text = report.to_json()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        click.echo(text)


def main():
    try:
        cli.main(standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.Abort:
        sys.exit(2)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    except SolverError as exc:
        click.echo(f"solver error: {exc}", err=True)
        sys.exit(4)
    except (DataError, EdgeclustError, OSError) as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
