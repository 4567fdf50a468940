"""End-to-end composition: data -> distances -> dendrograms -> features
-> clusterings -> consensus -> scores.

Feature methods are named ``base`` (raw input vectors) or
``<criterion>-<level_fn>`` such as ``ward-raw`` or ``single-level``.
Chained methods join stages with ``+`` (``ward-raw+single-raw``): the
embedded features of each stage become the input vectors of the next, with
squared Euclidean distances recomputed between stages.  Because the
embedding reproduces the previous stage's dendrogram distances exactly,
stage t+1 effectively agglomerates stage t's distance matrix.
"""

import json
import zlib
from dataclasses import dataclass, field, asdict

import numpy as np

from . import __version__
from .dataset import load_csv, pairwise_sq_euclidean, standardize
from .linkage import CRITERIA, build_dendrogram
from .dendro_distance import LEVEL_FUNCTIONS, dendrogram_distance
from .embedding import embed
from .cluster import distance_to_similarity, kmeans, spectral_clustering
from .ensemble import co_association, cc_local_search
from .metrics import adjusted_rand, adjusted_mutual_information, v_measure

__all__ = [
    "CLUSTERERS",
    "PipelineConfig",
    "ScoreRow",
    "ScoreTable",
    "parse_method",
    "extract_features",
    "chain_features",
    "run_experiment",
]

CLUSTERERS = ("kmeans", "spectral")
SPEC_VERSION = "1"


def parse_method(name):
    """Split a feature-method name into a list of (criterion, level_fn) stages.

    Returns an empty list for ``base``.
    """
    if name == "base":
        return []
    stages = []
    for stage in name.split("+"):
        crit, _, lvl = stage.partition("-")
        if crit not in CRITERIA or lvl not in LEVEL_FUNCTIONS:
            raise ValueError(
                f"bad feature method {name!r}: stage {stage!r} is not "
                f"'<criterion>-<level_fn>' with criterion in {CRITERIA} "
                f"and level_fn in {LEVEL_FUNCTIONS}")
        stages.append((crit, lvl))
    return stages


@dataclass(frozen=True)
class PipelineConfig:
    """Everything needed to reproduce one experiment."""

    k: int
    methods: tuple = ("base", "single-raw", "complete-raw", "average-raw", "ward-raw")
    chain: tuple = ()                 # optional extra method: stages to compose
    clusterers: tuple = ("kmeans",)
    dims: object = "auto"
    restarts: int = 100
    seed: int = 42
    standardize: bool = False
    input: str | None = None
    has_labels: bool = True

    def validate(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not self.methods:
            raise ValueError("at least one feature method is required")
        if not self.clusterers:
            raise ValueError("at least one clusterer is required")
        for m in self.methods:
            parse_method(m)
        for stage in self.chain:
            if parse_method(stage) == []:
                raise ValueError("chain stages cannot be 'base'")
        for c in self.clusterers:
            if c not in CLUSTERERS:
                raise ValueError(f"unknown clusterer {c!r}")

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        for key in ("methods", "chain", "clusterers"):
            if key in raw:
                raw[key] = tuple(raw[key])
        return cls(**raw)


@dataclass(frozen=True)
class ScoreRow:
    method: str
    clusterer: str
    mi: float
    rand: float
    vm: float


@dataclass
class ScoreTable:
    rows: list = field(default_factory=list)
    labelings: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    def to_csv_text(self):
        lines = ["method,clusterer,MI,Rand,VM"]
        for row in self.rows:
            lines.append("%s,%s,%.17g,%.17g,%.17g"
                         % (row.method, row.clusterer, row.mi, row.rand, row.vm))
        return "\n".join(lines) + "\n"


def extract_features(data, criterion, level_fn="raw", dims="auto", precomputed=False):
    """Dendrogram features of one stage: agglomerate, derive distances, embed.

    ``data`` holds input vectors, or a distance matrix when ``precomputed``.
    Returns the :class:`~dendrofeat.embedding.EmbedResult` (coordinates plus
    spectrum).
    """
    dist = np.asarray(data, dtype=np.float64) if precomputed else pairwise_sq_euclidean(data)
    dendro = build_dendrogram(dist, criterion)
    return embed(dendrogram_distance(dendro, level_fn), dims=dims)


def chain_features(data, stages, dims="auto"):
    """Fold :func:`extract_features` over the stages.

    Stage t's embedded coordinates become stage t+1's input vectors.
    """
    if not stages:
        raise ValueError("chain needs at least one stage")
    feats = np.asarray(data, dtype=np.float64)
    result = None
    for criterion, level_fn in stages:
        result = extract_features(feats, criterion, level_fn, dims=dims)
        feats = result.coords
    return result


def _cell_seed(root, *parts):
    """Stable integer sub-seed for one experiment cell (crc32 keeps it
    identical across processes)."""
    entropy = [root] + [zlib.crc32(p.encode()) for p in parts]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def _method_features(data, name, dims):
    stages = parse_method(name)
    if not stages:
        return np.asarray(data, dtype=np.float64)
    return chain_features(data, stages, dims=dims).coords


def run_experiment(cfg, data=None, truth=None):
    """Cluster every (feature method x clusterer) cell and score it.

    Ground truth comes from ``truth`` or the labeled input file.  When more
    than one feature method is configured, a consensus row per clusterer is
    added by correlation clustering over the methods' labelings.
    """
    cfg.validate()
    if data is None:
        if cfg.input is None:
            raise ValueError("config has no input path and no data was passed")
        data, file_truth = load_csv(cfg.input, has_labels=cfg.has_labels)
        if truth is None:
            truth = file_truth
    if truth is None:
        raise ValueError("ground-truth labels are required for scoring")
    data = np.asarray(data, dtype=np.float64)
    if cfg.standardize:
        data = standardize(data)

    methods = list(cfg.methods)
    if cfg.chain:
        methods.append("+".join(cfg.chain))

    table = ScoreTable(metadata={
        "spec_version": SPEC_VERSION,
        "package_version": __version__,
        "seed": cfg.seed,
        "ami_normalization": "mean",
        "spectral_variant": "symmetric normalized Laplacian, row-normalized",
        "config": {**asdict(cfg), "methods": list(cfg.methods),
                   "chain": list(cfg.chain), "clusterers": list(cfg.clusterers)},
    })

    features = {name: _method_features(data, name, cfg.dims) for name in methods}
    per_clusterer = {c: [] for c in cfg.clusterers}
    for name in methods:
        feats = features[name]
        for clusterer in cfg.clusterers:
            cell_seed = _cell_seed(cfg.seed, name, clusterer)
            if clusterer == "kmeans":
                labels, _ = kmeans(feats, cfg.k, restarts=cfg.restarts, seed=cell_seed)
            else:
                sim = distance_to_similarity(pairwise_sq_euclidean(feats))
                labels = spectral_clustering(sim, cfg.k, restarts=cfg.restarts,
                                             seed=cell_seed)
            per_clusterer[clusterer].append(labels)
            table.labelings[(name, clusterer)] = labels
            table.rows.append(_score_row(name, clusterer, labels, truth))

    if len(methods) > 1:
        for clusterer in cfg.clusterers:
            coassoc = co_association(per_clusterer[clusterer])
            labels, _ = cc_local_search(coassoc, cfg.k, restarts=cfg.restarts,
                                        seed=_cell_seed(cfg.seed, "ensemble", clusterer))
            table.labelings[("ensemble", clusterer)] = labels
            table.rows.append(_score_row("ensemble", clusterer, labels, truth))
    return table


def _score_row(method, clusterer, labels, truth):
    return ScoreRow(method=method,
                    clusterer=clusterer,
                    mi=adjusted_mutual_information(labels, truth),
                    rand=adjusted_rand(labels, truth),
                    vm=v_measure(labels, truth))
