"""Command-line entry point.

Subcommands: ``features`` (data CSV -> feature CSV), ``cluster`` (features
-> labels), ``ensemble`` (label files -> consensus labels), ``eval`` (two
label files -> scores), ``experiment`` (config JSON -> score table), and
``check`` (distance CSV -> ultrametric report).

Exit codes: 0 success, 1 usage error, 2 data or validation error.  All
randomness is seeded (default seed 42, echoed to metadata), so identical
invocations on identical files produce byte-identical outputs.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .dataset import (load_csv, load_matrix, save_matrix, load_labels,
                      save_labels, pairwise_sq_euclidean)
from .linkage import CRITERIA
from .dendro_distance import LEVEL_FUNCTIONS, check_ultrametric
from .cluster import distance_to_similarity, kmeans, spectral_clustering
from .ensemble import co_association, cc_local_search
from .metrics import adjusted_rand, adjusted_mutual_information, v_measure
from .pipeline import PipelineConfig, extract_features, run_experiment, SPEC_VERSION

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _dims(value):
    if value == "auto":
        return "auto"
    return int(value)


def build_parser():
    parser = _Parser(prog="dendrofeat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("features", help="extract dendrogram features from a data CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--has-labels", action="store_true",
                   help="input has a trailing label column (dropped)")
    p.add_argument("--criterion", required=True, choices=CRITERIA)
    p.add_argument("--level", default="raw", choices=LEVEL_FUNCTIONS)
    p.add_argument("--dims", type=_dims, default="auto")
    p.add_argument("--output", required=True, help="feature matrix CSV")
    p.add_argument("--distances", help="also write the dendrogram distance matrix CSV")
    p.add_argument("--metadata", help="write run metadata JSON")
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("cluster", help="cluster a feature matrix")
    p.add_argument("--features", required=True, help="feature matrix CSV")
    p.add_argument("--algo", default="kmeans", choices=("kmeans", "spectral"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", required=True, help="labels file (one int per line)")
    p.add_argument("--metadata", help="write diagnostics JSON")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("ensemble", help="consensus of several labelings")
    p.add_argument("--labels", action="append", required=True,
                   help="labeling file; repeat per solution")
    p.add_argument("--k", type=int, help="cluster count (default: max over inputs)")
    p.add_argument("--restarts", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", required=True)
    p.add_argument("--metadata", help="write diagnostics JSON")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("eval", help="score one labeling against another")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--output", help="also write the score row as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="run a configured experiment")
    p.add_argument("--config", required=True, help="PipelineConfig JSON")
    p.add_argument("--output-dir", required=True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("check", help="ultrametric report for a distance matrix CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--tol", type=float,
                   help="absolute tolerance (default: 1e-9 x max entry)")
    p.set_defaults(func=cmd_check)
    return parser


def _write_metadata(path, payload):
    if path:
        payload = {"spec_version": SPEC_VERSION, "package_version": __version__,
                   **payload}
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def cmd_features(args):
    data, _ = load_csv(args.input, has_labels=args.has_labels)
    from .linkage import build_dendrogram
    from .dendro_distance import dendrogram_distance
    from .embedding import embed

    dist = pairwise_sq_euclidean(data)
    dendro = build_dendrogram(dist, args.criterion)
    dd = dendrogram_distance(dendro, args.level)
    result = embed(dd, dims=args.dims)
    save_matrix(args.output, result.coords)
    if args.distances:
        save_matrix(args.distances, dd)
    print(f"[dendrofeat] features: n={data.shape[0]} criterion={args.criterion} "
          f"level={args.level} dims={result.coords.shape[1]} seed={args.seed}",
          file=sys.stderr)
    _write_metadata(args.metadata, {
        "command": "features", "seed": args.seed, "criterion": args.criterion,
        "level": args.level, "dims": result.coords.shape[1],
        "clipped_eigenvalues": result.clipped,
        "eigenvalues": [float(v) for v in result.spectrum.eigenvalues],
    })
    return 0


def cmd_cluster(args):
    feats = load_matrix(args.features)
    if args.algo == "kmeans":
        labels, inertia = kmeans(feats, args.k, restarts=args.restarts, seed=args.seed)
        diag = {"inertia": inertia}
    else:
        sim = distance_to_similarity(pairwise_sq_euclidean(feats))
        labels = spectral_clustering(sim, args.k, restarts=args.restarts,
                                     seed=args.seed)
        diag = {}
    save_labels(args.output, labels)
    print(f"[dendrofeat] cluster: algo={args.algo} k={args.k} seed={args.seed}",
          file=sys.stderr)
    _write_metadata(args.metadata, {
        "command": "cluster", "seed": args.seed, "algo": args.algo, "k": args.k,
        "restarts": args.restarts, **diag,
    })
    return 0


def cmd_ensemble(args):
    solutions = [load_labels(path) for path in args.labels]
    k = args.k if args.k is not None else max(int(s.max()) for s in solutions)
    coassoc = co_association(solutions)
    labels, cost = cc_local_search(coassoc, k, restarts=args.restarts,
                                   seed=args.seed)
    save_labels(args.output, labels)
    print(f"[dendrofeat] ensemble: m={len(solutions)} k={k} cost={cost} "
          f"seed={args.seed}", file=sys.stderr)
    _write_metadata(args.metadata, {
        "command": "ensemble", "seed": args.seed, "k": k,
        "solutions": len(solutions), "cost": int(cost),
    })
    return 0


def cmd_eval(args):
    a = load_labels(args.a)
    b = load_labels(args.b)
    row = {"MI": adjusted_mutual_information(a, b),
           "Rand": adjusted_rand(a, b),
           "VM": v_measure(a, b)}
    text = json.dumps(row)
    print(text)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    return 0


def cmd_experiment(args):
    import os
    cfg = PipelineConfig.from_json(args.config)
    table = run_experiment(cfg)
    os.makedirs(args.output_dir, exist_ok=True)
    with open(os.path.join(args.output_dir, "scores.csv"), "w") as fh:
        fh.write(table.to_csv_text())
    for (method, clusterer), labels in table.labelings.items():
        save_labels(os.path.join(args.output_dir,
                                 f"labels_{method}_{clusterer}.csv"), labels)
    with open(os.path.join(args.output_dir, "metadata.json"), "w") as fh:
        json.dump(table.metadata, fh, indent=2)
        fh.write("\n")
    print(f"[dendrofeat] experiment: {len(table.rows)} rows -> {args.output_dir} "
          f"seed={cfg.seed}", file=sys.stderr)
    return 0


def cmd_check(args):
    dist = load_matrix(args.input)
    tol = args.tol if args.tol is not None else 1e-9 * float(np.max(dist))
    report = check_ultrametric(dist, tol=tol)
    print(json.dumps({
        "is_ultrametric": report.is_ultrametric,
        "worst_violation": report.worst_violation,
        "witness": list(report.witness) if report.witness else None,
        "tol": report.tol,
    }))
    return 0


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"dendrofeat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
