"""Pairwise distances derived from dendrograms, and Minimax cross-checks.

The distance between two objects is the value of a level function at the
lowest dendrogram node containing both.  Two level functions are provided:
``raw`` (the node's linkage height) and ``level`` (the node's discrete
level).  Because both are non-decreasing from leaves to root, the full
matrix falls out of a single sweep over the merges: each merge assigns its
level-function value to every newly joined cross pair.

Minimax path distances (minimum over paths of the maximum edge weight) are
computed two independent ways, by an adapted Floyd-Warshall recursion and
over a Prim minimum spanning tree; for single linkage with the ``raw``
selector all three constructions agree exactly.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import validate_distance_matrix

__all__ = [
    "LEVEL_FUNCTIONS",
    "UltrametricReport",
    "dendrogram_distance",
    "minimax_floyd_warshall",
    "minimax_mst",
    "check_ultrametric",
]

LEVEL_FUNCTIONS = ("raw", "level")


@dataclass(frozen=True)
class UltrametricReport:
    """Result of scanning all triples for strong-triangle violations."""

    is_ultrametric: bool
    worst_violation: float
    witness: tuple | None
    tol: float


def dendrogram_distance(dendro, level_fn="raw"):
    """Distance matrix ``D[i, j] = f(lowest node containing i and j)``.

    ``level_fn`` selects f: ``raw`` uses linkage heights, ``level`` uses
    discrete levels.  O(n^2) total via the merge sweep.
    """
    if level_fn not in LEVEL_FUNCTIONS:
        raise ValueError(f"unknown level function {level_fn!r}; "
                         f"expected one of {LEVEL_FUNCTIONS}")
    n = dendro.n
    out = np.zeros((n, n), dtype=np.float64)
    members = {}
    for t in range(n - 1):
        node = n + t
        l, r = int(dendro.left[t]), int(dendro.right[t])
        ml = members.pop(l, None)
        if ml is None:
            ml = np.array([l], dtype=np.int64)
        mr = members.pop(r, None)
        if mr is None:
            mr = np.array([r], dtype=np.int64)
        if level_fn == "raw":
            value = float(dendro.height[t])
        else:
            value = float(dendro.levels[node])
        out[np.ix_(ml, mr)] = value
        out[np.ix_(mr, ml)] = value
        members[node] = np.concatenate([ml, mr])
    return out


def minimax_floyd_warshall(dist):
    """Minimax distances by dynamic programming over all relay nodes.

    ``D[i, j] <- min(D[i, j], max(D[i, k], D[k, j]))`` for every k; O(n^3).
    Kept as the independent cross-check for the dendrogram-based route.
    """
    dist = validate_distance_matrix(np.asarray(dist, dtype=np.float64))
    out = dist.copy()
    relay = np.empty_like(out)
    for k in range(out.shape[0]):
        np.maximum(out[:, k, None], out[None, k, :], out=relay)
        np.minimum(out, relay, out=out)
    return out


def minimax_mst(dist):
    """Minimax distances as the maximal edge on the MST path of each pair.

    Builds a minimum spanning tree with a dense Prim scan, then one tree
    traversal per source node propagates the bottleneck; O(n^2) total.
    """
    dist = validate_distance_matrix(np.asarray(dist, dtype=np.float64))
    n = dist.shape[0]
    out = np.zeros((n, n), dtype=np.float64)
    if n == 1:
        return out

    in_tree = np.zeros(n, dtype=bool)
    best_w = dist[0].copy()
    best_from = np.zeros(n, dtype=np.int64)
    in_tree[0] = True
    best_w[0] = np.inf
    adjacency = [[] for _ in range(n)]
    for _ in range(n - 1):
        v = int(np.argmin(np.where(in_tree, np.inf, best_w)))
        u, w = int(best_from[v]), float(best_w[v])
        adjacency[u].append((v, w))
        adjacency[v].append((u, w))
        in_tree[v] = True
        closer = ~in_tree & (dist[v] < best_w)
        best_w[closer] = dist[v, closer]
        best_from[closer] = v

    for src in range(n):
        stack = [src]
        seen = np.zeros(n, dtype=bool)
        seen[src] = True
        while stack:
            u = stack.pop()
            for v, w in adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    out[src, v] = max(out[src, u], w)
                    stack.append(v)
    return out


def check_ultrametric(dist, tol=0.0):
    """Scan all triples for violations of ``D_ij <= max(D_ik, D_kj)``.

    Returns an :class:`UltrametricReport` whose ``worst_violation`` is the
    maximum of ``D_ij - max(D_ik, D_kj)`` over all triples, with a witness
    triple ``(i, j, k)`` when it exceeds ``tol``.  Distances copied straight
    off a dendrogram are exact, so the default tolerance is zero; use a
    small relative tolerance for matrices that went through rounding.
    """
    dist = validate_distance_matrix(np.asarray(dist, dtype=np.float64))
    n = dist.shape[0]
    worst = 0.0
    witness = None
    viol = np.empty_like(dist)
    for k in range(n):
        np.maximum(dist[:, k, None], dist[None, k, :], out=viol)
        np.subtract(dist, viol, out=viol)
        flat = int(np.argmax(viol))
        value = float(viol.flat[flat])
        if value > worst:
            worst = value
            witness = (flat // n, flat % n, k)
    ok = worst <= tol
    return UltrametricReport(is_ultrametric=ok,
                             worst_violation=worst,
                             witness=None if ok else witness,
                             tol=tol)
