"""Agglomerative dendrograms under single/complete/average/Ward linkage.

Merging is driven by Lance-Williams distance updates on a dense working
matrix, with per-cluster cached row minima (valid lower bounds, repaired
lazily) to locate each globally minimal pair.  Ward coefficients are meant
to be applied to squared Euclidean input distances.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import validate_distance_matrix

__all__ = ["CRITERIA", "Dendrogram", "build_dendrogram", "lowest_common_node"]

CRITERIA = ("single", "complete", "average", "ward")


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree over ``n`` leaf objects.

    Leaves are nodes ``0..n-1``; the merge at step ``t`` creates internal
    node ``n+t`` joining ``left[t]`` and ``right[t]`` (node ids, with
    ``left < right``) at ``height[t]``.  ``size[t]`` is the member count of
    node ``n+t``.

    ``levels[v]`` is the discrete level of node ``v``: leaves sit at level
    zero, and a merge raises the level above its children only when its
    height strictly exceeds both child heights; equal-height (tied) merges
    keep the level flat.
    """

    n: int
    left: np.ndarray
    right: np.ndarray
    height: np.ndarray
    size: np.ndarray
    levels: np.ndarray
    parent: np.ndarray

    @property
    def n_nodes(self):
        return 2 * self.n - 1

    @property
    def root(self):
        return self.n_nodes - 1

    def node_height(self, v):
        """Linkage value of node ``v`` (0 for leaves)."""
        return 0.0 if v < self.n else float(self.height[v - self.n])

    def node_size(self, v):
        return 1 if v < self.n else int(self.size[v - self.n])

    def to_records(self):
        """Merge list as plain dicts (left, right, height, size per row)."""
        return [
            {"left": int(l), "right": int(r), "height": float(h), "size": int(s)}
            for l, r, h, s in zip(self.left, self.right, self.height, self.size)
        ]

    @classmethod
    def from_records(cls, n, records):
        left = [rec["left"] for rec in records]
        right = [rec["right"] for rec in records]
        height = [rec["height"] for rec in records]
        return _finalize(n, left, right, height)


def _finalize(n, left, right, height):
    """Assemble a Dendrogram from a merge list, deriving sizes and levels."""
    m = len(left)
    if m != n - 1:
        raise ValueError(f"{m} merges for {n} leaves; expected {n - 1}")
    left = np.asarray(left, dtype=np.int64)
    right = np.asarray(right, dtype=np.int64)
    height = np.asarray(height, dtype=np.float64)

    n_nodes = 2 * n - 1
    size = np.empty(m, dtype=np.int64)
    levels = np.zeros(n_nodes, dtype=np.int64)
    parent = np.full(n_nodes, -1, dtype=np.int64)
    node_size = np.ones(n_nodes, dtype=np.int64)
    node_h = np.zeros(n_nodes, dtype=np.float64)

    for t in range(m):
        v = n + t
        l, r = int(left[t]), int(right[t])
        if not (0 <= l < v and 0 <= r < v and l != r):
            raise ValueError(f"merge {t}: bad child ids ({l}, {r})")
        if parent[l] != -1 or parent[r] != -1:
            raise ValueError(f"merge {t}: node used as child twice")
        parent[l] = parent[r] = v
        node_size[v] = node_size[l] + node_size[r]
        size[t] = node_size[v]
        node_h[v] = height[t]
        base = max(levels[l], levels[r])
        strictly_higher = height[t] > max(node_h[l], node_h[r])
        levels[v] = base + 1 if strictly_higher else base
    return Dendrogram(n=n, left=left, right=right, height=height,
                      size=size, levels=levels, parent=parent)


def build_dendrogram(dist, criterion):
    """Agglomerate a distance matrix into a dendrogram.

    Parameters
    ----------
    dist : (n, n) array
        Symmetric nonnegative distances with zero diagonal (for Ward,
        squared Euclidean).
    criterion : str
        One of ``single``, ``complete``, ``average``, ``ward``.

    At every step the globally minimal inter-cluster distance pair is
    merged; among tied pairs, the one with the lexicographically smallest
    (min node id, max node id) wins, so construction is deterministic.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; expected one of {CRITERIA}")
    dist = validate_distance_matrix(np.asarray(dist, dtype=np.float64))
    n = dist.shape[0]
    if n == 1:
        return _finalize(1, [], [], [])

    D = dist.copy()
    np.fill_diagonal(D, np.inf)
    active = np.ones(n, dtype=bool)
    nid = np.arange(n, dtype=np.int64)     # current node id per matrix slot
    sizes = np.ones(n, dtype=np.int64)
    nn = D.min(axis=1)                     # cached row minima (lower bounds)

    left, right, heights = [], [], []
    for t in range(n - 1):
        # Verified global minimum: cached minima never overshoot the true
        # row minimum, so repair the current argmin until it is exact.
        while True:
            i = int(np.argmin(np.where(active, nn, np.inf)))
            true_min = D[i, active].min()
            if true_min == nn[i]:
                m = true_min
                break
            nn[i] = true_min

        # All pairs attaining m lie in rows whose cached minimum equals m.
        pairs = set()
        for u in np.flatnonzero(active & (nn == m)):
            for v in np.flatnonzero(active & (D[u] == m)):
                if v != u:
                    pairs.add((min(u, v), max(u, v)))
        a, b = min(pairs, key=lambda p: (min(nid[p[0]], nid[p[1]]),
                                         max(nid[p[0]], nid[p[1]])))

        js = np.flatnonzero(active)
        js = js[(js != a) & (js != b)]
        dja, djb = D[a, js], D[b, js]
        na, nb = float(sizes[a]), float(sizes[b])
        if criterion == "single":
            new = np.minimum(dja, djb)
        elif criterion == "complete":
            new = np.maximum(dja, djb)
        elif criterion == "average":
            new = (na * dja + nb * djb) / (na + nb)
        else:  # ward
            nj = sizes[js].astype(np.float64)
            new = ((na + nj) * dja + (nb + nj) * djb - nj * m) / (na + nb + nj)
        D[a, js] = new
        D[js, a] = new

        lo, hi = sorted((int(nid[a]), int(nid[b])))
        left.append(lo)
        right.append(hi)
        heights.append(float(m))

        active[b] = False
        sizes[a] += sizes[b]
        nid[a] = n + t
        nn[a] = new.min() if js.size else np.inf

    return _finalize(n, left, right, heights)


def lowest_common_node(dendro, i, j):
    """Id of the minimal dendrogram node containing both objects.

    For ``i == j`` this is the leaf itself; otherwise the lowest common
    ancestor of the two leaves.
    """
    n = dendro.n
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"object ids ({i}, {j}) out of range 0..{n - 1}")
    if i == j:
        return int(i)
    seen = set()
    v = int(i)
    while v != -1:
        seen.add(v)
        v = int(dendro.parent[v])
    v = int(j)
    while v not in seen:
        v = int(dendro.parent[v])
    return v
