"""Clustering algorithms consuming feature matrices or similarities.

Labelings are 1-based integer arrays (values in 1..K).  K-means restarts
are seeded from (seed, restart-index) only, and all order-sensitive steps
(seeding draws, centroid sums, tie-breaks) run over a lexicographic
ordering of the points, so the returned partition is invariant under row
permutations of the input.
"""

import numpy as np

from .embedding import sym_eig

__all__ = [
    "validate_labels",
    "distance_to_similarity",
    "kmeans",
    "spectral_clustering",
]


def validate_labels(labels, n=None):
    """Coerce to a 1-based integer labeling array and return (labels, K)."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim != 1 or labels.size == 0:
        raise ValueError("labeling must be a nonempty 1-D integer array")
    if n is not None and labels.size != n:
        raise ValueError(f"labeling has {labels.size} entries, expected {n}")
    k = int(labels.max())
    if labels.min() < 1:
        raise ValueError("labels must be >= 1")
    return labels, k


def distance_to_similarity(dist):
    """Convert distances to similarities: ``S_ij = max(X) - X_ij + min(X)``.

    Max and min are taken over the off-diagonal entries; the diagonal gets
    the same formula applied to its zero distances (``max + min``).
    """
    dist = np.asarray(dist, dtype=np.float64)
    n = dist.shape[0]
    if n < 2:
        raise ValueError("similarity transform needs n >= 2")
    off = ~np.eye(n, dtype=bool)
    hi = dist[off].max()
    lo = dist[off].min()
    return hi - dist + lo


def _lex_order(points):
    """Indices sorting rows lexicographically (col 0 first)."""
    if points.shape[1] == 0:
        return np.arange(points.shape[0])
    return np.lexsort(points.T[::-1])


def kmeans(points, k, restarts=100, max_iter=300, seed=0):
    """Lloyd's algorithm with distance-weighted seeding and restarts.

    Parameters
    ----------
    points : (n, l) array
    k : int, number of clusters (<= n)
    restarts : int, independent seedings; the minimum-inertia run wins
        (ties go to the earlier restart)
    seed : int, root seed; restart r draws from ``default_rng([seed, r])``

    Returns
    -------
    (labels, inertia) : 1-based labels of shape (n,), within-cluster sum of
    squared distances of the winning run.

    Empty clusters are repaired by reassigning the point farthest from its
    center.  Iteration stops when assignments are unchanged.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = points.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"k={k} outside 1..{n}")
    if restarts < 1:
        raise ValueError("restarts must be >= 1")

    order = _lex_order(points)
    pts = points[order]

    best_assign = None
    best_inertia = np.inf
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        centers = _seed_centers(pts, k, rng)
        assign = None
        prev_inertia = np.inf
        for _ in range(max_iter):
            d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
            new_assign = np.argmin(d2, axis=1)
            point_cost = d2[np.arange(n), new_assign]
            for c in range(k):
                if not np.any(new_assign == c):
                    far = int(np.argmax(point_cost))
                    new_assign[far] = c
                    point_cost[far] = 0.0
            inertia = 0.0
            for c in range(k):
                members = pts[new_assign == c]
                centers[c] = members.mean(axis=0)
                inertia += ((members - centers[c]) ** 2).sum()
            if inertia > prev_inertia * (1 + 1e-9) + 1e-12:
                raise RuntimeError("k-means inertia increased across an iteration")
            if assign is not None and np.array_equal(assign, new_assign):
                break
            assign = new_assign
            prev_inertia = inertia
        if prev_inertia < best_inertia:
            best_inertia = prev_inertia
            best_assign = assign

    labels = np.empty(n, dtype=np.int64)
    labels[order] = best_assign + 1
    return labels, float(best_inertia)


def _seed_centers(pts, k, rng):
    """Distance-weighted (k-means++ style) seeding over lex-ordered points."""
    n = pts.shape[0]
    centers = np.empty((k, pts.shape[1]), dtype=np.float64)
    first = min(int(rng.random() * n), n - 1)
    centers[0] = pts[first]
    d2 = ((pts - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            # all remaining points coincide with chosen centers
            centers[c] = pts[min(c, n - 1)]
            continue
        u = rng.random() * total
        idx = min(int(np.searchsorted(np.cumsum(d2), u, side="right")), n - 1)
        centers[c] = pts[idx]
        np.minimum(d2, ((pts - centers[c]) ** 2).sum(axis=1), out=d2)
    return centers


def spectral_clustering(sim, k, restarts=100, seed=0):
    """Normalized-cut spectral clustering on a similarity matrix.

    Forms the symmetric normalized Laplacian ``I - D^{-1/2} S D^{-1/2}``,
    takes its k bottom eigenvectors, normalizes the rows to unit length,
    and clusters the rows with :func:`kmeans`.
    """
    sim = np.asarray(sim, dtype=np.float64)
    if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
        raise ValueError(f"similarity matrix must be square, got {sim.shape}")
    if not np.array_equal(sim, sim.T):
        raise ValueError("similarity matrix is not symmetric")
    if np.any(sim < 0):
        raise ValueError("similarity matrix has negative entries")
    n = sim.shape[0]
    if k < 1 or k > n:
        raise ValueError(f"k={k} outside 1..{n}")

    degrees = sim.sum(axis=1)
    if np.any(degrees == 0):
        isolated = int(np.flatnonzero(degrees == 0)[0])
        raise ValueError(f"vertex {isolated} is isolated (zero degree)")
    inv_sqrt = 1.0 / np.sqrt(degrees)
    lap = -(inv_sqrt[:, None] * sim * inv_sqrt[None, :])
    lap[np.diag_indices(n)] += 1.0
    lap = 0.5 * (lap + lap.T)

    spectrum = sym_eig(lap)
    rows = spectrum.eigenvectors[:, n - k:][:, ::-1]  # ascending eigenvalue
    norms = np.sqrt((rows ** 2).sum(axis=1))
    norms[norms == 0] = 1.0
    rows = rows / norms[:, None]

    labels, _ = kmeans(rows, k, restarts=restarts, seed=seed)
    return labels
