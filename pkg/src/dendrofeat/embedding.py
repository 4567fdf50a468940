"""Euclidean embedding of ultrametric distance matrices.

Double-centering a dendrogram distance matrix yields a positive
semidefinite kernel; its eigenbasis gives coordinates whose pairwise
squared Euclidean distances reproduce the input distances.  The
eigensolver is a cyclic Jacobi iteration, which is simple and numerically
robust for the dense symmetric matrices handled here (n up to a few
thousand).
"""

from dataclasses import dataclass

import numpy as np

from .dataset import validate_distance_matrix
from .dendro_distance import check_ultrametric

__all__ = ["Spectrum", "EmbedResult", "center_distance_matrix", "sym_eig", "embed"]

_JACOBI_TARGET = 1e-12   # off-diagonal Frobenius mass, relative to initial
_JACOBI_MAX_SWEEPS = 60
_EIG_KEEP_REL = 1e-9     # auto mode keeps eigenvalues > this fraction of the largest


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition with eigenvalues sorted descending.

    ``eigenvectors[:, i]`` is the orthonormal eigenvector for
    ``eigenvalues[i]``; each column's largest-magnitude entry is positive.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class EmbedResult:
    """Coordinates plus the spectrum they were cut from.

    ``clipped`` counts materially negative eigenvalues that were zeroed;
    it stays 0 for ultrametric inputs.
    """

    coords: np.ndarray
    spectrum: Spectrum
    clipped: int


def center_distance_matrix(dist):
    """Double-center a distance matrix: ``W = -1/2 * A @ D @ A``.

    ``A = I - (1/n) 1 1^T``, so W's rows and columns sum to zero.  The
    result is symmetrized exactly.
    """
    dist = validate_distance_matrix(np.asarray(dist, dtype=np.float64))
    row_mean = dist.mean(axis=1)
    grand = dist.mean()
    w = dist - row_mean[:, None]
    w -= row_mean[None, :]
    w += grand
    w *= -0.5
    return 0.5 * (w + w.T)


def sym_eig(m):
    """Full eigendecomposition of a symmetric matrix by cyclic Jacobi.

    Sweeps Givens rotations over all off-diagonal positions until their
    Frobenius mass falls below 1e-12 of its initial value.

    Raises ValueError for asymmetric input and RuntimeError (reporting the
    residual) if the bounded number of sweeps does not converge.
    """
    a = np.array(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if np.abs(a - a.T).max() > 1e-10:
        raise ValueError("matrix is not symmetric within 1e-10")
    n = a.shape[0]
    v = np.eye(n)

    def off_mass(x):
        # summed over off-diagonal entries only: subtracting the diagonal
        # mass from the full Frobenius norm would cancel catastrophically
        off = x.copy()
        np.fill_diagonal(off, 0.0)
        return float(np.linalg.norm(off))

    initial = off_mass(a)
    target = _JACOBI_TARGET * initial
    if initial > 0.0:
        skip = target / (2 * n)  # total skipped mass stays below target
        for _ in range(_JACOBI_MAX_SWEEPS):
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if abs(apq) <= skip:
                        continue
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    if tau >= 0:
                        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    col_p = a[:, p].copy()
                    col_q = a[:, q].copy()
                    a[:, p] = c * col_p - s * col_q
                    a[:, q] = s * col_p + c * col_q
                    row_p = a[p, :].copy()
                    row_q = a[q, :].copy()
                    a[p, :] = c * row_p - s * row_q
                    a[q, :] = s * row_p + c * row_q
                    a[p, q] = a[q, p] = 0.0
                    vec_p = v[:, p].copy()
                    v[:, p] = c * vec_p - s * v[:, q]
                    v[:, q] = s * vec_p + c * v[:, q]
            if off_mass(a) < target:
                break
        else:
            raise RuntimeError(
                f"Jacobi did not converge in {_JACOBI_MAX_SWEEPS} sweeps; "
                f"off-diagonal residual {off_mass(a):.3e} (target {target:.3e})")

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    for j in range(n):
        lead = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[lead, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return Spectrum(eigenvalues=values, eigenvectors=vectors)


def embed(dist, dims="auto", allow_non_ultrametric=False):
    """Embed a distance matrix so squared Euclidean distances reproduce it.

    Parameters
    ----------
    dist : (n, n) array
        Ultrametric distance matrix (checked unless
        ``allow_non_ultrametric``; general matrices then embed
        approximately, with negative eigenvalues clipped and counted).
    dims : "auto" or int
        Number of coordinates to keep.  ``auto`` keeps eigenvalues above
        1e-9 of the largest.

    Returns
    -------
    EmbedResult with ``coords`` of shape (n, l), columns ordered by
    descending eigenvalue.
    """
    dist = validate_distance_matrix(np.asarray(dist, dtype=np.float64))
    n = dist.shape[0]
    if not allow_non_ultrametric:
        report = check_ultrametric(dist)
        if not report.is_ultrametric:
            raise ValueError(
                f"input is not ultrametric (worst violation "
                f"{report.worst_violation:.3e} at triple {report.witness}); "
                f"pass allow_non_ultrametric=True to embed approximately")

    spectrum = sym_eig(center_distance_matrix(dist))
    values = spectrum.eigenvalues
    scale = float(np.abs(values).max()) if n else 0.0
    clipped = int(np.sum(values < -_EIG_KEEP_REL * scale)) if scale > 0 else 0

    if dims == "auto":
        lead = float(values[0]) if n else 0.0
        keep = int(np.sum(values > _EIG_KEEP_REL * lead)) if lead > 0 else 0
    else:
        keep = int(dims)
        if keep < 0 or keep > n:
            raise ValueError(f"dims={keep} outside 0..{n}")

    kept = np.clip(values[:keep], 0.0, None)
    coords = spectrum.eigenvectors[:, :keep] * np.sqrt(kept)[None, :]
    return EmbedResult(coords=coords, spectrum=spectrum, clipped=clipped)
