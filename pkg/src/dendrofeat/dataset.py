"""Data ingestion, base pairwise distances, and synthetic test instances.

Objects are rows of plain float64 numpy arrays.  Cluster labelings are
1-based integer arrays (values in 1..K).  All file formats are plain CSV:
data files are one object per line, matrices carry a ``# n=<rows>`` comment
header, labelings are one integer per line.  Floats are written with 17
significant digits so that save -> load round-trips bit-exactly.
"""

import numpy as np

__all__ = [
    "ParseError",
    "load_csv",
    "save_csv",
    "load_matrix",
    "save_matrix",
    "load_labels",
    "save_labels",
    "pairwise_sq_euclidean",
    "gen_two_density",
    "standardize",
    "encode_labels",
    "validate_distance_matrix",
]

_FLOAT_FMT = "%.17g"


class ParseError(ValueError):
    """Malformed input file; message carries the 1-based line number."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}: line {line}: {message}")
        self.path = str(path)
        self.line = line


def encode_labels(raw):
    """Re-encode arbitrary label values to contiguous integers 1..K.

    Classes are numbered in order of first occurrence, so the encoding is a
    pure function of the label sequence.
    """
    mapping = {}
    out = np.empty(len(raw), dtype=np.int64)
    for i, value in enumerate(raw):
        if value not in mapping:
            mapping[value] = len(mapping) + 1
        out[i] = mapping[value]
    return out


def load_csv(path, has_labels=False):
    """Load a data matrix from CSV, optionally with a trailing label column.

    Parameters
    ----------
    path : str or Path
        Comma-separated numeric file, one object per line.  A non-numeric
        first line is treated as a header and skipped.
    has_labels : bool
        If set, the final column holds class labels (any tokens); they are
        re-encoded to 1..K by first occurrence.

    Returns
    -------
    (data, labels) : (ndarray of shape (n, d), ndarray of shape (n,) or None)
    """
    with open(path) as fh:
        lines = fh.read().splitlines()

    rows = []
    labels = []
    width = None
    first_data_line = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        numeric = fields[:-1] if has_labels else fields
        if first_data_line is None:
            # Header detection: a first line whose numeric part does not parse.
            try:
                [float(f) for f in numeric]
            except ValueError:
                continue
            first_data_line = lineno
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(path, lineno,
                             f"expected {width} fields, got {len(fields)}")
        if has_labels and len(fields) < 2:
            raise ParseError(path, lineno, "label column requires >= 2 fields")
        try:
            rows.append([float(f) for f in numeric])
        except ValueError as exc:
            raise ParseError(path, lineno, f"non-numeric cell: {exc}") from None
        if has_labels:
            labels.append(fields[-1])

    if not rows:
        raise ParseError(path, max(len(lines), 1), "no data rows")
    data = np.asarray(rows, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite values in data")
    return data, (encode_labels(labels) if has_labels else None)


def save_csv(path, data, labels=None):
    """Write a data matrix (and optional labels as a final column) to CSV."""
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    with open(path, "w") as fh:
        for i, row in enumerate(data):
            cells = [_FLOAT_FMT % v for v in row]
            if labels is not None:
                cells.append(str(int(labels[i])))
            fh.write(",".join(cells) + "\n")


def load_matrix(path):
    """Load a matrix written by :func:`save_matrix` (``# n=`` header + rows)."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ParseError(path, 1, "missing '# n=<rows>' header")
    header = lines[0].lstrip("#").strip()
    try:
        n = int(dict(kv.split("=") for kv in header.split())["n"])
    except (ValueError, KeyError):
        raise ParseError(path, 1, f"bad matrix header {header!r}") from None
    if len(lines) - 1 != n:
        raise ParseError(path, len(lines), f"expected {n} rows, got {len(lines) - 1}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            rows.append([float(f) for f in line.split(",")])
        except ValueError as exc:
            raise ParseError(path, lineno, f"non-numeric cell: {exc}") from None
    m = np.asarray(rows, dtype=np.float64)
    if m.ndim != 2 or any(len(r) != m.shape[1] for r in rows):
        raise ParseError(path, 2, "ragged matrix rows")
    return m


def save_matrix(path, m):
    """Write a matrix as CSV with a ``# n=<rows>`` comment header."""
    m = np.atleast_2d(np.asarray(m, dtype=np.float64))
    with open(path, "w") as fh:
        fh.write(f"# n={m.shape[0]}\n")
        for row in m:
            fh.write(",".join(_FLOAT_FMT % v for v in row) + "\n")


def load_labels(path):
    """Load a labeling (one integer per line), re-encoded to 1..K."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ParseError(path, 1, "empty labeling file")
    values = []
    for lineno, tok in enumerate(lines, start=1):
        try:
            values.append(int(tok))
        except ValueError:
            raise ParseError(path, lineno, f"non-integer label {tok!r}") from None
    return encode_labels(values)


def save_labels(path, labels):
    """Write a labeling, one integer per line."""
    with open(path, "w") as fh:
        for v in labels:
            fh.write(f"{int(v)}\n")


def pairwise_sq_euclidean(data):
    """Squared Euclidean distance matrix between the rows of ``data``.

    Computed from explicit coordinate differences (not the Gram expansion),
    so the result is exactly symmetric with an exactly zero diagonal.
    """
    data = np.atleast_2d(np.asarray(data, dtype=np.float64))
    n = data.shape[0]
    out = np.empty((n, n), dtype=np.float64)
    block = max(1, 2**22 // max(1, n * data.shape[1]))
    for start in range(0, n, block):
        stop = min(n, start + block)
        diff = data[start:stop, None, :] - data[None, :, :]
        out[start:stop] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def gen_two_density(n1, n2, spread1, spread2, separation, seed):
    """Two isotropic 2-D Gaussian blobs with different standard deviations.

    Blob 1 (label 1) has ``n1`` points with std ``spread1`` around the
    origin; blob 2 (label 2) has ``n2`` points with std ``spread2`` around
    ``(separation, 0)``.  Deterministic for a fixed seed (PCG64 stream).
    """
    if n1 < 1 or n2 < 1:
        raise ValueError("cluster sizes must be >= 1")
    if spread1 <= 0 or spread2 <= 0:
        raise ValueError("spreads must be > 0")
    rng = np.random.default_rng(seed)
    pts1 = spread1 * rng.standard_normal((n1, 2))
    pts2 = spread2 * rng.standard_normal((n2, 2))
    pts2[:, 0] += separation
    data = np.vstack([pts1, pts2])
    labels = np.concatenate([np.ones(n1, dtype=np.int64),
                             np.full(n2, 2, dtype=np.int64)])
    return data, labels


def standardize(data):
    """Z-score each column; constant columns are left centered at zero."""
    data = np.asarray(data, dtype=np.float64)
    mean = data.mean(axis=0)
    std = data.std(axis=0)
    std[std == 0] = 1.0
    return (data - mean) / std


def validate_distance_matrix(d, name="distance matrix"):
    """Check the distance-matrix invariants; raise ValueError on violation."""
    d = np.asarray(d)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError(f"{name} must be square, got shape {d.shape}")
    if d.shape[0] == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(d)):
        raise ValueError(f"{name} has non-finite entries")
    if np.any(d < 0):
        raise ValueError(f"{name} has negative entries")
    if np.any(np.diag(d) != 0):
        raise ValueError(f"{name} has a nonzero diagonal")
    if not np.array_equal(d, d.T):
        raise ValueError(f"{name} is not symmetric")
    return d
