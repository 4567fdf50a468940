"""External clustering quality metrics against a reference labeling.

All three scores are adjusted or normalized so that identical partitions
score 1.0 and independent random labelings score near zero.  Entropies use
natural logs with the convention ``0 * log 0 = 0``.  The expected mutual
information under the permutation model is the exact hypergeometric sum.
"""

import math

import numpy as np

from .cluster import validate_labels

__all__ = ["contingency", "adjusted_rand", "adjusted_mutual_information", "v_measure"]


def contingency(a, b):
    """Co-occurrence table of two labelings: ``table[x, y] = |a==x+1 & b==y+1|``."""
    a, ka = validate_labels(a)
    b, kb = validate_labels(b, n=a.size)
    table = np.zeros((ka, kb), dtype=np.int64)
    np.add.at(table, (a - 1, b - 1), 1)
    return table


def _same_partition(table):
    """True when the two labelings induce the same set partition."""
    rows = np.count_nonzero(np.count_nonzero(table, axis=1))
    cols = np.count_nonzero(np.count_nonzero(table, axis=0))
    return np.count_nonzero(table) == rows == cols


def _comb2(x):
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


def _entropy(marginals, n):
    p = marginals[marginals > 0] / n
    return float(-(p * np.log(p)).sum())


def adjusted_rand(a, b):
    """Hubert-Arabie adjusted Rand index in [-1, 1]; 1 iff identical."""
    table = contingency(a, b)
    n = int(table.sum())
    total_pairs = n * (n - 1) // 2
    if total_pairs == 0:
        return 1.0
    index = int(_comb2(table).sum())
    sum_a = int(_comb2(table.sum(axis=1)).sum())
    sum_b = int(_comb2(table.sum(axis=0)).sum())
    expected = sum_a * sum_b / total_pairs
    max_index = (sum_a + sum_b) / 2
    if max_index == expected:
        return 1.0 if _same_partition(table) else 0.0
    return (index - expected) / (max_index - expected)


def _expected_mi(row_marg, col_marg, n):
    """Exact expected mutual information under the hypergeometric model."""
    lgfact = np.array([math.lgamma(x + 1) for x in range(n + 1)])
    emi = 0.0
    for ai in row_marg:
        for bj in col_marg:
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if hi < lo:
                continue
            x = np.arange(lo, hi + 1)
            log_p = (lgfact[ai] + lgfact[bj] + lgfact[n - ai] + lgfact[n - bj]
                     - lgfact[n] - lgfact[x] - lgfact[ai - x] - lgfact[bj - x]
                     - lgfact[n - ai - bj + x])
            emi += float(((x / n) * (np.log(n * x) - math.log(ai * bj))
                          * np.exp(log_p)).sum())
    return emi


def _mutual_information(table, n):
    nz = table > 0
    nij = table[nz].astype(np.float64)
    ai = table.sum(axis=1)[:, None] * np.ones_like(table)
    bj = np.ones_like(table) * table.sum(axis=0)[None, :]
    outer = (ai[nz] * bj[nz]).astype(np.float64)
    return float(((nij / n) * (np.log(nij * n) - np.log(outer))).sum())


def adjusted_mutual_information(a, b):
    """AMI with mean-entropy normalization: ``(MI - E[MI]) / (mean(H) - E[MI])``."""
    table = contingency(a, b)
    n = int(table.sum())
    row_marg = table.sum(axis=1)
    col_marg = table.sum(axis=0)
    if _same_partition(table):
        return 1.0
    h_a = _entropy(row_marg, n)
    h_b = _entropy(col_marg, n)
    mi = _mutual_information(table, n)
    emi = _expected_mi([int(x) for x in row_marg if x > 0],
                       [int(x) for x in col_marg if x > 0], n)
    denominator = 0.5 * (h_a + h_b) - emi
    if abs(denominator) < 1e-14:
        return 1.0 if _same_partition(table) else 0.0
    return (mi - emi) / denominator


def v_measure(a, b):
    """Harmonic mean of homogeneity and completeness, in [0, 1]."""
    table = contingency(a, b)
    if _same_partition(table):
        return 1.0
    n = int(table.sum())
    h_a = _entropy(table.sum(axis=1), n)
    h_b = _entropy(table.sum(axis=0), n)
    mi = _mutual_information(table, n)
    # H(a|b) = H(a) - MI, and symmetrically for b
    homogeneity = 1.0 if h_a == 0.0 else max(0.0, mi / h_a)
    completeness = 1.0 if h_b == 0.0 else max(0.0, mi / h_b)
    if homogeneity + completeness == 0.0:
        return 0.0
    return 2.0 * homogeneity * completeness / (homogeneity + completeness)
