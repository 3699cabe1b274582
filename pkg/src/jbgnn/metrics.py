"""Clustering evaluation: contingency tables, NMI, and matched accuracy.

Accuracy follows the usual recipe: build the class-by-cluster contingency
table, find the best cluster-to-class bijection with the Kuhn-Munkres
(Hungarian) algorithm, and count agreements.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InputError

__all__ = ["contingency", "nmi", "kuhn_munkres", "acc", "NMI_NORMS"]

NMI_NORMS = ("arithmetic", "geometric", "max")


def _as_labels(v) -> np.ndarray:
    v = np.asarray(v)
    if v.ndim != 1:
        raise InputError(f"label vector must be 1-d, got shape {v.shape}")
    if v.size and v.min() < 0:
        raise InputError("labels must be non-negative integers")
    return v.astype(np.int64)


def contingency(y, p) -> np.ndarray:
    """Count matrix: entry (c, k) = |{i : y_i = c and p_i = k}|."""
    y, p = _as_labels(y), _as_labels(p)
    if y.size != p.size:
        raise InputError(f"length mismatch: {y.size} vs {p.size}")
    if y.size == 0:
        raise InputError("empty label vectors")
    c = np.zeros((int(y.max()) + 1, int(p.max()) + 1), dtype=np.int64)
    np.add.at(c, (y, p), 1)
    return c


def _entropy(counts: np.ndarray) -> float:
    n = counts.sum()
    q = counts[counts > 0] / n
    return float(-np.sum(q * np.log(q)))


def nmi(y, p, norm: str = "arithmetic") -> float:
    """Normalized mutual information between two labelings.

    If both labelings are constant the score is 1; if exactly one is
    constant it is 0.
    """
    if norm not in NMI_NORMS:
        raise InputError(f"unknown NMI normalization {norm!r}, expected one of {NMI_NORMS}")
    c = contingency(y, p).astype(np.float64)
    n = c.sum()
    hy = _entropy(c.sum(axis=1))
    hp = _entropy(c.sum(axis=0))
    if hy == 0.0 and hp == 0.0:
        return 1.0
    if hy == 0.0 or hp == 0.0:
        return 0.0
    pyk = c / n
    outer = np.outer(c.sum(axis=1), c.sum(axis=0)) / n**2
    nz = pyk > 0
    mi = float(np.sum(pyk[nz] * np.log(pyk[nz] / outer[nz])))
    if norm == "arithmetic":
        denom = 0.5 * (hy + hp)
    elif norm == "geometric":
        denom = np.sqrt(hy * hp)
    else:
        denom = max(hy, hp)
    return float(min(max(mi / denom, 0.0), 1.0))


def kuhn_munkres(cost: np.ndarray) -> np.ndarray:
    """Column index per row of a cost-minimizing perfect matching."""
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise InputError(f"cost matrix must be square, got shape {cost.shape}")
    if not np.all(np.isfinite(cost)):
        raise InputError("cost matrix contains non-finite entries")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(cost.shape[0], dtype=np.int64)
    perm[rows] = cols
    return perm


def acc(y, p) -> float:
    """Clustering accuracy after the best cluster-to-class matching.

    The contingency table is zero-padded to square when the class and
    cluster counts differ.
    """
    c = contingency(y, p)
    size = max(c.shape)
    padded = np.zeros((size, size), dtype=np.float64)
    padded[: c.shape[0], : c.shape[1]] = c
    perm = kuhn_munkres(-padded)
    matched = padded[np.arange(size), perm].sum()
    return float(matched / c.sum())
