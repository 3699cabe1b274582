"""Unsupervised clustering objectives with analytic gradients w.r.t. S.

Three losses over a row-stochastic N x K assignment matrix S:

* ``jb_loss``     -- the balance-only objective -Tr(sqrt(S^T S))
* ``mincut_loss`` -- normalized-cut term plus orthogonality balancing term
* ``dmon_loss``   -- modularity term plus collapse regularizer

Each returns the scalar value together with d(value)/dS so the training
loop never has to differentiate through an eigendecomposition.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import linalg
from .errors import InputError, NumericError
from .graph import SparseGraph, degrees, normalized_adjacency

__all__ = [
    "LossValueGrad",
    "LossContext",
    "jb_loss",
    "mincut_loss",
    "dmon_loss",
    "evaluate",
    "validate_assignment",
    "LOSS_NAMES",
]

LOSS_NAMES = ("jb", "mincut", "dmon")


@dataclass
class LossValueGrad:
    value: float
    grad_s: np.ndarray


def validate_assignment(s: np.ndarray, tol: float = 1e-6) -> None:
    """Check the soft-assignment invariants: entries in [0,1], rows sum to 1."""
    s = np.asarray(s)
    if s.ndim != 2:
        raise InputError(f"assignment matrix must be 2-d, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise InputError("assignment matrix contains non-finite entries")
    if np.min(s) < -tol or np.max(s) > 1 + tol:
        raise InputError("assignment entries must lie in [0, 1]")
    if np.max(np.abs(s.sum(axis=1) - 1.0)) > tol:
        raise InputError("assignment rows must sum to 1")


def jb_loss(s: np.ndarray, eig_floor: float = linalg.DEFAULT_EIG_FLOOR) -> LossValueGrad:
    """-Tr(sqrt(S^T S)) and its gradient -S (S^T S)^{-1/2}.

    Zero eigenvalues of S^T S (empty clusters) contribute nothing to the
    value; their inverse square root is clamped at eig_floor so the gradient
    stays finite.
    """
    s = np.asarray(s, dtype=np.float64)
    if not np.all(np.isfinite(s)):
        raise InputError("assignment matrix contains non-finite entries")
    c = s.T @ s
    value = -float(np.trace(linalg.spd_sqrt(c, eig_floor)))
    grad = -(s @ linalg.spd_inv_sqrt(c, eig_floor))
    return LossValueGrad(value, grad)


def mincut_loss(s: np.ndarray, a_norm, d_tilde: np.ndarray) -> LossValueGrad:
    """Normalized-cut relaxation: -Tr(S^T A_n S)/Tr(S^T D_n S) + balance term.

    ``a_norm`` is the symmetrically normalized adjacency and ``d_tilde`` its
    row-sum vector. The balance term is ||S^T S / ||S^T S||_F - I/sqrt(K)||_F.
    """
    s = np.asarray(s, dtype=np.float64)
    n, k = s.shape
    a_s = a_norm @ s
    num = float(np.sum(s * a_s))
    den = float(np.sum(d_tilde[:, None] * s * s))
    if den == 0.0:
        raise NumericError("Tr(S^T D S) is zero: graph has no edges")
    cut_value = -num / den
    cut_grad = -(2.0 * a_s * den - num * 2.0 * d_tilde[:, None] * s) / den**2

    c = s.T @ s
    m = float(np.linalg.norm(c))
    x = c / m - np.eye(k) / np.sqrt(k)
    xn = float(np.linalg.norm(x))
    bal_value = xn
    if xn > 0.0:
        u = x / xn
        g_c = u / m - (float(np.sum(u * c)) / m**3) * c
        bal_grad = s @ (g_c + g_c.T)
    else:
        bal_grad = np.zeros_like(s)
    return LossValueGrad(cut_value + bal_value, cut_grad + bal_grad)


def dmon_loss(
    s: np.ndarray,
    g: SparseGraph,
    normalize_degree_product: bool = True,
) -> LossValueGrad:
    """Modularity loss -Tr(S^T B S)/(2E) plus the collapse regularizer.

    B = A - d d^T / (2E) by default; with ``normalize_degree_product`` off the
    degree product is not divided by 2E. The rank-one term is applied through
    S^T d without materializing the dense N x N matrix.
    """
    s = np.asarray(s, dtype=np.float64)
    n, k = s.shape
    two_e = float(np.sum(degrees(g)))
    if two_e == 0.0:
        raise InputError("dmon loss requires at least one edge")
    d = degrees(g)
    a_s = g.to_csr() @ s
    std = s.T @ d  # K-vector
    scale = 1.0 / two_e if normalize_degree_product else 1.0
    mod_value = -(float(np.sum(s * a_s)) - scale * float(std @ std)) / two_e
    mod_grad = -(2.0 * a_s - scale * 2.0 * np.outer(d, std)) / two_e

    col = s.sum(axis=0)
    col_norm = float(np.linalg.norm(col))
    reg_value = np.sqrt(k) / n * col_norm - 1.0
    if col_norm > 0.0:
        reg_grad = (np.sqrt(k) / n) * np.tile(col / col_norm, (n, 1))
    else:
        reg_grad = np.zeros_like(s)
    return LossValueGrad(mod_value + reg_value, mod_grad + reg_grad)


@dataclass
class LossContext:
    """Precomputed per-graph quantities shared by every training step."""

    graph: SparseGraph
    a_norm: sp.csr_array | None = None
    d_tilde: np.ndarray | None = None
    eig_floor: float = linalg.DEFAULT_EIG_FLOOR
    dmon_normalize: bool = True

    @classmethod
    def build(
        cls,
        g: SparseGraph,
        loss: str,
        eig_floor: float = linalg.DEFAULT_EIG_FLOOR,
        dmon_normalize: bool = True,
    ) -> "LossContext":
        if loss not in LOSS_NAMES:
            raise InputError(f"unknown loss {loss!r}, expected one of {LOSS_NAMES}")
        ctx = cls(graph=g, eig_floor=eig_floor, dmon_normalize=dmon_normalize)
        if loss == "mincut":
            ctx.a_norm = normalized_adjacency(g)
            ctx.d_tilde = np.asarray(ctx.a_norm.sum(axis=1), dtype=np.float64).ravel()
        return ctx


def evaluate(loss: str, s: np.ndarray, ctx: LossContext) -> LossValueGrad:
    """Dispatch on the loss selector string (`jb` | `mincut` | `dmon`)."""
    if loss == "jb":
        return jb_loss(s, ctx.eig_floor)
    if loss == "mincut":
        if ctx.a_norm is None or ctx.d_tilde is None:
            raise InputError("mincut loss requires a context built with loss='mincut'")
        return mincut_loss(s, ctx.a_norm, ctx.d_tilde)
    if loss == "dmon":
        return dmon_loss(s, ctx.graph, ctx.dmon_normalize)
    raise InputError(f"unknown loss {loss!r}, expected one of {LOSS_NAMES}")
