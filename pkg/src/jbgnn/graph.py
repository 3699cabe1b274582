"""Sparse undirected graphs in CSR form and the operators built from them.

Provides degree and normalization computations, the delta-damped propagation
operator used by the message-passing layers, the local quadratic variation
functional, and a stochastic-block-model generator for synthetic benchmarks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import InputError

__all__ = [
    "SparseGraph",
    "PropagationOperator",
    "from_edges",
    "degrees",
    "normalized_adjacency",
    "propagation_operator",
    "spmm",
    "lqv",
    "sbm_generate",
    "read_edge_list",
    "write_edge_list",
]


@dataclass(frozen=True)
class SparseGraph:
    """Undirected weighted graph stored in CSR with both edge orientations.

    Invariants: symmetric, no self-loops, column indices sorted and unique
    within each row, all weights positive.
    """

    num_nodes: int
    row_offsets: np.ndarray  # int64, length N+1
    col_indices: np.ndarray  # int64, length 2E
    weights: np.ndarray      # float64, length 2E

    @property
    def num_stored_entries(self) -> int:
        """Directed entry count, i.e. 2E for an undirected graph."""
        return int(self.col_indices.size)

    @property
    def num_edges(self) -> int:
        """Undirected edge count E."""
        return self.num_stored_entries // 2

    def to_csr(self) -> sp.csr_array:
        return sp.csr_array(
            (self.weights, self.col_indices, self.row_offsets),
            shape=(self.num_nodes, self.num_nodes),
        )


@dataclass(frozen=True)
class PropagationOperator:
    """The message-passing operator (1-delta)*I + delta*D^{-1/2} A D^{-1/2}.

    Same CSR layout as SparseGraph but diagonal entries are allowed.
    """

    num_nodes: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    weights: np.ndarray
    delta: float

    def to_csr(self) -> sp.csr_array:
        return sp.csr_array(
            (self.weights, self.col_indices, self.row_offsets),
            shape=(self.num_nodes, self.num_nodes),
        )


def _from_coo(num_nodes: int, rows, cols, vals) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = sp.coo_array(
        (np.asarray(vals, dtype=np.float64),
         (np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64))),
        shape=(num_nodes, num_nodes),
    ).tocsr()
    m.sort_indices()
    return (m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data.astype(np.float64))


def from_edges(num_nodes: int, edges) -> SparseGraph:
    """Build a SparseGraph from an edge list of (u, v) or (u, v, w) tuples.

    Self-loops are dropped; duplicate edges (in either orientation) collapse
    to a single edge keeping the first weight seen.
    """
    if num_nodes < 0:
        raise InputError(f"num_nodes must be non-negative, got {num_nodes}")
    kept: dict[tuple[int, int], float] = {}
    for e in edges:
        if len(e) == 2:
            u, v = e
            w = 1.0
        else:
            u, v, w = e
            w = float(w)
        u, v = int(u), int(v)
        if not (0 <= u < num_nodes and 0 <= v < num_nodes):
            raise InputError(f"edge ({u},{v}) out of range for {num_nodes} nodes")
        if w <= 0 or not math.isfinite(w):
            raise InputError(f"edge ({u},{v}) has non-positive or non-finite weight {w}")
        if u == v:
            continue
        key = (u, v) if u < v else (v, u)
        if key not in kept:
            kept[key] = w
    rows = np.empty(2 * len(kept), dtype=np.int64)
    cols = np.empty(2 * len(kept), dtype=np.int64)
    vals = np.empty(2 * len(kept), dtype=np.float64)
    for i, ((u, v), w) in enumerate(kept.items()):
        rows[2 * i], cols[2 * i], vals[2 * i] = u, v, w
        rows[2 * i + 1], cols[2 * i + 1], vals[2 * i + 1] = v, u, w
    indptr, indices, data = _from_coo(num_nodes, rows, cols, vals)
    return SparseGraph(num_nodes, indptr, indices, data)


def degrees(g: SparseGraph) -> np.ndarray:
    """Weighted degree d_i = sum_j a_ij."""
    if g.num_nodes == 0:
        return np.zeros(0)
    return np.asarray(g.to_csr().sum(axis=1), dtype=np.float64).ravel()


def normalized_adjacency(g: SparseGraph) -> sp.csr_array:
    """D^{-1/2} A D^{-1/2}; rows and columns of isolated nodes are zero."""
    d = degrees(g)
    with np.errstate(divide="ignore"):
        dinv = np.where(d > 0, 1.0 / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
    a = g.to_csr()
    return sp.csr_array(sp.diags_array(dinv) @ a @ sp.diags_array(dinv))


def propagation_operator(g: SparseGraph, delta: float) -> PropagationOperator:
    """(1-delta)*I + delta*D^{-1/2} A D^{-1/2} for delta in [0, 1].

    delta=0 gives the identity (no neighbor aggregation); delta=1 gives the
    symmetrically normalized adjacency.
    """
    if not (0.0 <= delta <= 1.0):
        raise InputError(f"delta must lie in [0, 1], got {delta}")
    m = delta * normalized_adjacency(g)
    if delta < 1.0:
        m = m + (1.0 - delta) * sp.eye_array(g.num_nodes, format="csr")
    m = sp.csr_array(m)
    m.sort_indices()
    return PropagationOperator(
        g.num_nodes,
        m.indptr.astype(np.int64),
        m.indices.astype(np.int64),
        m.data.astype(np.float64),
        float(delta),
    )


def spmm(m, x: np.ndarray) -> np.ndarray:
    """Sparse-dense product m @ x.

    Accepts a scipy sparse matrix, a SparseGraph, or a PropagationOperator.
    Delegates to scipy's CSR kernel; deterministic row-wise reduction order.
    """
    if isinstance(m, (SparseGraph, PropagationOperator)):
        m = m.to_csr()
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
        squeeze = True
    else:
        squeeze = False
    if m.shape[1] != x.shape[0]:
        raise InputError(f"shape mismatch: {m.shape} @ {x.shape}")
    out = m @ x
    return out[:, 0] if squeeze else out


def lqv(g: SparseGraph, x: np.ndarray) -> float:
    """Local quadratic variation of x on g with degree-normalized endpoints.

    Equals x^T L_s x where L_s = I - D^{-1/2} A D^{-1/2}. Isolated nodes
    contribute nothing.
    """
    x = np.asarray(x, dtype=np.float64)
    d = degrees(g)
    xn = np.where(d > 0, x / np.sqrt(np.where(d > 0, d, 1.0)), 0.0)
    rows = np.repeat(np.arange(g.num_nodes), np.diff(g.row_offsets))
    return 0.5 * float(np.sum(g.weights * (xn[rows] - xn[g.col_indices]) ** 2))


def _sample_distinct(rng: np.random.Generator, n_pairs: int, k: int) -> np.ndarray:
    """k distinct integers from [0, n_pairs) without materializing the range."""
    chosen = np.unique(rng.integers(0, n_pairs, size=k))
    while chosen.size < k:
        extra = rng.integers(0, n_pairs, size=k - chosen.size)
        chosen = np.unique(np.concatenate([chosen, extra]))
    return chosen


def _intra_pairs(idx: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Decode linear indices of pairs (i, j), i < j, within a block of size n."""
    # row i starts at i*n - i*(i+1)/2 in the flattened strict upper triangle
    i = (n - 2 - np.floor(np.sqrt(-8 * idx + 4 * n * (n - 1) - 7) / 2.0 - 0.5)).astype(np.int64)
    j = (idx + i + 1 - i * n + i * (i + 1) // 2).astype(np.int64)
    return i, j


def sbm_generate(
    block_sizes,
    p_in: float,
    p_out: float,
    feature_dim: int,
    noise_sigma: float,
    seed: int,
) -> tuple[SparseGraph, np.ndarray, np.ndarray]:
    """Assortative stochastic block model with block-indicator features.

    Each intra-block pair is connected with probability p_in, inter-block
    with p_out. Features are the block's slot-indicator vector (feature_dim
    split into one slot per block) plus Gaussian noise of std noise_sigma.
    Returns (graph, features, labels); deterministic given the seed.
    """
    block_sizes = [int(s) for s in block_sizes]
    if not block_sizes or any(s <= 0 for s in block_sizes):
        raise InputError("block_sizes must be non-empty positive counts")
    if not (0.0 <= p_out <= p_in <= 1.0):
        raise InputError(f"need 0 <= p_out <= p_in <= 1, got p_in={p_in}, p_out={p_out}")
    if feature_dim < 1:
        raise InputError("feature_dim must be >= 1")
    rng = np.random.default_rng(seed)
    k = len(block_sizes)
    offsets = np.concatenate([[0], np.cumsum(block_sizes)])
    n = int(offsets[-1])

    rows, cols = [], []
    for a in range(k):
        na = block_sizes[a]
        n_pairs = na * (na - 1) // 2
        if n_pairs and p_in > 0:
            cnt = int(rng.binomial(n_pairs, p_in))
            if cnt:
                i, j = _intra_pairs(_sample_distinct(rng, n_pairs, cnt), na)
                rows.append(i + offsets[a])
                cols.append(j + offsets[a])
        for b in range(a + 1, k):
            nb = block_sizes[b]
            n_pairs = na * nb
            if n_pairs and p_out > 0:
                cnt = int(rng.binomial(n_pairs, p_out))
                if cnt:
                    idx = _sample_distinct(rng, n_pairs, cnt)
                    rows.append(idx // nb + offsets[a])
                    cols.append(idx % nb + offsets[b])
    if rows:
        u = np.concatenate(rows)
        v = np.concatenate(cols)
        edges = list(zip(u.tolist(), v.tolist()))
    else:
        edges = []
    g = from_edges(n, edges)

    labels = np.repeat(np.arange(k), block_sizes).astype(np.int64)
    centroids = np.zeros((k, feature_dim))
    slot = feature_dim // k
    for b in range(k):
        if slot:
            centroids[b, b * slot:(b + 1) * slot] = 1.0
        else:
            centroids[b, b % feature_dim] = 1.0
    features = centroids[labels] + noise_sigma * rng.standard_normal((n, feature_dim))
    return g, features, labels


def read_edge_list(path, num_nodes: int | None = None) -> SparseGraph:
    """Read `u<TAB>v` or `u<TAB>v<TAB>w` lines; `#` lines are comments."""
    edges = []
    max_node = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise InputError(f"{path}:{lineno}: expected 2 or 3 tab-separated fields")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: {exc}") from exc
            edges.append((u, v, w))
            max_node = max(max_node, u, v)
    if num_nodes is None:
        num_nodes = max_node + 1
    return from_edges(num_nodes, edges)


def write_edge_list(g: SparseGraph, path) -> None:
    """Write each undirected edge once with u < v; weight column only if != 1."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i in range(g.num_nodes):
            lo, hi = g.row_offsets[i], g.row_offsets[i + 1]
            for p in range(lo, hi):
                j = int(g.col_indices[p])
                if i < j:
                    w = float(g.weights[p])
                    if w == 1.0:
                        fh.write(f"{i}\t{j}\n")
                    else:
                        fh.write(f"{i}\t{j}\t{w!r}\n")
