"""Parser for the Planetoid raw-file layout (cora, citeseer, pubmed).

A dataset consists of eight files, ind.<name>.{x,y,tx,ty,allx,ally,graph,
test.index}. The x/tx/allx files are pickled scipy sparse matrices, y/ty/ally
are pickled one-hot label arrays, graph is a pickled {node: [neighbors]}
dict, and test.index lists the (shuffled) node ids of the test rows, one per
line: line j of test.index names the node whose data is row j of tx/ty.
Only parse files obtained from a trusted source: these are Python pickles.
"""
import pickle

import numpy as np
import scipy.sparse as sp

from jbgnn import InputError

from .specs import PLANETOID_SUFFIXES


def _load_pickle(path):
    try:
        with open(path, "rb") as f:
            return pickle.load(f, encoding="latin1")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except (pickle.UnpicklingError, EOFError) as exc:
        raise InputError(f"{path}: not a valid raw file ({exc})") from exc


def _load_test_index(path):
    try:
        with open(path, encoding="utf-8") as f:
            idx = [int(line) for line in f if line.strip()]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: malformed test index ({exc})") from exc
    if not idx:
        raise InputError(f"{path}: empty test index")
    return np.asarray(idx, dtype=np.int64)


def parse_planetoid(raw_dir, name):
    """Reassemble node features, labels, and the edge set.

    Returns (features: dense float64 array, labels: int array, edges: list
    of (u, v) pairs, possibly with duplicates; symmetrization is left to
    the caller).
    """
    paths = {s: f"{raw_dir}/ind.{name}.{s}" for s in PLANETOID_SUFFIXES}
    tx = sp.csr_matrix(_load_pickle(paths["tx"]), dtype=np.float64)
    allx = sp.csr_matrix(_load_pickle(paths["allx"]), dtype=np.float64)
    ty = np.asarray(_load_pickle(paths["ty"]), dtype=np.float64)
    ally = np.asarray(_load_pickle(paths["ally"]), dtype=np.float64)
    graph = _load_pickle(paths["graph"])
    test_idx = _load_test_index(paths["test.index"])

    if tx.shape[0] != test_idx.size or ty.shape[0] != test_idx.size:
        raise InputError(
            f"{name}: test.index lists {test_idx.size} nodes but tx/ty have "
            f"{tx.shape[0]}/{ty.shape[0]} rows"
        )
    test_sorted = np.sort(test_idx)
    start = int(test_sorted[0])
    span = int(test_sorted[-1]) - start + 1
    if span != test_idx.size:
        # citeseer's test index has gaps: pad the missing ids with zero
        # features and an arbitrary (class 0) label so ids stay contiguous
        tx_ext = sp.lil_matrix((span, tx.shape[1]))
        tx_ext[test_sorted - start, :] = tx
        tx = sp.csr_matrix(tx_ext)
        ty_ext = np.zeros((span, ty.shape[1]))
        ty_ext[test_sorted - start, :] = ty
        missing = np.setdiff1d(np.arange(start, start + span), test_sorted)
        ty_ext[missing - start, 0] = 1.0
        ty = ty_ext

    feats = sp.vstack([allx, tx]).toarray().astype(np.float64)
    onehot = np.vstack([ally, ty])
    base = allx.shape[0]
    # stacked row base + (test_sorted[j] - start) holds tx row j, which is
    # the data of node test_idx[j]: permute those rows to their true ids
    src = base + (test_sorted - start)
    feats[test_idx] = feats[src]
    onehot[test_idx] = onehot[src]

    labels = onehot.argmax(axis=1).astype(np.int64)
    n = feats.shape[0]
    edges = []
    for u, nbrs in graph.items():
        if not 0 <= u < n:
            raise InputError(f"{name}: graph references node {u} outside [0, {n})")
        for v in nbrs:
            if not 0 <= v < n:
                raise InputError(f"{name}: graph references node {v} outside [0, {n})")
            if u != v:
                edges.append((int(u), int(v)))
    return feats, labels, edges
