"""Parser for the npz citation-graph bundle format (dblp).

The file stores a CSR adjacency (adj_data/indices/indptr/shape), a CSR
attribute matrix (attr_data/indices/indptr/shape), and an integer label
vector. The adjacency may be directed; symmetrization is the caller's job.
"""
import numpy as np
import scipy.sparse as sp

from jbgnn import InputError

ADJ_KEYS = ("adj_data", "adj_indices", "adj_indptr", "adj_shape")
ATTR_KEYS = ("attr_data", "attr_indices", "attr_indptr", "attr_shape")


def parse_citation_full(path):
    """Returns (features, labels, edges) like the planetoid parser."""
    try:
        with np.load(path, allow_pickle=False) as loader:
            data = dict(loader)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path}: not a valid npz bundle ({exc})") from exc

    missing = [k for k in (*ADJ_KEYS, *ATTR_KEYS, "labels") if k not in data]
    if missing:
        raise InputError(f"{path}: missing arrays {missing}")

    adj = sp.csr_matrix(
        (data["adj_data"], data["adj_indices"], data["adj_indptr"]),
        shape=tuple(data["adj_shape"]),
    )
    attr = sp.csr_matrix(
        (data["attr_data"], data["attr_indices"], data["attr_indptr"]),
        shape=tuple(data["attr_shape"]),
    )
    labels = np.asarray(data["labels"], dtype=np.int64)
    n = adj.shape[0]
    if adj.shape[0] != adj.shape[1]:
        raise InputError(f"{path}: adjacency is {adj.shape}, expected square")
    if attr.shape[0] != n or labels.shape[0] != n:
        raise InputError(
            f"{path}: inconsistent node counts (adj {n}, attr {attr.shape[0]}, "
            f"labels {labels.shape[0]})"
        )

    coo = adj.tocoo()
    edges = [(int(u), int(v)) for u, v in zip(coo.row, coo.col) if u != v]
    return attr.toarray().astype(np.float64), labels, edges
