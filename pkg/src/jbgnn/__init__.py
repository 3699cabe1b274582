"""Graph clustering with a balance-only GNN objective.

A message-passing network on the delta-damped normalized adjacency is
trained with the single loss -Tr(sqrt(S^T S)); the MinCut and DMoN
objectives are included as comparators, along with clustering metrics,
a synthetic block-model generator, and a per-step timing benchmark.
"""

from .errors import InputError, NumericError
from .graph import (
    PropagationOperator,
    SparseGraph,
    degrees,
    from_edges,
    lqv,
    normalized_adjacency,
    propagation_operator,
    sbm_generate,
    spmm,
)
from .linalg import spd_inv_sqrt, spd_sqrt, symmetric_eig
from .losses import LossContext, LossValueGrad, dmon_loss, jb_loss, mincut_loss
from .metrics import acc, contingency, kuhn_munkres, nmi
from .model import ModelConfig, TrainReport, bench, build, forward, hard_assign, train
from .data import DatasetBundle, DatasetMeta, read_dataset, write_dataset

__version__ = "0.1.0"
