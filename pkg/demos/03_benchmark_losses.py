"""Compare per-step training cost of the three clustering losses.

Runs the same backbone on the same graph with each loss and reports mean
wall-clock seconds per optimization step. The balance loss needs one
K x K eigendecomposition per step; the cut-based losses additionally touch
the sparse adjacency, which dominates at scale.
"""
from jbgnn import ModelConfig, sbm_generate
from jbgnn.model import bench

g, x, _ = sbm_generate(
    block_sizes=[5000] * 4,
    p_in=0.002,
    p_out=0.0002,
    feature_dim=16,
    noise_sigma=1.0,
    seed=0,
)
print(f"graph: {g.num_nodes} nodes, {g.num_edges} edges\n")

for loss in ("jb", "mincut", "dmon"):
    config = ModelConfig(k=4, loss=loss, mp_layers=1, mp_channels=16, mlp_channels=16, seed=0)
    mean, std = bench(g, x, config, steps=20)
    print(f"{loss:7s}  {mean * 1000:7.2f} ms/step  (+/- {std * 1000:.2f})")
