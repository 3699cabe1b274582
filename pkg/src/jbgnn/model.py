"""The clustering model: MP-layer stack + MLP head, and its training loop.

Each message-passing layer applies the precomputed propagation operator,
an affine map, and a ReLU. The head is an MLP whose logits go through a
row softmax to produce the soft assignment matrix.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import autodiff as ad
from . import metrics as metrics_mod
from .errors import InputError, NumericError
from .graph import SparseGraph, propagation_operator
from .losses import LOSS_NAMES, LossContext

__all__ = ["ModelConfig", "TrainReport", "build", "forward", "train", "bench", "hard_assign"]

NMI_EVERY = 10


@dataclass
class ModelConfig:
    k: int
    delta: float = 0.85
    mp_layers: int = 10
    mp_channels: int = 64
    mlp_hidden_layers: int = 1
    mlp_channels: int = 16
    lr: float = 5e-5
    epochs: int = 2000
    loss: str = "jb"
    seed: int = 0
    dmon_normalize: bool = True
    row_normalize_features: bool = False

    def validate(self) -> None:
        if self.k < 1:
            raise InputError("k must be >= 1")
        if not (0.0 <= self.delta <= 1.0):
            raise InputError(f"delta must lie in [0, 1], got {self.delta}")
        if self.mp_layers < 1 or self.mp_channels < 1 or self.mlp_channels < 1:
            raise InputError("layer and channel counts must be >= 1")
        if self.mlp_hidden_layers < 0:
            raise InputError("mlp_hidden_layers must be >= 0")
        if self.lr <= 0:
            raise InputError("lr must be positive")
        if self.epochs < 0:
            raise InputError("epochs must be >= 0")
        if self.loss not in LOSS_NAMES:
            raise InputError(f"unknown loss {self.loss!r}, expected one of {LOSS_NAMES}")


@dataclass
class TrainReport:
    """Per-epoch loss trajectory, periodic NMI, and wall-clock timing."""

    losses: list = field(default_factory=list)
    nmi_epochs: list = field(default_factory=list)
    nmi_values: list = field(default_factory=list)
    seconds_total: float = 0.0
    seconds_per_step: float = 0.0
    assignments: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "loss": [float(v) for v in self.losses],
            "nmi": [float(v) for v in self.nmi_values],
            "nmi_epochs": [int(e) for e in self.nmi_epochs],
            "seconds_total": float(self.seconds_total),
            "seconds_per_step": float(self.seconds_per_step),
        }


def build(config: ModelConfig, feature_dim: int) -> ad.ParameterSet:
    """Glorot-initialized parameters for the MP stack and the MLP head."""
    config.validate()
    if feature_dim < 1:
        raise InputError("feature_dim must be >= 1")
    rng = np.random.default_rng(config.seed)
    params = ad.ParameterSet()
    in_dim = feature_dim
    for layer in range(config.mp_layers):
        params.add(f"mp{layer}_w", ad.glorot_init(in_dim, config.mp_channels, rng))
        params.add(f"mp{layer}_b", np.zeros(config.mp_channels))
        in_dim = config.mp_channels
    for layer in range(config.mlp_hidden_layers):
        params.add(f"mlp{layer}_w", ad.glorot_init(in_dim, config.mlp_channels, rng))
        params.add(f"mlp{layer}_b", np.zeros(config.mlp_channels))
        in_dim = config.mlp_channels
    params.add("out_w", ad.glorot_init(in_dim, config.k, rng))
    params.add("out_b", np.zeros(config.k))
    return params


def forward(params: ad.ParameterSet, op, x: np.ndarray, tape: ad.Tape):
    """Run the model on the tape; returns (x_bar, s, param_nodes)."""
    x = np.asarray(x, dtype=np.float64)
    param_nodes = {name: tape.leaf(value) for name, value in params.params.items()}
    h = tape.leaf(x)
    layer = 0
    while f"mp{layer}_w" in param_nodes:
        h = ad.op_spmm_const(tape, op, h)
        h = ad.op_affine(tape, h, param_nodes[f"mp{layer}_w"], param_nodes[f"mp{layer}_b"])
        h = ad.op_relu(tape, h)
        layer += 1
    x_bar = h
    layer = 0
    while f"mlp{layer}_w" in param_nodes:
        h = ad.op_affine(tape, h, param_nodes[f"mlp{layer}_w"], param_nodes[f"mlp{layer}_b"])
        h = ad.op_relu(tape, h)
        layer += 1
    logits = ad.op_affine(tape, h, param_nodes["out_w"], param_nodes["out_b"])
    s = ad.op_row_softmax(tape, logits)
    return x_bar, s, param_nodes


def _prepare_features(x: np.ndarray, config: ModelConfig) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if config.row_normalize_features:
        norms = np.abs(x).sum(axis=1, keepdims=True)
        x = x / np.where(norms > 0, norms, 1.0)
    return x


def _step(params, op, x, loss, ctx, lr):
    """One full-batch forward/backward/update; returns (loss value, S)."""
    tape = ad.Tape()
    _, s, param_nodes = forward(params, op, x, tape)
    terminal = ad.op_loss_terminal(tape, s, loss, ctx)
    tape.backward(terminal)
    grads = {name: node.grad for name, node in param_nodes.items()}
    ad.adam_step(params, grads, lr)
    return float(terminal.value), s.value


def train(
    g: SparseGraph,
    x: np.ndarray,
    config: ModelConfig,
    labels: np.ndarray | None = None,
):
    """Full-batch training; returns (soft assignments, TrainReport)."""
    config.validate()
    if config.k < 2:
        raise InputError("training requires k >= 2")
    x = _prepare_features(x, config)
    if x.shape[0] != g.num_nodes:
        raise InputError(
            f"feature rows ({x.shape[0]}) do not match num_nodes ({g.num_nodes})"
        )
    op = propagation_operator(g, config.delta).to_csr()
    ctx = LossContext.build(g, config.loss, dmon_normalize=config.dmon_normalize)
    params = build(config, x.shape[1])
    report = TrainReport()

    t0 = time.perf_counter()
    s_val = None
    for epoch in range(config.epochs):
        try:
            loss_val, s_val = _step(params, op, x, config.loss, ctx, config.lr)
        except NumericError as exc:
            raise NumericError(f"epoch {epoch}: {exc}") from exc
        if not np.isfinite(loss_val):
            raise NumericError(f"epoch {epoch}: loss is not finite")
        report.losses.append(loss_val)
        if labels is not None and (epoch % NMI_EVERY == 0 or epoch == config.epochs - 1):
            report.nmi_epochs.append(epoch)
            report.nmi_values.append(metrics_mod.nmi(labels, hard_assign(s_val)))
    report.seconds_total = time.perf_counter() - t0
    report.seconds_per_step = (
        report.seconds_total / config.epochs if config.epochs else 0.0
    )

    # assignments from the final parameters (initial ones when epochs == 0)
    tape = ad.Tape()
    _, s_node, _ = forward(params, op, x, tape)
    s_final = s_node.value
    report.assignments = hard_assign(s_final)
    return s_final, report


def bench(
    g: SparseGraph,
    x: np.ndarray,
    config: ModelConfig,
    steps: int,
    warmup: int = 10,
) -> tuple[float, float]:
    """Mean and std of wall-clock seconds per full optimization step."""
    config.validate()
    if steps < 1:
        raise InputError("steps must be >= 1")
    x = _prepare_features(x, config)
    op = propagation_operator(g, config.delta).to_csr()
    ctx = LossContext.build(g, config.loss, dmon_normalize=config.dmon_normalize)
    params = build(config, x.shape[1])
    for _ in range(warmup):
        _step(params, op, x, config.loss, ctx, config.lr)
    times = np.empty(steps)
    for i in range(steps):
        t0 = time.perf_counter()
        _step(params, op, x, config.loss, ctx, config.lr)
        times[i] = time.perf_counter() - t0
    return float(times.mean()), float(times.std())


def hard_assign(s: np.ndarray) -> np.ndarray:
    """Per-row argmax; ties go to the lowest cluster index."""
    s = np.asarray(s)
    if s.ndim != 2 or s.shape[1] < 1:
        raise InputError(f"expected an N x K matrix, got shape {s.shape}")
    return np.argmax(s, axis=1).astype(np.int64)
