"""Minimal reverse-mode tape covering the model's forward pass.

The tape records exactly the operations the clustering model needs: a
sparse-dense product against a constant operator, affine layers, ReLU,
row softmax, and a terminal loss node seeded from the losses module.
Also hosts Glorot initialization and the Adam optimizer.
"""
from __future__ import annotations

import numpy as np

from . import losses as losses_mod
from .errors import InputError, NumericError
from .graph import PropagationOperator, SparseGraph

__all__ = [
    "Node",
    "Tape",
    "op_spmm_const",
    "op_affine",
    "op_relu",
    "op_row_softmax",
    "op_loss_terminal",
    "glorot_init",
    "ParameterSet",
    "adam_step",
]


class Node:
    """One tape entry: cached forward value plus an accumulated gradient."""

    __slots__ = ("value", "grad", "_backward")

    def __init__(self, value: np.ndarray):
        self.value = value
        self.grad = np.zeros_like(value)
        self._backward = None  # set by the op that produced this node


class Tape:
    """Append-only record of one forward pass; nodes are topologically ordered."""

    def __init__(self):
        self.nodes: list[Node] = []

    def leaf(self, value) -> Node:
        node = Node(np.asarray(value, dtype=np.float64))
        self.nodes.append(node)
        return node

    def _record(self, value: np.ndarray, backward) -> Node:
        node = Node(value)
        node._backward = backward
        self.nodes.append(node)
        return node

    def backward(self, terminal: Node) -> None:
        """Accumulate gradients into every node, reverse topological order."""
        terminal.grad = np.ones_like(terminal.value)
        for node in reversed(self.nodes):
            if node._backward is not None:
                node._backward(node.grad)


def op_spmm_const(tape: Tape, m, x: Node) -> Node:
    """Product of a constant sparse operator with a node. m must be symmetric."""
    if isinstance(m, (SparseGraph, PropagationOperator)):
        m = m.to_csr()
    if m.shape[1] != x.value.shape[0]:
        raise InputError(f"shape mismatch: {m.shape} @ {x.value.shape}")
    out = m @ x.value

    def backward(g):
        x.grad += m @ g  # m symmetric, so m^T = m

    return tape._record(out, backward)


def op_affine(tape: Tape, x: Node, w: Node, b: Node) -> Node:
    """x @ w + b with the bias broadcast across rows."""
    if x.value.shape[1] != w.value.shape[0] or b.value.shape[0] != w.value.shape[1]:
        raise InputError(
            f"shape mismatch: {x.value.shape} @ {w.value.shape} + {b.value.shape}"
        )
    out = x.value @ w.value + b.value

    def backward(g):
        x.grad += g @ w.value.T
        w.grad += x.value.T @ g
        b.grad += g.sum(axis=0)

    return tape._record(out, backward)


def op_relu(tape: Tape, x: Node) -> Node:
    """Elementwise max(0, x); subgradient 0 at exactly 0."""
    mask = x.value > 0
    out = np.where(mask, x.value, 0.0)

    def backward(g):
        x.grad += g * mask

    return tape._record(out, backward)


def op_row_softmax(tape: Tape, x: Node) -> Node:
    """Row-wise softmax with max subtraction for overflow safety."""
    z = x.value - x.value.max(axis=1, keepdims=True)
    e = np.exp(z)
    out = e / e.sum(axis=1, keepdims=True)

    def backward(g):
        # per row: ds/dx^T g = s * (g - <g, s>)
        dot = np.sum(g * out, axis=1, keepdims=True)
        x.grad += out * (g - dot)

    return tape._record(out, backward)


def op_loss_terminal(tape: Tape, s: Node, loss: str, context) -> Node:
    """Scalar loss node; seeds the backward pass with grad_s from losses."""
    result = losses_mod.evaluate(loss, s.value, context)
    grad_s = result.grad_s

    def backward(g):
        s.grad += float(g) * grad_s

    return tape._record(np.float64(result.value), backward)


def glorot_init(rows: int, cols: int, seed) -> np.ndarray:
    """Uniform Glorot matrix; `seed` may be an int or a numpy Generator."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    limit = np.sqrt(6.0 / (rows + cols))
    return rng.uniform(-limit, limit, size=(rows, cols))


class ParameterSet:
    """Named parameters with their Adam moment buffers and step counter."""

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.step = 0

    def add(self, name: str, value: np.ndarray) -> None:
        if name in self.params:
            raise InputError(f"duplicate parameter name {name!r}")
        self.params[name] = np.asarray(value, dtype=np.float64)
        self.m[name] = np.zeros_like(self.params[name])
        self.v[name] = np.zeros_like(self.params[name])

    def names(self) -> list[str]:
        return list(self.params)


def adam_step(
    params: ParameterSet,
    grads: dict[str, np.ndarray],
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """Standard Adam update with bias correction, in place."""
    params.step += 1
    t = params.step
    for name, p in params.params.items():
        g = grads[name]
        if not np.all(np.isfinite(g)):
            raise NumericError(f"non-finite gradient for parameter {name!r}")
        params.m[name] = beta1 * params.m[name] + (1 - beta1) * g
        params.v[name] = beta2 * params.v[name] + (1 - beta2) * g * g
        m_hat = params.m[name] / (1 - beta1**t)
        v_hat = params.v[name] / (1 - beta2**t)
        p -= lr * m_hat / (np.sqrt(v_hat) + eps)
