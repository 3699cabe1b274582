import numpy as np
import pytest

from jbgnn import InputError, NumericError, from_edges, normalized_adjacency, propagation_operator
from jbgnn.autodiff import (
    ParameterSet,
    Tape,
    adam_step,
    glorot_init,
    op_affine,
    op_loss_terminal,
    op_relu,
    op_row_softmax,
    op_spmm_const,
)
from jbgnn.losses import LossContext


def path3():
    return from_edges(3, [(0, 1), (1, 2)])


class TestSpmmConst:
    def test_identity_passthrough(self):
        tape = Tape()
        p = propagation_operator(path3(), 0.0)
        x = tape.leaf(np.arange(6.0).reshape(3, 2))
        out = op_spmm_const(tape, p, x)
        out._backward(np.ones((3, 2)))
        assert np.allclose(out.value, x.value)
        assert np.allclose(x.grad, 1.0)

    def test_vjp_matches_dense_oracle(self):
        rng = np.random.default_rng(0)
        m = normalized_adjacency(path3())
        tape = Tape()
        x = tape.leaf(rng.standard_normal((3, 2)))
        out = op_spmm_const(tape, m, x)
        g = rng.standard_normal((3, 2))
        out._backward(g)
        dense = m.toarray()
        assert np.allclose(out.value, dense @ x.value)
        assert np.allclose(x.grad, dense.T @ g)

    def test_shape_mismatch(self):
        tape = Tape()
        x = tape.leaf(np.ones((4, 2)))
        with pytest.raises(InputError):
            op_spmm_const(tape, normalized_adjacency(path3()), x)


class TestAffine:
    def test_identity_weights(self):
        tape = Tape()
        x = tape.leaf(np.arange(6.0).reshape(2, 3))
        w = tape.leaf(np.eye(3))
        b = tape.leaf(np.zeros(3))
        out = op_affine(tape, x, w, b)
        assert np.allclose(out.value, x.value)

    def test_scalar_chain_rule(self):
        tape = Tape()
        x = tape.leaf(np.array([[2.0]]))
        w = tape.leaf(np.array([[3.0]]))
        b = tape.leaf(np.array([1.0]))
        out = op_affine(tape, x, w, b)
        assert out.value[0, 0] == pytest.approx(7.0)
        out._backward(np.ones((1, 1)))
        assert x.grad[0, 0] == pytest.approx(3.0)
        assert w.grad[0, 0] == pytest.approx(2.0)
        assert b.grad[0] == pytest.approx(1.0)

    def test_finite_difference(self):
        rng = np.random.default_rng(1)
        xv = rng.standard_normal((5, 3))
        wv = rng.standard_normal((3, 4))
        bv = rng.standard_normal(4)
        g = rng.standard_normal((5, 4))

        def value(xm, wm, bm):
            return float(np.sum(g * (xm @ wm + bm)))

        tape = Tape()
        x, w, b = tape.leaf(xv), tape.leaf(wv), tape.leaf(bv)
        out = op_affine(tape, x, w, b)
        out._backward(g)
        h = 1e-5
        for arr, grad, builder in [
            (xv, x.grad, lambda a: value(a, wv, bv)),
            (wv, w.grad, lambda a: value(xv, a, bv)),
            (bv, b.grad, lambda a: value(xv, wv, a)),
        ]:
            fd = np.zeros_like(arr)
            it = np.nditer(arr, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                ap = arr.copy()
                ap[idx] += h
                am = arr.copy()
                am[idx] -= h
                fd[idx] = (builder(ap) - builder(am)) / (2 * h)
            assert np.allclose(fd, grad, rtol=1e-6, atol=1e-8)


class TestRelu:
    def test_mask(self):
        tape = Tape()
        x = tape.leaf(np.array([[-1.0, 0.0, 2.0]]))
        out = op_relu(tape, x)
        assert np.allclose(out.value, [[0, 0, 2]])
        out._backward(np.ones((1, 3)))
        assert np.allclose(x.grad, [[0, 0, 1]])

    def test_all_positive_passthrough(self):
        tape = Tape()
        x = tape.leaf(np.full((2, 2), 3.0))
        out = op_relu(tape, x)
        assert np.allclose(out.value, x.value)


class TestRowSoftmax:
    def test_symmetry(self):
        tape = Tape()
        out = op_row_softmax(tape, tape.leaf(np.zeros((1, 2))))
        assert np.allclose(out.value, 0.5)

    def test_overflow_safe(self):
        tape = Tape()
        out = op_row_softmax(tape, tape.leaf(np.array([[1000.0, 0.0]])))
        assert np.all(np.isfinite(out.value))
        assert out.value[0, 0] == pytest.approx(1.0)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(2)
        tape = Tape()
        out = op_row_softmax(tape, tape.leaf(rng.standard_normal((10, 5))))
        assert np.max(np.abs(out.value.sum(axis=1) - 1)) <= 1e-12

    def test_finite_difference(self):
        rng = np.random.default_rng(3)
        xv = rng.standard_normal((4, 3))
        g = rng.standard_normal((4, 3))

        def value(a):
            z = a - a.max(axis=1, keepdims=True)
            e = np.exp(z)
            return float(np.sum(g * e / e.sum(axis=1, keepdims=True)))

        tape = Tape()
        x = tape.leaf(xv)
        out = op_row_softmax(tape, x)
        out._backward(g)
        h = 1e-5
        fd = np.zeros_like(xv)
        it = np.nditer(xv, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            ap = xv.copy()
            ap[idx] += h
            am = xv.copy()
            am[idx] -= h
            fd[idx] = (value(ap) - value(am)) / (2 * h)
        assert np.max(np.abs(fd - x.grad)) / np.max(np.abs(fd)) < 1e-5


class TestLossTerminal:
    def test_jb_hard_balanced(self):
        tape = Tape()
        s = tape.leaf(np.array([[1.0, 0], [1, 0], [0, 1], [0, 1]]))
        g = from_edges(4, [(0, 1), (2, 3)])
        out = op_loss_terminal(tape, s, "jb", LossContext.build(g, "jb"))
        assert float(out.value) == pytest.approx(-2 * np.sqrt(2))

    def test_mincut_disconnected_cliques(self):
        tape = Tape()
        s = tape.leaf(np.array([[1.0, 0], [1, 0], [0, 1], [0, 1]]))
        g = from_edges(4, [(0, 1), (2, 3)])
        out = op_loss_terminal(tape, s, "mincut", LossContext.build(g, "mincut"))
        assert float(out.value) == pytest.approx(-1.0)

    def test_softmax_to_loss_chain(self):
        # full-chain gradient through logits matches finite differences
        rng = np.random.default_rng(4)
        logits = rng.standard_normal((6, 3))
        g = from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (2, 3)])
        ctx = LossContext.build(g, "jb")

        def value(a):
            z = a - a.max(axis=1, keepdims=True)
            e = np.exp(z)
            s = e / e.sum(axis=1, keepdims=True)
            from jbgnn import jb_loss

            return jb_loss(s).value

        tape = Tape()
        x = tape.leaf(logits)
        s = op_row_softmax(tape, x)
        out = op_loss_terminal(tape, s, "jb", ctx)
        tape.backward(out)
        h = 1e-5
        fd = np.zeros_like(logits)
        it = np.nditer(logits, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            ap = logits.copy()
            ap[idx] += h
            am = logits.copy()
            am[idx] -= h
            fd[idx] = (value(ap) - value(am)) / (2 * h)
        assert np.max(np.abs(fd - x.grad)) / np.max(np.abs(fd)) < 1e-5


class TestBackwardBookkeeping:
    def test_unused_node_gradient_stays_zero(self):
        tape = Tape()
        x = tape.leaf(np.ones((2, 2)))
        unused = op_relu(tape, tape.leaf(np.ones((2, 2))))
        out = op_relu(tape, x)
        tape.backward(out)
        assert np.allclose(unused.grad, 0)
        assert np.allclose(x.grad, 1)


class TestGlorot:
    def test_bounds(self):
        m = glorot_init(10, 20, seed=0)
        limit = np.sqrt(6 / 30)
        assert np.all(np.abs(m) <= limit)

    def test_deterministic(self):
        assert np.array_equal(glorot_init(5, 5, seed=7), glorot_init(5, 5, seed=7))

    def test_variance(self):
        m = glorot_init(64, 64, seed=1)
        assert np.var(m) == pytest.approx(2 / 128, rel=0.1)


class TestAdam:
    def test_zero_gradient_no_move(self):
        ps = ParameterSet()
        ps.add("w", np.array([1.0, 2.0]))
        adam_step(ps, {"w": np.zeros(2)}, lr=0.1)
        assert np.allclose(ps.params["w"], [1.0, 2.0])
        assert ps.step == 1

    def test_first_step_closed_form(self):
        ps = ParameterSet()
        ps.add("w", np.array([0.0]))
        adam_step(ps, {"w": np.array([1.0])}, lr=0.01)
        # bias-corrected m_hat = v_hat = 1, so the update is -lr/(1 + eps)
        assert ps.params["w"][0] == pytest.approx(-0.01, rel=1e-6)

    def test_deterministic_trajectories(self):
        def run():
            ps = ParameterSet()
            ps.add("w", glorot_init(3, 3, seed=0))
            rng = np.random.default_rng(1)
            for _ in range(10):
                adam_step(ps, {"w": rng.standard_normal((3, 3))}, lr=0.05)
            return ps.params["w"].copy()

        assert np.array_equal(run(), run())

    def test_nonfinite_gradient_rejected(self):
        ps = ParameterSet()
        ps.add("w", np.zeros(2))
        with pytest.raises(NumericError):
            adam_step(ps, {"w": np.array([np.nan, 0.0])}, lr=0.1)
