import itertools

import numpy as np
import pytest

from jbgnn import InputError, acc, contingency, kuhn_munkres, nmi


def brute_force_acc(y, p):
    y, p = np.asarray(y), np.asarray(p)
    k = int(max(y.max(), p.max())) + 1
    best = 0
    for perm in itertools.permutations(range(k)):
        mapping = np.asarray(perm)
        best = max(best, int(np.sum(mapping[p] == y)))
    return best / y.size


class TestContingency:
    def test_direct_count(self):
        c = contingency([0, 0, 1, 1], [0, 1, 1, 1])
        assert np.array_equal(c, [[1, 1], [0, 2]])

    def test_identical_is_diagonal(self):
        c = contingency([0, 1, 2, 1], [0, 1, 2, 1])
        assert np.array_equal(c, np.diag([1, 2, 1]))

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            contingency([], [])

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            contingency([0, 1], [0])


class TestNmi:
    def test_identical_labelings(self):
        assert nmi([0, 1, 0, 1], [0, 1, 0, 1]) == pytest.approx(1.0)

    def test_constant_prediction(self):
        assert nmi([0, 0, 1, 1], [0, 0, 0, 0]) == pytest.approx(0.0)

    def test_independent_labelings(self):
        assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-12)

    def test_both_constant(self):
        assert nmi([0, 0], [1, 1]) == pytest.approx(1.0)

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(0)
        y = rng.integers(0, 3, 50)
        p = rng.integers(0, 4, 50)
        remap_y = np.array([2, 0, 1])[y]
        remap_p = np.array([3, 1, 0, 2])[p]
        assert nmi(remap_y, remap_p) == pytest.approx(nmi(y, p), rel=1e-12)

    def test_range_and_norms(self):
        rng = np.random.default_rng(1)
        for norm in ("arithmetic", "geometric", "max"):
            for _ in range(10):
                y = rng.integers(0, 3, 30)
                p = rng.integers(0, 3, 30)
                v = nmi(y, p, norm=norm)
                assert 0.0 <= v <= 1.0

    def test_bad_norm(self):
        with pytest.raises(InputError):
            nmi([0, 1], [0, 1], norm="harmonic")


class TestKuhnMunkres:
    def test_2x2(self):
        perm = kuhn_munkres(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert np.array_equal(perm, [0, 1])

    def test_recovers_permutation_from_contingency(self):
        rng = np.random.default_rng(2)
        true_perm = rng.permutation(4)
        y = rng.integers(0, 4, 60)
        p = true_perm[y]
        c = contingency(y, p)
        assert np.array_equal(kuhn_munkres(-c.astype(float)), true_perm)

    def test_all_equal_costs(self):
        cost = np.full((3, 3), 2.0)
        perm = kuhn_munkres(cost)
        assert cost[np.arange(3), perm].sum() == pytest.approx(6.0)

    def test_optimal_vs_brute_force(self):
        rng = np.random.default_rng(3)
        for k in range(2, 7):
            cost = rng.random((k, k))
            perm = kuhn_munkres(cost)
            got = cost[np.arange(k), perm].sum()
            best = min(
                sum(cost[i, p[i]] for i in range(k))
                for p in itertools.permutations(range(k))
            )
            assert got == pytest.approx(best)

    def test_nonsquare_rejected(self):
        with pytest.raises(InputError):
            kuhn_munkres(np.ones((2, 3)))


class TestAcc:
    def test_label_permutation(self):
        assert acc([0, 1, 1], [1, 0, 0]) == pytest.approx(1.0)

    def test_partial_agreement(self):
        assert acc([0, 0, 1, 1], [0, 1, 1, 1]) == pytest.approx(0.75)

    def test_identity(self):
        assert acc([0, 1, 2, 0], [0, 1, 2, 0]) == pytest.approx(1.0)

    def test_unequal_cluster_counts_padded(self):
        assert acc([0, 1, 2], [0, 0, 1]) == pytest.approx(2 / 3)

    def test_constant_prediction_largest_class(self):
        y = [0, 0, 0, 1, 2]
        assert acc(y, [1, 1, 1, 1, 1]) == pytest.approx(3 / 5)

    def test_matches_brute_force_random(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            k = int(rng.integers(2, 6))
            n = int(rng.integers(5, 30))
            y = rng.integers(0, k, n)
            p = rng.integers(0, k, n)
            assert acc(y, p) == pytest.approx(brute_force_acc(y, p))

    def test_relabeling_invariance(self):
        rng = np.random.default_rng(5)
        y = rng.integers(0, 3, 40)
        p = rng.integers(0, 3, 40)
        remap = np.array([1, 2, 0])
        assert acc(remap[y], p) == pytest.approx(acc(y, p))
        assert acc(y, remap[p]) == pytest.approx(acc(y, p))
