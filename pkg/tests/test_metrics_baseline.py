import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quack.baseline import default_gamma, rbf, rbf_centroid_classify
from quack.data import Dataset
from quack.metrics import accuracy, evaluate, roc_auc


def pair_count_auc(scores, labels):
    pos = [s for s, l in zip(scores, labels) if l == 1]
    neg = [s for s, l in zip(scores, labels) if l != 1]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


class TestRocAuc:
    def test_separated(self):
        assert roc_auc([0.1, 0.2, 0.8, 0.9], [-1, -1, 1, 1]) == 1.0

    def test_all_tied(self):
        assert roc_auc([0.3] * 6, [1, -1, 1, -1, 1, -1]) == 0.5

    def test_hand_enumerated(self):
        assert roc_auc([0.1, 0.4, 0.35, 0.8], [-1, -1, 1, 1]) == 0.75

    def test_single_class(self):
        with pytest.raises(ValueError):
            roc_auc([0.1, 0.2], [1, 1])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 200))
    def test_matches_pair_counting(self, seed, n):
        rng = np.random.default_rng(seed)
        scores = rng.integers(0, 6, n) / 5.0  # coarse grid forces ties
        labels = rng.choice([-1, 1], n)
        if len(set(labels)) < 2:
            return
        assert roc_auc(scores, labels) == pair_count_auc(scores, labels)

    def test_monotone_invariance(self):
        rng = np.random.default_rng(0)
        s, y = rng.normal(size=50), rng.choice([-1, 1], 50)
        assert roc_auc(np.exp(3 * s) + 1, y) == roc_auc(s, y)

    def test_negation(self):
        rng = np.random.default_rng(1)
        s, y = rng.normal(size=60), rng.choice([-1, 1], 60)
        assert roc_auc(-s, y) == pytest.approx(1 - roc_auc(s, y), abs=1e-15)


class TestAccuracy:
    def test_cases(self):
        y = np.array([1, -1, 1, -1])
        assert accuracy(y, y) == 1.0
        assert accuracy(-y, y) == 0.0
        assert accuracy([1, 1, 1, 1], y) == 0.5

    def test_report(self):
        r = evaluate([0.2, -0.1, 0.5], [1, -1, 1], [1, -1, -1])
        assert (r.n, r.positives) == (3, 1)
        assert r.accuracy == pytest.approx(2 / 3)


class TestRbf:
    def test_self(self):
        assert rbf(np.array([0.3, 0.1]), np.array([0.3, 0.1]), 2.0) == 1.0

    def test_unit_distance(self):
        assert rbf(np.array([1.0, 0.0]), np.array([0.0, 0.0]), 1.0) == pytest.approx(0.36787944117144233)

    def test_monotone(self):
        d = np.linspace(0, 3, 20)[:, None]
        vals = rbf(d, np.zeros(1), 0.7)
        assert np.all(np.diff(vals) < 0)

    def test_gamma_positive(self):
        with pytest.raises(ValueError):
            rbf(np.zeros(1), np.zeros(1), 0.0)


class TestDefaultGamma:
    def test_unit_variance(self):
        X = np.array([[1.0, -1.0, 1.0, -1.0], [-1.0, 1.0, -1.0, 1.0]])
        assert default_gamma(X) == pytest.approx(0.25)

    def test_constant(self):
        assert default_gamma(np.ones((5, 4))) == 0.25


class TestRbfCentroid:
    def train(self):
        return Dataset(np.array([[0.0, 0.0], [0.2, 0.0], [1.0, 1.0], [0.8, 1.0]]), np.array([1, 1, -1, -1]))

    def test_sample_at_positive_centre(self):
        labels, scores = rbf_centroid_classify(self.train(), np.array([[0.1, 0.0]]))
        assert labels[0] == 1 and scores[0] > 0

    def test_coinciding_means(self):
        tr = Dataset(np.array([[0.0], [1.0], [1.0], [0.0]]), np.array([1, 1, -1, -1]))
        labels, scores = rbf_centroid_classify(tr, np.random.default_rng(0).random((5, 1)))
        np.testing.assert_array_equal(scores, 0)
        np.testing.assert_array_equal(labels, 1)

    def test_label_swap_negates_scores(self):
        tr = self.train()
        X = np.random.default_rng(1).random((10, 2))
        _, s = rbf_centroid_classify(tr, X)
        _, s_swapped = rbf_centroid_classify(Dataset(tr.X, -tr.y), X)
        np.testing.assert_allclose(s_swapped, -s)

    def test_argmax_invariant_to_gamma_scaling_of_both_columns(self):
        tr = self.train()
        X = np.random.default_rng(2).random((20, 2))
        a, _ = rbf_centroid_classify(tr, X, gamma=1.0)
        b, _ = rbf_centroid_classify(tr, X, gamma=3.0)
        np.testing.assert_array_equal(a, b)

    def test_missing_class(self):
        with pytest.raises(ValueError):
            rbf_centroid_classify(Dataset(np.zeros((2, 1)), np.array([1, 1])), np.zeros((1, 1)))
