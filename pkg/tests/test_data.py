import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from quack.baseline import rbf_centroid_classify
from quack.data import (
    BadLabelError,
    Dataset,
    EmptyFileError,
    MissingLabelColumnError,
    NoFeaturesError,
    NonNumericFeatureError,
    PoolTooSmallError,
    apply_normalizer,
    fit_normalizer,
    load_csv,
    relabel,
    save_csv,
    split_and_subsample,
    synth_blobs,
    synth_xor,
)
from quack.metrics import roc_auc


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadCsv:
    def test_basic(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,b,label\n0.5,1,1\n2,3.25,-1\n"))
        np.testing.assert_array_equal(ds.X, [[0.5, 1], [2, 3.25]])
        np.testing.assert_array_equal(ds.y, [1, -1])
        assert ds.feature_names == ["a", "b"]

    def test_label_column_anywhere(self, tmp_path):
        ds = load_csv(write(tmp_path, "label,a\n-1,4\n1,5\n"))
        np.testing.assert_array_equal(ds.X, [[4], [5]])

    def test_zero_label_maps_to_negative(self, tmp_path, caplog):
        with caplog.at_level(logging.WARNING):
            ds = load_csv(write(tmp_path, "a,label\n1,0\n2,1\n"))
        np.testing.assert_array_equal(ds.y, [-1, 1])
        assert "label 0" in caplog.text

    def test_positive_labels(self, tmp_path):
        ds = load_csv(write(tmp_path, "a,label\n1,3\n2,7\n3,4\n"), positive_labels={0, 1, 2, 3, 4})
        np.testing.assert_array_equal(ds.y, [1, -1, 1])

    def test_only_label_column(self, tmp_path):
        with pytest.raises(NoFeaturesError):
            load_csv(write(tmp_path, "label\n1\n-1\n"))

    def test_missing_label_column(self, tmp_path):
        with pytest.raises(MissingLabelColumnError, match="label"):
            load_csv(write(tmp_path, "a,b\n1,2\n"))

    def test_non_numeric(self, tmp_path):
        with pytest.raises(NonNumericFeatureError, match="abc"):
            load_csv(write(tmp_path, "a,label\nabc,1\n"))

    @pytest.mark.parametrize("text", ["", "a,label\n"])
    def test_empty(self, tmp_path, text):
        with pytest.raises(EmptyFileError):
            load_csv(write(tmp_path, text))

    def test_bad_label(self, tmp_path):
        with pytest.raises(BadLabelError):
            load_csv(write(tmp_path, "a,label\n1,2\n"))

    def test_wide_file(self, tmp_path):
        header = ",".join(f"px{i}" for i in range(784)) + ",label\n"
        row = ",".join("0" for _ in range(784)) + ",1\n"
        assert load_csv(write(tmp_path, header + row * 3)).n_features == 784

    @settings(max_examples=30, deadline=None)
    @given(arrays(np.float64, st.tuples(st.integers(1, 8), st.integers(1, 5)),
                  elements=st.floats(-1e300, 1e300, allow_nan=False)),
           st.integers(0, 1000))
    def test_round_trip_exact(self, tmp_path_factory, X, seed):
        y = np.random.default_rng(seed).choice([-1, 1], X.shape[0])
        p = tmp_path_factory.mktemp("rt") / "ds.csv"
        save_csv(Dataset(X, y), p)
        back = load_csv(p)
        np.testing.assert_array_equal(back.X, X)
        np.testing.assert_array_equal(back.y, y)


def test_relabel():
    np.testing.assert_array_equal(relabel([3, 7], lambda d: d <= 4), [1, -1])
    np.testing.assert_array_equal(relabel([1, 2, 3], lambda d: True), [1, 1, 1])
    letters = relabel(list("AMNZ"), lambda c: "A" <= c <= "M")
    np.testing.assert_array_equal(letters, [1, 1, -1, -1])


class TestNormalizer:
    def test_column(self):
        ds = Dataset(np.array([[0.0], [5.0], [10.0]]), np.array([1, -1, 1]))
        np.testing.assert_allclose(apply_normalizer(fit_normalizer(ds), ds).X.ravel(), [0, 0.5, 1])

    def test_constant_column(self):
        ds = Dataset(np.array([[3.0, 1.0], [3.0, 2.0]]), np.array([1, -1]))
        np.testing.assert_array_equal(apply_normalizer(fit_normalizer(ds), ds).X[:, 0], [0, 0])

    def test_test_values_unclipped(self):
        norm = fit_normalizer(Dataset(np.array([[0.0], [10.0]]), np.array([1, -1])))
        assert norm.transform(np.array([[12.0]]))[0, 0] == pytest.approx(1.2)

    def test_idempotent_on_fit_split(self):
        rng = np.random.default_rng(0)
        ds = Dataset(rng.normal(size=(20, 4)) * 7 + 3, rng.choice([-1, 1], 20))
        once = apply_normalizer(fit_normalizer(ds), ds)
        twice = apply_normalizer(fit_normalizer(once), once)
        np.testing.assert_allclose(twice.X, once.X, atol=1e-15)


class TestSplit:
    def make(self, n=3000):
        rng = np.random.default_rng(1)
        return Dataset(np.arange(n, dtype=float)[:, None], rng.choice([-1, 1], n))

    def test_sizes_and_disjoint(self):
        sp = split_and_subsample(self.make(), 1000, 400, 400, seed=5)
        assert (len(sp.train), len(sp.val), len(sp.test)) == (1000, 400, 400)
        tr, va, te = (set(sp.indices[k]) for k in ("train", "val", "test"))
        assert not tr & (va | te) and not va & te

    def test_train_from_70_percent_pool(self):
        ds = self.make(1000)
        sp = split_and_subsample(ds, 700, 150, 150, seed=2)
        assert len(set(sp.indices["train"])) == 700
        assert len(set(sp.indices["val"]) | set(sp.indices["test"])) == 300

    def test_deterministic(self):
        a = split_and_subsample(self.make(), 100, 50, 50, seed=9)
        b = split_and_subsample(self.make(), 100, 50, 50, seed=9)
        for k in ("train", "val", "test"):
            np.testing.assert_array_equal(a.indices[k], b.indices[k])

    def test_pool_too_small(self):
        with pytest.raises(PoolTooSmallError):
            split_and_subsample(self.make(1000), 800, 10, 10)
        with pytest.raises(PoolTooSmallError):
            split_and_subsample(self.make(1000), 10, 200, 200)

    def test_predefined_test_pool(self):
        test_pool = Dataset(np.full((100, 1), -1.0), np.ones(100))
        sp = split_and_subsample(self.make(500), 200, 30, 30, seed=0, test_pool=test_pool)
        assert np.all(sp.val.X == -1) and np.all(sp.test.X == -1)
        assert not set(sp.indices["val"]) & set(sp.indices["test"])


class TestSynthetic:
    def test_blobs_shape_and_range(self):
        ds = synth_blobs(101, 3, 0.4, seed=0)
        assert ds.X.shape == (101, 3)
        assert ds.X.min() >= 0 and ds.X.max() <= 1
        assert abs(int(ds.y.sum())) <= 1

    def test_blobs_deterministic(self):
        np.testing.assert_array_equal(synth_blobs(50, 2, 0.3, 4).X, synth_blobs(50, 2, 0.3, 4).X)

    def test_no_separation_is_chance(self):
        tr, te = synth_blobs(2000, 4, 0.0, seed=1), synth_blobs(2000, 4, 0.0, seed=2)
        _, s = rbf_centroid_classify(tr, te.X)
        assert abs(roc_auc(s, te.y) - 0.5) < 0.05

    def test_large_separation_is_separable(self):
        tr, te = synth_blobs(400, 4, 0.6, seed=1), synth_blobs(400, 4, 0.6, seed=2)
        _, s = rbf_centroid_classify(tr, te.X)
        assert roc_auc(s, te.y) > 0.99

    def test_xor_defeats_centroids(self):
        tr, te = synth_xor(2000, seed=3), synth_xor(2000, seed=4)
        pos, neg = tr.X[tr.y == 1].mean(0), tr.X[tr.y == -1].mean(0)
        assert np.linalg.norm(pos - neg) < 0.05
        _, s = rbf_centroid_classify(tr, te.X)
        assert abs(roc_auc(s, te.y) - 0.5) <= 0.05


def test_dataset_validation():
    with pytest.raises(BadLabelError):
        Dataset(np.zeros((2, 1)), np.array([1, 2]))
    with pytest.raises(ValueError):
        Dataset(np.zeros((2, 1)), np.array([1]))
    with pytest.raises(ValueError):
        Dataset(np.array([[np.nan]]), np.array([1]))
