"""Datasets: CSV I/O, min-max normalization, seeded splits and synthetic generators."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

log = logging.getLogger(__name__)


class DataError(ValueError):
    pass


class EmptyFileError(DataError):
    pass


class MissingLabelColumnError(DataError):
    pass


class NoFeaturesError(DataError):
    pass


class NonNumericFeatureError(DataError):
    pass


class BadLabelError(DataError):
    pass


class PoolTooSmallError(DataError):
    pass


@dataclass
class Dataset:
    X: np.ndarray
    y: np.ndarray
    feature_names: list[str] | None = None

    def __post_init__(self):
        self.X = np.atleast_2d(np.asarray(self.X, dtype=np.float64))
        self.y = np.asarray(self.y).astype(np.int64).reshape(-1)
        if self.X.shape[0] != self.y.shape[0]:
            raise DataError(f"{self.X.shape[0]} rows but {self.y.shape[0]} labels")
        if not np.all(np.isin(self.y, (-1, 1))):
            raise BadLabelError("labels must be +1 or -1")
        if not np.all(np.isfinite(self.X)):
            raise DataError("features contain non-finite values")

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, idx) -> "Dataset":
        return Dataset(self.X[idx], self.y[idx], self.feature_names)


def _parse_label(raw: str, positive_labels, lineno: int) -> int:
    text = raw.strip()
    if positive_labels is not None:
        try:
            value = float(text)
        except ValueError:
            value = text
        return 1 if value in positive_labels or text in positive_labels else -1
    try:
        value = float(text)
    except ValueError:
        raise BadLabelError(f"line {lineno}: label {raw!r} is not numeric") from None
    if value == 1:
        return 1
    if value in (-1, 0):
        return -1
    raise BadLabelError(f"line {lineno}: label {raw!r} is not one of 1, -1, 0")


def load_csv(path, label_column: str = "label", positive_labels=None) -> Dataset:
    """Read a header-row CSV with a ``label`` column and numeric feature columns.

    Labels ``1``/``-1`` are taken as is and ``0`` maps to ``-1``. When
    ``positive_labels`` is given, raw labels in that collection become ``+1`` and
    everything else ``-1`` (e.g. digits 0-4 versus 5-9).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or not any(h.strip() for h in header):
            raise EmptyFileError(f"{path}: file is empty")
        header = [h.strip() for h in header]
        if label_column not in header:
            raise MissingLabelColumnError(f"{path}: no column named {label_column!r}")
        li = header.index(label_column)
        feature_cols = [i for i in range(len(header)) if i != li]
        if not feature_cols:
            raise NoFeaturesError(f"{path}: only the {label_column!r} column is present")

        rows, labels, saw_zero = [], [], False
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}")
            if positive_labels is None and row[li].strip() in ("0", "0.0"):
                saw_zero = True
            labels.append(_parse_label(row[li], positive_labels, lineno))
            try:
                rows.append([float(row[i]) for i in feature_cols])
            except ValueError:
                bad = next(row[i] for i in feature_cols if not _is_number(row[i]))
                raise NonNumericFeatureError(f"{path}:{lineno}: non-numeric feature value {bad!r}") from None
    if not rows:
        raise EmptyFileError(f"{path}: no data rows")
    if saw_zero:
        log.warning("%s: label 0 read as -1", path)
    return Dataset(np.array(rows), np.array(labels), [header[i] for i in feature_cols])


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def save_csv(dataset: Dataset, path) -> None:
    names = dataset.feature_names or [f"x{i}" for i in range(dataset.n_features)]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + ["label"])
        for row, label in zip(dataset.X, dataset.y):
            writer.writerow([format(v, ".17g") for v in row] + [str(int(label))])


def relabel(y_raw, positive: Callable) -> np.ndarray:
    return np.array([1 if positive(v) else -1 for v in y_raw], dtype=np.int64)


@dataclass
class Normalizer:
    minimum: np.ndarray
    maximum: np.ndarray

    def __post_init__(self):
        self.minimum = np.asarray(self.minimum, dtype=np.float64)
        self.maximum = np.asarray(self.maximum, dtype=np.float64)
        if np.any(self.maximum < self.minimum):
            raise DataError("normalizer max must be >= min for every feature")

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1] != self.minimum.size:
            raise DataError(f"data has {X.shape[-1]} features, normalizer expects {self.minimum.size}")
        span =self.maximum - self.minimum
        safe = np.where(span > 0, span, 1.0)
        # constant training features map to 0
        return np.where(span > 0, (X - self.minimum) / safe, 0.0)


def fit_normalizer(train: Dataset) -> Normalizer:
    return Normalizer(train.X.min(axis=0), train.X.max(axis=0))


def apply_normalizer(norm: Normalizer, dataset: Dataset) -> Dataset:
    return Dataset(norm.transform(dataset.X), dataset.y.copy(), dataset.feature_names)


@dataclass
class Splits:
    train: Dataset
    val: Dataset
    test: Dataset
    indices: dict = field(default_factory=dict)


def split_and_subsample(
    dataset: Dataset,
    n_train: int = 1000,
    n_val: int = 400,
    n_test: int = 400,
    train_frac: float = 0.7,
    seed: int = 0,
    test_pool: Dataset | None = None,
) -> Splits:
    """Seeded 70/30 pool split, then disjoint draws of train, val and test.

    If ``test_pool`` is given (a predefined test split) ``dataset`` is used whole
    as the training pool and val/test are drawn from ``test_pool``. Indices in
    ``Splits.indices`` refer to ``dataset`` (and ``test_pool`` when given).
    """
    rng = np.random.default_rng(seed)
    if test_pool is None:
        order = rng.permutation(len(dataset))
        cut = int(round(train_frac * len(dataset)))
        train_pool_idx, test_pool_idx = order[:cut], order[cut:]
        source = dataset
    else:
        train_pool_idx = rng.permutation(len(dataset))
        test_pool_idx = rng.permutation(len(test_pool))
        source = test_pool
    if n_train > len(train_pool_idx):
        raise PoolTooSmallError(f"train pool has {len(train_pool_idx)} samples, {n_train} requested")
    if n_val + n_test > len(test_pool_idx):
        raise PoolTooSmallError(
            f"test pool has {len(test_pool_idx)} samples, {n_val} + {n_test} requested"
        )
    tr = rng.permutation(train_pool_idx)[:n_train]
    te = rng.permutation(test_pool_idx)
    va, te = te[:n_val], te[n_val : n_val + n_test]
    return Splits(
        dataset.subset(tr),
        source.subset(va),
        source.subset(te),
        {"train": tr, "val": va, "test": te},
    )


def synth_blobs(n: int, d: int, separation: float, seed: int, sigma: float = 0.1) -> Dataset:
    """Two isotropic Gaussian clusters centred around ``(0.5, ..., 0.5)``.

    Class means are ``separation`` apart along the main diagonal; samples are
    clipped to ``[0, 1]``. Classes are balanced (``+1`` gets the extra sample
    when ``n`` is odd) and rows are shuffled.
    """
    rng = np.random.default_rng(seed)
    direction = np.ones(d) / np.sqrt(d)
    n_pos = (n + 1) // 2
    y = np.array([1] * n_pos + [-1] * (n - n_pos))
    centres = 0.5 + np.outer(y, direction) * separation / 2
    X = np.clip(centres + sigma * rng.standard_normal((n, d)), 0.0, 1.0)
    order = rng.permutation(n)
    return Dataset(X[order], y[order])


def synth_xor(n: int, seed: int) -> Dataset:
    """Uniform points in the unit square labelled by quadrant parity.

    ``+1`` where exactly one coordinate exceeds 0.5. Both class means sit near the
    centre, so a mean-based classifier cannot separate them.
    """
    rng = np.random.default_rng(seed)
    X = rng.random((n, 2))
    y = np.where((X[:, 0] > 0.5) ^ (X[:, 1] > 0.5), 1, -1)
    return Dataset(X, y)
