"""RBF centroid classifier: class means in feature space plus an RBF similarity."""
from __future__ import annotations

import numpy as np

from .data import Dataset


def rbf(x, x_other, gamma: float):
    """``exp(-gamma * ||x - x'||^2)``; broadcasts over leading axes."""
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    diff = np.asarray(x, dtype=np.float64) - np.asarray(x_other, dtype=np.float64)
    return np.exp(-gamma * np.sum(diff * diff, axis=-1))


def default_gamma(train: Dataset | np.ndarray) -> float:
    """``1 / (d * Var(X))`` over all feature values; ``1 / d`` for constant data."""
    X = train.X if isinstance(train, Dataset) else np.atleast_2d(np.asarray(train, dtype=np.float64))
    d = X.shape[1]
    var = float(X.var())
    return 1.0 / (d * var) if var > 0 else 1.0 / d


def class_centres(train: Dataset) -> tuple[np.ndarray, np.ndarray]:
    pos = train.y == 1
    if not pos.any() or pos.all():
        raise ValueError("training data must contain both classes")
    return train.X[pos].mean(axis=0), train.X[~pos].mean(axis=0)


def rbf_centroid_classify(train: Dataset, X_new, gamma: float | None = None):
    """Labels and scores ``rbf(x, c+) - rbf(x, c-)``; a zero score is labelled +1."""
    c_pos, c_neg = class_centres(train)
    gamma = default_gamma(train) if gamma is None else gamma
    X_new = np.atleast_2d(np.asarray(X_new, dtype=np.float64))
    scores = rbf(X_new, c_pos, gamma) - rbf(X_new, c_neg, gamma)
    return np.where(scores >= 0, 1, -1), scores
