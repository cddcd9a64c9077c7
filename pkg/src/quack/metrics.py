from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata


@dataclass(frozen=True)
class EvalReport:
    auc: float
    accuracy: float
    n: int
    positives: int

    def lines(self) -> list[str]:
        return [f"auc={self.auc:.6f}", f"accuracy={self.accuracy:.6f}", f"n={self.n}", f"positives={self.positives}"]


def roc_auc(scores, labels) -> float:
    """Mann-Whitney AUC with average ranks for tied scores.

    Equals the fraction of (positive, negative) pairs in which the positive
    scores higher, counting ties as one half.
    """
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    labels = np.asarray(labels).reshape(-1)
    if scores.shape != labels.shape:
        raise ValueError(f"{scores.shape[0]} scores but {labels.shape[0]} labels")
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("roc_auc needs both classes present")
    ranks = rankdata(scores, method="average")
    u = ranks[pos].sum() - n_pos * (n_pos + 1) / 2
    return float(u / (n_pos * n_neg))


def accuracy(labels_pred, labels_true) -> float:
    labels_pred = np.asarray(labels_pred).reshape(-1)
    labels_true = np.asarray(labels_true).reshape(-1)
    if labels_pred.shape != labels_true.shape:
        raise ValueError("label vectors differ in length")
    return float(np.mean(labels_pred == labels_true))


def evaluate(scores, labels_pred, labels_true) -> EvalReport:
    labels_true = np.asarray(labels_true)
    return EvalReport(
        auc=roc_auc(scores, labels_true),
        accuracy=accuracy(labels_pred, labels_true),
        n=int(labels_true.size),
        positives=int(np.sum(labels_true == 1)),
    )
