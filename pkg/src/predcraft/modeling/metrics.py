"""Binary classification metrics computed from scores."""

from __future__ import annotations

import numpy as np

from ..base import check_same_length
from ..errors import ShapeError


def pairwise_auc(y_true, scores) -> float:
    """Probability a positive outscores a negative, ties counted half.

    Exact pair counting via sorted search. Returns 0.5 when either class is
    absent, keeping fold averages defined.
    """
    y = np.asarray(y_true)
    s = np.asarray(scores, dtype=float)
    pos = np.sort(s[y == 1])
    neg = np.sort(s[y == 0])
    if len(pos) == 0 or len(neg) == 0:
        return 0.5
    wins = np.searchsorted(neg, pos, side="left").sum()
    ties = (np.searchsorted(neg, pos, side="right") - np.searchsorted(neg, pos, side="left")).sum()
    return float((wins + 0.5 * ties) / (len(pos) * len(neg)))


def compute_metrics(y_true, scores, threshold: float = 0.5) -> dict:
    """f1, auc, and accuracy for one score vector.

    Predictions are score >= threshold. F1 is the harmonic mean of precision
    and recall, defined as 0 when precision + recall is 0; AUC is the
    pairwise-counting estimate.
    """
    y = np.asarray(y_true)
    s = np.asarray(scores, dtype=float)
    check_same_length(y, s)
    if len(y) == 0:
        raise ShapeError("metrics need at least one example")
    if y.ndim != 1 or s.ndim != 1:
        raise ShapeError("metrics expect 1-D vectors")

    pred = (s >= threshold).astype(int)
    accuracy = float((pred == y).mean())
    tp = int(((pred == 1) & (y == 1)).sum())
    fp = int(((pred == 1) & (y == 0)).sum())
    fn = int(((pred == 0) & (y == 1)).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return {"f1": f1, "auc": pairwise_auc(y, s), "accuracy": accuracy}
