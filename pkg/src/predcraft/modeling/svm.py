"""Linear support vector machine trained by deterministic subgradient descent.

Minimizes 0.5*lambda*||w||^2 + mean(loss) with lambda = 1/(C*n), hinge or
squared-hinge loss, full-batch updates with the 1/(lambda*t) step schedule
and projection onto the ball of radius 1/sqrt(lambda). The bias is folded in
as an always-one feature, so training has no random state at all.
"""

from __future__ import annotations

import numpy as np

from ..base import Estimator, check_binary_labels, check_matrix

LOSSES = ("hinge", "squared_hinge")


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LinearSVMClassifier(Estimator):
    def __init__(self, C=1.0, loss="hinge", max_iter=1000):
        self.C = C
        self.loss = loss
        self.max_iter = max_iter

    def fit(self, X, y):
        if self.loss not in LOSSES:
            raise ValueError(f"loss must be one of {LOSSES}, got {self.loss!r}")
        X = check_matrix(X)
        y = check_binary_labels(y)
        n, m = X.shape
        Xa = np.hstack([X, np.ones((n, 1))])
        ypm = 2.0 * y - 1.0
        lam = 1.0 / (self.C * n)
        radius = 1.0 / np.sqrt(lam)
        w = np.zeros(m + 1)
        for t in range(1, self.max_iter + 1):
            eta = 1.0 / (lam * t)
            margins = ypm * (Xa @ w)
            violated = margins < 1.0
            if self.loss == "hinge":
                grad_loss = -(ypm[violated, None] * Xa[violated]).sum(axis=0) / n
            else:
                slack = 1.0 - margins[violated]
                grad_loss = -2.0 * (
                    (slack * ypm[violated])[:, None] * Xa[violated]
                ).sum(axis=0) / n
            w = (1.0 - eta * lam) * w - eta * grad_loss
            norm = np.linalg.norm(w)
            if norm > radius:
                w = w * (radius / norm)
        self.coef_ = w[:-1]
        self.intercept_ = float(w[-1])
        return self

    def decision_function(self, X):
        X = check_matrix(X)
        return X @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p = _sigmoid(self.decision_function(X))
        return np.column_stack([1 - p, p])

    def predict(self, X):
        return (self.decision_function(X) >= 0.0).astype(int)
