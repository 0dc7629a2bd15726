"""CART decision trees and bagged random forests for binary targets.

Split search is exact: every boundary between distinct sorted feature values
is scored by weighted Gini impurity using cumulative class counts. Forests
bootstrap rows per tree and subsample sqrt(m) features per split.
"""

from __future__ import annotations

import numpy as np

from ..base import Estimator, check_binary_labels, check_matrix


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "prob")

    def __init__(self, prob):
        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None
        self.prob = prob


def _gini_split(values, labels):
    """Best threshold for one feature column; returns (score, threshold)
    or None when the column cannot be split."""
    order = np.argsort(values, kind="stable")
    sv = values[order]
    sy = labels[order]
    n = len(sv)
    boundaries = np.nonzero(sv[:-1] < sv[1:])[0]
    if len(boundaries) == 0:
        return None
    cum1 = np.cumsum(sy)
    total1 = cum1[-1]
    n_left = boundaries + 1
    n_right = n - n_left
    left1 = cum1[boundaries]
    right1 = total1 - left1
    p1l = left1 / n_left
    p1r = right1 / n_right
    gini_left = 1.0 - p1l**2 - (1 - p1l) ** 2
    gini_right = 1.0 - p1r**2 - (1 - p1r) ** 2
    weighted = (n_left * gini_left + n_right * gini_right) / n
    best = int(np.argmin(weighted))
    b = boundaries[best]
    return float(weighted[best]), float((sv[b] + sv[b + 1]) / 2.0)


class DecisionTreeBinaryClassifier(Estimator):
    """Gini CART; ``max_features='sqrt'`` samples features per split."""

    def __init__(self, max_depth=None, max_features=None, min_samples_split=2, seed=0):
        self.max_depth = max_depth
        self.max_features = max_features
        self.min_samples_split = min_samples_split
        self.seed = seed

    def _n_features_per_split(self, m):
        if self.max_features is None:
            return m
        if self.max_features == "sqrt":
            return max(1, int(np.sqrt(m)))
        return min(m, int(self.max_features))

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_binary_labels(y)
        rng = np.random.default_rng(self.seed)
        m = X.shape[1]
        k = self._n_features_per_split(m)
        self.n_features_ = m
        self.importances_raw_ = np.zeros(m)
        n_total = len(y)

        root = _Node(prob=float(y.mean()))
        stack = [(root, np.arange(len(y)), 0)]
        while stack:
            node, idx, depth = stack.pop()
            labels = y[idx]
            n = len(idx)
            if (
                n < self.min_samples_split
                or labels.min() == labels.max()
                or (self.max_depth is not None and depth >= self.max_depth)
            ):
                continue
            features = rng.choice(m, size=k, replace=False) if k < m else np.arange(m)
            best = None
            for f in features:
                found = _gini_split(X[idx, f], labels)
                if found is None:
                    continue
                score, threshold = found
                if best is None or score < best[0]:
                    best = (score, int(f), threshold)
            if best is None:
                continue
            score, feature, threshold = best
            p1 = labels.mean()
            parent_gini = 1.0 - p1**2 - (1 - p1) ** 2
            self.importances_raw_[feature] += (n / n_total) * (parent_gini - score)
            mask = X[idx, feature] < threshold
            left_idx = idx[mask]
            right_idx = idx[~mask]
            node.feature = feature
            node.threshold = threshold
            node.left = _Node(prob=float(y[left_idx].mean()))
            node.right = _Node(prob=float(y[right_idx].mean()))
            stack.append((node.left, left_idx, depth + 1))
            stack.append((node.right, right_idx, depth + 1))
        self.root_ = root
        return self

    def predict_proba(self, X):
        X = check_matrix(X)
        out = np.empty(len(X))
        stack = [(self.root_, np.arange(len(X)))]
        while stack:
            node, idx = stack.pop()
            if node.feature is None:
                out[idx] = node.prob
                continue
            mask = X[idx, node.feature] < node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
        return np.column_stack([1 - out, out])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(int)


class RandomForestBinaryClassifier(Estimator):
    """Bagged CART ensemble with sqrt-feature subsampling at each split."""

    def __init__(self, n_estimators=100, max_depth=None, seed=0):
        self.n_estimators = n_estimators
        self.max_depth = max_depth
        self.seed = seed

    def fit(self, X, y):
        X = check_matrix(X)
        y = check_binary_labels(y)
        rng = np.random.default_rng(self.seed)
        n = len(y)
        self.trees_ = []
        for t in range(self.n_estimators):
            sample = rng.integers(0, n, size=n)
            tree = DecisionTreeBinaryClassifier(
                max_depth=self.max_depth,
                max_features="sqrt",
                seed=int(rng.integers(0, 2**31 - 1)),
            )
            tree.fit(X[sample], y[sample])
            self.trees_.append(tree)
        raw = np.sum([tree.importances_raw_ for tree in self.trees_], axis=0)
        total = raw.sum()
        self.feature_importances_ = raw / total if total > 0 else raw
        return self

    def predict_proba(self, X):
        X = check_matrix(X)
        probs = np.mean([tree.predict_proba(X)[:, 1] for tree in self.trees_], axis=0)
        return np.column_stack([1 - probs, probs])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(int)
