"""Dense multilayer perceptron for binary targets, trained by full-batch
backpropagation with an adam or momentum-sgd solver.

The loss is binary cross entropy plus an L2 penalty of 0.5*alpha*||W||^2/n
on the weights (biases unpenalized). ``loss`` and ``loss_gradients`` expose
the exact objective and its gradients so they can be checked against finite
differences.
"""

from __future__ import annotations

import numpy as np

from ..base import Estimator, check_binary_labels, check_matrix

ACTIVATIONS = ("relu", "tanh", "logistic")
SOLVERS = ("adam", "sgd")


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _activate(name, z):
    if name == "relu":
        return np.maximum(z, 0.0)
    if name == "tanh":
        return np.tanh(z)
    return _sigmoid(z)  # logistic


def _activate_grad(name, z, a):
    if name == "relu":
        return (z > 0.0).astype(float)
    if name == "tanh":
        return 1.0 - a**2
    return a * (1.0 - a)  # logistic


class MLPBinaryClassifier(Estimator):
    def __init__(
        self,
        hidden_layer_sizes=(50, 50),
        activation="relu",
        solver="adam",
        alpha=0.0001,
        learning_rate=None,
        max_iter=300,
        seed=0,
    ):
        self.hidden_layer_sizes = hidden_layer_sizes
        self.activation = activation
        self.solver = solver
        self.alpha = alpha
        self.learning_rate = learning_rate
        self.max_iter = max_iter
        self.seed = seed

    def _init_params(self, n_in):
        rng = np.random.default_rng(self.seed)
        sizes = [n_in, *self.hidden_layer_sizes, 1]
        self.weights_ = []
        self.biases_ = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights_.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            self.biases_.append(np.zeros(fan_out))

    def _forward(self, X):
        pre, post = [], [X]
        a = X
        for i, (W, b) in enumerate(zip(self.weights_, self.biases_)):
            z = a @ W + b
            pre.append(z)
            a = _sigmoid(z) if i == len(self.weights_) - 1 else _activate(self.activation, z)
            post.append(a)
        return pre, post

    def loss(self, X, y) -> float:
        X = check_matrix(X)
        y = np.asarray(y, dtype=float).reshape(-1, 1)
        _, post = self._forward(X)
        p = np.clip(post[-1], 1e-12, 1.0 - 1e-12)
        n = len(y)
        data = -np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
        penalty = 0.5 * self.alpha * sum(float((W**2).sum()) for W in self.weights_) / n
        return float(data + penalty)

    def loss_gradients(self, X, y):
        """Objective value plus gradients for every weight and bias array."""
        X = check_matrix(X)
        y = np.asarray(y, dtype=float).reshape(-1, 1)
        n = len(y)
        pre, post = self._forward(X)
        p = np.clip(post[-1], 1e-12, 1.0 - 1e-12)
        data = -np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))
        penalty = 0.5 * self.alpha * sum(float((W**2).sum()) for W in self.weights_) / n

        grads_w = [None] * len(self.weights_)
        grads_b = [None] * len(self.biases_)
        delta = (post[-1] - y) / n
        for layer in range(len(self.weights_) - 1, -1, -1):
            grads_w[layer] = post[layer].T @ delta + (self.alpha / n) * self.weights_[layer]
            grads_b[layer] = delta.sum(axis=0)
            if layer > 0:
                delta = (delta @ self.weights_[layer].T) * _activate_grad(
                    self.activation, pre[layer - 1], post[layer]
                )
        return float(data + penalty), grads_w, grads_b

    def fit(self, X, y):
        if self.activation not in ACTIVATIONS:
            raise ValueError(f"activation must be one of {ACTIVATIONS}")
        if self.solver not in SOLVERS:
            raise ValueError(f"solver must be one of {SOLVERS}")
        X = check_matrix(X)
        y = check_binary_labels(y)
        self._init_params(X.shape[1])

        lr = self.learning_rate
        if lr is None:
            lr = 0.01 if self.solver == "adam" else 0.2
        if self.solver == "adam":
            b1, b2, eps = 0.9, 0.999, 1e-8
            m_w = [np.zeros_like(W) for W in self.weights_]
            v_w = [np.zeros_like(W) for W in self.weights_]
            m_b = [np.zeros_like(b) for b in self.biases_]
            v_b = [np.zeros_like(b) for b in self.biases_]
            for t in range(1, self.max_iter + 1):
                _, gw, gb = self.loss_gradients(X, y)
                for i in range(len(self.weights_)):
                    m_w[i] = b1 * m_w[i] + (1 - b1) * gw[i]
                    v_w[i] = b2 * v_w[i] + (1 - b2) * gw[i] ** 2
                    m_b[i] = b1 * m_b[i] + (1 - b1) * gb[i]
                    v_b[i] = b2 * v_b[i] + (1 - b2) * gb[i] ** 2
                    mw_hat = m_w[i] / (1 - b1**t)
                    vw_hat = v_w[i] / (1 - b2**t)
                    mb_hat = m_b[i] / (1 - b1**t)
                    vb_hat = v_b[i] / (1 - b2**t)
                    self.weights_[i] -= lr * mw_hat / (np.sqrt(vw_hat) + eps)
                    self.biases_[i] -= lr * mb_hat / (np.sqrt(vb_hat) + eps)
        else:
            momentum = 0.9
            vel_w = [np.zeros_like(W) for W in self.weights_]
            vel_b = [np.zeros_like(b) for b in self.biases_]
            for _ in range(self.max_iter):
                _, gw, gb = self.loss_gradients(X, y)
                for i in range(len(self.weights_)):
                    vel_w[i] = momentum * vel_w[i] - lr * gw[i]
                    vel_b[i] = momentum * vel_b[i] - lr * gb[i]
                    self.weights_[i] += vel_w[i]
                    self.biases_[i] += vel_b[i]
        return self

    def predict_proba(self, X):
        X = check_matrix(X)
        _, post = self._forward(X)
        p = post[-1].ravel()
        return np.column_stack([1 - p, p])

    def predict(self, X):
        return (self.predict_proba(X)[:, 1] >= 0.5).astype(int)
