"""Estimator base class and input validation helpers.

Estimators follow scikit-learn conventions: constructor arguments are stored
verbatim as attributes of the same name, ``get_params``/``set_params`` expose
them, and fitted state uses trailing-underscore attribute names. Anything that
implements this protocol works with ``sklearn.base.clone`` and pipeline code
that only relies on duck typing.
"""

from __future__ import annotations

import inspect

import numpy as np

from .errors import ShapeError


class Estimator:
    """Minimal sklearn-style base providing ``get_params`` / ``set_params``."""

    @classmethod
    def _param_names(cls):
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind != p.VAR_KEYWORD and p.kind != p.VAR_POSITIONAL
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params) -> "Estimator":
        valid = set(self._param_names())
        for key, value in params.items():
            if key not in valid:
                raise ValueError(
                    f"invalid parameter {key!r} for {type(self).__name__}"
                )
            setattr(self, key, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def check_matrix(X) -> np.ndarray:
    """Coerce to a finite 2-D float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {X.shape}")
    if not np.isfinite(X).all():
        raise ShapeError("matrix contains NaN or infinite values")
    return X


def check_binary_labels(y) -> np.ndarray:
    y = np.asarray(y)
    if y.ndim != 1:
        raise ShapeError(f"expected a 1-D label vector, got shape {y.shape}")
    values = set(np.unique(y).tolist())
    if not values <= {0, 1}:
        raise ShapeError(f"labels must be 0/1, got values {sorted(values)}")
    return y.astype(int)


def check_same_length(a, b) -> None:
    if len(a) != len(b):
        raise ShapeError(f"length mismatch: {len(a)} vs {len(b)}")
