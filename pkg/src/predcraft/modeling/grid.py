"""Model grid enumeration, cross-validated scoring, and auto selection."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ..errors import DegenerateLabels, EmptyGrid, NotAvailable, ShapeError
from ..featurization import FeatureMatrix
from .metrics import compute_metrics
from .mlp import MLPBinaryClassifier
from .svm import LinearSVMClassifier
from .tree import RandomForestBinaryClassifier

FAMILY_ORDER = ("random_forest", "linear_svm", "mlp")

# canonical hyperparameter order per family; also the default option lists
DEFAULT_GRID_OPTIONS = {
    "random_forest": {
        "n_estimators": [10, 100, 500],
        "max_depth": [3, 10, None],
    },
    "linear_svm": {
        "C": [1, 0.1, 0.01],
        "loss": ["hinge", "squared_hinge"],
    },
    "mlp": {
        "solver": ["adam", "sgd"],
        "activation": ["relu", "tanh", "logistic"],
        "hidden_layer_sizes": [[50, 50], [50, 100, 10], [50, 50, 20]],
        "alpha": [0.01, 0.001, 0.0001, 1e-05],
    },
}


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, (list, tuple)):
        return "x".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class ModelSpec:
    family: str
    hyperparameters: tuple  # ((name, value), ...) in canonical order

    @property
    def params(self) -> dict:
        return dict(self.hyperparameters)

    @property
    def spec_id(self) -> str:
        return f"{self.family}:" + "-".join(_fmt(v) for _, v in self.hyperparameters)

    def to_json(self) -> dict:
        return {"family": self.family, "hyperparameters": self.params}

    @classmethod
    def from_json(cls, data: dict) -> "ModelSpec":
        order = list(DEFAULT_GRID_OPTIONS[data["family"]])
        hp = data["hyperparameters"]
        return cls(
            family=data["family"],
            hyperparameters=tuple(
                (name, tuple(hp[name]) if isinstance(hp[name], list) else hp[name])
                for name in order
            ),
        )


@dataclass
class ScoredModel:
    spec: ModelSpec
    f1: float
    auc: float
    accuracy: float
    importances: Optional[list] = None  # [(feature name, weight)] descending
    fold_scores: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "f1": self.f1,
            "auc": self.auc,
            "accuracy": self.accuracy,
            "importances": self.importances,
            "fold_scores": self.fold_scores,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ScoredModel":
        importances = data.get("importances")
        return cls(
            spec=ModelSpec.from_json(data["spec"]),
            f1=data["f1"],
            auc=data["auc"],
            accuracy=data["accuracy"],
            importances=[tuple(pair) for pair in importances] if importances else None,
            fold_scores=data.get("fold_scores", {}),
        )


def load_grid_options(path) -> dict:
    options = json.loads(Path(path).read_text(encoding="utf-8"))
    unknown = set(options) - set(DEFAULT_GRID_OPTIONS)
    if unknown:
        raise ShapeError(f"unknown model families in grid config: {sorted(unknown)}")
    return options


def enumerate_grid(options: Optional[dict] = None) -> list[ModelSpec]:
    """Cartesian product of each family's option lists, concatenated in
    family order; fully deterministic. Families absent from ``options`` (or
    with an empty option list) contribute nothing."""
    options = DEFAULT_GRID_OPTIONS if options is None else options
    specs = []
    for family in FAMILY_ORDER:
        family_options = options.get(family)
        if not family_options:
            continue
        names = [n for n in DEFAULT_GRID_OPTIONS[family] if n in family_options]
        lists = [family_options[n] for n in names]
        for combo in itertools.product(*lists):
            normalized = tuple(
                (name, tuple(v) if isinstance(v, list) else v)
                for name, v in zip(names, combo)
            )
            specs.append(ModelSpec(family=family, hyperparameters=normalized))
    return specs


def build_model(spec: ModelSpec, seed: int = 0):
    params = spec.params
    if spec.family == "random_forest":
        return RandomForestBinaryClassifier(
            n_estimators=params["n_estimators"], max_depth=params["max_depth"], seed=seed
        )
    if spec.family == "linear_svm":
        return LinearSVMClassifier(C=params["C"], loss=params["loss"])
    if spec.family == "mlp":
        return MLPBinaryClassifier(
            hidden_layer_sizes=tuple(params["hidden_layer_sizes"]),
            activation=params["activation"],
            solver=params["solver"],
            alpha=params["alpha"],
            seed=seed,
        )
    raise ShapeError(f"unknown model family {spec.family!r}")


def stratified_folds(y, n_folds: int, seed: int) -> list[np.ndarray]:
    """Deterministic stratified fold assignment: shuffle each class, deal
    round-robin. Returns test-index arrays."""
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(y), dtype=int)
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        rng.shuffle(idx)
        assignment[idx] = np.arange(len(idx)) % n_folds
    return [np.flatnonzero(assignment == f) for f in range(n_folds)]


def ranked_importances(model, feature_names: Sequence[str]) -> list:
    """Descending (name, weight) ranking. Forests report normalized impurity
    decrease; linear SVMs the absolute hyperplane coefficients."""
    if isinstance(model, RandomForestBinaryClassifier):
        weights = model.feature_importances_
    elif isinstance(model, LinearSVMClassifier):
        weights = np.abs(model.coef_)
    else:
        raise NotAvailable(f"no feature importances for {type(model).__name__}")
    order = sorted(range(len(feature_names)), key=lambda i: (-weights[i], i))
    return [(feature_names[i], float(weights[i])) for i in order]


def train_and_score(
    spec: ModelSpec,
    matrix: FeatureMatrix,
    folds: int = 5,
    seed: int = 0,
    top_features: int = 10,
) -> ScoredModel:
    """Stratified k-fold evaluation; metrics are fold means. A final fit on
    all rows supplies feature importances where the family provides them."""
    X = matrix.to_numpy()
    y = matrix.label_array()
    if len(np.unique(y)) < 2:
        raise DegenerateLabels("both classes are required for training")

    per_fold: dict = {"f1": [], "auc": [], "accuracy": []}
    for fold_index, test_idx in enumerate(stratified_folds(y, folds, seed)):
        train_mask = np.ones(len(y), dtype=bool)
        train_mask[test_idx] = False
        model = build_model(spec, seed=seed * 31 + fold_index)
        model.fit(X[train_mask], y[train_mask])
        scores = model.predict_proba(X[test_idx])[:, 1]
        result = compute_metrics(y[test_idx], scores)
        for key in per_fold:
            per_fold[key].append(result[key])

    importances = None
    if spec.family in ("random_forest", "linear_svm"):
        final = build_model(spec, seed=seed)
        final.fit(X, y)
        importances = ranked_importances(final, matrix.columns)[:top_features]

    return ScoredModel(
        spec=spec,
        f1=float(np.mean(per_fold["f1"])),
        auc=float(np.mean(per_fold["auc"])),
        accuracy=float(np.mean(per_fold["accuracy"])),
        importances=importances,
        fold_scores=per_fold,
    )


def auto_select(scored: Sequence[ScoredModel]) -> ScoredModel:
    """The median model as ordered by AUC: index floor((n-1)/2) of the
    AUC-ascending ordering, grid order breaking ties."""
    if not scored:
        raise EmptyGrid("cannot select from an empty grid")
    order = sorted(range(len(scored)), key=lambda i: (scored[i].auc, i))
    return scored[order[(len(scored) - 1) // 2]]
