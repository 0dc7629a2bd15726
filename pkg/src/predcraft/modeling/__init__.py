from .grid import (
    DEFAULT_GRID_OPTIONS,
    FAMILY_ORDER,
    ModelSpec,
    ScoredModel,
    auto_select,
    build_model,
    enumerate_grid,
    load_grid_options,
    ranked_importances,
    stratified_folds,
    train_and_score,
)
from .metrics import compute_metrics, pairwise_auc
from .mlp import MLPBinaryClassifier
from .svm import LinearSVMClassifier
from .tree import DecisionTreeBinaryClassifier, RandomForestBinaryClassifier

__all__ = [
    "DEFAULT_GRID_OPTIONS",
    "FAMILY_ORDER",
    "ModelSpec",
    "ScoredModel",
    "auto_select",
    "build_model",
    "enumerate_grid",
    "load_grid_options",
    "ranked_importances",
    "stratified_folds",
    "train_and_score",
    "compute_metrics",
    "pairwise_auc",
    "MLPBinaryClassifier",
    "LinearSVMClassifier",
    "DecisionTreeBinaryClassifier",
    "RandomForestBinaryClassifier",
]
