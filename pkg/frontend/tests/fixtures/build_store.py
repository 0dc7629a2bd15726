"""Build a small precompute store fixture for the end-to-end UI test."""

import sys

from predcraft.modeling import ModelSpec, ScoredModel
from predcraft.service import PrecomputeStore

RF = ModelSpec("random_forest", (("n_estimators", 10), ("max_depth", 3)))
SVM = ModelSpec("linear_svm", (("C", 1), ("loss", "hinge")))
MLP = ModelSpec(
    "mlp",
    (("solver", "adam"), ("activation", "relu"),
     ("hidden_layer_sizes", (50, 50)), ("alpha", 0.01)),
)


def main(path):
    store = PrecomputeStore()
    for problem in ("users-0-0-0", "users-1-1-1"):
        store.add(problem, ScoredModel(
            spec=RF, f1=0.45, auc=0.61, accuracy=0.68,
            importances=[("orders.count", 0.7), ("orders.mean(n_items)", 0.3)],
        ))
        store.add(problem, ScoredModel(
            spec=SVM, f1=0.52, auc=0.71, accuracy=0.7,
            importances=[("orders.count", 1.2)],
        ))
        store.add(problem, ScoredModel(
            spec=MLP, f1=0.57, auc=0.67, accuracy=0.69,
        ))
    store.dump(path)


if __name__ == "__main__":
    main(sys.argv[1])
