import numpy as np
import pytest

from predcraft.featurization import MatrixPreprocessor, SegmentFeaturizer
from predcraft.modeling import (
    LinearSVMClassifier,
    MLPBinaryClassifier,
    RandomForestBinaryClassifier,
)
from predcraft.segmentation import Segmenter

sklearn = pytest.importorskip("sklearn")


ESTIMATORS = [
    RandomForestBinaryClassifier(n_estimators=5, seed=3),
    MLPBinaryClassifier(hidden_layer_sizes=(4,), max_iter=5),
    LinearSVMClassifier(C=0.1),
    Segmenter("users", lag=10),
    SegmentFeaturizer("users", limit=4),
    MatrixPreprocessor(),
]


@pytest.mark.parametrize("estimator", ESTIMATORS, ids=lambda e: type(e).__name__)
def test_clone_round_trips_params(estimator):
    from sklearn.base import clone

    cloned = clone(estimator)
    assert cloned is not estimator
    assert cloned.get_params() == estimator.get_params()


def test_set_params_chains_and_validates():
    model = LinearSVMClassifier()
    assert model.set_params(C=9.0) is model
    assert model.C == 9.0
    with pytest.raises(ValueError):
        model.set_params(kernel="rbf")


def test_learner_runs_inside_sklearn_pipeline():
    from sklearn.pipeline import Pipeline
    from sklearn.preprocessing import StandardScaler

    rng = np.random.default_rng(0)
    X = rng.uniform(size=(60, 4))
    y = (X[:, 0] > 0.5).astype(int)
    pipe = Pipeline([("scale", StandardScaler()), ("model", LinearSVMClassifier())])
    pipe.fit(X, y)
    assert (pipe.predict(X) == y).mean() > 0.9
