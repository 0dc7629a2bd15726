"""End-to-end orchestration: problem definition to scored model grid."""

from __future__ import annotations

import dataclasses
import logging
import random
import zlib
from typing import Optional, Sequence

from .entityset import EntitySet
from .errors import DegenerateLabels
from .featurization import FeatureMatrix, SegmentFeaturizer, preprocess
from .labeling import traverse_all
from .modeling import ModelSpec, enumerate_grid, train_and_score
from .problemspace import ProblemDefinition, compile_problem
from .segmentation import (
    balance_classes,
    extract_segments,
    group_by_instance,
    select_single,
)
from .service.store import PrecomputeStore

logger = logging.getLogger(__name__)


def _derived_seed(*parts) -> int:
    return zlib.crc32(":".join(str(p) for p in parts).encode())


def build_matrix(
    es: EntitySet,
    definition: ProblemDefinition,
    seed: int = 0,
    feature_limit: int = 12,
    max_rows: Optional[int] = None,
) -> FeatureMatrix:
    """Label, segment, featurize, and preprocess one problem definition."""
    compiled = compile_problem(definition)
    labels = traverse_all(
        compiled.labeling_function,
        compiled.cutoffs,
        es,
        compiled.target,
        instance_filter=compiled.instance_filter,
    )
    spec = dataclasses.replace(
        compiled.segments, seed=_derived_seed(seed, definition.problem_id)
    )
    segments = extract_segments(labels, spec, es, compiled.target)
    if spec.balance:
        segments = balance_classes(segments)
    if spec.mode in ("single_first", "single_random"):
        strategy = "first" if spec.mode == "single_first" else "random"
        segments = select_single(group_by_instance(segments), strategy, spec.seed)
    if max_rows is not None and len(segments) > max_rows:
        rng = random.Random(_derived_seed(seed, definition.problem_id, "rows"))
        segments = sorted(
            rng.sample(segments, max_rows), key=lambda s: (str(type(s.eid)), s.eid, s.t_stop)
        )
    featurizer = SegmentFeaturizer(compiled.target, limit=feature_limit).fit(es)
    return preprocess(featurizer.transform(segments))


def precompute(
    es: EntitySet,
    definitions: Sequence[ProblemDefinition],
    grid_options: Optional[dict] = None,
    seed: int = 0,
    folds: int = 5,
    feature_limit: int = 12,
    max_rows: Optional[int] = None,
) -> tuple[PrecomputeStore, list]:
    """Score every (problem, model spec) cell; problems whose labels come
    out single class are skipped and reported, not failed."""
    specs = enumerate_grid(grid_options)
    store = PrecomputeStore()
    skipped = []
    for definition in definitions:
        try:
            matrix = build_matrix(
                es,
                definition,
                seed=seed,
                feature_limit=feature_limit,
                max_rows=max_rows,
            )
            if len(set(matrix.labels)) < 2:
                raise DegenerateLabels("single-class labels")
        except DegenerateLabels as exc:
            logger.warning("skipping %s: %s", definition.problem_id, exc)
            skipped.append((definition.problem_id, str(exc)))
            continue
        for spec in specs:
            scored = train_and_score(
                spec,
                matrix,
                folds=folds,
                seed=_derived_seed(seed, definition.problem_id, spec.spec_id),
            )
            store.add(definition.problem_id, scored)
    return store, skipped


def metric_summary(store: PrecomputeStore, definitions: Sequence[ProblemDefinition]) -> list:
    """Per-entity mean/min/max/std of each metric over all scored cells."""
    import numpy as np

    entity_of = {d.problem_id: d.entity for d in definitions}
    buckets: dict = {}
    for problem_id in store.problems():
        entity = entity_of.get(problem_id, "unknown")
        for spec_id in store.specs_for(problem_id):
            scored = store.lookup(problem_id, spec_id)
            bucket = buckets.setdefault(entity, {"f1": [], "auc": [], "accuracy": []})
            bucket["f1"].append(scored.f1)
            bucket["auc"].append(scored.auc)
            bucket["accuracy"].append(scored.accuracy)
    rows = []
    for entity in sorted(buckets):
        for metric in ("f1", "auc", "accuracy"):
            values = np.asarray(buckets[entity][metric])
            rows.append(
                {
                    "entity": entity,
                    "metric": metric,
                    "mean": float(values.mean()),
                    "min": float(values.min()),
                    "max": float(values.max()),
                    "std": float(values.std()),
                }
            )
    return rows


def fold_std_summary(store: PrecomputeStore, definitions: Sequence[ProblemDefinition]) -> list:
    """Per-entity mean of the per-cell fold standard deviations."""
    import numpy as np

    entity_of = {d.problem_id: d.entity for d in definitions}
    buckets: dict = {}
    for problem_id in store.problems():
        entity = entity_of.get(problem_id, "unknown")
        for spec_id in store.specs_for(problem_id):
            scored = store.lookup(problem_id, spec_id)
            if not scored.fold_scores:
                continue
            bucket = buckets.setdefault(entity, {"f1": [], "auc": [], "accuracy": []})
            for metric in ("f1", "auc", "accuracy"):
                bucket[metric].append(float(np.std(scored.fold_scores[metric])))
    rows = []
    for entity in sorted(buckets):
        for metric in ("f1", "auc", "accuracy"):
            values = buckets[entity][metric]
            rows.append(
                {
                    "entity": entity,
                    "metric": metric,
                    "mean_std": float(np.mean(values)) if values else 0.0,
                }
            )
    return rows
