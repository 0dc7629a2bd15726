"""Featurization: one numeric row per learning segment.

Feature primitives aggregate rows of a related table (reached by a relation
path of depth one or two from the target entity) over the segment's
half-open window [t_start, t_stop). Preprocessing then one-hot encodes
categorical outputs, imputes missing values with 0, and min-max scales each
numeric column into [0, 1].
"""

from __future__ import annotations

import csv
import io
from bisect import bisect_left
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .base import Estimator
from .entityset import EntitySet
from .errors import PathError, SchemaError
from .segmentation import LearningSegment

PRIMITIVE_KINDS = (
    "count",
    "sum",
    "mean",
    "min",
    "max",
    "nunique",
    "mode",
    "time_since_last",
    "fraction_matching",
)
PREDICATE_OPS = ("equals", "greater_than", "in_set")


@dataclass(frozen=True)
class FeaturePrimitive:
    """One windowed aggregation over a relation path.

    ``path`` is the chain of child tables walked from the target entity
    (depth <= 2); ``column`` is the aggregated column on the path's last
    table; ``predicate`` (for fraction_matching) is (op, value) applied to
    that column.
    """

    kind: str
    path: tuple
    column: Optional[str] = None
    predicate: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in PRIMITIVE_KINDS:
            raise SchemaError(f"unknown primitive kind {self.kind!r}")
        if not 1 <= len(self.path) <= 2:
            raise PathError(f"path depth must be 1 or 2, got {self.path!r}")
        needs_column = self.kind in ("sum", "mean", "min", "max", "nunique", "mode",
                                     "fraction_matching")
        if needs_column and self.column is None:
            raise SchemaError(f"primitive {self.kind!r} needs a column")
        if self.kind == "fraction_matching":
            if self.predicate is None or self.predicate[0] not in PREDICATE_OPS:
                raise SchemaError("fraction_matching needs a (op, value) predicate")

    @property
    def name(self) -> str:
        base = ".".join(self.path)
        if self.kind == "count":
            return f"{base}.count"
        if self.kind == "time_since_last":
            return f"{base}.time_since_last"
        if self.kind == "fraction_matching":
            op, value = self.predicate
            return f"{base}.fraction({self.column} {op} {value})"
        return f"{base}.{self.kind}({self.column})"


def _path_edges(es: EntitySet, target: str, path: tuple) -> None:
    current = target
    for step in path:
        edges = [r for r in es.relations if r.parent == current and r.child == step]
        if not edges:
            raise PathError(f"no relation from {current!r} to {step!r}")
        current = step
    leaf = es.table(path[-1])
    if leaf.time_index is None:
        raise PathError(f"path leaf {path[-1]!r} has no time index")


def _path_rows(es: EntitySet, target: str, path: tuple) -> dict:
    """eid -> (sorted time list, row list) for the path's leaf table."""
    t = es.table(target)
    current_map = {row[t.primary_key]: {row[t.primary_key]} for row in t.rows}
    current = target
    for step in path:
        edges = [r for r in es.relations if r.parent == current and r.child == step]
        child = es.table(step)
        next_map: dict = {}
        for row in child.rows:
            roots: set = set()
            for edge in edges:
                fk = row.get(edge.child_key)
                if fk in current_map:
                    roots |= current_map[fk]
            if roots:
                next_map.setdefault(row[child.primary_key], set()).update(roots)
        current_map = next_map
        current = step

    leaf = es.table(path[-1])
    ti = leaf.time_index
    per_eid: dict = {}
    for row in leaf.rows:
        time = row.get(ti)
        if time is None:
            continue
        for eid in current_map.get(row[leaf.primary_key], ()):
            per_eid.setdefault(eid, []).append((time, row[leaf.primary_key], row))
    out = {}
    for eid, entries in per_eid.items():
        entries.sort(key=lambda e: e[:2])
        out[eid] = ([e[0] for e in entries], [e[2] for e in entries])
    return out


def _matches(predicate: tuple, value) -> bool:
    op, arg = predicate
    if value is None:
        return False
    if op == "equals":
        return value == arg
    if op == "greater_than":
        return value > arg
    return value in arg  # in_set


def _compute(primitive: FeaturePrimitive, times, rows, segment: LearningSegment):
    lo = bisect_left(times, segment.t_start)
    hi = bisect_left(times, segment.t_stop)
    window = rows[lo:hi]
    if primitive.kind == "count":
        return len(window)
    if primitive.kind == "time_since_last":
        return segment.t_stop - times[hi - 1] if hi > lo else None
    if primitive.kind == "fraction_matching":
        if not window:
            return None
        hits = sum(1 for r in window if _matches(primitive.predicate, r.get(primitive.column)))
        return hits / len(window)
    values = [r.get(primitive.column) for r in window]
    values = [v for v in values if v is not None]
    if primitive.kind == "nunique":
        return len(set(values))
    if primitive.kind == "sum":
        return sum(values) if values else 0
    if not values:
        return None
    if primitive.kind == "mean":
        return sum(values) / len(values)
    if primitive.kind == "min":
        return min(values)
    if primitive.kind == "max":
        return max(values)
    if primitive.kind == "mode":
        counts: dict = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        top = max(counts.values())
        return min((k for k, c in counts.items() if c == top), key=str)
    raise AssertionError(primitive.kind)


class FeatureMatrix:
    """Rows keyed by (eid, t_stop) with aligned binary labels.

    ``kinds`` tags each column: ``numeric``, ``categorical`` (raw string
    values, pre one-hot), or ``indicator`` (one-hot output, never rescaled).
    """

    def __init__(self, columns, kinds, keys, rows, labels, processed=False):
        self.columns = list(columns)
        self.kinds = list(kinds)
        self.keys = list(keys)
        self.rows = [list(r) for r in rows]
        self.labels = list(labels)
        self.processed = processed
        if len(self.rows) != len(self.labels) or len(self.rows) != len(self.keys):
            raise SchemaError("rows, keys, and labels must align")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise SchemaError("row width does not match column count")

    def __len__(self):
        return len(self.rows)

    def to_numpy(self) -> np.ndarray:
        if not self.processed:
            raise SchemaError("matrix must be preprocessed before numeric export")
        return np.asarray(self.rows, dtype=float)

    def label_array(self) -> np.ndarray:
        return np.asarray(self.labels, dtype=int)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["eid", "t_stop", *self.columns, "label"])
        for (eid, t_stop), row, label in zip(self.keys, self.rows, self.labels):
            writer.writerow(
                [eid, t_stop]
                + ["" if v is None else (repr(v) if isinstance(v, float) else v) for v in row]
                + [label]
            )
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_csv())


def synthesize(
    es: EntitySet,
    target: str,
    segments: Sequence[LearningSegment],
    primitives: Sequence[FeaturePrimitive],
) -> FeatureMatrix:
    """Raw feature matrix: one row per segment, one column per primitive,
    each cell computed only from events inside [t_start, t_stop)."""
    for primitive in primitives:
        _path_edges(es, target, primitive.path)
        leaf = es.table(primitive.path[-1])
        if primitive.column is not None and primitive.column not in leaf.column_names:
            raise PathError(
                f"column {primitive.column!r} not on table {primitive.path[-1]!r}"
            )

    kinds = []
    for primitive in primitives:
        if primitive.kind == "mode":
            leaf = es.table(primitive.path[-1])
            col_kind = next(c.kind for c in leaf.columns if c.name == primitive.column)
            kinds.append("categorical" if col_kind in ("categorical", "id") else "numeric")
        else:
            kinds.append("numeric")

    cache: dict = {}
    for primitive in primitives:
        if primitive.path not in cache:
            cache[primitive.path] = _path_rows(es, target, primitive.path)

    empty: tuple = ([], [])
    rows = []
    for segment in segments:
        row = []
        for primitive in primitives:
            times, leaf_rows = cache[primitive.path].get(segment.eid, empty)
            row.append(_compute(primitive, times, leaf_rows, segment))
        rows.append(row)
    return FeatureMatrix(
        columns=[p.name for p in primitives],
        kinds=kinds,
        keys=[(s.eid, s.t_stop) for s in segments],
        rows=rows,
        labels=[s.label for s in segments],
    )


class MatrixPreprocessor(Estimator):
    """One-hot encode categoricals, impute missing with 0, min-max scale.

    Scaling statistics come from the matrix passed to ``fit``; indicator
    columns produced by one-hot encoding are never rescaled, which makes the
    whole transform idempotent.
    """

    def fit(self, matrix: FeatureMatrix, y=None):
        self.categories_ = {}
        self.ranges_ = {}
        for j, (col, kind) in enumerate(zip(matrix.columns, matrix.kinds)):
            values = [row[j] for row in matrix.rows]
            if kind == "categorical":
                self.categories_[col] = sorted(
                    {v for v in values if v is not None}, key=str
                )
            elif kind == "numeric":
                numeric = [0.0 if v is None else float(v) for v in values]
                lo = min(numeric) if numeric else 0.0
                hi = max(numeric) if numeric else 0.0
                self.ranges_[col] = (lo, hi)
        return self

    def transform(self, matrix: FeatureMatrix) -> FeatureMatrix:
        out_columns: list = []
        out_kinds: list = []
        plan = []  # (source index, kind-specific transform data)
        for j, (col, kind) in enumerate(zip(matrix.columns, matrix.kinds)):
            if kind == "categorical":
                cats = self.categories_.get(col, [])
                for cat in cats:
                    out_columns.append(f"{col}={cat}")
                    out_kinds.append("indicator")
                plan.append((j, "onehot", cats))
            elif kind == "numeric":
                lo, hi = self.ranges_[col]
                out_columns.append(col)
                out_kinds.append("numeric")
                plan.append((j, "scale", (lo, hi)))
            else:  # indicator: pass through
                out_columns.append(col)
                out_kinds.append("indicator")
                plan.append((j, "pass", None))

        out_rows = []
        for row in matrix.rows:
            out = []
            for j, action, data in plan:
                value = row[j]
                if action == "onehot":
                    out.extend(1.0 if value == cat else 0.0 for cat in data)
                elif action == "scale":
                    lo, hi = data
                    v = 0.0 if value is None else float(value)
                    out.append(0.0 if hi == lo else (v - lo) / (hi - lo))
                else:
                    out.append(float(value))
            out_rows.append(out)
        return FeatureMatrix(
            columns=out_columns,
            kinds=out_kinds,
            keys=matrix.keys,
            rows=out_rows,
            labels=matrix.labels,
            processed=True,
        )

    def fit_transform(self, matrix: FeatureMatrix, y=None) -> FeatureMatrix:
        return self.fit(matrix).transform(matrix)


def preprocess(matrix: FeatureMatrix) -> FeatureMatrix:
    """Convenience wrapper: fit the preprocessor on the matrix itself."""
    return MatrixPreprocessor().fit_transform(matrix)


def default_primitives(
    es: EntitySet, target: str, limit: int = 12
) -> list[FeaturePrimitive]:
    """Deterministic default catalog: windowed counts, recency, and column
    aggregates over every timed relation path of depth one or two."""
    paths = []
    for r1 in es.child_relations(target):
        if es.table(r1.child).time_index is not None:
            if (r1.child,) not in paths:
                paths.append((r1.child,))
        for r2 in es.child_relations(r1.child):
            path = (r1.child, r2.child)
            if es.table(r2.child).time_index is not None and path not in paths:
                paths.append(path)

    per_path: list = []
    for path in paths:
        leaf = es.table(path[-1])
        skip = {leaf.primary_key, leaf.time_index}
        ordered: list = [
            FeaturePrimitive("count", path),
            FeaturePrimitive("time_since_last", path),
        ]
        numeric = [c.name for c in leaf.columns if c.kind == "numeric" and c.name not in skip]
        categorical = [
            c.name for c in leaf.columns if c.kind == "categorical" and c.name not in skip
        ]
        ids = [
            c.name
            for c in leaf.columns
            if c.kind == "id" and c.name not in skip
        ]
        ordered += [FeaturePrimitive("mean", path, c) for c in numeric]
        for c in categorical:
            ordered.append(FeaturePrimitive("nunique", path, c))
            ordered.append(FeaturePrimitive("mode", path, c))
        ordered += [FeaturePrimitive("nunique", path, c) for c in ids]
        ordered += [FeaturePrimitive("max", path, c) for c in numeric]
        ordered += [FeaturePrimitive("sum", path, c) for c in numeric]
        per_path.append(ordered)

    catalog: list = []
    position = 0
    while len(catalog) < limit and any(position < len(lst) for lst in per_path):
        for lst in per_path:
            if position < len(lst) and len(catalog) < limit:
                catalog.append(lst[position])
        position += 1
    return catalog


class SegmentFeaturizer(Estimator):
    """Transformer from learning segments to a raw feature matrix."""

    def __init__(self, target, primitives=None, limit=12):
        self.target = target
        self.primitives = primitives
        self.limit = limit

    def fit(self, es: EntitySet, y=None):
        self.es_ = es
        self.plan_ = (
            list(self.primitives)
            if self.primitives is not None
            else default_primitives(es, self.target, self.limit)
        )
        for primitive in self.plan_:
            _path_edges(es, self.target, primitive.path)
        return self

    def transform(self, segments: Sequence[LearningSegment]) -> FeatureMatrix:
        return synthesize(self.es_, self.target, segments, self.plan_)

    def fit_transform(self, es: EntitySet, segments) -> FeatureMatrix:
        return self.fit(es).transform(segments)
