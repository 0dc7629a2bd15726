"""Labeling: turn an outcome definition into ⟨instance, cutoff, label⟩ tuples.

A labeling function is declarative feature-reduce logic: a per-event feature
(a small closed vocabulary of predicates), a reduction over the labeling
window, and an optional comparison that binarizes the reduced value. The
traversal walks each instance's timeline, placing evenly spaced cutoffs and
evaluating the labeling function over the half-open window that opens at
each cutoff. Traversal knows nothing about the logic inside the labeling
function; the window length is the only shared information.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from .base import Estimator
from .entityset import EVENT_TABLE, EVENT_TIME, EntitySet, EventSlice
from .errors import FieldError, SchemaError

EVENT_FEATURES = ("equals", "greater_than", "in_set", "is_event_type", "constant_one")
REDUCES = ("any", "all", "count", "sum", "nunique", "mode")
COMPARISON_OPS = (">", ">=", "=", "<")

# window lengths and offsets: absolute milliseconds, ("events", n) for
# relative units, or None for "to the end of the data"
Duration = Union[int, tuple, None]


class LabelTuple(NamedTuple):
    eid: object
    t_c: int
    label: int


def event_span_ms(events: Sequence[dict], reference: int, n: int, direction: str) -> int:
    """Milliseconds spanned by the ``n`` events nearest to ``reference``.

    ``before`` spans from the n-th prior event up to (excluding) the
    reference; ``after`` spans from the reference through the n-th event at
    or past it, inclusive under half-open windows. Fewer than ``n`` events
    span all of them; an empty side spans 0.
    """
    if n <= 0:
        return 0
    times = [ev[EVENT_TIME] for ev in events]
    if direction == "before":
        prior = [t for t in times if t < reference][-n:]
        return reference - prior[0] if prior else 0
    if direction == "after":
        upcoming = [t for t in times if t >= reference][:n]
        return (upcoming[-1] - reference) + 1 if upcoming else 0
    raise ValueError(f"direction must be 'before' or 'after', got {direction!r}")


@dataclass(frozen=True)
class LabelingFunction:
    """Declarative feature-reduce outcome logic.

    ``field`` selects which events participate (events lacking the field are
    skipped) and supplies the value that ``nunique``/``mode`` aggregate.
    ``include_history`` extends evaluation to events before the cutoff; data
    inside the labeling window is always used.
    """

    field: Optional[str]
    event_feature: tuple
    reduce: str
    comparison: Optional[tuple] = None
    include_history: bool = False

    def __post_init__(self):
        name = self.event_feature[0]
        if name not in EVENT_FEATURES:
            raise SchemaError(f"unknown event feature {name!r}")
        if name in ("equals", "greater_than", "in_set", "is_event_type"):
            if len(self.event_feature) != 2:
                raise SchemaError(f"{name} takes exactly one argument")
        if self.reduce not in REDUCES:
            raise SchemaError(f"unknown reduce {self.reduce!r}")
        if self.reduce in ("count", "sum", "nunique", "mode") and self.comparison is None:
            raise SchemaError(f"reduce {self.reduce!r} needs a comparison to binarize")
        if self.reduce in ("nunique", "mode") and self.field is None:
            raise SchemaError(f"reduce {self.reduce!r} needs a field")
        if self.comparison is not None and self.comparison[0] not in COMPARISON_OPS:
            raise SchemaError(f"unknown comparison op {self.comparison[0]!r}")

    def to_json(self) -> dict:
        return {
            "field": self.field,
            "event_feature": list(self.event_feature),
            "reduce": self.reduce,
            "comparison": list(self.comparison) if self.comparison else None,
            "include_history": self.include_history,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LabelingFunction":
        feature = tuple(data["event_feature"])
        if feature[0] == "in_set":
            feature = (feature[0], tuple(feature[1]))
        return cls(
            field=data.get("field"),
            event_feature=feature,
            reduce=data["reduce"],
            comparison=tuple(data["comparison"]) if data.get("comparison") else None,
            include_history=bool(data.get("include_history", False)),
        )


@dataclass(frozen=True)
class CutoffSpec:
    """Where to place cutoffs and how long the labeling window is."""

    n_cutoffs: int
    spacing_ms: int
    window: Duration
    start_offset: Duration = 0

    def __post_init__(self):
        if self.n_cutoffs < 1:
            raise SchemaError("n_cutoffs must be at least 1")
        if self.spacing_ms <= 0:
            raise SchemaError("spacing_ms must be positive")
        for value, what, allow_zero in (
            (self.window, "window", False),
            (self.start_offset, "start_offset", True),
        ):
            if value is None:
                continue
            if isinstance(value, tuple):
                if value[0] != "events" or value[1] < 0:
                    raise SchemaError(f"bad relative {what}: {value!r}")
            elif not isinstance(value, int) or value < 0 or (value == 0 and not allow_zero):
                raise SchemaError(f"bad {what}: {value!r}")
        if self.start_offset is None:
            raise SchemaError("start_offset cannot be open ended")

    def to_json(self) -> dict:
        def enc(v):
            return list(v) if isinstance(v, tuple) else v

        return {
            "n_cutoffs": self.n_cutoffs,
            "spacing_ms": self.spacing_ms,
            "window": enc(self.window),
            "start_offset": enc(self.start_offset),
        }

    @classmethod
    def from_json(cls, data: dict) -> "CutoffSpec":
        def dec(v):
            return tuple(v) if isinstance(v, list) else v

        return cls(
            n_cutoffs=data["n_cutoffs"],
            spacing_ms=data["spacing_ms"],
            window=dec(data.get("window")),
            start_offset=dec(data.get("start_offset", 0)),
        )


def set_cutoff_times(spacing_ms: int, start_ms: int, count: int) -> list[int]:
    """Evenly spaced cutoffs: start, start + spacing, ... (``count`` of them)."""
    return [start_ms + i * spacing_ms for i in range(count)]


def _selected(function: LabelingFunction, events: Sequence[dict]):
    if function.field is None:
        return list(events)
    return [ev for ev in events if ev.get(function.field) is not None]


def _feature_value(function: LabelingFunction, event: dict) -> int:
    name = function.event_feature[0]
    if name == "constant_one":
        return 1
    if name == "is_event_type":
        return 1 if event[EVENT_TABLE] == function.event_feature[1] else 0
    value = event[function.field]
    arg = function.event_feature[1]
    if name == "equals":
        return 1 if value == arg else 0
    if name == "greater_than":
        return 1 if value > arg else 0
    if name == "in_set":
        return 1 if value in arg else 0
    raise AssertionError(name)


def _compare(op: str, value, threshold) -> int:
    if value is None:
        return 0
    if op == ">":
        return 1 if value > threshold else 0
    if op == ">=":
        return 1 if value >= threshold else 0
    if op == "=":
        return 1 if value == threshold else 0
    if op == "<":
        return 1 if value < threshold else 0
    raise AssertionError(op)


def evaluate_label(
    function: LabelingFunction, window: EventSlice, t_c: int, window_ms: Optional[int]
) -> int:
    """Evaluate the labeling function at one cutoff; returns 0 or 1.

    Events with time in [t_c, t_c + window_ms) participate (window_ms=None
    runs to the end of the slice); with ``include_history`` set, events
    before the cutoff participate too.
    """
    if function.field is not None and window.fields and function.field not in window.fields:
        raise FieldError(f"field {function.field!r} not present on any event table")
    t_to = window.t_to if window_ms is None else min(window.t_to, t_c + window_ms)
    t_from = window.t_from if function.include_history else t_c
    events = [ev for ev in window.events if t_from <= ev[EVENT_TIME] < t_to]
    chosen = _selected(function, events)
    values = [_feature_value(function, ev) for ev in chosen]

    if function.reduce == "any":
        reduced = 1 if any(values) else 0
    elif function.reduce == "all":
        reduced = 1 if all(values) else 0
    elif function.reduce == "count":
        reduced = sum(1 for v in values if v)
    elif function.reduce == "sum":
        reduced = sum(values)
    elif function.reduce == "nunique":
        reduced = len(
            {ev[function.field] for ev, v in zip(chosen, values) if v}
        )
    elif function.reduce == "mode":
        counts: dict = {}
        for ev, v in zip(chosen, values):
            if v:
                key = ev[function.field]
                counts[key] = counts.get(key, 0) + 1
        reduced = (
            min((k for k, c in counts.items() if c == max(counts.values())), key=str)
            if counts
            else None
        )
    else:
        raise AssertionError(function.reduce)

    if function.comparison is None:
        return int(bool(reduced))
    return _compare(function.comparison[0], reduced, function.comparison[1])


def _resolve_duration(value: Duration, events, reference: int) -> Optional[int]:
    if value is None or isinstance(value, int):
        return value
    return event_span_ms(events, reference, value[1], "after")


def traverse(
    function: LabelingFunction,
    spec: CutoffSpec,
    es: EntitySet,
    target: str,
    eid,
) -> list[LabelTuple]:
    """Label one instance at every cutoff; always emits ``n_cutoffs`` tuples."""
    t_s = es.instance_start(target, eid)
    events = es.instance_events(target, eid)
    offset = _resolve_duration(spec.start_offset, events, t_s)
    cutoffs = set_cutoff_times(spec.spacing_ms, t_s + offset, spec.n_cutoffs)
    out = []
    for t_c in cutoffs:
        window_ms = _resolve_duration(spec.window, events, t_c)
        window_slice = es.slice(
            target, eid, t_s, None if window_ms is None else t_c + window_ms
        )
        label = evaluate_label(function, window_slice, t_c, window_ms)
        out.append(LabelTuple(eid, t_c, label))
    return out


def traverse_all(
    function: LabelingFunction,
    spec: CutoffSpec,
    es: EntitySet,
    target: str,
    instance_filter: Optional[tuple] = None,
) -> list[LabelTuple]:
    """Union of per-instance traversals, ordered by (eid, t_c).

    ``instance_filter=(field, value)`` restricts traversal to target rows
    whose field equals the value.
    """
    table = es.table(target)
    eids = []
    for row in table.rows:
        if instance_filter is not None and row.get(instance_filter[0]) != instance_filter[1]:
            continue
        eids.append(row[table.primary_key])
    labels = []
    for eid in sorted(eids, key=lambda e: (str(type(e)), e)):
        labels.extend(traverse(function, spec, es, target, eid))
    return labels


class CutoffLabeler(Estimator):
    """Transformer that maps an EntitySet to label tuples for one target."""

    def __init__(self, target, function, cutoffs, instance_filter=None):
        self.target = target
        self.function = function
        self.cutoffs = cutoffs
        self.instance_filter = instance_filter

    def fit(self, es: EntitySet, y=None):
        return self

    def transform(self, es: EntitySet) -> list[LabelTuple]:
        return traverse_all(
            self.function, self.cutoffs, es, self.target, self.instance_filter
        )

    def fit_transform(self, es: EntitySet, y=None) -> list[LabelTuple]:
        return self.fit(es).transform(es)
