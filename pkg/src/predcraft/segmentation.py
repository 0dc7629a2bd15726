"""Segmentation: convert label tuples into learning segments.

Each label tuple ⟨eid, t_c, l⟩ becomes a candidate segment ⟨eid, t_start,
t_stop, l⟩ bounding the data a training example may use. The prediction is
made ``lead`` before the labeling window opens, so t_stop = t_c - lead; the
anchor decides where t_start comes from. Candidates whose lag window would
reach before the instance's first event are clipped to it; candidates that
end up inverted are dropped. In ``multiple`` mode a first-fit greedy scan
keeps candidates that stay ``gap`` apart; the ``single_*`` modes keep every
feasible candidate and select one per instance afterwards.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

from .base import Estimator
from .entityset import EntitySet
from .errors import SchemaError
from .labeling import LabelTuple, event_span_ms

ANCHORS = ("instance_start", "cutoff_minus_lead")  # plus ("fixed", t)
MODES = ("multiple", "single_first", "single_random")

Duration = Union[int, tuple, None]


class LearningSegment(NamedTuple):
    eid: object
    t_start: int
    t_stop: int
    label: int


@dataclass(frozen=True)
class SegmentSpec:
    """How label tuples map to learning segments."""

    lead: Duration = 0
    lag: Duration = None
    anchor: object = "cutoff_minus_lead"
    gap_ms: int = 0
    mode: str = "multiple"
    balance: bool = False
    seed: int = 0

    def __post_init__(self):
        for value, what in ((self.lead, "lead"), (self.lag, "lag")):
            if value is None:
                continue
            if isinstance(value, tuple):
                if value[0] != "events" or value[1] < 0:
                    raise SchemaError(f"bad relative {what}: {value!r}")
            elif not isinstance(value, int) or value < 0:
                raise SchemaError(f"bad {what}: {value!r}")
        if self.lead is None:
            raise SchemaError("lead cannot be open ended")
        if isinstance(self.lag, int) and self.lag == 0:
            raise SchemaError("lag must be positive (or None for all history)")
        if not isinstance(self.gap_ms, int) or self.gap_ms < 0:
            raise SchemaError(f"bad gap_ms: {self.gap_ms!r}")
        if self.anchor not in ANCHORS and not (
            isinstance(self.anchor, tuple) and self.anchor[0] == "fixed"
        ):
            raise SchemaError(f"unknown anchor {self.anchor!r}")
        if self.mode not in MODES:
            raise SchemaError(f"unknown mode {self.mode!r}")

    def to_json(self) -> dict:
        def enc(v):
            return list(v) if isinstance(v, tuple) else v

        return {
            "lead": enc(self.lead),
            "lag": enc(self.lag),
            "anchor": enc(self.anchor),
            "gap_ms": self.gap_ms,
            "mode": self.mode,
            "balance": self.balance,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SegmentSpec":
        def dec(v):
            return tuple(v) if isinstance(v, list) else v

        return cls(
            lead=dec(data.get("lead", 0)),
            lag=dec(data.get("lag")),
            anchor=dec(data.get("anchor", "cutoff_minus_lead")),
            gap_ms=data.get("gap_ms", 0),
            mode=data.get("mode", "multiple"),
            balance=bool(data.get("balance", False)),
            seed=data.get("seed", 0),
        )


def resolve_units(
    n_events: int,
    es: EntitySet,
    target: str,
    eid,
    reference: int,
    direction: str,
) -> int:
    """Convert a relative duration (n events) into milliseconds by scanning
    the instance's events on one side of the reference point."""
    return event_span_ms(es.instance_events(target, eid), reference, n_events, direction)


def _candidate(label: LabelTuple, spec: SegmentSpec, events, t_s: int):
    t_c = label.t_c
    lead_ms = (
        spec.lead
        if isinstance(spec.lead, int)
        else event_span_ms(events, t_c, spec.lead[1], "before")
    )
    t_stop = t_c - lead_ms
    lag_ms = spec.lag
    if isinstance(lag_ms, tuple):
        lag_ms = event_span_ms(events, t_stop, lag_ms[1], "before")

    if spec.anchor == "cutoff_minus_lead":
        t_start = t_s if lag_ms is None else max(t_s, t_stop - lag_ms)
    elif spec.anchor == "instance_start":
        t_start = t_s
        if lag_ms is not None:
            t_stop = min(t_s + lag_ms, t_stop)
    else:  # ("fixed", t)
        t_start = spec.anchor[1]
        if lag_ms is not None:
            t_stop = min(t_start + lag_ms, t_stop)

    if t_start > t_stop or t_start < t_s:
        return None
    return LearningSegment(label.eid, t_start, t_stop, label.label)


def candidate_segments(
    labels: Sequence[LabelTuple], spec: SegmentSpec, es: EntitySet, target: str
) -> dict:
    """Feasible candidates per instance, in cutoff order."""
    by_eid: dict = {}
    for label in labels:
        by_eid.setdefault(label.eid, []).append(label)
    out: dict = {}
    for eid, instance_labels in by_eid.items():
        events = es.instance_events(target, eid)
        t_s = es.instance_start(target, eid)
        kept = []
        for label in sorted(instance_labels, key=lambda lt: lt.t_c):
            candidate = _candidate(label, spec, events, t_s)
            if candidate is not None:
                kept.append(candidate)
        out[eid] = kept
    return out


def greedy_nonoverlap(candidates: Sequence[LearningSegment], gap_ms: int) -> list:
    """First-fit scan in cutoff order; a candidate is accepted only when it
    starts at least ``gap_ms`` after the previously accepted stop."""
    accepted: list = []
    last_stop = None
    for seg in candidates:
        if last_stop is not None and seg.t_start < last_stop + gap_ms:
            continue
        accepted.append(seg)
        last_stop = seg.t_stop
    return accepted


def extract_segments(
    labels: Sequence[LabelTuple], spec: SegmentSpec, es: EntitySet, target: str
) -> list[LearningSegment]:
    """Segments per the spec's mode: greedy non-overlapping acceptance in
    ``multiple`` mode, every feasible candidate in the single modes."""
    per_instance = candidate_segments(labels, spec, es, target)
    out = []
    for eid in sorted(per_instance, key=lambda e: (str(type(e)), e)):
        candidates = per_instance[eid]
        if spec.mode == "multiple":
            out.extend(greedy_nonoverlap(candidates, spec.gap_ms))
        else:
            out.extend(candidates)
    return out


def group_by_instance(segments: Sequence[LearningSegment]) -> dict:
    grouped: dict = {}
    for seg in segments:
        grouped.setdefault(seg.eid, []).append(seg)
    return grouped


def select_single(
    per_instance: dict, strategy: str, seed: int = 0
) -> list[LearningSegment]:
    """One segment per instance: ``first`` takes the earliest cutoff,
    ``random`` draws uniformly (deterministic per seed). Instances with no
    candidates contribute nothing."""
    if strategy not in ("first", "random"):
        raise SchemaError(f"unknown selection strategy {strategy!r}")
    rng = random.Random(seed)
    out = []
    for eid in sorted(per_instance, key=lambda e: (str(type(e)), e)):
        candidates = per_instance[eid]
        if not candidates:
            continue
        if strategy == "first":
            out.append(candidates[0])
        else:
            out.append(candidates[rng.randrange(len(candidates))])
    return out


def balance_classes(segments: Sequence[LearningSegment]) -> list[LearningSegment]:
    """Drop majority-label segments from instances that offer both labels,
    never past the point of balance. The label gap |count(1) - count(0)|
    never increases relative to keeping everything."""
    counts = {0: 0, 1: 0}
    for seg in segments:
        counts[seg.label] += 1
    per_instance = group_by_instance(segments)
    kept = []
    for eid in sorted(per_instance, key=lambda e: (str(type(e)), e)):
        instance_segments = per_instance[eid]
        labels_offered = {seg.label for seg in instance_segments}
        for seg in instance_segments:
            other = 1 - seg.label
            if labels_offered == {0, 1} and counts[seg.label] > counts[other]:
                counts[seg.label] -= 1
                continue
            kept.append(seg)
    return kept


class Segmenter(Estimator):
    """Transformer from label tuples to learning segments.

    ``fit`` binds the EntitySet (needed to resolve per-instance start times
    and relative durations); ``transform`` maps labels to segments.
    """

    def __init__(
        self,
        target,
        lead=0,
        lag=None,
        anchor="cutoff_minus_lead",
        gap_ms=0,
        mode="multiple",
        balance=False,
        seed=0,
    ):
        self.target = target
        self.lead = lead
        self.lag = lag
        self.anchor = anchor
        self.gap_ms = gap_ms
        self.mode = mode
        self.balance = balance
        self.seed = seed

    def spec(self) -> SegmentSpec:
        return SegmentSpec(
            lead=self.lead,
            lag=self.lag,
            anchor=self.anchor,
            gap_ms=self.gap_ms,
            mode=self.mode,
            balance=self.balance,
            seed=self.seed,
        )

    def fit(self, es: EntitySet, y=None):
        self.es_ = es
        return self

    def transform(self, labels: Sequence[LabelTuple]) -> list[LearningSegment]:
        spec = self.spec()
        segments = extract_segments(labels, spec, self.es_, self.target)
        if spec.balance:
            segments = balance_classes(segments)
        if spec.mode in ("single_first", "single_random"):
            strategy = "first" if spec.mode == "single_first" else "random"
            segments = select_single(group_by_instance(segments), strategy, spec.seed)
        return segments

    def fit_transform(self, es: EntitySet, labels) -> list[LearningSegment]:
        return self.fit(es).transform(labels)
