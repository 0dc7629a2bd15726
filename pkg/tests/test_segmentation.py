import random

import pytest

from predcraft.errors import SchemaError
from predcraft.labeling import LabelTuple
from predcraft.segmentation import (
    LearningSegment,
    Segmenter,
    SegmentSpec,
    balance_classes,
    candidate_segments,
    extract_segments,
    greedy_nonoverlap,
    group_by_instance,
    resolve_units,
    select_single,
)

from conftest import build_event_es


def es_with_times(times, eid=1):
    return build_event_es({eid: [{"t": t} for t in times]})


class TestResolveUnits:
    def test_before_spans_two_events(self):
        es = es_with_times([0, 10, 20, 30])
        assert resolve_units(2, es, "users", 1, reference=30, direction="before") == 20

    def test_zero_events(self):
        es = es_with_times([0, 10])
        assert resolve_units(0, es, "users", 1, reference=10, direction="before") == 0

    def test_reference_before_all_events(self):
        es = es_with_times([50, 60])
        assert resolve_units(3, es, "users", 1, reference=10, direction="before") == 0

    def test_fewer_events_than_requested(self):
        es = es_with_times([20, 30])
        assert resolve_units(5, es, "users", 1, reference=40, direction="before") == 20


class TestExtract:
    def test_cutoff_minus_lead_arithmetic(self):
        es = es_with_times([60, 80, 100])
        spec = SegmentSpec(lead=0, lag=40, anchor="cutoff_minus_lead")
        out = extract_segments([LabelTuple(1, 100, 1)], spec, es, "users")
        assert out == [LearningSegment(1, 60, 100, 1)]

    def test_greedy_rejects_overlap(self):
        es = es_with_times([0, 60, 160])
        spec = SegmentSpec(lead=0, lag=40, anchor="cutoff_minus_lead", gap_ms=0)
        labels = [LabelTuple(1, 100, 1), LabelTuple(1, 110, 0), LabelTuple(1, 200, 1)]
        out = extract_segments(labels, spec, es, "users")
        assert [(s.t_start, s.t_stop) for s in out] == [(60, 100), (160, 200)]

    def test_huge_gap_keeps_only_first(self):
        es = es_with_times([0, 60, 160])
        spec = SegmentSpec(lead=0, lag=40, anchor="cutoff_minus_lead", gap_ms=10_000)
        labels = [LabelTuple(1, 100, 1), LabelTuple(1, 200, 1), LabelTuple(1, 300, 1)]
        assert len(extract_segments(labels, spec, es, "users")) == 1

    def test_lead_shifts_stop(self):
        es = es_with_times([0, 50, 100])
        spec = SegmentSpec(lead=25, lag=50, anchor="cutoff_minus_lead")
        out = extract_segments([LabelTuple(1, 100, 1)], spec, es, "users")
        assert out == [LearningSegment(1, 25, 75, 1)]

    def test_lag_clipped_to_instance_start(self):
        es = es_with_times([40, 100])
        spec = SegmentSpec(lead=0, lag=500, anchor="cutoff_minus_lead")
        out = extract_segments([LabelTuple(1, 100, 1)], spec, es, "users")
        assert out == [LearningSegment(1, 40, 100, 1)]

    def test_instance_start_anchor_caps_stop(self):
        es = es_with_times([0, 50, 200])
        spec = SegmentSpec(lead=0, lag=80, anchor="instance_start")
        out = extract_segments([LabelTuple(1, 200, 1)], spec, es, "users")
        assert out == [LearningSegment(1, 0, 80, 1)]

    def test_fixed_anchor_before_start_dropped(self):
        es = es_with_times([50, 100])
        spec = SegmentSpec(lead=0, lag=30, anchor=("fixed", 10))
        assert extract_segments([LabelTuple(1, 100, 1)], spec, es, "users") == []

    def test_inverted_candidate_dropped(self):
        es = es_with_times([0, 100])
        spec = SegmentSpec(lead=200, lag=40, anchor="cutoff_minus_lead")
        assert extract_segments([LabelTuple(1, 100, 1)], spec, es, "users") == []

    def test_relative_lead(self):
        es = es_with_times([0, 10, 20, 30, 40])
        spec = SegmentSpec(lead=("events", 2), lag=10, anchor="cutoff_minus_lead")
        out = extract_segments([LabelTuple(1, 40, 1)], spec, es, "users")
        # lead spans events at 20 and 30, so t_stop = 40 - 20 = 20
        assert out == [LearningSegment(1, 10, 20, 1)]


class TestSelectSingle:
    def segments(self):
        return {
            1: [LearningSegment(1, 60, 100, 1), LearningSegment(1, 160, 200, 0)],
            2: [LearningSegment(2, 0, 50, 1)],
            3: [],
        }

    def test_single_candidate_under_both_strategies(self):
        per_instance = {2: [LearningSegment(2, 0, 50, 1)]}
        first = select_single(per_instance, "first")
        rand = select_single(per_instance, "random", seed=5)
        assert first == rand == [LearningSegment(2, 0, 50, 1)]

    def test_first_takes_earliest_cutoff(self):
        out = select_single(self.segments(), "first")
        assert LearningSegment(1, 60, 100, 1) in out
        assert len(out) == 2  # instance 3 contributes nothing

    def test_random_deterministic(self):
        a = select_single(self.segments(), "random", seed=42)
        b = select_single(self.segments(), "random", seed=42)
        assert a == b

    def test_unknown_strategy(self):
        with pytest.raises(SchemaError):
            select_single({}, "last")


class TestBalance:
    def test_balanced_unchanged(self):
        segments = [
            LearningSegment(1, 0, 10, 1),
            LearningSegment(2, 0, 10, 0),
        ]
        assert balance_classes(segments) == segments

    def test_majority_dropped_from_mixed_instance(self):
        segments = [
            LearningSegment(1, 0, 10, 1),
            LearningSegment(1, 20, 30, 0),
            LearningSegment(2, 0, 10, 1),
            LearningSegment(3, 0, 10, 1),
        ]
        out = balance_classes(segments)
        kept_1 = [s for s in out if s.eid == 1]
        assert kept_1 == [LearningSegment(1, 20, 30, 0)]
        assert len(out) == 3

    def test_single_class_unchanged(self):
        segments = [LearningSegment(i, 0, 10, 1) for i in range(4)]
        assert balance_classes(segments) == segments

    def test_gap_never_grows(self):
        rng = random.Random(7)
        for _ in range(100):
            segments = []
            for eid in range(rng.randint(1, 8)):
                for j in range(rng.randint(0, 5)):
                    segments.append(LearningSegment(eid, j * 10, j * 10 + 5, rng.randint(0, 1)))
            def gap(segs):
                ones = sum(1 for s in segs if s.label == 1)
                return abs(ones - (len(segs) - ones))
            assert gap(balance_classes(segments)) <= gap(segments)


def reference_greedy(candidates, gap_ms):
    """Independent scan with an explicit last-stop register."""
    accepted = []
    last_stop = float("-inf")
    for seg in candidates:
        if seg.t_start >= last_stop + gap_ms or not accepted:
            accepted.append(seg)
            last_stop = seg.t_stop
    return accepted


class TestInvariants:
    def random_case(self, rng):
        times = sorted(rng.sample(range(0, 400), rng.randint(2, 20)))
        es = es_with_times(times)
        t_s = times[0]
        labels = [
            LabelTuple(1, t_s + i * rng.randint(5, 40), rng.randint(0, 1))
            for i in range(rng.randint(1, 8))
        ]
        spec = SegmentSpec(
            lead=rng.randint(0, 30),
            lag=rng.randint(1, 80),
            anchor="cutoff_minus_lead",
            gap_ms=rng.randint(0, 30),
        )
        return es, labels, spec, t_s

    def test_leakage_bound_and_nonoverlap(self):
        rng = random.Random(11)
        for _ in range(200):
            es, labels, spec, t_s = self.random_case(rng)
            out = extract_segments(labels, spec, es, "users")
            stops = {lt.t_c: lt.t_c - spec.lead for lt in labels}
            for seg in out:
                assert seg.t_stop in stops.values()
                assert seg.t_start >= t_s
            for earlier, later in zip(out, out[1:]):
                assert later.t_start >= earlier.t_stop + spec.gap_ms

    def test_segment_length_formula(self):
        rng = random.Random(13)
        for _ in range(200):
            es, labels, spec, t_s = self.random_case(rng)
            out = extract_segments(labels, spec, es, "users")
            for seg in out:
                t_c = seg.t_stop + spec.lead
                assert seg.t_stop - seg.t_start == min(spec.lag, t_c - spec.lead - t_s)

    def test_greedy_matches_reference(self):
        rng = random.Random(17)
        for _ in range(300):
            es, labels, spec, _ = self.random_case(rng)
            candidates = candidate_segments(labels, spec, es, "users")[1]
            assert greedy_nonoverlap(candidates, spec.gap_ms) == reference_greedy(
                candidates, spec.gap_ms
            )


class TestSegmenterEstimator:
    def test_pipeline_modes(self):
        es = es_with_times([0, 50, 100, 150, 200])
        labels = [LabelTuple(1, t, lbl) for t, lbl in [(50, 1), (100, 0), (200, 1)]]
        seg = Segmenter("users", lag=40, anchor="cutoff_minus_lead", mode="single_first")
        out = seg.fit(es).transform(labels)
        assert len(out) == 1 and out[0].t_stop == 50

    def test_get_params(self):
        seg = Segmenter("users", lag=40)
        assert seg.get_params()["lag"] == 40
        seg.set_params(gap_ms=5)
        assert seg.gap_ms == 5

    def test_spec_round_trip(self):
        spec = SegmentSpec(lead=("events", 2), lag=100, anchor=("fixed", 50),
                           gap_ms=3, mode="single_random", balance=True, seed=9)
        assert SegmentSpec.from_json(spec.to_json()) == spec

    def test_invalid_specs(self):
        with pytest.raises(SchemaError):
            SegmentSpec(lead=-1)
        with pytest.raises(SchemaError):
            SegmentSpec(lag=0)
        with pytest.raises(SchemaError):
            SegmentSpec(gap_ms=-2)
        with pytest.raises(SchemaError):
            SegmentSpec(mode="best")


def test_group_by_instance_preserves_order():
    segments = [
        LearningSegment(2, 0, 10, 1),
        LearningSegment(1, 0, 10, 1),
        LearningSegment(2, 20, 30, 0),
    ]
    grouped = group_by_instance(segments)
    assert [s.t_start for s in grouped[2]] == [0, 20]
