import json

import pytest
from fastapi.testclient import TestClient

from predcraft.errors import StateViolation
from predcraft.modeling import ModelSpec, ScoredModel
from predcraft.service import (
    EventLog,
    PrecomputeStore,
    ServiceState,
    allowed_transition,
    assign_group,
    create_app,
)

import random

PROBLEM = "users-0-0-0"
OTHER_PROBLEM = "users-1-1-1"

RF_SPEC = ModelSpec("random_forest", (("n_estimators", 10), ("max_depth", 3)))
SVM_SPEC = ModelSpec("linear_svm", (("C", 1), ("loss", "hinge")))
MLP_SPEC = ModelSpec(
    "mlp",
    (("solver", "adam"), ("activation", "relu"),
     ("hidden_layer_sizes", (50, 50)), ("alpha", 0.01)),
)


def fabricated_store():
    store = PrecomputeStore()
    for problem in (PROBLEM, OTHER_PROBLEM):
        store.add(problem, ScoredModel(
            spec=RF_SPEC, f1=0.5, auc=0.62, accuracy=0.7,
            importances=[("orders.count", 0.8), ("orders.mean(n_items)", 0.2)],
        ))
        store.add(problem, ScoredModel(
            spec=SVM_SPEC, f1=0.55, auc=0.7, accuracy=0.72,
            importances=[("orders.count", 1.4)],
        ))
        store.add(problem, ScoredModel(
            spec=MLP_SPEC, f1=0.6, auc=0.66, accuracy=0.71, importances=None,
        ))
    return store


@pytest.fixture()
def client(tmp_path):
    app = create_app(
        store=fabricated_store(),
        log_path=tmp_path / "events.jsonl",
        seed=0,
    )
    return TestClient(app)


def new_session(client, role=None):
    sid = client.post("/session").json()["id"]
    if role:
        client.post(f"/session/{sid}/role", json={"role": role})
    return sid


def creator_in_task(client, task="W", group=None):
    """Create sessions until one lands in the wanted group, then walk it to
    the target task."""
    while True:
        sid = new_session(client, "create")
        got = client.get(f"/session/{sid}").json()["group"]
        if group is None or got == group:
            break
    walk = {"S": ["S"], "L": ["S", "L"], "W": ["S", "L", "W"]}[task]
    for i, step in enumerate(walk):
        client.post(
            "/telemetry/activity",
            json={"session": sid, "task": step, "timestamp": i * 1000},
        )
    return sid


def submit_report(client, sid, problem=PROBLEM, auto=True, spec_id=None):
    body = {"session": sid, "problem_id": problem, "narrative": "fund this", "auto": auto}
    if spec_id:
        body["spec_id"] = spec_id
        body["auto"] = False
    return client.post("/reports", json=body)


TEN_WORDS = "one two three four five six seven eight nine ten"


class TestSessions:
    def test_create_and_fetch(self, client):
        sid = new_session(client)
        body = client.get(f"/session/{sid}").json()
        assert body["role"] == "unassigned"
        assert body["group"] == "none"

    def test_role_assignment_gives_group(self, client):
        sid = new_session(client, "create")
        assert client.get(f"/session/{sid}").json()["group"] in "ABC"

    def test_judge_gets_no_group(self, client):
        sid = new_session(client, "judge")
        assert client.get(f"/session/{sid}").json()["group"] == "none"

    def test_judge_cannot_become_creator(self, client):
        sid = new_session(client, "judge")
        resp = client.post(f"/session/{sid}/role", json={"role": "create"})
        assert resp.status_code == 409
        assert resp.json()["code"] == "StateViolation"

    def test_creator_needs_two_submissions_to_judge(self, client):
        sid = creator_in_task(client, "W")
        assert client.post(f"/session/{sid}/role", json={"role": "judge"}).status_code == 409
        submit_report(client, sid)
        assert client.post(f"/session/{sid}/role", json={"role": "judge"}).status_code == 409
        submit_report(client, sid, problem=OTHER_PROBLEM)
        assert client.post(f"/session/{sid}/role", json={"role": "judge"}).status_code == 200

    def test_survey_stored(self, client):
        sid = new_session(client)
        client.post(f"/session/{sid}/survey", json={"answers": {"job": "analyst"}})
        assert client.get(f"/session/{sid}").json()["survey"] == {"job": "analyst"}

    def test_group_sizes_stay_even(self, client):
        for _ in range(9):
            new_session(client, "create")
        sizes = {"A": 0, "B": 0, "C": 0}
        state = client.app.state.service_state
        for session in state.sessions.values():
            if session.group in sizes:
                sizes[session.group] += 1
        assert sizes == {"A": 3, "B": 3, "C": 3}


class TestTransitions:
    def test_group_a_cannot_return_to_specify(self, client):
        sid = creator_in_task(client, "L", group="A")
        resp = client.post(
            "/telemetry/activity", json={"session": sid, "task": "S", "timestamp": 99_000}
        )
        assert resp.status_code == 409
        assert "A" in resp.json()["message"]

    def test_group_b_free_movement(self, client):
        sid = creator_in_task(client, "W", group="B")
        resp = client.post(
            "/telemetry/activity", json={"session": sid, "task": "S", "timestamp": 99_000}
        )
        assert resp.status_code == 200

    def test_group_c_specify_to_write(self, client):
        sid = creator_in_task(client, "S", group="C")
        resp = client.post(
            "/telemetry/activity", json={"session": sid, "task": "W", "timestamp": 99_000}
        )
        assert resp.status_code == 200

    def test_transition_table(self):
        assert allowed_transition("A", "S", "L")
        assert allowed_transition("A", "L", "W")
        assert allowed_transition("A", "W", "L")
        assert not allowed_transition("A", "L", "S")
        assert not allowed_transition("A", "W", "S")
        assert not allowed_transition("A", "S", "W")
        for frm in "SLW":
            for to in "SLW":
                assert allowed_transition("B", frm, to)
                assert allowed_transition("C", frm, to)


class TestTimers:
    def test_simple_accumulation(self, client):
        sid = creator_in_task(client, "W", group="B")
        t0 = 100_000
        client.post("/telemetry/activity", json={"session": sid, "task": "W", "timestamp": t0})
        resp = client.post(
            "/telemetry/activity", json={"session": sid, "task": "W", "timestamp": t0 + 10_000}
        )
        assert resp.json()["timers"]["W"] >= 10_000

    def test_45s_gap_excluded(self, client):
        sid = new_session(client, "create")
        client.post("/telemetry/activity", json={"session": sid, "task": "S", "timestamp": 0})
        resp = client.post(
            "/telemetry/activity", json={"session": sid, "task": "S", "timestamp": 45_000}
        )
        assert resp.json()["timers"] == {"S": 0, "L": 0, "W": 0}

    def test_task_split_sums_to_total(self, client):
        sid = new_session(client, "create")
        trace = [
            ("S", 0), ("S", 10_000),
            ("L", 10_000), ("L", 30_000),
            ("W", 30_000), ("W", 60_000),
        ]
        for task, ts in trace:
            client.post(
                "/telemetry/activity", json={"session": sid, "task": task, "timestamp": ts}
            )
        timers = client.get(f"/session/{sid}").json()["timers"]
        assert timers == {"S": 10_000, "L": 20_000, "W": 30_000}
        assert sum(timers.values()) == 60_000

    def test_clock_error(self, client):
        sid = new_session(client, "create")
        client.post("/telemetry/activity", json={"session": sid, "task": "S", "timestamp": 50})
        resp = client.post(
            "/telemetry/activity", json={"session": sid, "task": "S", "timestamp": 10}
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "ClockError"


class TestModels:
    def test_lookup(self, client):
        resp = client.get(f"/models/{PROBLEM}", params={"spec": RF_SPEC.spec_id})
        assert resp.status_code == 200
        assert resp.json()["metrics"]["auc"] == 0.62

    def test_auto_is_median_by_auc(self, client):
        resp = client.get(f"/models/{PROBLEM}/auto")
        # aucs 0.62, 0.7, 0.66 -> median 0.66 (the MLP cell)
        assert resp.json()["spec_id"] == MLP_SPEC.spec_id
        assert resp.json()["importances"] is None

    def test_not_precomputed(self, client):
        resp = client.get("/models/users-9-9-9", params={"spec": RF_SPEC.spec_id})
        assert resp.status_code == 404
        assert resp.json()["code"] == "NotPrecomputed"

    def test_problem_catalog(self, client):
        body = client.get("/problems").json()
        assert len(body["problems"]) == 56
        users = next(t for t in body["templates"] if t["id"] == "users")
        assert [len(s["options"]) for s in users["slots"]] == [3, 4, 2]

    def test_sentence_endpoint(self, client):
        resp = client.get(f"/problems/{OTHER_PROBLEM}/sentence")
        assert resp.json()["sentence"] == (
            "Predict if a user will make an order of more than 5 items "
            "in the next 30 days."
        )


class TestReports:
    def test_submit_from_w_task(self, client):
        sid = creator_in_task(client, "W")
        resp = submit_report(client, sid)
        assert resp.status_code == 200
        assert resp.json()["used_auto_model"] is True

    def test_reject_outside_w_task(self, client):
        sid = creator_in_task(client, "L")
        resp = submit_report(client, sid)
        assert resp.status_code == 409

    def test_judge_cannot_submit(self, client):
        sid = new_session(client, "judge")
        resp = submit_report(client, sid)
        assert resp.status_code == 403

    def test_group_b_must_use_auto(self, client):
        sid = creator_in_task(client, "W", group="B")
        resp = submit_report(client, sid, auto=False, spec_id=RF_SPEC.spec_id)
        assert resp.status_code == 403
        assert submit_report(client, sid, auto=True).status_code == 200

    def test_group_a_may_not_use_auto(self, client):
        sid = creator_in_task(client, "W", group="A")
        assert submit_report(client, sid, auto=True).status_code == 403
        resp = submit_report(client, sid, auto=False, spec_id=RF_SPEC.spec_id)
        assert resp.status_code == 200

    def test_group_c_may_choose(self, client):
        sid = creator_in_task(client, "W", group="C")
        assert submit_report(client, sid, auto=True).status_code == 200
        assert submit_report(
            client, sid, problem=OTHER_PROBLEM, auto=False, spec_id=RF_SPEC.spec_id
        ).status_code == 200

    def test_mlp_report_has_no_features(self, client):
        sid = creator_in_task(client, "W", group="C")
        resp = submit_report(client, sid, auto=False, spec_id=MLP_SPEC.spec_id)
        assert resp.json()["top_features"] is None

    def test_manual_report_records_features(self, client):
        sid = creator_in_task(client, "W", group="C")
        resp = submit_report(client, sid, auto=False, spec_id=RF_SPEC.spec_id)
        features = resp.json()["top_features"]
        assert features and len(features) <= 10

    def test_unknown_model_rejected(self, client):
        sid = creator_in_task(client, "W", group="C")
        resp = submit_report(client, sid, auto=False, spec_id="random_forest:999-1")
        assert resp.status_code == 404


class TestJudging:
    def seed_reports(self, client, n=3):
        sids = []
        for i in range(n):
            sid = creator_in_task(client, "W")
            submit_report(client, sid, problem=PROBLEM if i % 2 else OTHER_PROBLEM)
            sids.append(sid)
        return sids

    def test_next_pair_and_vote_flow(self, client):
        self.seed_reports(client)
        judge = new_session(client, "judge")
        pair = client.get("/judge/next", params={"session": judge}).json()
        resp = client.post(
            "/votes",
            json={
                "session": judge,
                "report_a": pair["report_a"]["id"],
                "report_b": pair["report_b"]["id"],
                "winner": "a",
                "explanation": TEN_WORDS,
            },
        )
        assert resp.status_code == 200
        rankings = client.get("/rankings").json()
        winner_author = pair["report_a"]["author"]
        assert rankings["ratings"][winner_author] == 516.0

    def test_judge_never_sees_own_report(self, client):
        author = creator_in_task(client, "W")
        submit_report(client, author)
        submit_report(client, author, problem=OTHER_PROBLEM)
        self.seed_reports(client, 2)
        client.post(f"/session/{author}/role", json={"role": "judge"})
        for _ in range(25):
            resp = client.get("/judge/next", params={"session": author})
            if resp.status_code == 404:
                break
            pair = resp.json()
            assert pair["report_a"]["author"] != author
            assert pair["report_b"]["author"] != author
            client.post(
                "/votes",
                json={
                    "session": author,
                    "report_a": pair["report_a"]["id"],
                    "report_b": pair["report_b"]["id"],
                    "winner": "b",
                    "explanation": TEN_WORDS,
                },
            )

    @pytest.mark.parametrize("words,status", [(9, 422), (10, 200), (100, 200), (101, 422)])
    def test_word_count_boundaries(self, client, words, status):
        self.seed_reports(client, 2)
        judge = new_session(client, "judge")
        pair = client.get("/judge/next", params={"session": judge}).json()
        resp = client.post(
            "/votes",
            json={
                "session": judge,
                "report_a": pair["report_a"]["id"],
                "report_b": pair["report_b"]["id"],
                "winner": "a",
                "explanation": " ".join(["word"] * words),
            },
        )
        assert resp.status_code == status

    def test_exhausted(self, client):
        judge = new_session(client, "judge")
        resp = client.get("/judge/next", params={"session": judge})
        assert resp.status_code == 404
        assert resp.json()["code"] == "Exhausted"

    def test_head_to_head_endpoint(self, client):
        self.seed_reports(client, 4)
        judge = new_session(client, "judge")
        pair = client.get("/judge/next", params={"session": judge}).json()
        client.post(
            "/votes",
            json={
                "session": judge,
                "report_a": pair["report_a"]["id"],
                "report_b": pair["report_b"]["id"],
                "winner": "a",
                "explanation": TEN_WORDS,
            },
        )
        body = client.get("/head-to-head").json()
        assert set(body) == {"A vs B", "A vs C", "B vs C"}
        total = sum(cell["total"] for cell in body.values())
        groups = {
            client.app.state.service_state.reports[rid].group
            for rid in (pair["report_a"]["id"], pair["report_b"]["id"])
        }
        assert total == (1 if len(groups) == 2 else 0)


class TestReplay:
    def test_event_log_replay_reconstructs_state(self, client, tmp_path):
        # drive a realistic mixed workload through the API
        creators = [creator_in_task(client, "W") for _ in range(3)]
        for i, sid in enumerate(creators):
            submit_report(client, sid, problem=PROBLEM if i % 2 else OTHER_PROBLEM)
        judge = new_session(client, "judge")
        pair = client.get("/judge/next", params={"session": judge}).json()
        client.post(
            "/votes",
            json={
                "session": judge,
                "report_a": pair["report_a"]["id"],
                "report_b": pair["report_b"]["id"],
                "winner": "b",
                "explanation": TEN_WORDS,
            },
        )
        state = client.app.state.service_state
        log_path = state.log.path
        replayed = ServiceState(EventLog(log_path), seed=0)
        original = json.dumps(state.to_json(), sort_keys=True)
        rebuilt = json.dumps(replayed.to_json(), sort_keys=True)
        assert original == rebuilt


class TestAssignGroup:
    def test_unique_minimum(self):
        rng = random.Random(0)
        assert assign_group({"A": 2, "B": 1, "C": 2}, rng) == "B"

    def test_tie_uniform_seeded(self):
        counts = {"A": 0, "B": 0, "C": 0}
        rng = random.Random(42)
        for _ in range(300):
            counts[assign_group({"A": 0, "B": 0, "C": 0}, rng)] += 1
        assert all(v > 50 for v in counts.values())

    def test_spread_stays_within_one(self):
        rng = random.Random(7)
        sizes = {"A": 0, "B": 0, "C": 0}
        for _ in range(1000):
            sizes[assign_group(sizes, rng)] += 1
            assert max(sizes.values()) - min(sizes.values()) <= 1
