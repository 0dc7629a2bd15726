"""Event-sourced service state: sessions, task timers, reports, votes.

Handlers validate a request against current state, decide any randomness up
front, append one event to the log, and apply it. ``apply`` is a pure state
transition, so replaying a log reconstructs byte-identical state without
consulting the precompute store, the clock, or the random number generator.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass, field
from typing import Optional

from ..errors import (
    ClockError,
    Forbidden,
    InvalidGame,
    StateViolation,
)
from ..judging import (
    DEFAULT_K,
    Report,
    Vote,
    compute_rankings,
    head_to_head,
    next_pair,
    validate_vote,
)
from .events import EventLog

ROLES = ("unassigned", "create", "judge")
TASKS = ("S", "L", "W")
IDLE_CUTOFF_MS = 30_000

# Group A must settle the problem first: no path back to S.
GROUP_A_EDGES = {("S", "L"), ("L", "W"), ("W", "L")}
FREE_EDGES = {(a, b) for a in TASKS for b in TASKS if a != b}


def allowed_transition(group: str, from_task: str, to_task: str) -> bool:
    if from_task == to_task:
        return True
    edges = GROUP_A_EDGES if group == "A" else FREE_EDGES
    return (from_task, to_task) in edges


def assign_group(sizes: dict, rng: random.Random) -> str:
    """The group with minimal current size; ties drawn uniformly."""
    minimum = min(sizes.values())
    candidates = sorted(g for g, n in sizes.items() if n == minimum)
    return rng.choice(candidates)


@dataclass
class Session:
    id: str
    role: str = "unassigned"
    group: str = "none"
    submissions: int = 0
    survey: Optional[dict] = None
    current_task: str = "S"
    last_activity: Optional[int] = None
    timers: dict = field(default_factory=lambda: {"S": 0, "L": 0, "W": 0})

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "role": self.role,
            "group": self.group,
            "submissions": self.submissions,
            "survey": self.survey,
            "current_task": self.current_task,
            "last_activity": self.last_activity,
            "timers": dict(self.timers),
        }


class ServiceState:
    def __init__(self, log: Optional[EventLog] = None, seed: int = 0):
        self.log = log if log is not None else EventLog()
        self.seed = seed
        self._rng = random.Random(seed)
        self.sessions: dict[str, Session] = {}
        self.reports: dict[str, Report] = {}
        self.report_order: list[str] = []
        self.votes: list[Vote] = []
        self._vote_ids: set = set()
        for event in self.log:
            self.apply(event)

    # --- helpers ---

    def session(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise StateViolation(f"unknown session {session_id!r}") from None

    def group_sizes(self) -> dict:
        sizes = {"A": 0, "B": 0, "C": 0}
        for s in self.sessions.values():
            if s.group in sizes:
                sizes[s.group] += 1
        return sizes

    def ordered_reports(self) -> list[Report]:
        return [self.reports[rid] for rid in self.report_order]

    def to_json(self) -> dict:
        return {
            "sessions": {sid: s.to_json() for sid, s in sorted(self.sessions.items())},
            "reports": [self.reports[rid].to_json() for rid in self.report_order],
            "votes": [v.to_json() for v in self.votes],
        }

    # --- command handlers: validate, choose, log, apply ---

    def create_session(self) -> Session:
        session_id = f"u{len(self.sessions) + 1:04d}"
        event = self.log.append({"type": "session_created", "session": session_id})
        self.apply(event)
        return self.sessions[session_id]

    def assign_role(self, session_id: str, role: str) -> Session:
        session = self.session(session_id)
        if role not in ("create", "judge"):
            raise StateViolation(f"unknown role {role!r}")
        if session.role == role:
            return session
        if session.role == "judge":
            raise StateViolation("a judge cannot change roles")
        if session.role == "create":
            if role != "judge":
                raise StateViolation("creators may only switch to judging")
            if session.submissions < 2:
                raise StateViolation(
                    "switching to judge requires at least 2 submissions"
                )
        event = {"type": "role_assigned", "session": session_id, "role": role}
        if role == "create":
            event["group"] = assign_group(self.group_sizes(), self._rng)
        event = self.log.append(event)
        self.apply(event)
        return session

    def submit_survey(self, session_id: str, answers: dict) -> Session:
        self.session(session_id)
        event = self.log.append(
            {"type": "survey_submitted", "session": session_id, "answers": answers}
        )
        self.apply(event)
        return self.sessions[session_id]

    def record_activity(self, session_id: str, task: str, timestamp: int) -> Session:
        session = self.session(session_id)
        if task not in TASKS:
            raise StateViolation(f"unknown task {task!r}")
        if session.role != "create":
            raise Forbidden("task timers only exist for the create role")
        if session.last_activity is not None and timestamp < session.last_activity:
            raise ClockError(
                f"activity timestamp {timestamp} precedes {session.last_activity}"
            )
        if not allowed_transition(session.group, session.current_task, task):
            raise StateViolation(
                f"group {session.group} may not move {session.current_task} -> {task}"
            )
        event = self.log.append(
            {
                "type": "activity",
                "session": session_id,
                "task": task,
                "ts": timestamp,
            }
        )
        self.apply(event)
        return session

    def submit_report(
        self,
        session_id: str,
        problem_id: str,
        sentence: str,
        narrative: str,
        metrics: dict,
        top_features: Optional[list],
        used_auto_model: bool,
    ) -> Report:
        session = self.session(session_id)
        if session.role != "create":
            raise Forbidden("only the create role can submit reports")
        if session.current_task != "W":
            raise StateViolation("reports are submitted from the writing task")
        if session.group == "B" and not used_auto_model:
            raise Forbidden("group B always uses the automatic model")
        if session.group == "A" and used_auto_model:
            raise Forbidden("group A selects models by hand")
        report_id = f"r{len(self.reports) + 1:04d}"
        event = self.log.append(
            {
                "type": "report_submitted",
                "report": {
                    "id": report_id,
                    "author": session_id,
                    "group": session.group,
                    "sentence": sentence,
                    "narrative": narrative,
                    "metrics": metrics,
                    "top_features": top_features,
                    "used_auto_model": used_auto_model,
                    "created_at": len(self.log),
                    "problem_id": problem_id,
                },
            }
        )
        self.apply(event)
        return self.reports[report_id]

    def submit_vote(
        self,
        session_id: str,
        report_a: str,
        report_b: str,
        winner: str,
        explanation: str,
        vote_id: Optional[str] = None,
    ) -> Vote:
        session = self.session(session_id)
        if session.role != "judge":
            raise Forbidden("only the judge role can vote")
        vote_id = vote_id or f"v{len(self.votes) + 1:04d}"
        if vote_id in self._vote_ids:
            return next(v for v in self.votes if v.id == vote_id)
        vote = Vote(
            id=vote_id,
            judge=session_id,
            report_a=report_a,
            report_b=report_b,
            winner=winner,
            explanation=explanation,
            created_at=len(self.log) + 1,
        )
        validate_vote(vote, self.reports)
        event = self.log.append({"type": "vote_submitted", "vote": vote.to_json()})
        self.apply(event)
        return vote

    def judge_pair(self, session_id: str):
        session = self.session(session_id)
        if session.role != "judge":
            raise Forbidden("only the judge role sees report pairs")
        # stable across processes, varies with state so pairs rotate
        pair_seed = zlib.crc32(
            f"{self.seed}:{session_id}:{len(self.votes)}:{len(self.reports)}".encode()
        )
        return next_pair(session_id, self.ordered_reports(), self.votes, seed=pair_seed)

    def rankings(self, k: float = DEFAULT_K) -> dict:
        return compute_rankings(self.votes, self.ordered_reports(), k=k)

    def head_to_head(self) -> dict:
        return head_to_head(self.votes, self.ordered_reports())

    # --- pure event application ---

    def apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "session_created":
            sid = event["session"]
            self.sessions[sid] = Session(id=sid)
        elif kind == "role_assigned":
            session = self.sessions[event["session"]]
            session.role = event["role"]
            if "group" in event:
                session.group = event["group"]
        elif kind == "survey_submitted":
            self.sessions[event["session"]].survey = event["answers"]
        elif kind == "activity":
            session = self.sessions[event["session"]]
            ts = event["ts"]
            if session.last_activity is not None:
                gap = ts - session.last_activity
                if 0 <= gap <= IDLE_CUTOFF_MS:
                    session.timers[session.current_task] += gap
            session.current_task = event["task"]
            session.last_activity = ts
        elif kind == "report_submitted":
            payload = dict(event["report"])
            payload.pop("problem_id", None)
            report = Report.from_json(payload)
            self.reports[report.id] = report
            self.report_order.append(report.id)
            self.sessions[report.author].submissions += 1
        elif kind == "vote_submitted":
            vote = Vote.from_json(event["vote"])
            self.votes.append(vote)
            self._vote_ids.add(vote.id)
        else:
            raise InvalidGame(f"unknown event type {kind!r}")
