"""JSON-over-HTTP service wiring.

Exposes sessions, role and group assignment, the problem catalog,
precomputed model lookup, report submission, pairwise judging, rankings,
and activity telemetry. All error responses carry {"code", "message"}.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from ..errors import (
    ClockError,
    Conflict,
    Exhausted,
    Forbidden,
    InvalidExplanation,
    InvalidGame,
    NotPrecomputed,
    PredcraftError,
    SchemaError,
    StateViolation,
)
from ..judging import DEFAULT_K
from ..problemspace import enumerate_problems, load_templates, render_sentence
from .events import EventLog
from .state import ServiceState
from .store import PrecomputeStore

STATUS = {
    Forbidden: 403,
    StateViolation: 409,
    Conflict: 409,
    ClockError: 400,
    SchemaError: 400,
    InvalidExplanation: 422,
    InvalidGame: 422,
    NotPrecomputed: 404,
    Exhausted: 404,
}


class RoleBody(BaseModel):
    role: str


class SurveyBody(BaseModel):
    answers: dict


class ActivityBody(BaseModel):
    session: str
    task: str
    timestamp: int


class ReportBody(BaseModel):
    session: str
    problem_id: str
    narrative: str = ""
    spec_id: Optional[str] = None
    auto: bool = False


class VoteBody(BaseModel):
    session: str
    report_a: str
    report_b: str
    winner: str
    explanation: str
    id: Optional[str] = None


def _scored_json(problem_id: str, scored) -> dict:
    return {
        "problem_id": problem_id,
        "spec_id": scored.spec.spec_id,
        "family": scored.spec.family,
        "hyperparameters": scored.spec.params,
        "metrics": {"f1": scored.f1, "auc": scored.auc, "accuracy": scored.accuracy},
        "importances": scored.importances,
    }


def create_app(
    store: Optional[PrecomputeStore] = None,
    templates_path=None,
    log_path=None,
    seed: int = 0,
) -> FastAPI:
    app = FastAPI(title="predcraft service")
    state = ServiceState(EventLog(log_path), seed=seed)
    store = store or PrecomputeStore()
    templates = load_templates(templates_path)
    definitions = {d.problem_id: d for d in enumerate_problems(templates)}
    lock = threading.Lock()

    app.state.service_state = state
    app.state.store = store

    @app.exception_handler(PredcraftError)
    async def _domain_error(request: Request, exc: PredcraftError):
        status = next(
            (code for cls, code in STATUS.items() if isinstance(exc, cls)), 400
        )
        return JSONResponse(
            status_code=status,
            content={"code": type(exc).__name__, "message": str(exc)},
        )

    @app.post("/session")
    def create_session():
        with lock:
            session = state.create_session()
        return session.to_json()

    @app.post("/session/{session_id}/role")
    def assign_role(session_id: str, body: RoleBody):
        with lock:
            state.assign_role(session_id, body.role)
            return state.session(session_id).to_json()

    @app.post("/session/{session_id}/survey")
    def submit_survey(session_id: str, body: SurveyBody):
        with lock:
            return state.submit_survey(session_id, body.answers).to_json()

    @app.get("/session/{session_id}")
    def get_session(session_id: str):
        with lock:
            return state.session(session_id).to_json()

    @app.get("/problems")
    def problems():
        return {
            "templates": [
                {
                    "id": t.id,
                    "entity": t.entity,
                    "sentence": t.sentence,
                    "slots": [
                        {
                            "name": slot.name,
                            "options": [o.display for o in slot.options],
                        }
                        for slot in t.slots
                    ],
                }
                for t in templates
            ],
            "problems": [
                {
                    "id": d.problem_id,
                    "entity": d.entity,
                    "template": d.template.id,
                    "choices": list(d.choices),
                    "sentence": render_sentence(d),
                }
                for d in definitions.values()
            ],
        }

    @app.get("/problems/{problem_id}/sentence")
    def problem_sentence(problem_id: str):
        definition = definitions.get(problem_id)
        if definition is None:
            raise NotPrecomputed(f"unknown problem {problem_id!r}")
        return {"id": problem_id, "sentence": render_sentence(definition)}

    @app.get("/models/{problem_id}/auto")
    def auto_model(problem_id: str):
        scored = store.auto_lookup(problem_id)
        return {**_scored_json(problem_id, scored), "auto": True}

    @app.get("/models/{problem_id}")
    def model_lookup(problem_id: str, spec: str):
        return _scored_json(problem_id, store.lookup(problem_id, spec))

    @app.post("/reports")
    def submit_report(body: ReportBody):
        definition = definitions.get(body.problem_id)
        if definition is None:
            raise NotPrecomputed(f"unknown problem {body.problem_id!r}")
        if body.auto:
            scored = store.auto_lookup(body.problem_id)
        elif body.spec_id:
            scored = store.lookup(body.problem_id, body.spec_id)
        else:
            raise StateViolation("a report must reference a spec or the auto model")
        with lock:
            report = state.submit_report(
                session_id=body.session,
                problem_id=body.problem_id,
                sentence=render_sentence(definition),
                narrative=body.narrative,
                metrics={
                    "f1": scored.f1,
                    "auc": scored.auc,
                    "accuracy": scored.accuracy,
                },
                top_features=scored.importances,
                used_auto_model=body.auto,
            )
        return report.to_json()

    @app.get("/judge/next")
    def judge_next(session: str):
        with lock:
            a, b = state.judge_pair(session)
        return {"report_a": a.to_json(), "report_b": b.to_json()}

    @app.post("/votes")
    def submit_vote(body: VoteBody):
        with lock:
            vote = state.submit_vote(
                session_id=body.session,
                report_a=body.report_a,
                report_b=body.report_b,
                winner=body.winner,
                explanation=body.explanation,
                vote_id=body.id,
            )
        return vote.to_json()

    @app.get("/rankings")
    def rankings(k: float = DEFAULT_K):
        with lock:
            return state.rankings(k=k)

    @app.get("/head-to-head")
    def head_to_head_table():
        with lock:
            return state.head_to_head()

    @app.post("/telemetry/activity")
    def telemetry(body: ActivityBody):
        with lock:
            session = state.record_activity(body.session, body.task, body.timestamp)
        return {"session": session.id, "timers": dict(session.timers)}

    return app
