"""Pairwise judging of model reports and Elo rankings over the vote log.

Judges see two reports at a time and fund one, with a short written
explanation (10 to 100 words). Every vote is a zero-sum game between the two
report authors; ratings start at 500, update with the standard expected-score
formula, and are floored at 100. Rankings are a pure fold over the
chronologically ordered vote log, so replaying the log always reproduces
identical ratings.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import Conflict, Exhausted, InvalidExplanation, InvalidGame

INITIAL_RATING = 500.0
RATING_FLOOR = 100.0
DEFAULT_K = 32.0
GROUPS = ("A", "B", "C")

MIN_EXPLANATION_WORDS = 10
MAX_EXPLANATION_WORDS = 100


@dataclass(frozen=True)
class Report:
    id: str
    author: str
    group: str
    sentence: str
    narrative: str
    metrics: dict  # {"f1", "auc", "accuracy"}
    top_features: Optional[list] = None  # absent for MLP models
    used_auto_model: bool = False
    created_at: int = 0

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "author": self.author,
            "group": self.group,
            "sentence": self.sentence,
            "narrative": self.narrative,
            "metrics": self.metrics,
            "top_features": self.top_features,
            "used_auto_model": self.used_auto_model,
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Report":
        top = data.get("top_features")
        return cls(
            id=data["id"],
            author=data["author"],
            group=data["group"],
            sentence=data["sentence"],
            narrative=data["narrative"],
            metrics=data["metrics"],
            top_features=[tuple(f) for f in top] if top else None,
            used_auto_model=bool(data.get("used_auto_model", False)),
            created_at=data.get("created_at", 0),
        )


@dataclass(frozen=True)
class Vote:
    id: str
    judge: str
    report_a: str
    report_b: str
    winner: str  # "a" or "b"
    explanation: str
    created_at: int

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "judge": self.judge,
            "report_a": self.report_a,
            "report_b": self.report_b,
            "winner": self.winner,
            "explanation": self.explanation,
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Vote":
        return cls(
            id=data["id"],
            judge=data["judge"],
            report_a=data["report_a"],
            report_b=data["report_b"],
            winner=data["winner"],
            explanation=data["explanation"],
            created_at=data["created_at"],
        )


def word_count(text: str) -> int:
    return len(text.split())


def validate_vote(vote: Vote, reports_by_id: dict) -> None:
    words = word_count(vote.explanation)
    if not MIN_EXPLANATION_WORDS <= words <= MAX_EXPLANATION_WORDS:
        raise InvalidExplanation(
            f"explanation must be {MIN_EXPLANATION_WORDS}-{MAX_EXPLANATION_WORDS} "
            f"words, got {words}"
        )
    if vote.winner not in ("a", "b"):
        raise InvalidGame(f"winner must be 'a' or 'b', got {vote.winner!r}")
    if vote.report_a == vote.report_b:
        raise InvalidGame("a vote needs two distinct reports")
    for rid in (vote.report_a, vote.report_b):
        report = reports_by_id.get(rid)
        if report is None:
            raise InvalidGame(f"unknown report {rid!r}")
        if report.author == vote.judge:
            raise Conflict(f"judge {vote.judge!r} authored report {rid!r}")


class VoteLog:
    """Append-only vote store, idempotent on vote id.

    Backed by a JSONL file when a path is given; one vote per line in
    strictly increasing timestamp order.
    """

    def __init__(self, path=None):
        self.path = Path(path) if path else None
        self.votes: list[Vote] = []
        self._ids: set = set()
        if self.path and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._append(Vote.from_json(json.loads(line)), persist=False)

    def _append(self, vote: Vote, persist: bool) -> None:
        if self.votes and vote.created_at <= self.votes[-1].created_at:
            raise InvalidGame(
                f"vote timestamps must strictly increase "
                f"({vote.created_at} after {self.votes[-1].created_at})"
            )
        self.votes.append(vote)
        self._ids.add(vote.id)
        if persist and self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(vote.to_json(), sort_keys=True) + "\n")

    def submit(self, vote: Vote, reports_by_id: dict) -> Vote:
        if vote.id in self._ids:
            return next(v for v in self.votes if v.id == vote.id)
        validate_vote(vote, reports_by_id)
        self._append(vote, persist=True)
        return vote


def next_pair(
    judge: str,
    reports: Sequence[Report],
    past_votes: Sequence[Vote],
    seed: int = 0,
) -> tuple[Report, Report]:
    """An unordered report pair the judge may vote on.

    Excludes the judge's own reports and pairs this judge already voted on;
    cross-group pairs are sampled with twice the weight of same-group pairs
    so head-to-head tables fill in.
    """
    eligible = sorted(
        (r for r in reports if r.author != judge), key=lambda r: r.id
    )
    seen = {
        frozenset((v.report_a, v.report_b))
        for v in past_votes
        if v.judge == judge
    }
    pairs = []
    weights = []
    for i in range(len(eligible)):
        for j in range(i + 1, len(eligible)):
            a, b = eligible[i], eligible[j]
            if frozenset((a.id, b.id)) in seen:
                continue
            pairs.append((a, b))
            weights.append(2.0 if a.group != b.group else 1.0)
    if not pairs:
        raise Exhausted(f"no unseen report pairs left for judge {judge!r}")
    rng = random.Random(seed)
    return rng.choices(pairs, weights=weights, k=1)[0]


def update_elo(
    ratings: dict,
    game: tuple,
    k: float = DEFAULT_K,
    floor: Optional[float] = RATING_FLOOR,
) -> dict:
    """One zero-sum game: winner gains k*(1 - expected), loser loses the
    same, then both are clamped to the floor. New players enter at 500."""
    winner, loser = game
    if winner == loser:
        raise InvalidGame("a player cannot beat themselves")
    out = dict(ratings)
    r_w = out.get(winner, INITIAL_RATING)
    r_l = out.get(loser, INITIAL_RATING)
    expected_w = 1.0 / (1.0 + 10.0 ** ((r_l - r_w) / 400.0))
    delta = k * (1.0 - expected_w)
    r_w += delta
    r_l -= delta
    if floor is not None:
        r_w = max(floor, r_w)
        r_l = max(floor, r_l)
    out[winner] = r_w
    out[loser] = r_l
    return out


def _stats(values: Sequence[float]) -> dict:
    arr = np.asarray(values, dtype=float)
    return {
        "min": float(arr.min()),
        "p25": float(np.percentile(arr, 25)),
        "mean": float(arr.mean()),
        "p75": float(np.percentile(arr, 75)),
        "max": float(arr.max()),
        "std": float(arr.std()),
    }


def compute_rankings(
    votes: Sequence[Vote],
    reports: Sequence[Report],
    k: float = DEFAULT_K,
    floor: Optional[float] = RATING_FLOOR,
) -> dict:
    """Fold the vote log chronologically into per-author ratings plus
    overall and per-group statistics."""
    by_id = {r.id: r for r in reports}
    group_of = {r.author: r.group for r in reports}
    ratings = {r.author: INITIAL_RATING for r in reports}
    for vote in sorted(votes, key=lambda v: v.created_at):
        won = vote.report_a if vote.winner == "a" else vote.report_b
        lost = vote.report_b if vote.winner == "a" else vote.report_a
        winner = by_id[won].author
        loser = by_id[lost].author
        if winner == loser:
            continue  # same author on both sides: no game
        ratings = update_elo(ratings, (winner, loser), k=k, floor=floor)

    groups: dict = {}
    for player, rating in ratings.items():
        groups.setdefault(group_of.get(player, "none"), []).append(rating)
    stats = {"overall": _stats(list(ratings.values()))} if ratings else {}
    for group in sorted(groups):
        stats[group] = _stats(groups[group])
    return {"ratings": ratings, "stats": stats}


def head_to_head(votes: Sequence[Vote], reports: Sequence[Report]) -> dict:
    """Win percentage of the first group for each cross-group pairing, plus
    vote totals; intra-group votes are excluded. Win % is None when a
    pairing has no votes."""
    by_id = {r.id: r for r in reports}
    tallies = {("A", "B"): [0, 0], ("A", "C"): [0, 0], ("B", "C"): [0, 0]}
    for vote in votes:
        a = by_id.get(vote.report_a)
        b = by_id.get(vote.report_b)
        if a is None or b is None or a.group == b.group:
            continue
        pair = tuple(sorted((a.group, b.group)))
        if pair not in tallies:
            continue
        winner_report = a if vote.winner == "a" else b
        wins_first = winner_report.group == pair[0]
        tallies[pair][0] += 1 if wins_first else 0
        tallies[pair][1] += 1
    out = {}
    for pair, (wins, total) in tallies.items():
        out[f"{pair[0]} vs {pair[1]}"] = {
            "win_pct": (100.0 * wins / total) if total else None,
            "total": total,
        }
    return out
