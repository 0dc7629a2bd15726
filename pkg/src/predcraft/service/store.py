"""Read-only store of precomputed scored models, keyed by problem and spec."""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import NotPrecomputed
from ..modeling import ScoredModel, auto_select


class PrecomputeStore:
    """(problem id, spec id) -> ScoredModel, preserving per-problem grid
    order so auto lookup matches grid-order tie-breaking."""

    def __init__(self):
        self._cells: dict = {}
        self._by_problem: dict = {}

    def add(self, problem_id: str, scored: ScoredModel) -> None:
        key = (problem_id, scored.spec.spec_id)
        if key not in self._cells:
            self._by_problem.setdefault(problem_id, []).append(scored)
        self._cells[key] = scored

    def problems(self) -> list:
        return sorted(self._by_problem)

    def specs_for(self, problem_id: str) -> list:
        return [s.spec.spec_id for s in self._by_problem.get(problem_id, [])]

    def lookup(self, problem_id: str, spec_id: str) -> ScoredModel:
        try:
            return self._cells[(problem_id, spec_id)]
        except KeyError:
            raise NotPrecomputed(
                f"no precomputed cell for problem {problem_id!r}, spec {spec_id!r}"
            ) from None

    def auto_lookup(self, problem_id: str) -> ScoredModel:
        cells = self._by_problem.get(problem_id)
        if not cells:
            raise NotPrecomputed(f"no precomputed grid for problem {problem_id!r}")
        return auto_select(cells)

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for problem_id, cells in sorted(self._by_problem.items()):
                for scored in cells:
                    record = {"problem_id": problem_id, **scored.to_json()}
                    fh.write(json.dumps(record, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "PrecomputeStore":
        store = cls()
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = json.loads(line)
            problem_id = record.pop("problem_id")
            store.add(problem_id, ScoredModel.from_json(record))
        return store
