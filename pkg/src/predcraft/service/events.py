"""Append-only JSONL event log.

Every state mutation of the service is one event line; replaying the log
rebuilds identical state. Events are serialized with sorted keys so the log
itself is byte-deterministic for a given event sequence.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator, Optional


class EventLog:
    def __init__(self, path=None):
        self.path: Optional[Path] = Path(path) if path else None
        self.events: list[dict] = []
        if self.path and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self.events.append(json.loads(line))

    def append(self, event: dict) -> dict:
        event = {"seq": len(self.events) + 1, **event}
        self.events.append(event)
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
        return event

    def __iter__(self) -> Iterator[dict]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)
