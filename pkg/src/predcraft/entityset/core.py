"""Multi-table temporal relational datasets.

An :class:`EntitySet` holds named tables linked by foreign-key relations.
Every table has a primary key; tables that describe events additionally carry
a time index measured in integer milliseconds from an arbitrary zero point.
Instances of a table are its rows; the event stream of an instance is the
union of all time-indexed rows reachable through child relations (plus the
row itself when its table is time indexed).

EntitySets are immutable after construction and safe for concurrent readers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from ..errors import BrokenRelation, DuplicateKey, SchemaError, UnknownInstance

COLUMN_KINDS = ("id", "categorical", "numeric", "time")

# keys injected into flattened event records
EVENT_TABLE = "_table"
EVENT_TIME = "_time"


@dataclass(frozen=True)
class Column:
    name: str
    kind: str

    def __post_init__(self):
        if self.kind not in COLUMN_KINDS:
            raise SchemaError(f"unknown column kind {self.kind!r} for {self.name!r}")


@dataclass(frozen=True)
class Relation:
    """child.child_key references parent.parent_key."""

    child: str
    child_key: str
    parent: str
    parent_key: str


class Table:
    """One named table: declared columns, a primary key, optional time index.

    Rows are stored sorted by (time, primary key) when a time index is
    declared, by primary key otherwise, so iteration order is deterministic.
    Time values must be non-negative integer milliseconds; ``None`` marks a
    not-yet-assigned time (legal before ``build_time_index`` runs).
    """

    def __init__(self, name, columns, primary_key, time_index=None, rows=None):
        self.name = name
        self.columns = [c if isinstance(c, Column) else Column(*c) for c in columns]
        self.primary_key = primary_key
        self.time_index = time_index
        names = [c.name for c in self.columns]
        if len(set(names)) != len(names):
            raise SchemaError(f"duplicate column names in table {name!r}")
        if primary_key not in names:
            raise SchemaError(f"primary key {primary_key!r} not a column of {name!r}")
        if time_index is not None and time_index not in names:
            raise SchemaError(f"time index {time_index!r} not a column of {name!r}")
        self.rows = [dict(r) for r in (rows or [])]
        self._check_rows()
        self._sort_rows()
        self._by_pk = {r[primary_key]: r for r in self.rows}

    def _check_rows(self):
        seen = set()
        for row in self.rows:
            pk = row.get(self.primary_key)
            if pk is None:
                raise SchemaError(f"row without primary key in table {self.name!r}")
            if pk in seen:
                raise DuplicateKey(self.name, pk)
            seen.add(pk)
            if self.time_index is not None:
                t = row.get(self.time_index)
                if t is not None and (not isinstance(t, int) or t < 0):
                    raise SchemaError(
                        f"time value {t!r} in {self.name!r} is not a "
                        "non-negative integer millisecond"
                    )

    def _sort_rows(self):
        pk = self.primary_key
        if self.time_index is not None:
            ti = self.time_index
            self.rows.sort(key=lambda r: (r.get(ti) is not None, r.get(ti) or 0, r[pk]))
        else:
            self.rows.sort(key=lambda r: r[pk])

    @property
    def column_names(self):
        return [c.name for c in self.columns]

    def row(self, pk):
        try:
            return self._by_pk[pk]
        except KeyError:
            raise UnknownInstance(f"no row {pk!r} in table {self.name!r}") from None

    def __contains__(self, pk):
        return pk in self._by_pk

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Table):
            return NotImplemented
        return (
            self.name == other.name
            and self.columns == other.columns
            and self.primary_key == other.primary_key
            and self.time_index == other.time_index
            and self.rows == other.rows
        )


@dataclass
class EventSlice:
    """Time window of one instance's flattened event stream.

    Bounds are half open: every event time t satisfies t_from <= t < t_to.
    ``fields`` lists all field names events of this instance can carry,
    derived from the schema (not from which rows happen to be present).
    """

    eid: object
    events: list
    t_from: int
    t_to: int
    fields: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for ev in self.events:
            t = ev[EVENT_TIME]
            if not (self.t_from <= t < self.t_to):
                raise SchemaError(
                    f"event at t={t} outside window [{self.t_from}, {self.t_to})"
                )

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


class EntitySet:
    """Validated collection of tables plus their foreign-key relations."""

    def __init__(self, tables: Iterable[Table], relations: Iterable[Relation] = ()):
        table_list = list(tables)
        self.tables = {t.name: t for t in table_list}
        if len(self.tables) != len(table_list):
            raise SchemaError("duplicate table names")
        self.relations = [
            r if isinstance(r, Relation) else Relation(*r) for r in relations
        ]
        self._validate_relations()
        self._check_acyclic()
        self._check_foreign_keys()
        self._event_index: dict = {}

    # --- validation ---

    def _validate_relations(self):
        for r in self.relations:
            for side, key in ((r.child, r.child_key), (r.parent, r.parent_key)):
                if side not in self.tables:
                    raise SchemaError(f"relation references unknown table {side!r}")
                if key not in self.tables[side].column_names:
                    raise SchemaError(f"relation key {side}.{key} is not a column")

    def _check_acyclic(self):
        # edges child -> parent; DFS for a back edge
        out = {}
        for r in self.relations:
            out.setdefault(r.child, set()).add(r.parent)
        state = {name: 0 for name in self.tables}  # 0 new, 1 active, 2 done

        def visit(node):
            state[node] = 1
            for nxt in out.get(node, ()):
                if state[nxt] == 1:
                    raise SchemaError(f"relation cycle through table {nxt!r}")
                if state[nxt] == 0:
                    visit(nxt)
            state[node] = 2

        for name in self.tables:
            if state[name] == 0:
                visit(name)

    def _check_foreign_keys(self):
        for r in self.relations:
            parent_values = {
                row[r.parent_key] for row in self.tables[r.parent].rows
            }
            for row in self.tables[r.child].rows:
                value = row.get(r.child_key)
                if value is not None and value not in parent_values:
                    raise BrokenRelation(r.child, r.child_key, value)

    # --- basic access ---

    def table(self, name) -> Table:
        try:
            return self.tables[name]
        except KeyError:
            raise SchemaError(f"no table named {name!r}") from None

    def instance_ids(self, target) -> list:
        t = self.table(target)
        return [row[t.primary_key] for row in t.rows]

    def child_relations(self, parent) -> list:
        return [r for r in self.relations if r.parent == parent]

    def descendant_tables(self, target) -> list:
        """Tables reachable from ``target`` by following child relations."""
        seen, order, frontier = {target}, [], [target]
        while frontier:
            current = frontier.pop(0)
            for r in self.child_relations(current):
                if r.child not in seen:
                    seen.add(r.child)
                    order.append(r.child)
                    frontier.append(r.child)
        return order

    def total_rows(self) -> int:
        return sum(len(t) for t in self.tables.values())

    # --- event streams ---

    def _event_tables(self, target) -> list:
        names = [target] + self.descendant_tables(target)
        return [n for n in names if self.tables[n].time_index is not None]

    def event_fields(self, target) -> frozenset:
        fields = {EVENT_TABLE, EVENT_TIME}
        for name in self._event_tables(target):
            fields.update(self.tables[name].column_names)
        return frozenset(fields)

    def _downward_order(self, target) -> list:
        """Reachable tables topologically ordered so parents come first."""
        reachable = {target, *self.descendant_tables(target)}
        edges = [r for r in self.relations if r.parent in reachable and r.child in reachable]
        indegree = {name: 0 for name in reachable}
        for r in edges:
            indegree[r.child] += 1
        ready = sorted(name for name, d in indegree.items() if d == 0)
        order = []
        while ready:
            current = ready.pop(0)
            order.append(current)
            for r in edges:
                if r.parent == current:
                    indegree[r.child] -= 1
                    if indegree[r.child] == 0:
                        ready.append(r.child)
        return order

    def _build_event_index(self, target):
        """Map every target instance to its sorted flattened event list."""
        t = self.table(target)
        reachable = {target, *self.descendant_tables(target)}
        roots: dict = {
            name: {} for name in reachable
        }  # table -> row pk -> set of target eids
        roots[target] = {row[t.primary_key]: {row[t.primary_key]} for row in t.rows}
        for current in self._downward_order(target):
            for rel in self.child_relations(current):
                if rel.child not in reachable:
                    continue
                child = self.tables[rel.child]
                child_map = roots[rel.child]
                parent_map = roots[current]
                for row in child.rows:
                    fk = row.get(rel.child_key)
                    if fk in parent_map:
                        child_map.setdefault(row[child.primary_key], set()).update(
                            parent_map[fk]
                        )

        index = {row[t.primary_key]: [] for row in t.rows}
        for name in self._event_tables(target):
            table = self.tables[name]
            mapping = roots.get(name, {})
            ti = table.time_index
            for row in table.rows:
                time = row.get(ti)
                if time is None:
                    continue
                for eid in mapping.get(row[table.primary_key], ()):
                    event = dict(row)
                    event[EVENT_TABLE] = name
                    event[EVENT_TIME] = time
                    index[eid].append((time, name, row[table.primary_key], event))
        return {
            eid: [entry[3] for entry in sorted(entries, key=lambda e: e[:3])]
            for eid, entries in index.items()
        }

    def instance_events(self, target, eid) -> list:
        if target not in self._event_index:
            self._event_index[target] = self._build_event_index(target)
        index = self._event_index[target]
        if eid not in index:
            raise UnknownInstance(f"no instance {eid!r} in table {target!r}")
        return index[eid]

    def instance_start(self, target, eid) -> int:
        """First event time of the instance, 0 when it has no events."""
        events = self.instance_events(target, eid)
        return events[0][EVENT_TIME] if events else 0

    def instance_end(self, target, eid) -> int:
        """Last event time of the instance, 0 when it has no events."""
        events = self.instance_events(target, eid)
        return events[-1][EVENT_TIME] if events else 0

    def slice(self, target, eid, t_from: int, t_to: Optional[int] = None) -> EventSlice:
        """Events of ``eid`` with time in [t_from, t_to).

        ``t_to=None`` means one past the instance's last event, so the slice
        covers everything from ``t_from`` to the end of the data.
        """
        events = self.instance_events(target, eid)
        if t_to is None:
            t_to = (events[-1][EVENT_TIME] + 1) if events else t_from
        if t_from > t_to:
            raise SchemaError(f"slice bounds reversed: [{t_from}, {t_to})")
        window = [ev for ev in events if t_from <= ev[EVENT_TIME] < t_to]
        return EventSlice(
            eid=eid,
            events=window,
            t_from=t_from,
            t_to=t_to,
            fields=self.event_fields(target),
        )

    def __eq__(self, other):
        if not isinstance(other, EntitySet):
            return NotImplemented
        return (
            self.tables == other.tables
            and sorted(map(repr, self.relations)) == sorted(map(repr, other.relations))
        )
