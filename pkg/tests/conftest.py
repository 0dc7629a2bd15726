import random

import pytest

from predcraft.entityset import Column, EntitySet, Relation, Table, generate_synthetic


def build_event_es(events_per_user: dict, extra_fields=None) -> EntitySet:
    """Two-table fixture: one 'users' instance table plus an 'events' table.

    ``events_per_user`` maps user id to a list of event dicts, each with at
    least {"t": time} and optional extra fields (declared via
    ``extra_fields`` as (name, kind) pairs).
    """
    extra_fields = extra_fields or []
    users = [{"user_id": uid} for uid in sorted(events_per_user)]
    rows = []
    next_id = 1
    for uid in sorted(events_per_user):
        for ev in events_per_user[uid]:
            row = {"event_id": next_id, "user_id": uid, "t": ev["t"]}
            for name, _ in extra_fields:
                row[name] = ev.get(name)
            rows.append(row)
            next_id += 1
    tables = [
        Table("users", [Column("user_id", "id")], primary_key="user_id", rows=users),
        Table(
            "events",
            [
                Column("event_id", "id"),
                Column("user_id", "id"),
                Column("t", "time"),
                *[Column(name, kind) for name, kind in extra_fields],
            ],
            primary_key="event_id",
            time_index="t",
            rows=rows,
        ),
    ]
    return EntitySet(tables, [Relation("events", "user_id", "users", "user_id")])


def random_event_es(rng: random.Random, max_instances=20, max_events=50) -> EntitySet:
    """Random small entityset for fuzzing: numeric 'value' and categorical
    'kind' fields on every event."""
    n_users = rng.randint(1, max_instances)
    events = {}
    for uid in range(1, n_users + 1):
        n = rng.randint(0, max_events)
        times = sorted(rng.sample(range(0, 500), min(n, 500)))
        events[uid] = [
            {
                "t": t,
                "value": rng.randint(0, 9),
                "kind": rng.choice(["a", "b", "c"]),
            }
            for t in times
        ]
    return build_event_es(events, extra_fields=[("value", "numeric"), ("kind", "categorical")])


@pytest.fixture(scope="session")
def small_synthetic() -> EntitySet:
    return generate_synthetic(n_users=30, orders_per_user=(4, 10), seed=11)
