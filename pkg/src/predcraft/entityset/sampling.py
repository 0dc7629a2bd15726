"""Deterministic instance subsampling that preserves referential integrity."""

from __future__ import annotations

import random

from ..errors import SampleTooLarge
from .core import EntitySet, Table


def sample_instances(es: EntitySet, target: str, n: int, seed: int) -> EntitySet:
    """Keep exactly ``n`` target instances plus all transitively related
    child rows; every other table is left untouched.

    Deterministic for a fixed seed. Raises :class:`SampleTooLarge` when ``n``
    exceeds the target population.
    """
    ids = es.instance_ids(target)
    if n > len(ids):
        raise SampleTooLarge(f"requested {n} of {len(ids)} {target!r} instances")
    rng = random.Random(seed)
    chosen = set(rng.sample(sorted(ids, key=str), n))

    descendants = set(es.descendant_tables(target))
    keep: dict = {target: chosen}
    for name in descendants:
        keep[name] = set()
    for current in es._downward_order(target):
        for rel in es.child_relations(current):
            if rel.child not in descendants:
                continue
            child = es.tables[rel.child]
            kept_parents = keep[current]
            for row in child.rows:
                if row.get(rel.child_key) in kept_parents:
                    keep[rel.child].add(row[child.primary_key])

    new_tables = []
    for table in es.tables.values():
        if table.name in keep:
            rows = [r for r in table.rows if r[table.primary_key] in keep[table.name]]
        else:
            rows = table.rows
        new_tables.append(
            Table(table.name, table.columns, table.primary_key, table.time_index, rows)
        )
    return EntitySet(new_tables, es.relations)
