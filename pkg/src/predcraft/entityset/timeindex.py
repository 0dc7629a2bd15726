"""Absolute time-axis construction from relative ordering fields.

Datasets of the orders/cart-adds shape often ship without absolute
timestamps: orders carry a sequence number and a relative gap since the
previous order, cart adds carry a within-order rank. This module turns those
into integer-millisecond times from an arbitrary zero point. Within an order
the k-th sequenced row lands at ``order_time + k`` milliseconds, and the next
order is pushed past the previous order's sequenced rows so the streams never
interleave.
"""

from __future__ import annotations

from ..errors import SchemaError
from .core import EntitySet, Table


def _single_parent_key(es: EntitySet, table: str) -> str:
    candidates = [r for r in es.relations if r.child == table]
    if len(candidates) != 1:
        raise SchemaError(
            f"cannot infer grouping key for {table!r}; pass group_field explicitly"
        )
    return candidates[0].child_key


def build_time_index(
    es: EntitySet,
    order_table: str,
    sequence_table: str,
    base_gap_ms: int,
    *,
    group_field: str | None = None,
    rank_field: str = "order_number",
    gap_field: str = "days_since_prior_order",
    sequence_rank_field: str = "add_to_cart_order",
    sequence_group_field: str | None = None,
) -> EntitySet:
    """Return a new EntitySet with absolute times assigned.

    ``base_gap_ms`` converts one unit of ``gap_field`` into milliseconds
    (86_400_000 when the gap is measured in days). The first order of each
    group starts at ``gap * base_gap_ms`` from zero; later orders start at
    ``previous + gap * base_gap_ms`` but never before the previous order's
    last sequenced row plus one millisecond.
    """
    orders = es.table(order_table)
    sequenced = es.table(sequence_table)
    if orders.time_index is None or sequenced.time_index is None:
        raise SchemaError(
            f"{order_table!r} and {sequence_table!r} must declare time_index columns"
        )
    for field, table in ((rank_field, orders), (gap_field, orders)):
        if field not in table.column_names:
            raise SchemaError(f"missing field {field!r} in table {table.name!r}")
    if sequence_rank_field not in sequenced.column_names:
        raise SchemaError(
            f"missing rank field {sequence_rank_field!r} in table {sequence_table!r}"
        )
    group_field = group_field or _single_parent_key(es, order_table)
    if sequence_group_field is None:
        links = [
            r for r in es.relations
            if r.child == sequence_table and r.parent == order_table
        ]
        if len(links) != 1:
            raise SchemaError(
                f"cannot infer {sequence_table!r} -> {order_table!r} link; "
                "pass sequence_group_field explicitly"
            )
        sequence_group_field = links[0].child_key

    adds_by_order: dict = {}
    for row in sequenced.rows:
        adds_by_order.setdefault(row[sequence_group_field], []).append(row)
    for rows in adds_by_order.values():
        rows.sort(key=lambda r: (r[sequence_rank_field], r[sequenced.primary_key]))

    groups: dict = {}
    for row in orders.rows:
        groups.setdefault(row[group_field], []).append(row)

    order_times: dict = {}
    add_times: dict = {}
    for _, rows in sorted(groups.items(), key=lambda kv: str(kv[0])):
        rows.sort(key=lambda r: (r[rank_field], r[orders.primary_key]))
        t_prev = None
        n_prev = 0
        for row in rows:
            gap = row.get(gap_field) or 0
            if t_prev is None:
                t = int(gap * base_gap_ms)
            else:
                t = max(t_prev + int(gap * base_gap_ms), t_prev + n_prev + 1)
            order_times[row[orders.primary_key]] = t
            adds = adds_by_order.get(row[orders.primary_key], [])
            for k, add in enumerate(adds, start=1):
                add_times[add[sequenced.primary_key]] = t + k
            t_prev, n_prev = t, len(adds)

    new_tables = []
    for table in es.tables.values():
        if table.name == order_table:
            rows = [
                {**row, table.time_index: order_times[row[table.primary_key]]}
                for row in table.rows
            ]
        elif table.name == sequence_table:
            rows = [
                {**row, table.time_index: add_times[row[table.primary_key]]}
                for row in table.rows
            ]
        else:
            rows = table.rows
        new_tables.append(
            Table(table.name, table.columns, table.primary_key, table.time_index, rows)
        )
    return EntitySet(new_tables, es.relations)
