"""Synthetic grocery-orders dataset generator.

Stands in for a real online-grocery corpus with the same shape: users place
orders over time, each order is a sequence of cart adds drawn from a product
catalog organized into aisles and departments. Cart adds are denormalized
with the user, department id, and department name so labeling functions can
address them as plain event fields.
"""

from __future__ import annotations

import random

from ..errors import SchemaError
from .core import Column, EntitySet, Relation, Table
from .timeindex import build_time_index

DAY_MS = 86_400_000

DEPARTMENT_NAMES = [
    "produce", "dairy eggs", "bakery", "beverages", "snacks", "frozen",
    "pantry", "household", "meat seafood", "deli", "canned goods",
    "dry goods pasta", "breakfast", "bulk", "international", "alcohol",
    "pets", "babies", "personal care", "paper goods", "other",
]


def generate_synthetic(
    n_users: int = 100,
    orders_per_user: tuple[int, int] = (4, 12),
    products: int = 50,
    departments: int = 6,
    seed: int = 0,
    items_per_order: tuple[int, int] = (1, 8),
    max_gap_days: int = 30,
) -> EntitySet:
    """Generate a users/orders/order_products/products/aisles/departments
    EntitySet with a valid millisecond time index.

    Deterministic for a fixed seed: two runs export byte-identical CSVs.
    """
    if orders_per_user[0] < 1 or orders_per_user[0] > orders_per_user[1]:
        raise SchemaError(f"bad orders_per_user range {orders_per_user}")
    if items_per_order[0] < 1 or items_per_order[0] > items_per_order[1]:
        raise SchemaError(f"bad items_per_order range {items_per_order}")
    if departments < 1 or departments > len(DEPARTMENT_NAMES):
        raise SchemaError(f"departments must be in [1, {len(DEPARTMENT_NAMES)}]")
    if products < 1 or n_users < 1:
        raise SchemaError("products and n_users must be positive")

    rng = random.Random(seed)

    department_rows = [
        {"department_id": i + 1, "department": DEPARTMENT_NAMES[i]}
        for i in range(departments)
    ]
    n_aisles = max(2 * departments, 4)
    aisle_rows = [{"aisle_id": i + 1, "aisle": f"aisle_{i + 1}"} for i in range(n_aisles)]
    product_rows = [
        {
            "product_id": i + 1,
            "product_name": f"product_{i + 1}",
            "aisle_id": rng.randint(1, n_aisles),
            "department_id": rng.randint(1, departments),
        }
        for i in range(products)
    ]
    dept_of_product = {p["product_id"]: p["department_id"] for p in product_rows}
    dept_name = {d["department_id"]: d["department"] for d in department_rows}

    user_rows = [{"user_id": u + 1} for u in range(n_users)]
    order_rows = []
    add_rows = []
    order_id = 0
    op_id = 0
    for user in user_rows:
        n_orders = rng.randint(*orders_per_user)
        for number in range(1, n_orders + 1):
            order_id += 1
            n_items = rng.randint(*items_per_order)
            if number == 1:
                gap = rng.randint(0, max_gap_days)
            else:
                gap = rng.randint(1, max_gap_days)
            order_rows.append(
                {
                    "order_id": order_id,
                    "user_id": user["user_id"],
                    "order_number": number,
                    "order_dow": rng.randint(0, 6),
                    "order_hour_of_day": rng.randint(0, 23),
                    "days_since_prior_order": gap,
                    "n_items": n_items,
                    "order_time": None,
                }
            )
            if n_items <= products:
                picks = rng.sample(range(1, products + 1), n_items)
            else:
                picks = [rng.randint(1, products) for _ in range(n_items)]
            for rank, product_id in enumerate(picks, start=1):
                op_id += 1
                add_rows.append(
                    {
                        "op_id": op_id,
                        "order_id": order_id,
                        "product_id": product_id,
                        "add_to_cart_order": rank,
                        "user_id": user["user_id"],
                        "department_id": dept_of_product[product_id],
                        "department": dept_name[dept_of_product[product_id]],
                        "add_time": None,
                    }
                )

    tables = [
        Table(
            "departments",
            [Column("department_id", "id"), Column("department", "categorical")],
            primary_key="department_id",
            rows=department_rows,
        ),
        Table(
            "aisles",
            [Column("aisle_id", "id"), Column("aisle", "categorical")],
            primary_key="aisle_id",
            rows=aisle_rows,
        ),
        Table(
            "products",
            [
                Column("product_id", "id"),
                Column("product_name", "categorical"),
                Column("aisle_id", "id"),
                Column("department_id", "id"),
            ],
            primary_key="product_id",
            rows=product_rows,
        ),
        Table("users", [Column("user_id", "id")], primary_key="user_id", rows=user_rows),
        Table(
            "orders",
            [
                Column("order_id", "id"),
                Column("user_id", "id"),
                Column("order_number", "numeric"),
                Column("order_dow", "numeric"),
                Column("order_hour_of_day", "numeric"),
                Column("days_since_prior_order", "numeric"),
                Column("n_items", "numeric"),
                Column("order_time", "time"),
            ],
            primary_key="order_id",
            time_index="order_time",
            rows=order_rows,
        ),
        Table(
            "order_products",
            [
                Column("op_id", "id"),
                Column("order_id", "id"),
                Column("product_id", "id"),
                Column("add_to_cart_order", "numeric"),
                Column("user_id", "id"),
                Column("department_id", "id"),
                Column("department", "categorical"),
                Column("add_time", "time"),
            ],
            primary_key="op_id",
            time_index="add_time",
            rows=add_rows,
        ),
    ]
    relations = [
        Relation("products", "aisle_id", "aisles", "aisle_id"),
        Relation("products", "department_id", "departments", "department_id"),
        Relation("orders", "user_id", "users", "user_id"),
        Relation("order_products", "order_id", "orders", "order_id"),
        Relation("order_products", "product_id", "products", "product_id"),
        Relation("order_products", "user_id", "users", "user_id"),
        Relation("order_products", "department_id", "departments", "department_id"),
    ]
    es = EntitySet(tables, relations)
    return build_time_index(
        es, "orders", "order_products", base_gap_ms=DAY_MS, group_field="user_id"
    )
