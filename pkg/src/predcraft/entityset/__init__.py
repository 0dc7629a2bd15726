from .core import (
    Column,
    EntitySet,
    EVENT_TABLE,
    EVENT_TIME,
    EventSlice,
    Relation,
    Table,
)
from .sampling import sample_instances
from .schema import export_entityset, load_entityset, load_schema, schema_of
from .synthetic import DAY_MS, generate_synthetic
from .timeindex import build_time_index

__all__ = [
    "Column",
    "EntitySet",
    "EVENT_TABLE",
    "EVENT_TIME",
    "EventSlice",
    "Relation",
    "Table",
    "sample_instances",
    "export_entityset",
    "load_entityset",
    "load_schema",
    "schema_of",
    "DAY_MS",
    "generate_synthetic",
    "build_time_index",
]
