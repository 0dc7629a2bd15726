"""Schema descriptors and CSV ingestion/export.

A dataset on disk is a JSON schema descriptor plus one headered UTF-8 CSV
file per table. The descriptor shape:

    {"tables": [{"name", "primary_key", "time_index"?,
                 "columns": [{"name", "kind"}]}],
     "relations": [{"child", "child_key", "parent", "parent_key"}]}

Loading validates primary-key uniqueness and foreign-key integrity and sorts
rows into time order; exporting then reloading yields an equal EntitySet.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from ..errors import SchemaError
from .core import Column, EntitySet, Relation, Table


def load_schema(source) -> dict:
    if isinstance(source, dict):
        schema = source
    else:
        schema = json.loads(Path(source).read_text(encoding="utf-8"))
    if "tables" not in schema:
        raise SchemaError("schema descriptor has no 'tables' entry")
    for spec in schema["tables"]:
        for key in ("name", "primary_key", "columns"):
            if key not in spec:
                raise SchemaError(f"table descriptor missing {key!r}: {spec}")
    return schema


def _parse_value(raw: str, kind: str):
    if raw == "":
        return None
    if kind == "time":
        return int(raw)
    if kind == "id":
        try:
            return int(raw)
        except ValueError:
            return raw
    if kind == "numeric":
        try:
            return int(raw)
        except ValueError:
            return float(raw)
    return raw  # categorical


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def load_entityset(schema, files) -> EntitySet:
    """Build a validated EntitySet from a schema descriptor and CSV paths.

    ``files`` maps table name to CSV path; alternatively a directory path
    may be given and each table is read from ``<dir>/<table>.csv``.
    """
    schema = load_schema(schema)
    if isinstance(files, (str, Path)):
        directory = Path(files)
        files = {spec["name"]: directory / f"{spec['name']}.csv" for spec in schema["tables"]}

    tables = []
    for spec in schema["tables"]:
        name = spec["name"]
        columns = [Column(c["name"], c["kind"]) for c in spec["columns"]]
        kinds = {c.name: c.kind for c in columns}
        path = files[name]
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            if set(header) != set(kinds):
                raise SchemaError(
                    f"CSV header for {name!r} does not match declared columns: "
                    f"{header} vs {sorted(kinds)}"
                )
            rows = [
                {col: _parse_value(raw.get(col, ""), kinds[col]) for col in kinds}
                for raw in reader
            ]
        tables.append(
            Table(
                name=name,
                columns=columns,
                primary_key=spec["primary_key"],
                time_index=spec.get("time_index"),
                rows=rows,
            )
        )

    relations = [
        Relation(r["child"], r["child_key"], r["parent"], r["parent_key"])
        for r in schema.get("relations", [])
    ]
    return EntitySet(tables, relations)


def schema_of(es: EntitySet) -> dict:
    return {
        "tables": [
            {
                "name": t.name,
                "primary_key": t.primary_key,
                **({"time_index": t.time_index} if t.time_index else {}),
                "columns": [{"name": c.name, "kind": c.kind} for c in t.columns],
            }
            for t in es.tables.values()
        ],
        "relations": [
            {
                "child": r.child,
                "child_key": r.child_key,
                "parent": r.parent,
                "parent_key": r.parent_key,
            }
            for r in es.relations
        ],
    }


def export_entityset(es: EntitySet, directory) -> Path:
    """Write ``schema.json`` plus one CSV per table; returns the directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "schema.json").write_text(
        json.dumps(schema_of(es), indent=2) + "\n", encoding="utf-8"
    )
    for table in es.tables.values():
        with open(directory / f"{table.name}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(table.column_names)
            for row in table.rows:
                writer.writerow([_format_value(row[c]) for c in table.column_names])
    return directory
