"""Batch command line: synthesize, ingest, enumerate, precompute, serve, rank.

Every command threads a single --seed through all randomness, so identical
inputs and seed produce bit-identical output files.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from .entityset import export_entityset, generate_synthetic, load_entityset
from .errors import PredcraftError
from .judging import DEFAULT_K, Report, Vote, compute_rankings, head_to_head
from .modeling import load_grid_options
from .pipeline import fold_std_summary, metric_summary, precompute
from .problemspace import enumerate_problems, load_templates, render_sentence
from .service import PrecomputeStore, create_app


def _write_csv(path: Path, rows: list[dict], columns: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow(
                [repr(v) if isinstance(v, float) else ("" if v is None else v) for v in (row[c] for c in columns)]
            )


@click.group()
def main():
    """Prediction engineering and report-judging toolkit."""


@main.command()
@click.option("--out", required=True, type=click.Path(), help="output dataset directory")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--config", type=click.Path(exists=True), help="JSON generator config")
def synthesize(out, seed, config):
    """Generate a synthetic grocery-orders dataset (schema + CSVs)."""
    options = {}
    if config:
        options = json.loads(Path(config).read_text(encoding="utf-8"))
    known = {"n_users", "orders_per_user", "products", "departments",
             "items_per_order", "max_gap_days"}
    unknown = set(options) - known
    if unknown:
        raise click.ClickException(f"unknown generator options: {sorted(unknown)}")
    for key in ("orders_per_user", "items_per_order"):
        if key in options:
            options[key] = tuple(options[key])
    es = generate_synthetic(seed=seed, **options)
    export_entityset(es, out)
    click.echo(f"wrote {len(es.tables)} tables, {es.total_rows()} rows to {out}")


@main.command()
@click.option("--data", required=True, type=click.Path(exists=True), help="dataset directory")
@click.option("--schema", type=click.Path(exists=True), help="schema descriptor (default <data>/schema.json)")
def ingest(data, schema):
    """Load and validate a CSV dataset against its schema descriptor."""
    schema_path = schema or str(Path(data) / "schema.json")
    es = load_entityset(schema_path, data)
    for name in sorted(es.tables):
        click.echo(f"{name}: {len(es.tables[name])} rows")
    click.echo(f"relations: {len(es.relations)}; all integrity checks passed")


@main.command("enumerate")
@click.option("--out", type=click.Path(), help="write JSON here instead of stdout")
@click.option("--templates", type=click.Path(exists=True), help="template grammar file")
def enumerate_cmd(out, templates):
    """List every fully defined prediction problem in the grammar."""
    definitions = enumerate_problems(load_templates(templates) if templates else None)
    payload = [
        {"id": d.problem_id, "entity": d.entity, "sentence": render_sentence(d)}
        for d in definitions
    ]
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
        click.echo(f"wrote {len(payload)} problems to {out}")
    else:
        click.echo(text, nl=False)


@main.command("precompute")
@click.option("--data", required=True, type=click.Path(exists=True), help="dataset directory")
@click.option("--out", required=True, type=click.Path(), help="output directory")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--subset", type=click.Path(exists=True), help="grid option subset JSON")
@click.option("--templates", type=click.Path(exists=True), help="template grammar file")
@click.option("--problems", help="comma-separated problem ids to include")
@click.option("--folds", default=5, show_default=True, type=int)
@click.option("--max-rows", type=int, help="cap training rows per problem")
def precompute_cmd(data, out, seed, subset, templates, problems, folds, max_rows):
    """Run the full problem x model grid and persist every scored cell."""
    es = load_entityset(str(Path(data) / "schema.json"), data)
    definitions = enumerate_problems(load_templates(templates) if templates else None)
    if problems:
        wanted = set(problems.split(","))
        definitions = [d for d in definitions if d.problem_id in wanted]
        missing = wanted - {d.problem_id for d in definitions}
        if missing:
            raise click.ClickException(f"unknown problem ids: {sorted(missing)}")
    grid_options = load_grid_options(subset) if subset else None

    store, skipped = precompute(
        es, definitions, grid_options, seed=seed, folds=folds, max_rows=max_rows
    )

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    store.dump(out_dir / "store.jsonl")
    _write_csv(
        out_dir / "metric_summary.csv",
        metric_summary(store, definitions),
        ["entity", "metric", "mean", "min", "max", "std"],
    )
    _write_csv(
        out_dir / "fold_std_summary.csv",
        fold_std_summary(store, definitions),
        ["entity", "metric", "mean_std"],
    )
    (out_dir / "skipped.json").write_text(
        json.dumps([{"problem_id": p, "reason": r} for p, r in skipped], indent=2) + "\n",
        encoding="utf-8",
    )
    n_cells = sum(len(store.specs_for(p)) for p in store.problems())
    click.echo(
        f"scored {n_cells} cells over {len(store.problems())} problems "
        f"({len(skipped)} skipped) into {out}"
    )


@main.command()
@click.option("--store", "store_path", required=True, type=click.Path(exists=True))
@click.option("--log", "log_path", type=click.Path(), help="event log JSONL path")
@click.option("--templates", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
def serve(store_path, log_path, templates, host, port, seed):
    """Start the judging/creation HTTP service."""
    import uvicorn

    app = create_app(
        store=PrecomputeStore.load(store_path),
        templates_path=templates,
        log_path=log_path,
        seed=seed,
    )
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--votes", "votes_path", required=True, type=click.Path(exists=True), help="vote log JSONL")
@click.option("--reports", "reports_path", required=True, type=click.Path(exists=True), help="reports JSONL")
@click.option("--out", required=True, type=click.Path())
@click.option("--k", default=DEFAULT_K, show_default=True, type=float, help="Elo K-factor")
def rank(votes_path, reports_path, out, k):
    """Replay a vote log into player rankings and head-to-head tables."""
    reports = [
        Report.from_json(json.loads(line))
        for line in Path(reports_path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    votes = [
        Vote.from_json(json.loads(line))
        for line in Path(votes_path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    result = compute_rankings(votes, reports, k=k)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)

    group_of = {r.author: r.group for r in reports}
    rating_rows = [
        {"player": player, "group": group_of.get(player, "none"), "rating": rating}
        for player, rating in sorted(result["ratings"].items())
    ]
    _write_csv(out_dir / "rankings.csv", rating_rows, ["player", "group", "rating"])

    stat_rows = [
        {"group": group, **stats} for group, stats in result["stats"].items()
    ]
    _write_csv(
        out_dir / "group_stats.csv",
        stat_rows,
        ["group", "min", "p25", "mean", "p75", "max", "std"],
    )

    h2h_rows = [
        {"pairing": pairing, **cells}
        for pairing, cells in head_to_head(votes, reports).items()
    ]
    _write_csv(out_dir / "head_to_head.csv", h2h_rows, ["pairing", "win_pct", "total"])
    click.echo(f"ranked {len(rating_rows)} players over {len(votes)} votes into {out}")


def run():
    try:
        main(standalone_mode=False)
    except PredcraftError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    run()
