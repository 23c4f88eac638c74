"""Command-line surface: interactive discovery, batch replay, benchmarks,
the HTTP server, and oracle verification of recorded sessions."""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path

import click

from . import engine, snapshot as snap
from .bench import (
    SynthConfig,
    run_benchmark,
    split_attributes,
    write_report_csv,
    write_report_json,
)
from .errors import BodError, InvalidChoiceError
from .oracle import replay_oracle
from .table import augment, parse_dataset, write_subset_csv

log = logging.getLogger("bod")


def _setup_logging() -> None:
    level = os.environ.get("BOD_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _load_datasets(paths: tuple[str, ...]):
    datasets = []
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        datasets.append(parse_dataset(text, Path(path).stem))
    return datasets


def _print_round(result: engine.RoundResult, table) -> None:
    click.echo(
        f"round {result.round_index}: y_min={result.y_min:.6f} "
        f"y_max={result.y_max:.6f} survivors={len(result.survivors)} "
        f"eliminated={len(result.eliminated)}"
    )
    ordered = sorted(
        result.survivors.tuple_ids, key=lambda tid: (-table.utilities[tid], tid)
    )
    for tid in ordered[:5]:
        click.echo(f"  tuple {tid}  utility={table.utilities[tid]:.6f}")
    if len(ordered) > 5:
        click.echo(f"  ... and {len(ordered) - 5} more")


def _prompt_choice(session: engine.Session) -> engine.RoundChoice | None:
    """One round of prompts; returns None when the user types 'stop'."""
    selections = {}
    for name, remaining in engine.pending_datasets(session):
        options = ", ".join(f"{i + 1}={a}" for i, a in enumerate(remaining))
        while True:
            answer = click.prompt(
                f"[{name}] next most important attribute ({options}, or 'stop')",
                type=str,
            ).strip()
            if answer.lower() == "stop":
                return None
            if answer in remaining:
                selections[name] = answer
                break
            if answer.isdigit() and 1 <= int(answer) <= len(remaining):
                selections[name] = remaining[int(answer) - 1]
                break
            click.echo(f"  not a valid option: {answer!r}")
    return engine.RoundChoice(selections)


def _write_outputs(session, table, output, snapshot_out) -> None:
    subset = engine.finish_session(session)
    if snapshot_out:
        Path(snapshot_out).write_text(
            snap.dumps_canonical(snap.session_snapshot(session))
        )
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            write_subset_csv(table, subset, fh)
    else:
        write_subset_csv(table, subset, sys.stdout)


@click.group()
def main():
    """Interactive, utility-function-free data discovery."""
    _setup_logging()


@main.command()
@click.option("-d", "--dataset", "dataset_paths", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False), help="CSV dataset path (repeatable).")
@click.option("--interactive", is_flag=True, help="Prompt for rankings round by round.")
@click.option("--choices", "choices_path", type=click.Path(exists=True, dir_okay=False),
              help="JSON list of per-round {dataset: attribute} choices (batch mode).")
@click.option("--output", type=click.Path(dir_okay=False), help="Result CSV path (default stdout).")
@click.option("--snapshot-out", type=click.Path(dir_okay=False),
              help="Write the final session snapshot JSON here.")
def discover(dataset_paths, interactive, choices_path, output, snapshot_out):
    """Run a discovery session over one or more CSV datasets."""
    try:
        table = augment(_load_datasets(dataset_paths))
        session = engine.start_session(table)
        if choices_path:
            rounds = json.loads(Path(choices_path).read_text())
            for selections in rounds:
                result = engine.submit_round(session, engine.RoundChoice(selections))
                _print_round(result, table)
        elif interactive:
            click.echo(
                f"{table.n_tuples} tuples, {table.d} attributes, "
                f"up to {engine.max_rounds(table)} rounds"
            )
            while session.status is engine.SessionStatus.AWAITING_RANKING:
                choice = _prompt_choice(session)
                if choice is None:
                    break
                result = engine.submit_round(session, choice)
                _print_round(result, table)
        _write_outputs(session, table, output, snapshot_out)
    except BodError as exc:
        raise click.ClickException(str(exc))


@main.group()
def bench():
    """Synthetic scaling benchmarks."""


def _emit_report(report, out: str) -> None:
    with open(out, "w", encoding="utf-8") as fh:
        write_report_csv(report, fh)
    json_path = str(Path(out).with_suffix(".json"))
    with open(json_path, "w", encoding="utf-8") as fh:
        write_report_json(report, fh)
    max_ms = report.max_elapsed_ms()
    verdict = "under" if max_ms < 30_000 else "OVER"
    click.echo(f"wrote {out} and {json_path}")
    click.echo(f"max elapsed {max_ms:.1f} ms ({verdict} the 30 s bound)")


@bench.command("attrs")
@click.option("--tuples", type=int, default=10000, show_default=True)
@click.option("--d-min", type=int, default=3, show_default=True)
@click.option("--d-max", type=int, default=9, show_default=True)
@click.option("--datasets", "n_datasets", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def bench_attrs(tuples, d_min, d_max, n_datasets, seed, reps, out):
    """Sweep the total attribute count at a fixed tuple count."""
    if d_min > d_max:
        raise click.ClickException(f"--d-min {d_min} exceeds --d-max {d_max}")
    if d_min < n_datasets:
        raise click.ClickException("--d-min must be at least the dataset count")
    sweep = [
        SynthConfig(
            n_datasets=n_datasets,
            attrs_per_dataset=split_attributes(d, n_datasets),
            n_tuples=tuples,
            seed=seed,
        )
        for d in range(d_min, d_max + 1)
    ]
    _emit_report(run_benchmark(sweep, reps), out)


@bench.command("tuples")
@click.option("--d", type=int, default=6, show_default=True)
@click.option("--tuples", default="5000,10000,15000", show_default=True,
              help="Comma-separated tuple counts.")
@click.option("--datasets", "n_datasets", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--reps", type=int, default=1, show_default=True)
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def bench_tuples(d, tuples, n_datasets, seed, reps, out):
    """Sweep the tuple count at a fixed total attribute count."""
    try:
        counts = [int(t) for t in tuples.split(",") if t.strip()]
    except ValueError:
        raise click.ClickException(f"bad --tuples list: {tuples!r}")
    if not counts or any(c < 1 for c in counts):
        raise click.ClickException(f"bad --tuples list: {tuples!r}")
    if d < n_datasets:
        raise click.ClickException("--d must be at least the dataset count")
    sweep = [
        SynthConfig(
            n_datasets=n_datasets,
            attrs_per_dataset=split_attributes(d, n_datasets),
            n_tuples=n,
            seed=seed,
        )
        for n in counts
    ]
    _emit_report(run_benchmark(sweep, reps), out)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--snapshot-dir", type=click.Path(file_okay=False), default=None,
              help="Persist session snapshots here; restored on restart.")
@click.option("--assets", type=click.Path(file_okay=False), default=None,
              help="Static web UI directory served at /.")
def serve(port, host, snapshot_dir, assets):
    """Start the HTTP/JSON session service."""
    import uvicorn

    from .server import create_app

    app = create_app(snapshot_dir=snapshot_dir, assets_dir=assets)
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--replay", "snapshot_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Session snapshot JSON to verify.")
@click.option("-d", "--dataset", "dataset_paths", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="The session's source CSVs, in original order.")
def oracle(snapshot_path, dataset_paths):
    """Re-run the naive oracle over a snapshot's choices and diff histories."""
    try:
        table = augment(_load_datasets(dataset_paths))
        document = json.loads(Path(snapshot_path).read_text())
        digest = snap.table_digest(table)
        if document.get("table_digest") != digest:
            raise click.ClickException(
                "table digest mismatch: snapshot was recorded against different data"
            )
        expected = replay_oracle(table, snap.choices_from_history(document))
    except (BodError, InvalidChoiceError) as exc:
        raise click.ClickException(str(exc))
    recorded = document.get("history", [])
    mismatches = []
    if len(expected) != len(recorded):
        mismatches.append(
            f"round count: recorded {len(recorded)}, oracle {len(expected)}"
        )
    for got, want in zip(recorded, expected):
        i = want.round_index
        if int(got["pivot"]) != want.pivot_tuple:
            mismatches.append(f"round {i}: pivot {got['pivot']} != {want.pivot_tuple}")
        if tuple(got["survivors"]) != want.survivors.tuple_ids:
            mismatches.append(f"round {i}: survivor sets differ")
        for key, value in (("y_min", want.y_min), ("y_max", want.y_max)):
            if abs(float(got[key]) - value) > 1e-9:
                mismatches.append(f"round {i}: {key} {got[key]} != {value}")
    if mismatches:
        for m in mismatches:
            click.echo(f"MISMATCH {m}", err=True)
        sys.exit(1)
    click.echo(f"oracle verified {len(expected)} round(s): histories match")


if __name__ == "__main__":
    main()
