"""Synthetic-data benchmark harness.

Generates integer-valued datasets with a seeded PCG64 generator
(``numpy.random.default_rng``), drives sessions to completion with a
simulated user that ranks attributes by hidden static weights, and records
engine wall time (augment + scale + all rounds; generation excluded).
"""

from __future__ import annotations

import csv
import json
import statistics
import time
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .engine import (
    RoundChoice,
    Session,
    SessionStatus,
    pending_datasets,
    start_session,
    submit_round,
)
from .errors import SessionFinishedError
from .table import AugmentedTable, Dataset, augment


@dataclass(frozen=True)
class SynthConfig:
    n_datasets: int
    attrs_per_dataset: tuple[int, ...]
    n_tuples: int
    value_min: int = 1
    value_max: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "attrs_per_dataset", tuple(self.attrs_per_dataset))
        if self.n_datasets < 1 or self.n_tuples < 1:
            raise ValueError("n_datasets and n_tuples must be positive")
        if len(self.attrs_per_dataset) != self.n_datasets:
            raise ValueError("attrs_per_dataset length must equal n_datasets")
        if any(a < 1 for a in self.attrs_per_dataset):
            raise ValueError("every dataset needs at least one attribute")
        if not 1 <= self.value_min <= self.value_max:
            raise ValueError("need 1 <= value_min <= value_max")

    @property
    def d(self) -> int:
        return sum(self.attrs_per_dataset)


@dataclass(frozen=True)
class SimulatedUser:
    """Hidden static preference: one positive weight per augmented column."""

    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if any(w <= 0 for w in self.weights):
            raise ValueError("all weights must be > 0")


@dataclass(frozen=True)
class BenchRow:
    n_datasets: int
    d: int
    n_tuples: int
    seed: int
    rep: int
    rounds: int
    questions_asked: int
    elapsed_ms: float
    final_survivor_count: int


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def aggregates(self) -> list[dict]:
        """min/median/max elapsed per (d, n_tuples, seed) config."""
        groups: dict[tuple, list[BenchRow]] = {}
        for row in self.rows:
            groups.setdefault((row.n_datasets, row.d, row.n_tuples, row.seed), []).append(row)
        out = []
        for (n_datasets, d, n_tuples, seed), rows in groups.items():
            times = [r.elapsed_ms for r in rows]
            out.append(
                {
                    "n_datasets": n_datasets,
                    "d": d,
                    "n_tuples": n_tuples,
                    "seed": seed,
                    "reps": len(rows),
                    "elapsed_ms_min": min(times),
                    "elapsed_ms_median": statistics.median(times),
                    "elapsed_ms_max": max(times),
                }
            )
        return out

    def max_elapsed_ms(self) -> float:
        return max((r.elapsed_ms for r in self.rows), default=0.0)


def generate_synthetic(config: SynthConfig) -> list[Dataset]:
    """Seeded uniform-integer datasets: cells in [value_min, value_max]."""
    rng = np.random.default_rng(config.seed)
    datasets = []
    for i, n_attrs in enumerate(config.attrs_per_dataset):
        values = rng.integers(
            config.value_min, config.value_max + 1, size=(config.n_tuples, n_attrs)
        )
        datasets.append(
            Dataset(
                name=f"synth{i}",
                attributes=tuple(f"x{j}" for j in range(n_attrs)),
                rows=values.astype(np.float64),
            )
        )
    return datasets


def user_for_table(table: AugmentedTable, seed: int) -> SimulatedUser:
    rng = np.random.default_rng(seed)
    return SimulatedUser(weights=tuple(rng.uniform(0.1, 1.0, size=table.d)))


def simulate_ranking(user: SimulatedUser, session: Session) -> RoundChoice:
    """Pick the highest-weight unranked attribute of each pending dataset."""
    if session.status is SessionStatus.FINISHED:
        raise SessionFinishedError("session is finished")
    weight_of = {
        col.qualified_name: user.weights[col.column_index]
        for col in session.table.columns
    }
    selections = {}
    for name, remaining in pending_datasets(session):
        best = remaining[0]
        for attr in remaining[1:]:
            if weight_of[f"{name}.{attr}"] > weight_of[f"{name}.{best}"]:
                best = attr
        selections[name] = best
    return RoundChoice(selections)


def run_session_to_completion(table: AugmentedTable, user: SimulatedUser) -> Session:
    session = start_session(table)
    while session.status is SessionStatus.AWAITING_RANKING:
        submit_round(session, simulate_ranking(user, session))
    return session


def run_benchmark(sweep: Sequence[SynthConfig], repetitions: int) -> BenchReport:
    """Time augment + scale + full session for each config x repetition."""
    report = BenchReport()
    for config in sweep:
        for rep in range(repetitions):
            datasets = generate_synthetic(
                SynthConfig(
                    n_datasets=config.n_datasets,
                    attrs_per_dataset=config.attrs_per_dataset,
                    n_tuples=config.n_tuples,
                    value_min=config.value_min,
                    value_max=config.value_max,
                    seed=config.seed + rep,
                )
            )
            t0 = time.perf_counter()
            table = augment(datasets)
            user = user_for_table(table, seed=config.seed + rep)
            session = run_session_to_completion(table, user)
            elapsed_ms = (time.perf_counter() - t0) * 1000.0
            questions = sum(len(r.choices) for r in session.history)
            report.rows.append(
                BenchRow(
                    n_datasets=config.n_datasets,
                    d=config.d,
                    n_tuples=config.n_tuples,
                    seed=config.seed,
                    rep=rep,
                    rounds=session.round,
                    questions_asked=questions,
                    elapsed_ms=elapsed_ms,
                    final_survivor_count=len(session.alive),
                )
            )
    return report


def split_attributes(d: int, n_datasets: int) -> tuple[int, ...]:
    """Distribute d attributes as evenly as possible, first datasets larger."""
    if d < n_datasets:
        raise ValueError(f"cannot split {d} attributes over {n_datasets} datasets")
    base, rem = divmod(d, n_datasets)
    return tuple(base + (1 if i < rem else 0) for i in range(n_datasets))


REPORT_FIELDS = [
    "n_datasets",
    "d",
    "n_tuples",
    "seed",
    "rep",
    "rounds",
    "questions",
    "elapsed_ms",
    "survivors",
]


def write_report_csv(report: BenchReport, stream: IO[str]) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for r in report.rows:
        writer.writerow(
            [
                r.n_datasets,
                r.d,
                r.n_tuples,
                r.seed,
                r.rep,
                r.rounds,
                r.questions_asked,
                f"{r.elapsed_ms:.3f}",
                r.final_survivor_count,
            ]
        )


def write_report_json(report: BenchReport, stream: IO[str]) -> None:
    json.dump(
        {
            "rows": [
                {
                    "n_datasets": r.n_datasets,
                    "d": r.d,
                    "n_tuples": r.n_tuples,
                    "seed": r.seed,
                    "rep": r.rep,
                    "rounds": r.rounds,
                    "questions": r.questions_asked,
                    "elapsed_ms": r.elapsed_ms,
                    "survivors": r.final_survivor_count,
                }
                for r in report.rows
            ],
            "aggregates": report.aggregates(),
        },
        stream,
        indent=2,
    )
