"""Naive reference replay of a full choice sequence.

Deliberately unclever: every round is recomputed from scratch with plain
Python loops and no shared state with the interactive engine, so it can serve
as the ground truth the engine is checked against. The only contracts shared
with the engine are the tie-break rule and the left-to-right summation order.
"""

from __future__ import annotations

from typing import Sequence

from .engine import RoundChoice, RoundResult
from .errors import InvalidChoiceError
from .table import AugmentedTable, TupleSubset


def _row_sum(table: AugmentedTable, tuple_id: int, columns: list[int]) -> float:
    total = 0.0
    for c in columns:
        total += float(table.scaled[tuple_id, c])
    return total


def replay_oracle(
    table: AugmentedTable, choices: Sequence[RoundChoice]
) -> list[RoundResult]:
    """Recompute every round with a quadratic scan; returns the full history."""
    all_columns = sorted(c.column_index for c in table.columns)
    attrs_by_dataset = {ds.name: list(ds.attributes) for ds in table.datasets}
    ranked: dict[str, list[str]] = {name: [] for name in attrs_by_dataset}
    alive = list(range(table.n_tuples))
    history: list[RoundResult] = []

    for i, choice in enumerate(choices, start=1):
        pending = {
            name: [a for a in attrs if a not in ranked[name]]
            for name, attrs in attrs_by_dataset.items()
        }
        pending = {name: attrs for name, attrs in pending.items() if attrs}
        for name, attr in choice.selections.items():
            if name not in attrs_by_dataset:
                raise InvalidChoiceError(f"unknown dataset {name!r}")
            if name not in pending:
                raise InvalidChoiceError(
                    f"dataset {name!r} has no unranked attributes"
                )
            if attr not in attrs_by_dataset[name]:
                raise InvalidChoiceError(
                    f"unknown attribute {attr!r} in dataset {name!r}"
                )
            if attr not in pending[name]:
                raise InvalidChoiceError(
                    f"attribute {attr!r} of dataset {name!r} was already ranked"
                )
        missing = set(pending) - set(choice.selections)
        if missing:
            raise InvalidChoiceError(
                f"missing a choice for dataset(s): {', '.join(sorted(missing))}"
            )

        for name, attr in choice.selections.items():
            ranked[name].append(attr)
        cumulative = sorted(
            table.column_index(name, attr)
            for name, attrs in ranked.items()
            for attr in attrs
        )

        pivot = -1
        pivot_partial = pivot_total = float("-inf")
        for tid in alive:
            partial = _row_sum(table, tid, cumulative)
            total = _row_sum(table, tid, all_columns)
            better = partial > pivot_partial or (
                partial == pivot_partial
                and (total > pivot_total or (total == pivot_total and tid < pivot))
            )
            if better:
                pivot, pivot_partial, pivot_total = tid, partial, total
        y_min, y_max = pivot_partial, pivot_total

        survivors, eliminated = [], []
        for tid in alive:
            total = _row_sum(table, tid, all_columns)
            (survivors if y_min <= total <= y_max else eliminated).append(tid)

        history.append(
            RoundResult(
                round_index=i,
                choices=dict(choice.selections),
                cumulative_columns=tuple(cumulative),
                pivot_tuple=pivot,
                y_min=y_min,
                y_max=y_max,
                survivors=TupleSubset(tuple(survivors)),
                eliminated=TupleSubset(tuple(eliminated)),
            )
        )
        alive = survivors
    return history
