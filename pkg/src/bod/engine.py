"""Round-based interactive filtering over an augmented table.

A session walks through ranking rounds. In round i the user names the next
most important unranked attribute of every dataset that still has one. The
partial sum of each alive tuple over the *cumulative* set of ranked columns
(rounds 1..i) picks a pivot tuple; the interval [pivot's partial sum,
pivot's total utility] then filters the alive set by total utility. The pivot
always survives, so the alive set never empties, and a run-to-completion
session asks exactly one question per column: d questions in max(n_i) rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidChoiceError, SessionFinishedError
from .table import AugmentedTable, TupleSubset, accumulate_columns, total_utility


class SessionStatus(str, Enum):
    AWAITING_RANKING = "AwaitingRanking"
    FINISHED = "Finished"


@dataclass(frozen=True)
class RoundChoice:
    """One attribute per dataset that still has unranked attributes."""

    selections: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "selections", dict(self.selections))


@dataclass(frozen=True)
class RoundResult:
    """Outcome of one ranking round."""

    round_index: int
    choices: dict[str, str]
    cumulative_columns: tuple[int, ...]
    pivot_tuple: int
    y_min: float
    y_max: float
    survivors: TupleSubset
    eliminated: TupleSubset


@dataclass
class Session:
    """Single-writer state machine over one augmented table."""

    table: AugmentedTable
    status: SessionStatus = SessionStatus.AWAITING_RANKING
    round: int = 0
    alive: TupleSubset = field(default=None)  # type: ignore[assignment]
    ranked_columns: dict[str, list[str]] = field(default_factory=dict)
    history: list[RoundResult] = field(default_factory=list)

    def __post_init__(self):
        if self.alive is None:
            self.alive = TupleSubset(tuple(self.table.tuple_ids))
        for ds in self.table.datasets:
            self.ranked_columns.setdefault(ds.name, [])

    # Thin method forwards so callers can stay object-style.
    def pending_datasets(self) -> list[tuple[str, list[str]]]:
        return pending_datasets(self)

    def submit_round(self, choice: RoundChoice) -> RoundResult:
        return submit_round(self, choice)

    def finish(self) -> TupleSubset:
        return finish_session(self)


def start_session(table: AugmentedTable) -> Session:
    """Fresh session: round 0, every tuple alive, nothing ranked."""
    return Session(table=table)


def max_rounds(table: AugmentedTable) -> int:
    """Number of rounds a run-to-completion session takes: max dataset width."""
    return max(ds.n_attributes for ds in table.datasets)


def pending_datasets(session: Session) -> list[tuple[str, list[str]]]:
    """Datasets that still have unranked attributes, in original order."""
    if session.status is SessionStatus.FINISHED:
        raise SessionFinishedError("session is finished")
    out: list[tuple[str, list[str]]] = []
    for ds in session.table.datasets:
        ranked = session.ranked_columns[ds.name]
        remaining = [a for a in ds.attributes if a not in ranked]
        if remaining:
            out.append((ds.name, remaining))
    return out


def _validate_choice(session: Session, choice: RoundChoice) -> None:
    pending = dict(pending_datasets(session))
    known = {ds.name for ds in session.table.datasets}
    for name, attr in choice.selections.items():
        if name not in known:
            raise InvalidChoiceError(f"unknown dataset {name!r}")
        if name not in pending:
            raise InvalidChoiceError(f"dataset {name!r} has no unranked attributes")
        ds = next(d for d in session.table.datasets if d.name == name)
        if attr not in ds.attributes:
            raise InvalidChoiceError(f"unknown attribute {attr!r} in dataset {name!r}")
        if attr not in pending[name]:
            raise InvalidChoiceError(
                f"attribute {attr!r} of dataset {name!r} was already ranked"
            )
    missing = set(pending) - set(choice.selections)
    if missing:
        raise InvalidChoiceError(
            f"missing a choice for dataset(s): {', '.join(sorted(missing))}"
        )


def _pick_pivot(
    table: AugmentedTable, alive: Sequence[int], partial: np.ndarray
) -> tuple[int, float]:
    """Argmax of the partial sum; ties by greatest total utility, then lowest id."""
    best = partial.max()
    tied = [alive[i] for i in np.flatnonzero(partial == best)]
    pivot = min(tied, key=lambda tid: (-table.utilities[tid], tid))
    return int(pivot), float(best)


def submit_round(session: Session, choice: RoundChoice) -> RoundResult:
    """Apply one round of rankings and shrink the alive set."""
    if session.status is SessionStatus.FINISHED:
        raise SessionFinishedError("session is finished")
    _validate_choice(session, choice)
    table = session.table
    for name, attr in choice.selections.items():
        session.ranked_columns[name].append(attr)
    cumulative = sorted(
        table.column_index(name, attr)
        for name, attrs in session.ranked_columns.items()
        for attr in attrs
    )
    alive = list(session.alive.tuple_ids)
    partial = accumulate_columns(table.scaled[np.array(alive)], cumulative)
    pivot, y_min = _pick_pivot(table, alive, partial)
    y_max = total_utility(table, pivot)
    totals = table.utilities[np.array(alive)]
    keep = (totals >= y_min) & (totals <= y_max)
    survivors = TupleSubset(tuple(t for t, k in zip(alive, keep) if k))
    eliminated = TupleSubset(tuple(t for t, k in zip(alive, keep) if not k))
    session.round += 1
    result = RoundResult(
        round_index=session.round,
        choices=dict(choice.selections),
        cumulative_columns=tuple(cumulative),
        pivot_tuple=pivot,
        y_min=y_min,
        y_max=y_max,
        survivors=survivors,
        eliminated=eliminated,
    )
    session.alive = survivors
    session.history.append(result)
    if not any(
        a not in session.ranked_columns[ds.name]
        for ds in table.datasets
        for a in ds.attributes
    ):
        session.status = SessionStatus.FINISHED
    return result


def finish_session(session: Session) -> TupleSubset:
    """Stop ranking and return the alive set, best utility first."""
    session.status = SessionStatus.FINISHED
    ordered = sorted(
        session.alive.tuple_ids,
        key=lambda tid: (-session.table.utilities[tid], tid),
    )
    return TupleSubset(tuple(ordered))
