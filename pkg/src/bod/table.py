"""Ingestion, augmentation, and per-column scaling of the input datasets.

A :class:`Dataset` is one named source relation of strictly positive numeric
values. ``augment`` concatenates several datasets horizontally (row r of every
dataset describes the same entity) into one :class:`AugmentedTable` whose
columns are scaled to (0, 1] by dividing each column by its maximum. The
utility score of a tuple is the equal-weight sum of its scaled cells.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateAttributeError,
    EmptyInputError,
    MissingCellError,
    NoDatasetsError,
    NonNumericCellError,
    NonPositiveValueError,
    RowCountMismatchError,
    UnknownTupleError,
)


@dataclass(frozen=True)
class Dataset:
    """One source relation: attribute names plus rows of positive values."""

    name: str
    attributes: tuple[str, ...]
    rows: np.ndarray  # shape (n_rows, n_attributes), float64, read-only

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        if rows.ndim != 2:
            raise MissingCellError(0, len(self.attributes), 0)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if len(self.attributes) < 1:
            raise EmptyInputError(f"dataset {self.name!r} has no attributes")
        if len(set(self.attributes)) != len(self.attributes):
            seen = set()
            for a in self.attributes:
                if a in seen:
                    raise DuplicateAttributeError(a)
                seen.add(a)
        if rows.shape[0] < 1:
            raise EmptyInputError(f"dataset {self.name!r} has no rows")
        if rows.shape[1] != len(self.attributes):
            raise MissingCellError(0, len(self.attributes), rows.shape[1])
        bad = ~(np.isfinite(rows) & (rows > 0))
        if bad.any():
            r, c = map(int, np.argwhere(bad)[0])
            raise NonPositiveValueError(r, self.attributes[c], float(rows[r, c]))
        rows.setflags(write=False)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])


@dataclass(frozen=True)
class ColumnRef:
    """One column of the augmented table, traced back to its source dataset."""

    dataset_name: str
    attribute: str
    column_index: int

    @property
    def qualified_name(self) -> str:
        return f"{self.dataset_name}.{self.attribute}"


@dataclass(frozen=True)
class TupleSubset:
    """An ordered selection of tuple ids from one augmented table."""

    tuple_ids: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "tuple_ids", tuple(int(i) for i in self.tuple_ids))

    def __len__(self) -> int:
        return len(self.tuple_ids)

    def __contains__(self, tuple_id: int) -> bool:
        return tuple_id in self.tuple_ids


@dataclass(frozen=True)
class AugmentedTable:
    """Horizontal concatenation of all datasets, raw and scaled."""

    datasets: tuple[Dataset, ...]
    columns: tuple[ColumnRef, ...]
    raw: np.ndarray
    col_max: np.ndarray
    scaled: np.ndarray
    utilities: np.ndarray = field(repr=False)  # scaled row sums, fixed order

    @property
    def d(self) -> int:
        return len(self.columns)

    @property
    def n_tuples(self) -> int:
        return int(self.raw.shape[0])

    @property
    def tuple_ids(self) -> range:
        return range(self.n_tuples)

    @property
    def dataset_partition(self) -> dict[str, tuple[ColumnRef, ...]]:
        out: dict[str, tuple[ColumnRef, ...]] = {}
        for col in self.columns:
            out[col.dataset_name] = out.get(col.dataset_name, ()) + (col,)
        return out

    def column_index(self, dataset_name: str, attribute: str) -> int:
        for col in self.columns:
            if col.dataset_name == dataset_name and col.attribute == attribute:
                return col.column_index
        raise KeyError(f"{dataset_name}.{attribute}")


def _parse_cell(text: str, row: int, column: str) -> float:
    try:
        value = float(text.strip())
    except ValueError:
        raise NonNumericCellError(row, column, text.strip()) from None
    if not math.isfinite(value):
        raise NonNumericCellError(row, column, text.strip())
    return value


def parse_dataset(source: str | IO[str], name: str) -> Dataset:
    """Parse CSV text (header row of attribute names, then numeric rows)."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyInputError(f"dataset {name!r}: empty input")
    header = [cell.strip() for cell in rows[0]]
    if len(rows) == 1:
        raise EmptyInputError(f"dataset {name!r}: no data rows")
    seen: set[str] = set()
    for attr in header:
        if attr in seen:
            raise DuplicateAttributeError(attr)
        seen.add(attr)
    data = np.empty((len(rows) - 1, len(header)), dtype=np.float64)
    for r, record in enumerate(rows[1:]):
        if len(record) != len(header):
            raise MissingCellError(r, len(header), len(record))
        for c, cell in enumerate(record):
            value = _parse_cell(cell, r, header[c])
            if value <= 0:
                raise NonPositiveValueError(r, header[c], value)
            data[r, c] = value
    return Dataset(name=name, attributes=tuple(header), rows=data)


def scale_columns(raw: np.ndarray, col_max: np.ndarray) -> np.ndarray:
    """Divide each column by its maximum; result lies in (0, 1]."""
    raw = np.asarray(raw, dtype=np.float64)
    col_max = np.asarray(col_max, dtype=np.float64)
    return raw / col_max


def accumulate_columns(scaled: np.ndarray, columns: Iterable[int]) -> np.ndarray:
    """Row sums over the given columns, accumulated strictly left to right.

    The fixed summation order makes sums bit-reproducible across runs and
    across independent implementations that follow the same order.
    """
    total = np.zeros(scaled.shape[0], dtype=np.float64)
    for c in columns:
        total = total + scaled[:, c]
    return total


def augment(datasets: Sequence[Dataset]) -> AugmentedTable:
    """Concatenate datasets horizontally and scale every column."""
    datasets = tuple(datasets)
    if not datasets:
        raise NoDatasetsError("at least one dataset is required")
    counts = {ds.name: ds.n_rows for ds in datasets}
    if len(set(counts.values())) != 1:
        raise RowCountMismatchError(counts)
    columns: list[ColumnRef] = []
    for ds in datasets:
        for attr in ds.attributes:
            columns.append(ColumnRef(ds.name, attr, len(columns)))
    qualified = [c.qualified_name for c in columns]
    if len(set(qualified)) != len(qualified):
        dupes = sorted({q for q in qualified if qualified.count(q) > 1})
        raise DuplicateAttributeError(dupes[0])
    raw = np.hstack([ds.rows for ds in datasets])
    raw.setflags(write=False)
    col_max = raw.max(axis=0)
    scaled = scale_columns(raw, col_max)
    scaled.setflags(write=False)
    utilities = accumulate_columns(scaled, range(scaled.shape[1]))
    utilities.setflags(write=False)
    col_max.setflags(write=False)
    return AugmentedTable(
        datasets=datasets,
        columns=tuple(columns),
        raw=raw,
        col_max=col_max,
        scaled=scaled,
        utilities=utilities,
    )


def total_utility(table: AugmentedTable, tuple_id: int) -> float:
    """Sum of a tuple's scaled cells across all columns."""
    if not 0 <= tuple_id < table.n_tuples:
        raise UnknownTupleError(tuple_id)
    return float(table.utilities[tuple_id])


def _format_raw(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(value)


def write_subset_csv(
    table: AugmentedTable, subset: TupleSubset | Iterable[int], stream: IO[str]
) -> None:
    """Write the subset's original raw rows with a tuple_id and utility column."""
    ids = subset.tuple_ids if isinstance(subset, TupleSubset) else tuple(subset)
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["tuple_id"] + [c.qualified_name for c in table.columns] + ["utility"])
    for tid in ids:
        if not 0 <= tid < table.n_tuples:
            raise UnknownTupleError(tid)
        row = [_format_raw(float(v)) for v in table.raw[tid]]
        writer.writerow([str(tid)] + row + [f"{table.utilities[tid]:.6f}"])
