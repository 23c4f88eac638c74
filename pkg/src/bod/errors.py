"""Exception hierarchy shared by all bod modules.

Every error carries a stable machine-readable ``code`` (used by the HTTP
layer) alongside the human message.
"""

from __future__ import annotations


class BodError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class EmptyInputError(BodError):
    """CSV source had no header or no data rows."""

    code = "empty_input"


class NonNumericCellError(BodError):
    """A cell could not be parsed as a number."""

    code = "non_numeric_cell"

    def __init__(self, row: int, column: str, value: str):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"row {row}, column {column!r}: value {value!r} is not numeric"
        )


class NonPositiveValueError(BodError):
    """A cell value was zero, negative, or non-finite."""

    code = "non_positive_value"

    def __init__(self, row: int, column: str, value: float):
        self.row = row
        self.column = column
        self.value = value
        super().__init__(
            f"row {row}, column {column!r}: value {value} must be > 0 and finite"
        )


class MissingCellError(BodError):
    """A data row had fewer or more cells than the header (ragged row)."""

    code = "missing_cell"

    def __init__(self, row: int, expected: int, got: int):
        self.row = row
        super().__init__(f"row {row}: expected {expected} cells, got {got}")


class DuplicateAttributeError(BodError):
    """An attribute name appeared twice in one dataset header."""

    code = "duplicate_attribute"

    def __init__(self, attribute: str):
        self.attribute = attribute
        super().__init__(f"duplicate attribute name {attribute!r}")


class RowCountMismatchError(BodError):
    """Datasets being concatenated do not share one row count."""

    code = "row_count_mismatch"

    def __init__(self, counts: dict[str, int]):
        self.counts = dict(counts)
        detail = ", ".join(f"{name}={n}" for name, n in counts.items())
        super().__init__(f"row counts differ across datasets: {detail}")


class NoDatasetsError(BodError):
    """Augmentation called with an empty dataset list."""

    code = "no_datasets"


class UnknownTupleError(BodError):
    """A tuple id does not exist in the table."""

    code = "unknown_tuple"

    def __init__(self, tuple_id: int):
        self.tuple_id = tuple_id
        super().__init__(f"unknown tuple id {tuple_id}")


class SessionFinishedError(BodError):
    """A ranking operation was attempted on a finished session."""

    code = "session_finished"


class InvalidChoiceError(BodError):
    """A round choice violated the one-unranked-attribute-per-dataset rule."""

    code = "invalid_choice"


class UnknownSessionError(BodError):
    """Session id not present in the store."""

    code = "unknown_session"


class SnapshotDigestError(BodError):
    """A snapshot's table digest does not match the supplied table."""

    code = "snapshot_digest_mismatch"
