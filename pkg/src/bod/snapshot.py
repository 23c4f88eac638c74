"""Session snapshot serialization, restore, and table digests.

Snapshots are JSON documents with a fixed canonical rendering: keys sorted,
compact separators, and floats printed with 17 significant digits so the
serialized y values round-trip losslessly and two identical sessions produce
byte-identical documents.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any

from .engine import (
    RoundChoice,
    RoundResult,
    Session,
    SessionStatus,
)
from .errors import SnapshotDigestError
from .table import AugmentedTable, Dataset, TupleSubset


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def dumps_canonical(obj: Any) -> str:
    """Canonical JSON: sorted keys, compact, floats at 17 significant digits."""
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        body = ",".join(f"{json.dumps(str(k))}:{dumps_canonical(v)}" for k, v in items)
        return "{" + body + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps_canonical(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def table_digest(table: AugmentedTable) -> str:
    """Content hash over the column names and raw matrix."""
    h = hashlib.sha256()
    h.update("\x1f".join(c.qualified_name for c in table.columns).encode())
    h.update(b"\x1e")
    for row in table.raw:
        h.update(",".join(format_float(v) for v in row).encode())
        h.update(b"\n")
    return h.hexdigest()


def round_result_dict(result: RoundResult) -> dict[str, Any]:
    return {
        "round_index": result.round_index,
        "choices": dict(result.choices),
        "pivot": result.pivot_tuple,
        "y_min": result.y_min,
        "y_max": result.y_max,
        "survivors": list(result.survivors.tuple_ids),
    }


def session_snapshot(session: Session) -> dict[str, Any]:
    return {
        "table_digest": table_digest(session.table),
        "round": session.round,
        "status": session.status.value,
        "ranked_columns": {k: list(v) for k, v in session.ranked_columns.items()},
        "alive": list(session.alive.tuple_ids),
        "history": [round_result_dict(r) for r in session.history],
    }


def history_bytes(session: Session) -> bytes:
    """Canonical rendering of just the round history."""
    return dumps_canonical([round_result_dict(r) for r in session.history]).encode()


def restore_session(table: AugmentedTable, snapshot: dict[str, Any]) -> Session:
    """Rebuild a session from a snapshot, verifying the table digest."""
    digest = table_digest(table)
    if snapshot.get("table_digest") != digest:
        raise SnapshotDigestError(
            f"snapshot table digest {snapshot.get('table_digest')!r} "
            f"does not match table {digest!r}"
        )
    session = Session(table=table)
    alive = list(range(table.n_tuples))
    for entry in snapshot.get("history", []):
        survivors = [int(t) for t in entry["survivors"]]
        survivor_set = set(survivors)
        for name, attr in entry["choices"].items():
            session.ranked_columns[name].append(attr)
        cumulative = sorted(
            table.column_index(name, a)
            for name, attrs in session.ranked_columns.items()
            for a in attrs
        )
        result = RoundResult(
            round_index=int(entry["round_index"]),
            choices=dict(entry["choices"]),
            cumulative_columns=tuple(cumulative),
            pivot_tuple=int(entry["pivot"]),
            y_min=float(entry["y_min"]),
            y_max=float(entry["y_max"]),
            survivors=TupleSubset(tuple(survivors)),
            eliminated=TupleSubset(tuple(t for t in alive if t not in survivor_set)),
        )
        session.history.append(result)
        alive = survivors
    session.round = int(snapshot["round"])
    session.alive = TupleSubset(tuple(int(t) for t in snapshot["alive"]))
    session.status = SessionStatus(snapshot["status"])
    return session


def datasets_payload(datasets: tuple[Dataset, ...]) -> list[dict[str, Any]]:
    """Portable raw form of the source datasets, for snapshot-dir persistence."""
    return [
        {
            "name": ds.name,
            "attributes": list(ds.attributes),
            "rows": [[float(v) for v in row] for row in ds.rows],
        }
        for ds in datasets
    ]


def datasets_from_payload(payload: list[dict[str, Any]]) -> list[Dataset]:
    return [
        Dataset(
            name=item["name"],
            attributes=tuple(item["attributes"]),
            rows=item["rows"],
        )
        for item in payload
    ]


def choices_from_history(snapshot: dict[str, Any]) -> list[RoundChoice]:
    return [RoundChoice(entry["choices"]) for entry in snapshot.get("history", [])]
