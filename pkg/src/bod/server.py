"""HTTP/JSON session service.

Sessions live in memory behind opaque ids; all mutation goes through the
engine's submit/finish operations under a per-session lock. With a snapshot
directory configured, every state change is mirrored to disk and reloaded on
startup (table digests are verified on restore).
"""

from __future__ import annotations

import io
import json
import logging
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import engine, snapshot as snap
from .errors import (
    BodError,
    InvalidChoiceError,
    SessionFinishedError,
    UnknownSessionError,
)
from .table import AugmentedTable, Dataset, augment, parse_dataset, write_subset_csv

log = logging.getLogger("bod.server")

SURVIVOR_PREVIEW_CAP = 50
DEFAULT_MAX_BODY_BYTES = 25 * 1024 * 1024


@dataclass
class SessionEntry:
    session: engine.Session
    table: AugmentedTable
    datasets: tuple[Dataset, ...]
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory session registry with optional JSON snapshot persistence."""

    def __init__(self, snapshot_dir: Path | None = None):
        self._entries: dict[str, SessionEntry] = {}
        self._guard = threading.Lock()
        self.snapshot_dir = Path(snapshot_dir) if snapshot_dir else None
        if self.snapshot_dir:
            self.snapshot_dir.mkdir(parents=True, exist_ok=True)
            self._load_snapshots()

    def create(self, datasets: tuple[Dataset, ...], table: AugmentedTable) -> str:
        session_id = secrets.token_urlsafe(16)
        entry = SessionEntry(session=engine.start_session(table), table=table, datasets=datasets)
        with self._guard:
            self._entries[session_id] = entry
        self.persist(session_id)
        return session_id

    def get(self, session_id: str) -> SessionEntry:
        with self._guard:
            entry = self._entries.get(session_id)
        if entry is None:
            raise UnknownSessionError(f"unknown session {session_id!r}")
        return entry

    def delete(self, session_id: str) -> None:
        with self._guard:
            if self._entries.pop(session_id, None) is None:
                raise UnknownSessionError(f"unknown session {session_id!r}")
        if self.snapshot_dir:
            for suffix in (".snapshot.json", ".tables.json"):
                path = self.snapshot_dir / f"{session_id}{suffix}"
                path.unlink(missing_ok=True)

    def persist(self, session_id: str) -> None:
        if not self.snapshot_dir:
            return
        entry = self.get(session_id)
        tables_path = self.snapshot_dir / f"{session_id}.tables.json"
        if not tables_path.exists():
            tables_path.write_text(
                json.dumps(snap.datasets_payload(entry.datasets))
            )
        (self.snapshot_dir / f"{session_id}.snapshot.json").write_text(
            snap.dumps_canonical(snap.session_snapshot(entry.session))
        )

    def _load_snapshots(self) -> None:
        for snap_path in sorted(self.snapshot_dir.glob("*.snapshot.json")):
            session_id = snap_path.name[: -len(".snapshot.json")]
            tables_path = self.snapshot_dir / f"{session_id}.tables.json"
            if not tables_path.exists():
                log.warning("snapshot %s has no tables file; skipping", session_id)
                continue
            try:
                datasets = tuple(
                    snap.datasets_from_payload(json.loads(tables_path.read_text()))
                )
                table = augment(datasets)
                session = snap.restore_session(table, json.loads(snap_path.read_text()))
            except BodError as exc:
                log.error("failed to restore session %s: %s", session_id, exc)
                continue
            self._entries[session_id] = SessionEntry(
                session=session, table=table, datasets=datasets
            )


def _survivor_preview(entry: SessionEntry, cap: int = SURVIVOR_PREVIEW_CAP) -> list[dict]:
    table = entry.table
    ordered = sorted(
        entry.session.alive.tuple_ids,
        key=lambda tid: (-table.utilities[tid], tid),
    )
    return [
        {
            "tuple_id": tid,
            "values": [float(v) for v in table.raw[tid]],
            "utility": float(table.utilities[tid]),
        }
        for tid in ordered[:cap]
    ]


def _session_view(entry: SessionEntry) -> dict:
    session = entry.session
    pending = (
        []
        if session.status is engine.SessionStatus.FINISHED
        else engine.pending_datasets(session)
    )
    return {
        "status": session.status.value,
        "round": session.round,
        "max_rounds": engine.max_rounds(entry.table),
        "tuple_count": entry.table.n_tuples,
        "alive_count": len(session.alive),
        "columns": [c.qualified_name for c in entry.table.columns],
        "pending_datasets": [
            {"name": name, "attributes": attrs} for name, attrs in pending
        ],
        "survivor_preview": _survivor_preview(entry),
        "history": [snap.round_result_dict(r) for r in session.history],
        "table_digest": snap.table_digest(entry.table),
    }


def _canonical_json(payload: dict, status_code: int = 200) -> Response:
    return PlainTextResponse(
        snap.dumps_canonical(payload),
        status_code=status_code,
        media_type="application/json",
    )


def _error_response(status_code: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"error": {"code": code, "message": message}}, status_code=status_code)


async def _read_datasets(request: Request, max_body_bytes: int) -> tuple[Dataset, ...]:
    body = await request.body()
    if len(body) > max_body_bytes:
        raise _PayloadTooLarge()
    content_type = request.headers.get("content-type", "")
    datasets: list[Dataset] = []
    if content_type.startswith("multipart/form-data"):
        form = await request.form()
        for key, value in form.multi_items():
            if hasattr(value, "read"):
                text = (await value.read()).decode("utf-8")
                name = Path(value.filename or key).stem
            else:
                text = str(value)
                name = key
            datasets.append(parse_dataset(text, name))
    else:
        try:
            payload = json.loads(body)
        except json.JSONDecodeError as exc:
            raise BodError(f"invalid JSON body: {exc}") from exc
        for item in payload.get("datasets", []):
            datasets.append(parse_dataset(item["csv"], item["name"]))
    return tuple(datasets)


class _PayloadTooLarge(Exception):
    pass


def create_app(
    snapshot_dir: Path | str | None = None,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
    assets_dir: Path | str | None = None,
) -> FastAPI:
    app = FastAPI(title="bod", docs_url=None, redoc_url=None)
    store = SessionStore(Path(snapshot_dir) if snapshot_dir else None)
    app.state.store = store

    @app.exception_handler(UnknownSessionError)
    async def _unknown_session(request: Request, exc: UnknownSessionError):
        return _error_response(404, exc.code, str(exc))

    @app.exception_handler(BodError)
    async def _bod_error(request: Request, exc: BodError):
        return _error_response(400, exc.code, str(exc))

    @app.exception_handler(_PayloadTooLarge)
    async def _too_large(request: Request, exc: _PayloadTooLarge):
        return _error_response(413, "payload_too_large", "request body exceeds size limit")

    @app.post("/api/sessions")
    async def create_session(request: Request):
        datasets = await _read_datasets(request, max_body_bytes)
        table = augment(datasets)
        session_id = store.create(datasets, table)
        return JSONResponse(
            {
                "session_id": session_id,
                "datasets": [
                    {"name": ds.name, "attributes": list(ds.attributes)}
                    for ds in datasets
                ],
                "tuple_count": table.n_tuples,
                "max_rounds": engine.max_rounds(table),
            },
            status_code=201,
        )

    @app.get("/api/sessions/{session_id}")
    async def get_session(session_id: str):
        entry = store.get(session_id)
        with entry.lock:
            return _canonical_json(_session_view(entry))

    @app.post("/api/sessions/{session_id}/rounds")
    async def post_round(session_id: str, request: Request):
        entry = store.get(session_id)
        payload = await request.json()
        choices = payload.get("choices")
        if not isinstance(choices, dict):
            raise InvalidChoiceError('body must be {"choices": {dataset: attribute}}')
        with entry.lock:
            try:
                result = engine.submit_round(entry.session, engine.RoundChoice(choices))
            except SessionFinishedError as exc:
                return _error_response(409, exc.code, str(exc))
            store.persist(session_id)
            body = snap.round_result_dict(result)
            body["status"] = entry.session.status.value
            body["eliminated_count"] = len(result.eliminated)
            body["survivor_preview"] = _survivor_preview(entry)
            return _canonical_json(body)

    @app.post("/api/sessions/{session_id}/finish")
    async def finish(session_id: str):
        entry = store.get(session_id)
        with entry.lock:
            subset = engine.finish_session(entry.session)
            store.persist(session_id)
            return _canonical_json(
                {
                    "tuples": list(subset.tuple_ids),
                    "utilities": [
                        float(entry.table.utilities[tid]) for tid in subset.tuple_ids
                    ],
                }
            )

    @app.get("/api/sessions/{session_id}/export")
    async def export_csv(session_id: str):
        entry = store.get(session_id)
        with entry.lock:
            ordered = sorted(
                entry.session.alive.tuple_ids,
                key=lambda tid: (-entry.table.utilities[tid], tid),
            )
            buf = io.StringIO()
            write_subset_csv(entry.table, ordered, buf)
        return PlainTextResponse(
            buf.getvalue(),
            media_type="text/csv",
            headers={"Content-Disposition": 'attachment; filename="discovery.csv"'},
        )

    @app.delete("/api/sessions/{session_id}", status_code=204)
    async def delete_session(session_id: str):
        store.delete(session_id)
        return Response(status_code=204)

    if assets_dir and Path(assets_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(assets_dir), html=True), name="ui")

    return app
