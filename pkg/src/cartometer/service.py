"""Minimal REST backend for the tracing UI.

Every endpoint is a thin wrapper over session / calibration / measurement /
boundary-fit operations; measurement and fit responses are produced by the
same serializer the CLI uses, so the two surfaces are byte-identical.

Sessions are held in memory and flushed to the session directory (atomic
rename) on every mutation. Writes are serialized per session id.
"""

from __future__ import annotations

import dataclasses
import json
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from . import boundary as boundary_mod
from . import reporting, session as session_mod
from .calibration import apply_transform
from .errors import (
    CartometerError,
    DegenerateConfigurationError,
    DuplicatePointError,
    IncompleteFeatureError,
    InsufficientDataError,
    InvalidInputError,
    NonInvertibleError,
    NotFoundError,
    ProjectionDomainError,
    SchemaViolationError,
    UncalibratedSessionError,
)

_STATUS_BY_ERROR = {
    NotFoundError: 404,
    SchemaViolationError: 422,
    IncompleteFeatureError: 422,
    DuplicatePointError: 422,
    InvalidInputError: 422,
    DegenerateConfigurationError: 409,
    InsufficientDataError: 409,
    UncalibratedSessionError: 409,
    NonInvertibleError: 409,
    ProjectionDomainError: 409,
}


def _status_for(exc: CartometerError) -> int:
    for cls in type(exc).__mro__:
        if cls in _STATUS_BY_ERROR:
            return _STATUS_BY_ERROR[cls]
    return 500


class SessionStore:
    """In-memory session map backed by one JSON file per session id."""

    def __init__(self, directory: Path):
        self.directory = Path(directory)
        self._sessions: dict[str, session_mod.Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        for path in sorted(self.directory.glob("*.json")):
            self._sessions[path.stem] = session_mod.load_session(path)

    def _lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def ids(self) -> list[str]:
        return sorted(self._sessions)

    def get(self, session_id: str) -> session_mod.Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise NotFoundError(f"session not found: {session_id!r}")

    def put(self, session_id: str, session: session_mod.Session) -> None:
        with self._lock(session_id):
            self._flush(session_id, session)

    def mutate(self, session_id: str, fn) -> session_mod.Session:
        """Apply fn(session) -> session under the per-id lock and flush."""
        with self._lock(session_id):
            updated = fn(self.get(session_id))
            self._flush(session_id, updated)
            return updated

    def _flush(self, session_id: str, session: session_mod.Session) -> None:
        self._sessions[session_id] = session
        session_mod.save_session(session, self.directory / f"{session_id}.json")


def _error_response(exc: CartometerError) -> JSONResponse:
    return JSONResponse(
        status_code=_status_for(exc),
        content={"error": {"code": exc.machine_code, "message": str(exc)}},
    )


def _json_body(raw: bytes, path: str = "$") -> dict:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"{path}: not valid JSON ({exc.msg})")
    if not isinstance(data, dict):
        raise SchemaViolationError(f"{path}: expected a JSON object")
    return data


def create_app(session_dir, ui_dir: Optional[Path] = None) -> FastAPI:
    store = SessionStore(Path(session_dir))
    app = FastAPI(title="cartometer", docs_url=None, redoc_url=None)
    app.state.store = store

    @app.exception_handler(CartometerError)
    async def _handle_domain_error(_request: Request, exc: CartometerError):
        return _error_response(exc)

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz():
        return "ok"

    @app.get("/api/sessions")
    def list_sessions():
        return {"sessions": store.ids()}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        sess = store.get(session_id)
        return Response(
            content=session_mod.session_to_json(sess), media_type="application/json"
        )

    @app.put("/api/sessions/{session_id}")
    async def put_session(session_id: str, request: Request):
        data = _json_body(await request.body())
        sess = session_mod.session_from_dict(data)
        store.put(session_id, sess)
        return Response(
            content=session_mod.session_to_json(sess), media_type="application/json"
        )

    @app.post("/api/sessions/{session_id}/calibrate")
    async def calibrate_session(session_id: str, request: Request):
        data = _json_body(await request.body())
        pairs_raw = data.get("pairs")
        kind = data.get("kind", "similarity")
        if not isinstance(pairs_raw, list):
            raise SchemaViolationError("$.pairs: expected a list of control pairs")
        result: dict = {}

        def _calibrate(sess: session_mod.Session) -> session_mod.Session:
            cps = []
            for i, pair in enumerate(pairs_raw):
                path = f"$.pairs[{i}]"
                if not isinstance(pair, dict) or "pixel" not in pair:
                    raise SchemaViolationError(f"{path}: expected {{pixel, world|geo}}")
                if "geo" in pair and pair["geo"] is not None:
                    cps.append(
                        session_mod.make_control_point(
                            pair["pixel"], geo=pair["geo"], label=str(pair.get("label", ""))
                        )
                    )
                elif "world" in pair and pair["world"] is not None:
                    cps.append(
                        session_mod.make_control_point(
                            pair["pixel"], world=pair["world"], label=str(pair.get("label", ""))
                        )
                    )
                else:
                    raise SchemaViolationError(f"{path}: needs world or geo coordinates")
            updated = session_mod.set_calibration(sess, cps, kind=kind)
            t = updated.calibration.transform
            result.update(
                {
                    "kind": t.kind,
                    "coefficients": list(t.coefficients),
                    "flip": t.flip,
                    "rms_residual": t.rms_residual,
                }
            )
            return updated

        store.mutate(session_id, _calibrate)
        return JSONResponse(content=result)

    @app.post("/api/sessions/{session_id}/features/{feature_id}/points")
    async def add_point(session_id: str, feature_id: str, request: Request):
        data = _json_body(await request.body())
        if "u" not in data or "v" not in data:
            raise SchemaViolationError("$: point body needs numeric u and v")
        for key in ("u", "v"):
            if isinstance(data[key], bool) or not isinstance(data[key], (int, float)):
                raise SchemaViolationError(f"$.{key}: expected a number")
        updated = store.mutate(
            session_id,
            lambda sess: session_mod.add_point(sess, feature_id, (data["u"], data["v"])),
        )
        feature = updated.feature(feature_id)
        return {
            "id": feature.id,
            "kind": feature.kind,
            "name": feature.name,
            "points": [list(p) for p in feature.points],
        }

    @app.post("/api/sessions/{session_id}/features/{feature_id}/measure")
    async def measure(session_id: str, feature_id: str, request: Request):
        raw = await request.body()
        data = _json_body(raw) if raw else {}
        sess = store.get(session_id)
        if "unit" in data and data["unit"] is not None:
            if data["unit"] not in session_mod.LENGTH_UNIT_FACTORS:
                raise InvalidInputError(f"unsupported display unit {data['unit']!r}")
            sess = dataclasses.replace(sess, display_unit=data["unit"])
        report = session_mod.measure_feature(sess, feature_id)
        return Response(
            content=reporting.dumps_measurement(report), media_type="application/json"
        )

    @app.post("/api/sessions/{session_id}/features/{feature_id}/fit")
    async def fit(session_id: str, feature_id: str, request: Request):
        raw = await request.body()
        data = _json_body(raw) if raw else {}
        n = data.get("n")
        if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
            raise SchemaViolationError("$.n: expected an integer")
        sess = store.get(session_id)
        feature = sess.feature(feature_id)
        if feature.kind != session_mod.REGION:
            raise InvalidInputError("fit requires a region feature")
        if sess.calibration is None:
            raise UncalibratedSessionError("session has no calibration; calibrate first")
        if len(feature.points) < 3:
            raise IncompleteFeatureError(
                f"region {feature_id!r} needs >= 3 points before fitting"
            )
        world = apply_transform(sess.calibration.transform, list(feature.points))
        report = boundary_mod.fit_fourier_boundary(world, n)
        samples = boundary_mod.sample_boundary(report.boundary, 256)
        return Response(
            content=reporting.dumps_fit(feature_id, report, samples),
            media_type="application/json",
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
