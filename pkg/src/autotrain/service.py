"""HTTP session service over the library pipeline.

The wire format is the contract for browser clients: plain JSON, score
numbers carried with 4-decimal rounding, errors as
{"error_code", "message", "stage"?}. Requests within one session are
serialized in arrival order; sessions are independent of each other.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .errors import ConfigError, EngineError
from .phonemes import NoiseSpec
from .session import SessionConfig, SessionEngine, SessionState, history_doc, process_utterance


@dataclass
class _SessionRecord:
    state: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    closed: bool = False


def _error_body(code: str, message: str, stage: str | None = None) -> dict:
    doc = {"error_code": code, "message": message}
    if stage is not None:
        doc["stage"] = stage
    return doc


def create_app(config: SessionConfig) -> FastAPI:
    engine = SessionEngine(config)
    app = FastAPI(title="autotrain session service")
    sessions: dict[str, _SessionRecord] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(EngineError)
    async def _engine_error(_request: Request, exc: EngineError):
        return JSONResponse(
            status_code=422, content=_error_body(exc.code, exc.message, exc.stage)
        )

    def _get_record(session_id: str) -> _SessionRecord | None:
        with registry_lock:
            return sessions.get(session_id)

    @app.post("/sessions", status_code=201)
    def open_session_endpoint(overrides: dict | None = None):
        overrides = overrides or {}
        noise = overrides.get("noise")
        state = engine.open(
            backend=overrides.get("backend"),
            seed=overrides.get("seed"),
            modality=overrides.get("modality"),
            noise=NoiseSpec(**noise) if noise else None,
        )
        with registry_lock:
            session_id = state.session_id
            bump = 2
            while session_id in sessions:
                session_id = f"{state.session_id}-{bump}"
                bump += 1
            state.session_id = session_id
            sessions[session_id] = _SessionRecord(state=state)
        return {"session_id": state.session_id, "phase": state.phase}

    @app.post("/sessions/{session_id}/utterances")
    def utterance_endpoint(session_id: str, body: dict):
        record = _get_record(session_id)
        if record is None:
            return JSONResponse(
                status_code=404,
                content=_error_body("session_not_found", f"no session {session_id!r}"),
            )
        if record.closed:
            return JSONResponse(
                status_code=409,
                content=_error_body("session_closed", f"session {session_id!r} is closed"),
            )
        text = body.get("text")
        if not isinstance(text, str):
            raise ConfigError('request body must carry a "text" string')
        with record.lock:
            _, output = process_utterance(record.state, text)
            return {"response": output.to_dict(), "phase": record.state.phase}

    @app.get("/sessions/{session_id}")
    def get_session_endpoint(session_id: str):
        record = _get_record(session_id)
        if record is None:
            return JSONResponse(
                status_code=404,
                content=_error_body("session_not_found", f"no session {session_id!r}"),
            )
        with record.lock:
            return {
                "phase": record.state.phase,
                "history": history_doc(record.state),
                "closed": record.closed,
            }

    @app.delete("/sessions/{session_id}", status_code=204)
    def close_session_endpoint(session_id: str):
        record = _get_record(session_id)
        if record is None:
            return JSONResponse(
                status_code=404,
                content=_error_body("session_not_found", f"no session {session_id!r}"),
            )
        with record.lock:
            record.closed = True
        return Response(status_code=204)

    return app


def serve(config: SessionConfig, bind: str = "127.0.0.1:8743") -> None:
    """Run the service until interrupted; in-flight requests finish on shutdown."""
    import uvicorn

    host, _, port = bind.partition(":")
    if not port:
        raise ConfigError(f"bind address must be host:port, got {bind!r}")
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))
