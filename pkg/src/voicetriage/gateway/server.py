"""HTTP/WebSocket transport over the session service.

Endpoints:
    WS   /session                              duplex message channel
    PUT  /sessions/{id}/videos/{component}     video upload during a gate
    GET  /sessions/{id}/report                 persisted final report
    GET  /healthz

Configuration comes from the environment:
    VOICE_LISTEN_ADDR   host:port (default 127.0.0.1:8763)
    VOICE_DATA_DIR      session store root (default ./voice-data)
    VOICE_BACKEND       scripted | realtime (default scripted)
    VOICE_SCRIPT_PATH   script file for the scripted backend
    VOICE_AGENT_CONFIG  agent table JSON (bundled default)
    VOICE_REALTIME_ENDPOINT / VOICE_REALTIME_KEY   live adapter only
    VOICE_DETERMINISTIC set to 1 for synthetic clocks and stable session
                        ids, so a driven session reproduces the harness
                        replay byte for byte (CI/testing aid)
"""

from __future__ import annotations

import asyncio
import json
import os
from contextlib import asynccontextmanager
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response, WebSocket, WebSocketDisconnect

from ..agents import load_agent_table
from ..clock import SystemClock
from ..scripted import ScriptedBackend, load_bundled_script, load_script
from .backends import RealtimeBackend, RealtimeConfig
from .service import ServiceConfig, SessionService, UploadError
from .store import SessionNotFoundError

DEFAULT_LISTEN = "127.0.0.1:8763"
IDLE_SWEEP_SECONDS = 30


def config_from_env(env: Optional[dict[str, str]] = None) -> ServiceConfig:
    env = dict(os.environ if env is None else env)
    data_dir = Path(env.get("VOICE_DATA_DIR", "voice-data"))
    agent_path = env.get("VOICE_AGENT_CONFIG")
    agent_table = load_agent_table(agent_path)
    backend_kind = env.get("VOICE_BACKEND", "scripted")
    script = None

    if backend_kind == "scripted":
        script_path = env.get("VOICE_SCRIPT_PATH")
        if script_path:
            script = load_script(script_path, agent_table)
        else:
            script = load_bundled_script("table1", agent_table)
        bound_script = script

        def backend_factory(session_id: str) -> ScriptedBackend:
            return ScriptedBackend(bound_script)

    elif backend_kind == "realtime":
        realtime = RealtimeConfig(
            endpoint=env.get("VOICE_REALTIME_ENDPOINT", ""),
            api_key=env.get("VOICE_REALTIME_KEY", ""),
        )

        def backend_factory(session_id: str) -> RealtimeBackend:
            return RealtimeBackend(realtime)

    else:
        raise ValueError(f"unknown VOICE_BACKEND {backend_kind!r}")

    session_id_factory = None
    clock_factory = SystemClock
    if env.get("VOICE_DETERMINISTIC") in ("1", "true", "yes"):
        from ..clock import DEFAULT_SYNTHETIC_START, SyntheticClock

        clock_factory = lambda: SyntheticClock(DEFAULT_SYNTHETIC_START)  # noqa: E731
        base = f"s-{script.script_id}" if script is not None else "s-session"
        counter = {"n": 0}

        def session_id_factory() -> str:
            counter["n"] += 1
            return base if counter["n"] == 1 else f"{base}-{counter['n']}"

    return ServiceConfig(
        data_dir=data_dir,
        backend_factory=backend_factory,
        agent_table=agent_table,
        clock_factory=clock_factory,
        session_id_factory=session_id_factory,
    )


def build_app(service: SessionService) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        async def sweeper() -> None:
            while True:
                await asyncio.sleep(IDLE_SWEEP_SECONDS)
                await asyncio.to_thread(service.sweep_idle)

        task = asyncio.create_task(sweeper())
        yield
        task.cancel()
        # Drain: every live session gets a persisted abort report.
        service.shutdown()

    app = FastAPI(title="voicetriage gateway", lifespan=lifespan)
    app.state.service = service

    @app.get("/healthz")
    def healthz() -> dict[str, str]:
        return {"status": "ok"}

    @app.websocket("/session")
    async def session_channel(ws: WebSocket) -> None:
        await ws.accept()
        connection = service.open_connection()
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    doc = json.loads(raw)
                except json.JSONDecodeError:
                    doc = raw  # parse_envelope reports BAD_ENVELOPE
                replies = await asyncio.to_thread(connection.handle, doc)
                for reply in replies:
                    await ws.send_text(json.dumps(reply, ensure_ascii=False))
                if connection.closed:
                    await ws.close()
                    return
        except WebSocketDisconnect:
            if connection.session is not None:
                session = connection.session
                with session.lock:
                    session.engine.abort("connection dropped")
                    service.persist_session(session)

    @app.put("/sessions/{session_id}/videos/{component}")
    async def put_video(session_id: str, component: str, request: Request) -> Response:
        data = await request.body()
        content_type = request.headers.get("content-type", "")
        duration_s = float(request.headers.get("x-video-duration-s", "0") or 0)
        try:
            video_id = await asyncio.to_thread(
                service.upload_video, session_id, component, data, content_type, duration_s
            )
        except UploadError as exc:
            return Response(
                content=json.dumps({"code": exc.code, "detail": exc.detail}),
                status_code=exc.http_status,
                media_type="application/json",
            )
        return Response(
            content=json.dumps({"video_id": video_id}),
            media_type="application/json",
        )

    @app.get("/sessions/{session_id}/videos/{component}")
    def get_video(session_id: str, component: str) -> Response:
        stored = service.store.read_video(session_id, component)
        if stored is None:
            return Response(
                content=json.dumps({"code": "NOT_FOUND", "detail": component}),
                status_code=404,
                media_type="application/json",
            )
        data, content_type = stored
        return Response(content=data, media_type=content_type)

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str) -> Response:
        try:
            report = service.load_report(session_id)
        except SessionNotFoundError:
            return Response(
                content=json.dumps({"code": "NOT_FOUND", "detail": session_id}),
                status_code=404,
                media_type="application/json",
            )
        return Response(content=report, media_type="application/json")

    return app


def serve(config: Optional[ServiceConfig] = None, listen_addr: Optional[str] = None) -> None:
    """Run the gateway until interrupted (blocking)."""
    import uvicorn

    service = SessionService(config or config_from_env())
    app = build_app(service)
    addr = listen_addr or os.environ.get("VOICE_LISTEN_ADDR", DEFAULT_LISTEN)
    host, _, port = addr.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
