"""HTTP chat service exposing both pipelines for single-turn QA.

Endpoints:

* ``POST /api/ask``   {"question", "mode", "cutoff"} -> answer + provenance
* ``GET  /api/modes`` available modes and cutoffs
* ``GET  /api/health`` readiness, with a degraded flag when a configured
  remote endpoint is unreachable (the extractive fallback still works)
* static serving of the built web UI at ``/``

Responses are stateless: they depend only on the request and server config,
never on prior requests.
"""

from __future__ import annotations

import time
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import Engine
from .remote import TransportError

_HEALTH_CACHE_SECONDS = 30.0


def create_app(engine: Engine | None = None, *, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="faqkit chat service")
    app.state.engine = engine
    app.state.remote_probe = None  # (timestamp, status dict)

    def _error(status: int, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"detail": detail})

    @app.post("/api/ask")
    async def ask(request: Request):
        engine: Engine | None = app.state.engine
        if engine is None:
            return _error(503, "engine not initialized")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")

        question = str(body.get("question", "")).strip()
        if not question:
            return _error(400, "question must be non-empty")
        mode = body.get("mode", "ib")
        if mode not in engine.modes:
            return _error(400, f"unknown mode {mode!r}, expected one of {list(engine.modes)}")
        cutoff = body.get("cutoff", 3)
        if not isinstance(cutoff, int) or (mode != "ib" and cutoff not in engine.cutoffs):
            return _error(
                400, f"cutoff must be one of {list(engine.cutoffs)} for mode {mode!r}"
            )

        try:
            result, ranking, timings = engine.answer(question, mode, cutoff)
        except TransportError as exc:
            return _error(502, f"backend failure: {exc}")
        passages = [
            {
                "id": entry.passage_id,
                "text": engine.collection.passages.get(entry.passage_id).text,
                "score": entry.score,
                "rank": rank,
            }
            for rank, entry in enumerate(ranking.entries, start=1)
        ]
        return {
            "answer": result.text,
            "answered": result.answered,
            "passages": passages,
            "mode": mode,
            "timings": {
                "retrieval_ms": timings.get("retrieval_ms", 0.0),
                "generation_ms": timings.get("generation_ms", 0.0),
            },
        }

    @app.get("/api/modes")
    async def modes():
        engine: Engine | None = app.state.engine
        if engine is None:
            return {"modes": [], "cutoffs": []}
        return {"modes": list(engine.modes), "cutoffs": list(engine.cutoffs)}

    @app.get("/api/health")
    async def health():
        engine: Engine | None = app.state.engine
        if engine is None:
            return {"ready": False, "degraded": False, "components": {}}
        cached = app.state.remote_probe
        now = time.monotonic()
        if cached is None or now - cached[0] > _HEALTH_CACHE_SECONDS:
            status = engine.probe_remotes()
            app.state.remote_probe = (now, status)
        else:
            status = cached[1]
        components = {
            "index": True,
            "intent_model": True,
            "dense_store": True,
            "generator": engine.generator.kind,
        }
        for name, reachable in status.items():
            components[f"remote_{name}"] = "ok" if reachable else "unreachable"
        return {
            "ready": True,
            "degraded": any(not reachable for reachable in status.values()),
            "components": components,
        }

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
