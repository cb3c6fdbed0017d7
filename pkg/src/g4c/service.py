"""JSON-over-HTTP service exposing the engine to the analyst console.

One immutable KB snapshot is loaded at startup; POST /api/reload re-reads
the directory and swaps the snapshot atomically on success. Requests never
mutate shared state, so concurrent handling over a snapshot is safe. Error
bodies are {"error", "detail"} with 400 for malformed input, 404 for unknown
grants, 500 for internal failures.
"""

from __future__ import annotations

import datetime
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .kb import (
    KBLoadError,
    KnowledgeBase,
    consistency_report,
    duplicate_condition_pairs,
    evaluate_all,
    implication_matrix,
    load_kb,
)
from .kleene import CompanyProfile, ProfileError
from .model import formula_from_sexpr
from .prover import Sequent, prove
from .render import formula_text, render_derivation_html
from .sexpr import read
from .serialize import (
    consistency_json,
    derivation_json,
    grant_full_json,
    grant_meta_json,
    implication_json,
    result_json,
)


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


class _State:
    """Current KB snapshot; swapped wholesale under a lock on reload."""

    def __init__(self, kb_path: str):
        self.kb_path = kb_path
        self.kb: KnowledgeBase = load_kb(kb_path)
        self._lock = threading.Lock()

    def reload(self) -> KnowledgeBase:
        fresh = load_kb(self.kb_path)
        with self._lock:
            self.kb = fresh
        return fresh


def create_app(kb_path: str, assets_path: Optional[str] = None) -> FastAPI:
    state = _State(kb_path)
    app = FastAPI(title="grant condition engine", docs_url=None, redoc_url=None)

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "grants": len(state.kb.grants),
            "concepts": len(state.kb.concepts),
        }

    @app.get("/api/grants")
    def grants():
        return [grant_meta_json(g) for g in state.kb.grants]

    @app.get("/api/grants/{grant_ref:path}")
    def grant_detail(grant_ref: str):
        try:
            g = state.kb.grant(grant_ref)
        except KeyError:
            return _error(404, "unknown grant", grant_ref)
        return grant_full_json(g)

    @app.get("/api/concepts")
    def concepts():
        return [
            {
                "name": str(c.name),
                "definition": formula_text(c.definition),
                "explanation": c.explanation,
            }
            for c in state.kb.concepts
        ]

    @app.post("/api/evaluate")
    async def evaluate(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "malformed request", "body is not valid JSON")
        if not isinstance(body, dict) or "profile" not in body:
            return _error(400, "malformed request", 'expected {"profile": {...}}')
        try:
            profile = CompanyProfile.from_json(body["profile"])
        except ProfileError as exc:
            return _error(400, "malformed profile", str(exc))
        filters = body.get("filters") or {}
        if not isinstance(filters, dict):
            return _error(400, "malformed request", "filters must be an object")
        category = filters.get("category")
        at_date = None
        if filters.get("date"):
            try:
                at_date = datetime.date.fromisoformat(filters["date"])
            except (TypeError, ValueError):
                return _error(400, "malformed request", f"bad date {filters.get('date')!r}")
        results = evaluate_all(state.kb, profile, category=category, at_date=at_date)
        return [result_json(r) for r in results]

    def _parse_side(entries, label: str) -> tuple:
        if not isinstance(entries, list) or not all(isinstance(e, str) for e in entries):
            raise ValueError(f"sequent {label} side must be a list of formula strings")
        return tuple(formula_from_sexpr(read(e), state.kb.concepts) for e in entries)

    @app.post("/api/prove")
    async def prove_endpoint(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "malformed request", "body is not valid JSON")
        if isinstance(body, dict) and "sequent" in body:
            spec = body["sequent"]
            if not isinstance(spec, dict):
                return _error(400, "malformed request", "sequent must be an object")
            try:
                goal = Sequent(
                    _parse_side(spec.get("left", []), "left"),
                    _parse_side(spec.get("right", []), "right"),
                )
            except ValueError as exc:  # covers syntax and formula shape errors
                return _error(400, "malformed sequent", str(exc))
        elif isinstance(body, dict) and "from" in body and "to" in body:
            try:
                g_from = state.kb.grant(str(body["from"]))
                g_to = state.kb.grant(str(body["to"]))
            except KeyError as exc:
                return _error(404, "unknown grant", str(exc.args[0]))
            goal = Sequent((g_from.conditions,), (g_to.conditions,))
        else:
            return _error(
                400, "malformed request",
                'expected {"from": grant, "to": grant} or {"sequent": {"left": [...], "right": [...]}}',
            )
        derivation = prove(goal, state.kb.concepts)
        if derivation is None:
            return {"derivable": False, "derivation": None, "html": None}
        return {
            "derivable": True,
            "derivation": derivation_json(derivation),
            "html": render_derivation_html(derivation),
        }

    @app.get("/api/implications")
    def implications():
        edges = implication_matrix(state.kb)
        return {
            "edges": [implication_json(e) for e in edges],
            "duplicates": [list(p) for p in duplicate_condition_pairs(state.kb)],
        }

    @app.get("/api/consistency")
    def consistency():
        return [consistency_json(r) for r in consistency_report(state.kb)]

    @app.post("/api/reload")
    def reload_kb():
        try:
            fresh = state.reload()
        except KBLoadError as exc:
            return _error(400, "knowledge base failed to load", str(exc))
        return {"reloaded": True, "grants": len(fresh.grants)}

    static_dir = Path(__file__).parent / "static"
    app.mount("/static", StaticFiles(directory=static_dir), name="static")
    if assets_path:
        app.mount("/", StaticFiles(directory=assets_path, html=True), name="console")

    return app
