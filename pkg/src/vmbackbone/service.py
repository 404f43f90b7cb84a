"""HTTP facade exposing propagation sessions to the configurator UI.

All state is in memory: uploaded models plus propagation sessions with idle
eviction. The service holds no logic of its own; every transition delegates
to the propagation module, so session semantics match the library exactly.

Wire format notes: ``decided`` lists signed literals, the other partitions
list variable indices; an optional ``names`` map (index -> feature name)
uploaded with the model is echoed in every payload so clients can render
feature names without tracking them separately.
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .cnf import CnfFormula, DimacsParseError, FormulaStats, formula_stats, parse_dimacs
from .propagation import (
    AlreadyDecidedError,
    ConfigSession,
    ConflictingDecisionsError,
    NotADecisionError,
    PropagationResult,
    classify_variables,
)
from .solver import new_session


class ModelUpload(BaseModel):
    dimacs: str
    names: dict[int, str] | None = None


class SessionCreate(BaseModel):
    model_id: str


class DecisionBody(BaseModel):
    literal: int


@dataclass
class _ModelEntry:
    formula: CnfFormula
    stats: FormulaStats
    names: dict[int, str]


@dataclass
class _SessionEntry:
    model_id: str
    session: ConfigSession
    last_used: float = field(default_factory=time.monotonic)
    # Serializes mutations of this session; distinct sessions proceed in
    # parallel and readers see the last completed propagation.
    mutex: threading.Lock = field(default_factory=threading.Lock)


def _stats_payload(stats: FormulaStats) -> dict:
    return {
        "num_vars": stats.num_vars,
        "num_clauses": stats.num_clauses,
        "clause_var_ratio": stats.clause_var_ratio,
        "median_literals_per_clause": stats.median_literals_per_clause,
        "pct_clauses_gt2": stats.pct_clauses_gt2,
        "num_binary_or_unit": stats.num_binary_or_unit,
    }


def create_app(session_ttl: float = 3600.0, backend: str | None = None) -> FastAPI:
    app = FastAPI(title="vmbackbone propagation service")

    models: dict[str, _ModelEntry] = {}
    sessions: dict[str, _SessionEntry] = {}
    counter = itertools.count(1)
    lock = threading.Lock()

    def _evict_idle_sessions() -> None:
        deadline = time.monotonic() - session_ttl
        for sid in [sid for sid, entry in sessions.items() if entry.last_used < deadline]:
            del sessions[sid]

    def _session_state(sid: str, entry: _SessionEntry) -> dict:
        result: PropagationResult = entry.session.result
        return {
            "session_id": sid,
            "model_id": entry.model_id,
            "decided": list(result.decided),
            "implied_true": sorted(result.implied_true),
            "implied_false": sorted(result.implied_false),
            "free": sorted(result.free),
            "names": {str(v): n for v, n in models[entry.model_id].names.items()},
        }

    def _error(status: int, code: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": code, "detail": detail})

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/models", status_code=201)
    async def upload_model(request: Request):
        content_type = request.headers.get("content-type", "")
        try:
            if content_type.startswith("application/json"):
                body = ModelUpload.model_validate_json(await request.body())
            else:
                body = ModelUpload(dimacs=(await request.body()).decode("utf-8"))
        except (ValueError, UnicodeDecodeError) as exc:
            return _error(422, "malformed_body", str(exc))
        try:
            formula = parse_dimacs(body.dimacs).formula
        except DimacsParseError as exc:
            return _error(422, "parse_error", str(exc))
        if not new_session(formula, backend=backend).solve().sat:
            return _error(422, "unsatisfiable_model", "the uploaded formula has no solutions")
        names = dict(body.names or {})
        unknown = [v for v in names if not 1 <= v <= formula.num_vars]
        if unknown:
            return _error(422, "malformed_body", f"names for unknown variables {unknown}")
        model_id = f"m{next(counter)}"
        with lock:
            models[model_id] = _ModelEntry(formula, formula_stats(formula), names)
        return {"model_id": model_id, "stats": _stats_payload(models[model_id].stats)}

    @app.get("/models/{model_id}/classification")
    def classification(model_id: str):
        entry = models.get(model_id)
        if entry is None:
            return _error(404, "unknown_model", model_id)
        classes = classify_variables(entry.formula, backend=backend)
        return {
            "core": sorted(classes.core),
            "dead": sorted(classes.dead),
            "free": sorted(classes.free),
            "names": {str(v): n for v, n in entry.names.items()},
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreate):
        entry = models.get(body.model_id)
        if entry is None:
            return _error(404, "unknown_model", body.model_id)
        with lock:
            _evict_idle_sessions()
            sid = f"s{next(counter)}"
            sessions[sid] = _SessionEntry(
                model_id=body.model_id,
                session=ConfigSession(entry.formula, backend=backend),
            )
        return _session_state(sid, sessions[sid])

    def _touch(session_id: str) -> _SessionEntry | None:
        with lock:
            _evict_idle_sessions()
            entry = sessions.get(session_id)
            if entry is not None:
                entry.last_used = time.monotonic()
            return entry

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        entry = _touch(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        return _session_state(session_id, entry)

    @app.post("/sessions/{session_id}/decisions")
    def add_decision(session_id: str, body: DecisionBody, response: Response):
        entry = _touch(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        num_vars = models[entry.model_id].formula.num_vars
        if body.literal == 0 or abs(body.literal) > num_vars:
            return _error(422, "malformed_body", f"literal {body.literal} out of range")
        with entry.mutex:
            try:
                entry.session.assert_decision(body.literal)
            except ConflictingDecisionsError as exc:
                return _error(409, "conflicting_decision", str(exc))
            except AlreadyDecidedError as exc:
                return _error(409, "already_decided", str(exc))
            response.status_code = 200
            return _session_state(session_id, entry)

    @app.delete("/sessions/{session_id}/decisions/{var}")
    def remove_decision(session_id: str, var: int):
        entry = _touch(session_id)
        if entry is None:
            return _error(404, "unknown_session", session_id)
        with entry.mutex:
            try:
                entry.session.retract_decision(var)
            except NotADecisionError as exc:
                return _error(404, "not_a_decision", str(exc))
            return _session_state(session_id, entry)

    return app
