"""HTTP/JSON session service: a live game per session, one writer at a time.

The human plays the first seat.  Posting a move validates it exactly; on
success the second player's strategy replies within the same request
(desk-scale amalgamation completes interactively, so no push channel is
needed).  Every rejection carries a machine-checkable witness — the vector
or point triple that fails the corresponding exact check.
"""

from __future__ import annotations

import itertools
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .errors import BmgameError, RejectedInputError
from .game import (
    EVE,
    KIND_METRIC,
    GameConfig,
    GameState,
    GameTranscript,
    Move,
    pregame_space,
    resolve_rule_class,
    validate_move,
)
from .linalg import Matrix
from .maps import LinearMap
from .metric import MetricEmbedding, metric_from_json
from .spaces import space_from_json
from .strategies import build_odd_strategy

_ids = itertools.count(1)


@dataclass
class SessionRecord:
    session_id: str
    config: GameConfig
    state: GameState
    odd: object
    created: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def kind(self) -> str:
        return self.config.kind


def _state_summary(session: SessionRecord) -> dict:
    state = session.state
    queue_depth = 0
    certificates = []
    for move in state.moves:
        events = move.annotations.get("queue")
        if events is not None:
            queue_depth = events.get("depth_after", 0)
        for cert in move.annotations.get("certificates", []):
            entry = dict(cert)
            entry["owner"] = move.by
            certificates.append(entry)
    key = "metric" if state.kind == KIND_METRIC else "space"
    return {
        "id": session.session_id,
        "kind": session.config.kind,
        "rounds_played": state.stage_count,
        "next_player": EVE if state.stage_count % 2 == 0 else "odd",
        "stages": [
            {"round": m.round, "by": m.by, key: m.space.to_json(), "annotations": m.annotations}
            for m in state.moves
        ],
        "queue_depth": queue_depth,
        "certificates": certificates,
    }


def _parse_move(session: SessionRecord, body: dict) -> Move:
    state = session.state
    rnd = state.stage_count
    previous = state.last_space()
    if state.kind == KIND_METRIC:
        if "metric" not in body:
            raise RejectedInputError("move body must contain 'metric'")
        space = metric_from_json(body["metric"])
        assignment = tuple(body.get("link", {}).get("assignment", range(previous.size)))
        link = MetricEmbedding(previous, space, assignment)
    else:
        if "space" not in body:
            raise RejectedInputError("move body must contain 'space'")
        space = space_from_json(body["space"])
        matrix_json = body.get("link", {}).get("matrix")
        if matrix_json is None and previous.dim == 0:
            matrix = Matrix(space.dim, 0, tuple(() for _ in range(space.dim)))
        else:
            matrix = Matrix.from_json(matrix_json, rows=space.dim, cols=previous.dim)
        link = LinearMap(previous, space, matrix)
    return Move(EVE, rnd, space, link)


def create_app() -> FastAPI:
    app = FastAPI(title="bmgame session service")
    sessions: dict[str, SessionRecord] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> SessionRecord:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    @app.post("/games")
    def create_game(body: dict | None = None):
        body = body or {}
        config_body = dict(body.get("config", {}))
        config_body.setdefault("kind", body.get("kind", "normed"))
        config_body.setdefault("rounds", 64)
        config = GameConfig.from_json(config_body)
        if config.kind == "normed-restricted" and not config.rule_class:
            config.rule_class = "linf"
        state = GameState(config, rule_class=resolve_rule_class(config))
        odd = build_odd_strategy(config.odd, config)
        session = SessionRecord(f"g{next(_ids)}", config, state, odd)
        with registry_lock:
            sessions[session.session_id] = session
        return {"id": session.session_id, "state": _state_summary(session)}

    @app.get("/games/{session_id}")
    def get_game(session_id: str):
        return _state_summary(get_session(session_id))

    @app.post("/games/{session_id}/validate")
    def dry_run(session_id: str, body: dict):
        session = get_session(session_id)
        with session.lock:
            try:
                move = _parse_move(session, body)
            except BmgameError as exc:
                return {"valid": False, "reason": str(exc), "witness": _witness_json(exc)}
            if session.state.stage_count % 2 == 1:
                return {"valid": False, "reason": "it is not the first player's turn", "witness": None}
            verdict = validate_move(session.state, move)
            return {"valid": verdict.ok, "reason": verdict.reason or None, "witness": _to_jsonable(verdict.witness)}

    @app.post("/games/{session_id}/moves")
    def post_move(session_id: str, body: dict):
        session = get_session(session_id)
        with session.lock:
            state = session.state
            if state.stage_count % 2 == 1:
                return JSONResponse(status_code=422, content={"reason": "it is not the first player's turn"})
            try:
                move = _parse_move(session, body)
            except BmgameError as exc:
                return JSONResponse(
                    status_code=422,
                    content={"reason": str(exc), "witness": _to_jsonable(_witness_json(exc))},
                )
            verdict = validate_move(state, move)
            if not verdict.ok:
                return JSONResponse(
                    status_code=422,
                    content={"reason": verdict.reason, "witness": _to_jsonable(verdict.witness)},
                )
            state.append(move)
            reply = session.odd.propose(state, state.stage_count)
            reply_verdict = validate_move(state, reply)
            if not reply_verdict.ok:  # pragma: no cover - strategy invariant
                raise HTTPException(status_code=500, detail=f"strategy produced an invalid reply: {reply_verdict.reason}")
            state.append(reply)
            summary = _state_summary(session)
            key = "metric" if state.kind == KIND_METRIC else "space"
            return {
                "eve": {"round": move.round, key: move.space.to_json()},
                "odd": {
                    "round": reply.round,
                    key: reply.space.to_json(),
                    "link": reply.link.to_json(),
                    "annotations": reply.annotations,
                },
                "state": summary,
            }

    @app.get("/games/{session_id}/transcript")
    def get_transcript(session_id: str):
        session = get_session(session_id)
        with session.lock:
            transcript = GameTranscript(session.config, list(session.state.moves))
            return transcript.to_json()

    @app.delete("/games/{session_id}")
    def delete_game(session_id: str):
        with registry_lock:
            if session_id not in sessions:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
            del sessions[session_id]
        return {"deleted": session_id}

    return app


def _witness_json(exc: BmgameError):
    return getattr(exc, "witness", None)


def _to_jsonable(witness):
    if witness is None:
        return None
    if isinstance(witness, (list, tuple)):
        return [_to_jsonable(w) for w in witness]
    if isinstance(witness, (int, str)):
        return witness
    return str(witness)
