"""Interactive sessions: one live play exposed as a small state machine.

A session suspends whenever the engine needs an environment move and
resumes when one is submitted. Suspension is implemented by deterministic
re-execution: the session keeps the list of accepted moves and replays the
whole game from the start on each submit, which by replay determinism is
observably identical to pausing the play.

The JSON protocol:

    POST   /sessions                {"program": str, "query": str,
                                     "max_steps"?: int}
    GET    /sessions/{id}
    POST   /sessions/{id}/moves     {"pick": int} | {"term": str}
    DELETE /sessions/{id}
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel

from .engine import (
    BadTerm,
    BudgetExhausted,
    EnvRequest,
    Failure,
    Limits,
    Move,
    OutOfRange,
    PlaySuspended,
    PolarityError,
    ScriptedEnv,
    Success,
    Transcript,
    solve,
)
from .formulas import AgentDecl, Formula, pretty_term
from .syntax import (
    MoveEntry,
    MoveScript,
    ParseError,
    PickEntry,
    TermEntry,
    parse_program,
    parse_query,
    parse_term_text,
)
from .terms import Substitution, free_bounds, free_metas, free_vars

DEFAULT_TTL_SECONDS = 3600.0


class SessionError(Exception):
    pass


class UnknownSession(SessionError):
    pass


class IllegalState(SessionError):
    pass


def _render_moves(moves: tuple[Move, ...],
                  sigma: Substitution | None) -> list[dict]:
    return [{"who": m.chooser, "site": m.site, "move": m.describe(sigma)}
            for m in moves]


@dataclass
class Session:
    id: str
    program: list[AgentDecl]
    query: Formula
    limits: Limits
    env_moves: list[MoveEntry]
    status: str = "awaiting_env"            # awaiting_env | succeeded | failed | budget_exhausted
    pending: EnvRequest | None = None
    transcript: tuple[Move, ...] = ()
    result: Transcript | None = None
    expires_at: float = 0.0

    def __post_init__(self) -> None:
        self.lock = threading.Lock()

    def state(self) -> dict:
        sigma = self.result.sigma if self.result is not None else None
        out: dict = {
            "status": self.status,
            "transcript": _render_moves(self.transcript, sigma),
        }
        if self.status == "awaiting_env" and self.pending is not None:
            pending: dict = {"site": self.pending.site, "kind": self.pending.kind}
            if self.pending.kind == "choose_branch":
                pending["arity"] = self.pending.arity
                pending["options"] = list(self.pending.options or ())
            else:
                pending["binder"] = self.pending.binder
            out["pending"] = pending
        if self.status == "succeeded" and self.result is not None:
            assert isinstance(self.result.outcome, Success)
            out["bindings"] = {
                name: pretty_term(t)
                for name, t in self.result.outcome.bindings.items()
            }
        return out


class SessionManager:
    """In-memory session registry; thread-safe; idle sessions expire."""

    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS,
                 clock=time.monotonic):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._ttl = ttl_seconds
        self._clock = clock

    def _purge(self) -> None:
        now = self._clock()
        dead = [sid for sid, s in self._sessions.items() if s.expires_at <= now]
        for sid in dead:
            del self._sessions[sid]

    def create(self, program_text: str, query_text: str,
               max_steps: int | None = None) -> Session:
        program = parse_program(program_text)
        query = parse_query(query_text)
        limits = Limits(max_steps=max_steps) if max_steps else Limits()
        session = Session(
            id=uuid.uuid4().hex,
            program=program,
            query=query,
            limits=limits,
            env_moves=[],
        )
        _advance(session)
        with self._lock:
            self._purge()
            session.expires_at = self._clock() + self._ttl
            self._sessions[session.id] = session
        return session

    def get(self, sid: str) -> Session:
        with self._lock:
            self._purge()
            session = self._sessions.get(sid)
            if session is None:
                raise UnknownSession(sid)
            session.expires_at = self._clock() + self._ttl
            return session

    def submit_move(self, sid: str, payload: dict) -> Session:
        session = self.get(sid)
        with session.lock:
            if session.status != "awaiting_env":
                raise IllegalState(f"session {sid} is {session.status}")
            assert session.pending is not None
            entry = _validate_move(session.pending, payload)
            session.env_moves.append(entry)
            _advance(session)
        return session

    def close(self, sid: str) -> None:
        with self._lock:
            self._purge()
            if sid not in self._sessions:
                raise UnknownSession(sid)
            del self._sessions[sid]


def _validate_move(pending: EnvRequest, payload: dict) -> MoveEntry:
    if "pick" in payload:
        if pending.kind != "choose_branch":
            raise BadTerm("pending request needs a term witness, not a pick")
        index = payload["pick"]
        if not isinstance(index, int) or isinstance(index, bool):
            raise BadTerm("pick must be an integer")
        assert pending.arity is not None
        if not (0 <= index < pending.arity):
            raise OutOfRange(f"pick {index} out of range "
                             f"(arity {pending.arity})")
        return PickEntry(index, expected_site=pending.site)
    if "term" in payload:
        if pending.kind != "choose_term":
            raise BadTerm("pending request needs a pick, not a term")
        text = payload["term"]
        if not isinstance(text, str):
            raise BadTerm("term must be a string")
        try:
            t = parse_term_text(text)
        except ParseError as e:
            raise BadTerm(f"unparsable witness: {e}") from None
        if free_vars(t) or free_metas(t) or free_bounds(t):
            raise BadTerm(f"witness must be closed: {text}")
        return TermEntry(text, expected_site=pending.site)
    raise BadTerm("move must carry 'pick' or 'term'")


def _advance(session: Session) -> None:
    env = ScriptedEnv(MoveScript(tuple(session.env_moves)),
                      suspend_on_exhausted=True)
    try:
        tr = solve(session.program, session.query, env, session.limits)
    except PlaySuspended as s:
        session.status = "awaiting_env"
        session.pending = s.request
        session.transcript = s.moves
        session.result = None
        return
    session.pending = None
    session.transcript = tr.moves
    session.result = tr
    if isinstance(tr.outcome, Success):
        session.status = "succeeded"
    elif isinstance(tr.outcome, Failure):
        session.status = "failed"
    else:
        assert isinstance(tr.outcome, BudgetExhausted)
        session.status = "budget_exhausted"


# ---------------------------------------------------------------------------
# HTTP wiring

class CreateBody(BaseModel):
    program: str
    query: str
    max_steps: int | None = None


def create_app(manager: SessionManager | None = None,
               static_dir: str | None = None):
    mgr = manager or SessionManager()
    app = FastAPI(title="taskcl session protocol")

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateBody):
        try:
            session = mgr.create(body.program, body.query, body.max_steps)
        except (ParseError, PolarityError, ValueError) as e:
            raise HTTPException(422, detail=str(e))
        return {"id": session.id, "state": session.state()}

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        try:
            session = mgr.get(sid)
        except UnknownSession:
            raise HTTPException(404, detail="unknown session")
        return {"state": session.state()}

    @app.post("/sessions/{sid}/moves")
    def submit_move(sid: str, payload: dict):
        try:
            session = mgr.submit_move(sid, payload)
        except UnknownSession:
            raise HTTPException(404, detail="unknown session")
        except IllegalState as e:
            raise HTTPException(409, detail=str(e))
        except (OutOfRange, BadTerm) as e:
            raise HTTPException(422, detail=str(e))
        return {"state": session.state()}

    @app.delete("/sessions/{sid}", status_code=204)
    def close_session(sid: str):
        try:
            mgr.close(sid)
        except UnknownSession:
            raise HTTPException(404, detail="unknown session")
        return Response(status_code=204)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="console")

    return app
