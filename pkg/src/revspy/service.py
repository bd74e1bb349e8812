"""HTTP session service: play a game over the wire against any registered
strategy.

Sessions live in memory for the process lifetime.  All responses carry the
schema version; errors are structured {code, message, detail} objects.
Placement submissions use the move wire form with "from" null.
"""

from __future__ import annotations

import json
import random
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import registry
from .engine import (
    REV,
    SPY,
    GameSpec,
    IllegalMove,
    Outcome,
    Phase,
    Position,
    RoundRecord,
    StrategyFault,
    Transcript,
    apply as apply_move,
    apply_placement,
    default_horizon,
    initial_position,
    make_moveset,
    unguarded_meeting,
)
from .graphs import GraphError

SCHEMA = "revspy/1"


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str, detail=None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.detail = detail

    def body(self) -> dict:
        return {
            "schema": SCHEMA,
            "error": {"code": self.code, "message": self.message, "detail": self.detail},
        }


@dataclass
class Session:
    id: str
    spec: GameSpec
    graph_text: str
    human_side: str
    ai_strategy_id: str
    ai_strategy: object
    seed: int
    horizon: int
    pos: Position = None
    status: str = "active"
    outcome: Outcome | None = None
    rev_placement: tuple | None = None
    spy_placement: tuple | None = None
    rounds: list[RoundRecord] = field(default_factory=list)
    placement_audits: dict = field(default_factory=dict)
    pending_rev_move: tuple | None = None
    before_rev: Position | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)

    def phase_side(self) -> str:
        if self.pos.phase in (Phase.REV_PLACEMENT, Phase.REV_TO_MOVE):
            return REV
        return SPY

    def state_json(self, last_ai_move=None) -> dict:
        g = self.spec.graph
        layout: dict = {}
        if g.part_labels is not None:
            layout["parts"] = list(g.part_labels)
        if g.coordinate_dim is not None:
            layout["hypercube"] = g.coordinate_dim
        return {
            "schema": SCHEMA,
            "session_id": self.id,
            "m": self.spec.m,
            "r": self.spec.r,
            "s": self.spec.s,
            "graph": self.graph_text,
            "layout": layout,
            "human_side": self.human_side,
            "ai_strategy": self.ai_strategy_id,
            "phase": self.pos.phase.value,
            "round": self.pos.round,
            "rev_count": list(self.pos.rev_count),
            "spy_count": list(self.pos.spy_count),
            "status": self.status,
            "outcome": self.outcome.to_json() if self.outcome else None,
            "ai_move": last_ai_move,
            "horizon": self.horizon,
        }

    def finish(self, outcome: Outcome) -> None:
        self.status = "finished"
        self.outcome = outcome

    def transcript(self) -> Transcript:
        if self.status != "finished":
            raise ServiceError(409, "not_finished", "game still in progress")
        return Transcript(
            graph_text=self.graph_text,
            m=self.spec.m,
            r=self.spec.r,
            s=self.spec.s,
            seed=self.seed,
            horizon=self.horizon,
            rev_placement=self.rev_placement,
            spy_placement=self.spy_placement,
            rounds=self.rounds,
            outcome=self.outcome,
            placement_audits=self.placement_audits,
            rev_strategy=None if self.human_side == REV else self.ai_strategy_id,
            spy_strategy=None if self.human_side == SPY else self.ai_strategy_id,
        )


def parse_move_entries(entries, n: int):
    """Split wire entries into (placement counts or None, MoveSet)."""
    placements = [e for e in entries if e.get("from") is None]
    flows = [e for e in entries if e.get("from") is not None]
    if placements and flows:
        raise ServiceError(
            400, "bad_move", "cannot mix placement and movement entries"
        )
    if placements:
        counts = [0] * n
        for e in placements:
            to, cnt = e.get("to"), e.get("count", 1)
            if not isinstance(to, int) or not 0 <= to < n or not isinstance(cnt, int):
                raise ServiceError(400, "bad_move", f"bad placement entry {e}")
            counts[to] += cnt
        return tuple(counts), None
    for e in flows:
        if e.get("from") == e.get("to"):
            raise ServiceError(
                400,
                "illegal_move",
                "staying is implicit; drop the self-flow entry",
                detail=[e.get("from"), e.get("to"), e.get("count", 1)],
            )
    try:
        move = make_moveset(
            (e["from"], e["to"], e.get("count", 1)) for e in flows
        )
    except (KeyError, TypeError, IllegalMove) as exc:
        raise ServiceError(400, "bad_move", f"malformed move entries: {exc}")
    return None, move


class SessionStore:
    def __init__(self):
        self.sessions: dict[str, Session] = {}
        self.lock = threading.Lock()

    def create(self, body: dict) -> Session:
        from .cli import parse_graph_arg  # mini-language shared with the CLI

        for fld in ("graph", "m", "r", "s", "human_side", "ai_strategy"):
            if fld not in body:
                raise ServiceError(400, "missing_field", f"missing {fld!r}")
        try:
            graph = parse_graph_arg(str(body["graph"]))
            spec = GameSpec(
                graph,
                int(body["m"]),
                int(body["r"]),
                int(body["s"]),
                enforce_standing_assumptions=bool(
                    body.get("enforce_standing_assumptions", True)
                ),
            )
        except (GraphError, ValueError) as exc:
            raise ServiceError(400, "bad_spec", str(exc))
        human_side = body["human_side"]
        if human_side not in (REV, SPY):
            raise ServiceError(400, "bad_spec", f"human_side must be {REV} or {SPY}")
        ai_side = SPY if human_side == REV else REV
        sid = body["ai_strategy"]
        try:
            entry = registry.get(sid)
            if entry.side != ai_side:
                raise ServiceError(
                    400, "strategy_mismatch", f"{sid} plays {entry.side}, not {ai_side}"
                )
            strategy = registry.build(sid, spec, **body.get("params", {}))
        except KeyError as exc:
            raise ServiceError(404, "unknown_strategy", str(exc))
        except ValueError as exc:
            raise ServiceError(400, "strategy_mismatch", str(exc))
        seed = int(body.get("seed", 0))
        # seed derivation mirrors engine.play: first draw for the
        # revolutionary side, second for the spies
        master = random.Random(seed)
        rev_seed = master.randrange(1 << 30)
        spy_seed = master.randrange(1 << 30)
        strategy.begin(spec, rev_seed if ai_side == REV else spy_seed)
        session = Session(
            id=uuid.uuid4().hex[:12],
            spec=spec,
            graph_text=graph.to_text(),
            human_side=human_side,
            ai_strategy_id=sid,
            ai_strategy=strategy,
            seed=seed,
            horizon=int(body.get("horizon", default_horizon(spec))),
            pos=initial_position(spec),
        )
        self._advance_ai(session)
        with self.lock:
            self.sessions[session.id] = session
        return session

    def get(self, sid: str) -> Session:
        with self.lock:
            if sid not in self.sessions:
                raise ServiceError(404, "unknown_session", f"no session {sid!r}")
            return self.sessions[sid]

    # -- game driving ------------------------------------------------------

    def _record_round(self, session: Session, rev_move, spy_move) -> None:
        audits = {}
        note = session.ai_strategy.audit(session.pos)
        if note:
            side = "spy" if session.human_side == REV else "rev"
            audits[side] = note
        session.rounds.append(
            RoundRecord(rev_move, spy_move, session.pos, audits)
        )

    def _post_spy_checks(self, session: Session, rev_move, spy_move) -> None:
        self._record_round(session, rev_move, spy_move)
        v = unguarded_meeting(session.pos, session.spec.m)
        if v is not None:
            session.finish(Outcome(REV, session.pos.round - 1, vertex=v))
        elif len(session.rounds) >= session.horizon:
            session.finish(Outcome(SPY, session.pos.round - 1))

    def _apply_placement(self, session: Session, counts) -> None:
        phase = session.pos.phase
        session.pos = apply_placement(session.pos, counts, session.spec)
        if phase == Phase.REV_PLACEMENT:
            session.rev_placement = tuple(counts)
        else:
            session.spy_placement = tuple(counts)
            note = session.ai_strategy.audit(session.pos)
            if note and session.human_side == REV:
                session.placement_audits["spy"] = note
            if session.spec.check_initial_loss:
                v = unguarded_meeting(session.pos, session.spec.m)
                if v is not None:
                    session.finish(Outcome(REV, 0, vertex=v))

    def _apply_move(self, session: Session, move) -> None:
        side = session.phase_side()
        if side == REV:
            session.before_rev = session.pos
            session.pending_rev_move = move
            session.pos = apply_move(session.pos, move, REV, session.spec.graph)
        else:
            rev_move = session.pending_rev_move
            session.pos = apply_move(session.pos, move, SPY, session.spec.graph)
            self._post_spy_checks(session, rev_move, move)

    def _advance_ai(self, session: Session) -> list:
        """Let the AI act while it is its turn; returns its wire moves."""
        ai_side = SPY if session.human_side == REV else REV
        played = []
        while session.status == "active" and session.phase_side() == ai_side:
            strat = session.ai_strategy
            try:
                if session.pos.phase == Phase.REV_PLACEMENT:
                    counts = tuple(strat.place())
                    self._apply_placement(session, counts)
                    played.append(
                        [{"from": None, "to": v, "count": c} for v, c in enumerate(counts) if c]
                    )
                elif session.pos.phase == Phase.SPY_PLACEMENT:
                    counts = tuple(strat.place(session.pos))
                    self._apply_placement(session, counts)
                    played.append(
                        [{"from": None, "to": v, "count": c} for v, c in enumerate(counts) if c]
                    )
                elif session.pos.phase == Phase.REV_TO_MOVE:
                    move = strat.move(session.pos)
                    self._apply_move(session, move)
                    played.append([{"from": f, "to": t, "count": c} for f, t, c in move])
                else:
                    move = strat.respond(
                        session.before_rev, session.pending_rev_move, session.pos
                    )
                    self._apply_move(session, move)
                    played.append([{"from": f, "to": t, "count": c} for f, t, c in move])
            except StrategyFault as exc:
                session.finish(Outcome("fault", session.pos.round, detail=str(exc)))
        return played

    def submit(self, sid: str, entries) -> tuple[Session, list]:
        session = self.get(sid)
        with session.lock:
            if session.status != "active":
                raise ServiceError(409, "finished", "game is over")
            if session.phase_side() != session.human_side:
                raise ServiceError(
                    409, "not_your_turn", f"waiting for {session.phase_side()}"
                )
            counts, move = parse_move_entries(entries, session.spec.graph.vertex_count)
            before = session.pos
            try:
                if counts is not None:
                    if session.pos.phase not in (
                        Phase.REV_PLACEMENT,
                        Phase.SPY_PLACEMENT,
                    ):
                        raise ServiceError(
                            409, "not_placement", "placement already done"
                        )
                    self._apply_placement(session, counts)
                else:
                    if session.pos.phase in (Phase.REV_PLACEMENT, Phase.SPY_PLACEMENT):
                        raise ServiceError(
                            409, "placement_required", "submit a placement first"
                        )
                    self._apply_move(session, move)
            except IllegalMove as exc:
                session.pos = before
                raise ServiceError(
                    400, "illegal_move", str(exc), detail=list(exc.entry) if exc.entry else None
                )
            ai_moves = self._advance_ai(session)
            return session, ai_moves

    def resign(self, sid: str) -> Session:
        session = self.get(sid)
        with session.lock:
            if session.status == "active":
                winner = SPY if session.human_side == REV else REV
                session.finish(
                    Outcome(winner, session.pos.round, detail="resignation")
                )
        return session


def make_handler(store: SessionStore):
    class Handler(BaseHTTPRequestHandler):
        def log_message(self, *args):  # quiet by default
            pass

        def _send(self, status: int, body: dict) -> None:
            data = json.dumps(body).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(data)

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length", 0))
            if length == 0:
                return {}
            try:
                return json.loads(self.rfile.read(length))
            except json.JSONDecodeError as exc:
                raise ServiceError(400, "bad_json", str(exc))

        def _route(self, method: str):
            parts = [p for p in self.path.split("?")[0].split("/") if p]
            try:
                if method == "GET" and parts == ["strategies"]:
                    return 200, {"schema": SCHEMA, "strategies": registry.listing()}
                if method == "POST" and parts == ["sessions"]:
                    session = store.create(self._read_body())
                    return 201, session.state_json()
                if len(parts) >= 2 and parts[0] == "sessions":
                    sid = parts[1]
                    if method == "GET" and len(parts) == 2:
                        return 200, store.get(sid).state_json()
                    if method == "GET" and parts[2:] == ["transcript"]:
                        return 200, store.get(sid).transcript().to_json()
                    if method == "POST" and parts[2:] == ["moves"]:
                        body = self._read_body()
                        session, ai_moves = store.submit(sid, body.get("moves", []))
                        state = session.state_json(
                            last_ai_move=ai_moves[-1] if ai_moves else None
                        )
                        return 200, state
                    if method == "POST" and parts[2:] == ["resign"]:
                        return 200, store.resign(sid).state_json()
                raise ServiceError(404, "not_found", f"no route {method} {self.path}")
            except ServiceError as exc:
                return exc.status, exc.body()

        def do_GET(self):
            self._send(*self._route("GET"))

        def do_POST(self):
            self._send(*self._route("POST"))

        def do_OPTIONS(self):
            self.send_response(204)
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.end_headers()

    return Handler


def serve(port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Start the session service; returns the server (caller runs serve_forever)."""
    store = SessionStore()
    server = ThreadingHTTPServer((host, port), make_handler(store))
    server.store = store
    return server
