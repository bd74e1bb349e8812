"""Game rules, positions, legal moves, the referee loop and strategy interfaces.

A round is: revolutionaries move, then spies move, then the unguarded-meeting
check.  The check also runs immediately after spy placement, since the
initial configuration already counts.  Positions and move sets are immutable
values; strategy instances carry per-game mutable state and are driven
single-threaded by the referee.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field

from .graphs import Graph, GraphError, parse_graph


class Phase(enum.Enum):
    REV_PLACEMENT = "rev_placement"
    SPY_PLACEMENT = "spy_placement"
    REV_TO_MOVE = "rev_to_move"
    SPY_TO_MOVE = "spy_to_move"


REV = "revolutionaries"
SPY = "spies"


class IllegalMove(ValueError):
    def __init__(self, message: str, entry=None):
        super().__init__(message)
        self.entry = entry


class NotMultipartite(GraphError):
    pass


class NotRLarge(GraphError):
    pass


class StrategyFault(RuntimeError):
    """A strategy violated one of its own invariants; terminates the game."""


@dataclass(frozen=True)
class GameSpec:
    graph: Graph
    m: int
    r: int
    s: int
    check_initial_loss: bool = True
    enforce_standing_assumptions: bool = True

    def __post_init__(self):
        if self.m < 1 or self.r < 0 or self.s < 0:
            raise ValueError("need m >= 1 and nonnegative r, s")
        if self.enforce_standing_assumptions:
            n = self.graph.vertex_count
            if not (n >= self.r - self.m + 1 >= self.r // self.m >= 1):
                raise ValueError(
                    f"standing assumptions fail: need |V| >= r-m+1 >= floor(r/m) >= 1 "
                    f"(|V|={n}, r={self.r}, m={self.m})"
                )


MoveSet = tuple[tuple[int, int, int], ...]  # sorted (from, to, count), from != to


def make_moveset(flows) -> MoveSet:
    """Canonicalize flows: drop zero/self entries, merge duplicates, sort."""
    merged: dict[tuple[int, int], int] = {}
    for frm, to, count in flows:
        if count < 0:
            raise IllegalMove("negative flow count", (frm, to, count))
        if count == 0 or frm == to:
            continue
        merged[(frm, to)] = merged.get((frm, to), 0) + count
    return tuple(sorted((f, t, c) for (f, t), c in merged.items()))


@dataclass(frozen=True)
class Position:
    rev_count: tuple[int, ...]
    spy_count: tuple[int, ...]
    phase: Phase
    round: int

    def rev_total(self) -> int:
        return sum(self.rev_count)

    def spy_total(self) -> int:
        return sum(self.spy_count)

    def rev_vertices(self) -> list[int]:
        return [v for v, c in enumerate(self.rev_count) if c]

    def spy_vertices(self) -> list[int]:
        return [v for v, c in enumerate(self.spy_count) if c]


def initial_position(spec: GameSpec) -> Position:
    n = spec.graph.vertex_count
    return Position((0,) * n, (0,) * n, Phase.REV_PLACEMENT, 0)


def unguarded_meeting(pos: Position, m: int) -> int | None:
    """Lowest-index vertex holding at least m revolutionaries and no spy."""
    for v, c in enumerate(pos.rev_count):
        if c >= m and pos.spy_count[v] == 0:
            return v
    return None


def part_counts(pos: Position, g: Graph) -> tuple[list[int], list[int], list[int]]:
    """Per-part revolutionary, spy and spy-covered-revolutionary totals."""
    parts = g.parts()
    r_j = [sum(pos.rev_count[v] for v in part) for part in parts]
    s_j = [sum(pos.spy_count[v] for v in part) for part in parts]
    c_j = [
        sum(pos.rev_count[v] for v in part if pos.spy_count[v] > 0) for part in parts
    ]
    return r_j, s_j, c_j


def _counts_for(pos: Position, side: str) -> tuple[int, ...]:
    return pos.rev_count if side == REV else pos.spy_count


def legal(pos: Position, move: MoveSet, side: str, g: Graph) -> bool:
    try:
        check_legal(pos, move, side, g)
        return True
    except IllegalMove:
        return False


def check_legal(pos: Position, move: MoveSet, side: str, g: Graph) -> None:
    expected = Phase.REV_TO_MOVE if side == REV else Phase.SPY_TO_MOVE
    if pos.phase != expected:
        raise IllegalMove(f"{side} cannot move in phase {pos.phase.value}")
    counts = _counts_for(pos, side)
    outflow = [0] * len(counts)
    for entry in move:
        frm, to, count = entry
        if not (0 <= frm < len(counts) and 0 <= to < len(counts)):
            raise IllegalMove("vertex out of range", entry)
        if count <= 0:
            raise IllegalMove("flow count must be positive", entry)
        if frm == to:
            raise IllegalMove("self flows are implicit", entry)
        if not g.has_edge(frm, to):
            raise IllegalMove(f"{frm}-{to} is not an edge", entry)
        outflow[frm] += count
    for v, out in enumerate(outflow):
        if out > counts[v]:
            raise IllegalMove(
                f"vertex {v} sends {out} pieces but holds {counts[v]}",
                (v, out, counts[v]),
            )


def apply_flow(counts: tuple[int, ...], move: MoveSet) -> tuple[int, ...]:
    out = list(counts)
    for frm, to, count in move:
        out[frm] -= count
        out[to] += count
    return tuple(out)


def apply(pos: Position, move: MoveSet, side: str, g: Graph) -> Position:
    """Apply a legal move set and advance the phase (round after spy phase)."""
    check_legal(pos, move, side, g)
    if side == REV:
        return Position(
            apply_flow(pos.rev_count, move), pos.spy_count, Phase.SPY_TO_MOVE, pos.round
        )
    return Position(
        pos.rev_count, apply_flow(pos.spy_count, move), Phase.REV_TO_MOVE, pos.round + 1
    )


def apply_placement(pos: Position, counts: tuple[int, ...], spec: GameSpec) -> Position:
    if pos.phase == Phase.REV_PLACEMENT:
        if len(counts) != spec.graph.vertex_count or any(c < 0 for c in counts):
            raise IllegalMove("bad revolutionary placement vector")
        if sum(counts) != spec.r:
            raise IllegalMove(f"placement must use exactly {spec.r} revolutionaries")
        return Position(tuple(counts), pos.spy_count, Phase.SPY_PLACEMENT, 0)
    if pos.phase == Phase.SPY_PLACEMENT:
        if len(counts) != spec.graph.vertex_count or any(c < 0 for c in counts):
            raise IllegalMove("bad spy placement vector")
        if sum(counts) != spec.s:
            raise IllegalMove(f"placement must use exactly {spec.s} spies")
        return Position(pos.rev_count, tuple(counts), Phase.REV_TO_MOVE, 1)
    raise IllegalMove(f"no placement expected in phase {pos.phase.value}")


# ---------------------------------------------------------------------------
# swarms

def swarm_flow(
    pos: Position, target_part: int, spec: GameSpec, movers: set[int] | None = None
) -> MoveSet:
    """Flow sending revolutionaries into one part, maximizing new meetings.

    Incoming pieces first top up uncovered partial meetings (cheapest deficit
    first), then form fresh meetings at unoccupied spy-free vertices; any
    remainder parks on a spy-free empty vertex.  ``movers`` restricts which
    source vertices participate (all outside vertices by default).
    """
    g = spec.graph
    if g.part_labels is None or not g.is_complete_multipartite():
        raise NotMultipartite("swarm moves need a complete multipartite graph")
    parts = g.parts()
    if not 0 <= target_part < len(parts):
        raise ValueError("part index out of range")
    if any(len(p) < 2 * spec.r for p in parts):
        raise NotRLarge("every part must have at least 2r vertices")
    part = parts[target_part]
    part_set = set(part)
    m = spec.m

    sources: list[tuple[int, int]] = []
    incoming = 0
    for v, c in enumerate(pos.rev_count):
        if c and v not in part_set and (movers is None or v in movers):
            sources.append((v, c))
            incoming += c

    # destination plan: (vertex, how many to add)
    plan: list[tuple[int, int]] = []
    budget = incoming
    partials = sorted(
        (
            (m - pos.rev_count[v], v)
            for v in part
            if 0 < pos.rev_count[v] < m and pos.spy_count[v] == 0
        ),
    )
    for deficit, v in partials:
        if budget < deficit:
            break
        plan.append((v, deficit))
        budget -= deficit
    fresh = [
        v for v in part if pos.rev_count[v] == 0 and pos.spy_count[v] == 0
    ]
    fresh_iter = iter(fresh)
    while budget >= m:
        v = next(fresh_iter, None)
        if v is None:
            break  # crowded part; r-large graphs never get here
        plan.append((v, m))
        budget -= m
    if budget > 0:
        v = next(fresh_iter, None)
        if v is None:
            v = plan[-1][0] if plan else part[0]
        plan.append((v, budget))

    flows = []
    src_iter = iter(sources)
    cur_v, cur_c = -1, 0
    for dest, need in plan:
        while need > 0:
            if cur_c == 0:
                cur_v, cur_c = next(src_iter)
            take = min(cur_c, need)
            flows.append((cur_v, dest, take))
            cur_c -= take
            need -= take
    # any unplanned source pieces stay put (only possible when incoming == 0)
    return make_moveset(flows)


def swarm_move(pos: Position, target_part: int, spec: GameSpec) -> MoveSet:
    """All revolutionaries outside the part move in, maximizing new meetings."""
    return swarm_flow(pos, target_part, spec)


def count_new_meetings(pos: Position, move: MoveSet, spec: GameSpec, part: int) -> int:
    """Meetings in the part created by the move at spy-free vertices."""
    after = apply_flow(pos.rev_count, move)
    parts = spec.graph.parts()
    return sum(
        1
        for v in parts[part]
        if after[v] >= spec.m
        and pos.spy_count[v] == 0
        and pos.rev_count[v] < spec.m
    )


# ---------------------------------------------------------------------------
# strategies

class Strategy:
    """Base for both sides: per-game instances driven by the referee."""

    name = "strategy"

    def begin(self, spec: GameSpec, seed: int) -> None:
        self.spec = spec
        self.rng = random.Random(seed)

    def audit(self, pos: Position) -> dict | None:
        """Called after each spy phase with the end-of-round position."""
        return None


class RevStrategy(Strategy):
    def place(self) -> tuple[int, ...]:
        raise NotImplementedError

    def move(self, pos: Position) -> MoveSet:
        raise NotImplementedError


class SpyStrategy(Strategy):
    def place(self, pos: Position) -> tuple[int, ...]:
        raise NotImplementedError

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# transcripts and the referee

@dataclass
class RoundRecord:
    rev_move: MoveSet
    spy_move: MoveSet
    position: Position
    audits: dict = field(default_factory=dict)


@dataclass
class Outcome:
    winner: str  # REV, SPY, or "fault"
    round: int
    vertex: int | None = None
    detail: str | None = None

    def to_json(self) -> dict:
        return {
            "winner": self.winner,
            "round": self.round,
            "vertex": self.vertex,
            "detail": self.detail,
        }


@dataclass
class Transcript:
    graph_text: str
    m: int
    r: int
    s: int
    seed: int
    horizon: int
    rev_placement: tuple[int, ...]
    spy_placement: tuple[int, ...]
    rounds: list[RoundRecord]
    outcome: Outcome
    placement_audits: dict = field(default_factory=dict)
    rev_strategy: str | None = None
    spy_strategy: str | None = None

    def to_json(self) -> dict:
        return {
            "schema": "revspy.transcript/1",
            "graph": self.graph_text,
            "m": self.m,
            "r": self.r,
            "s": self.s,
            "seed": self.seed,
            "horizon": self.horizon,
            "rev_strategy": self.rev_strategy,
            "spy_strategy": self.spy_strategy,
            "rev_placement": list(self.rev_placement),
            "spy_placement": list(self.spy_placement),
            "placement_audits": self.placement_audits,
            "rounds": [
                {
                    "rev_move": [list(e) for e in rec.rev_move],
                    "spy_move": [list(e) for e in rec.spy_move],
                    "rev_count": list(rec.position.rev_count),
                    "spy_count": list(rec.position.spy_count),
                    "audits": rec.audits,
                }
                for rec in self.rounds
            ],
            "outcome": self.outcome.to_json(),
        }

    def to_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(data: dict) -> "Transcript":
        rounds = [
            RoundRecord(
                rev_move=tuple(tuple(e) for e in rec["rev_move"]),
                spy_move=tuple(tuple(e) for e in rec["spy_move"]),
                position=Position(
                    tuple(rec["rev_count"]),
                    tuple(rec["spy_count"]),
                    Phase.REV_TO_MOVE,
                    i + 2,
                ),
                audits=rec.get("audits", {}),
            )
            for i, rec in enumerate(data["rounds"])
        ]
        out = data["outcome"]
        return Transcript(
            graph_text=data["graph"],
            m=data["m"],
            r=data["r"],
            s=data["s"],
            seed=data["seed"],
            horizon=data["horizon"],
            rev_placement=tuple(data["rev_placement"]),
            spy_placement=tuple(data["spy_placement"]),
            rounds=rounds,
            outcome=Outcome(out["winner"], out["round"], out["vertex"], out["detail"]),
            placement_audits=data.get("placement_audits", {}),
            rev_strategy=data.get("rev_strategy"),
            spy_strategy=data.get("spy_strategy"),
        )


def default_horizon(spec: GameSpec) -> int:
    return 4 * spec.graph.vertex_count * max(spec.r, 1)


def play(
    spec: GameSpec,
    rev: RevStrategy,
    spy: SpyStrategy,
    horizon: int | None = None,
    seed: int = 0,
) -> Transcript:
    """Run placements then up to ``horizon`` rounds; stop at the first
    unguarded meeting or when the horizon is survived."""
    if horizon is None:
        horizon = default_horizon(spec)
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    g = spec.graph
    master = random.Random(seed)
    rev.begin(spec, master.randrange(1 << 30))
    spy.begin(spec, master.randrange(1 << 30))

    rounds: list[RoundRecord] = []
    placement_audits: dict = {}

    def finish(outcome: Outcome) -> Transcript:
        return Transcript(
            graph_text=g.to_text(),
            m=spec.m,
            r=spec.r,
            s=spec.s,
            seed=seed,
            horizon=horizon,
            rev_placement=rev_counts,
            spy_placement=spy_counts,
            rounds=rounds,
            outcome=outcome,
            placement_audits=placement_audits,
            rev_strategy=getattr(rev, "name", None),
            spy_strategy=getattr(spy, "name", None),
        )

    rev_counts = tuple(rev.place())
    pos = apply_placement(initial_position(spec), rev_counts, spec)
    try:
        spy_counts = tuple(spy.place(pos))
    except StrategyFault as exc:
        spy_counts = (0,) * g.vertex_count
        return finish(Outcome("fault", 0, detail=f"spy placement: {exc}"))
    pos = apply_placement(pos, spy_counts, spec)
    note = spy.audit(pos)
    if note:
        placement_audits["spy"] = note
    if spec.check_initial_loss:
        v = unguarded_meeting(pos, spec.m)
        if v is not None:
            return finish(Outcome(REV, 0, vertex=v))

    for _ in range(horizon):
        round_no = pos.round
        try:
            rev_move = rev.move(pos)
        except StrategyFault as exc:
            return finish(Outcome("fault", round_no, detail=f"rev: {exc}"))
        mid = apply(pos, rev_move, REV, g)
        try:
            spy_move = spy.respond(pos, rev_move, mid)
        except StrategyFault as exc:
            return finish(Outcome("fault", round_no, detail=f"spy: {exc}"))
        newpos = apply(mid, spy_move, SPY, g)
        audits = {}
        note = spy.audit(newpos)
        if note:
            audits["spy"] = note
        note = rev.audit(newpos)
        if note:
            audits["rev"] = note
        rounds.append(RoundRecord(rev_move, spy_move, newpos, audits))
        v = unguarded_meeting(newpos, spec.m)
        if v is not None:
            return finish(Outcome(REV, round_no, vertex=v))
        pos = newpos
    return finish(Outcome(SPY, pos.round - 1))


def replay(transcript: Transcript) -> bool:
    """Re-apply all recorded moves and verify every recorded position matches."""
    g = parse_graph(transcript.graph_text)
    spec = GameSpec(
        g,
        transcript.m,
        transcript.r,
        transcript.s,
        enforce_standing_assumptions=False,
    )
    pos = apply_placement(initial_position(spec), transcript.rev_placement, spec)
    pos = apply_placement(pos, transcript.spy_placement, spec)
    if spec.check_initial_loss and transcript.outcome.round == 0:
        v = unguarded_meeting(pos, spec.m)
        return transcript.outcome.winner == REV and v == transcript.outcome.vertex
    for rec in transcript.rounds:
        pos = apply(pos, rec.rev_move, REV, g)
        pos = apply(pos, rec.spy_move, SPY, g)
        if (
            pos.rev_count != rec.position.rev_count
            or pos.spy_count != rec.position.spy_count
        ):
            return False
    last = transcript.rounds[-1] if transcript.rounds else None
    if transcript.outcome.winner == REV and last is not None:
        return unguarded_meeting(last.position, spec.m) == transcript.outcome.vertex
    return True


# ---------------------------------------------------------------------------
# basic strategies

def spread_placement(g: Graph, count: int, forbidden: set[int] | None = None) -> tuple[int, ...]:
    """Place pieces on distinct lowest-index vertices, stacking the overflow."""
    out = [0] * g.vertex_count
    allowed = [v for v in range(g.vertex_count) if not forbidden or v not in forbidden]
    if not allowed:
        allowed = list(range(g.vertex_count))
    for i in range(count):
        out[allowed[i % len(allowed)]] += 1
    return tuple(out)


class RandomRev(RevStrategy):
    name = "rev.random"

    def place(self) -> tuple[int, ...]:
        n = self.spec.graph.vertex_count
        out = [0] * n
        for _ in range(self.spec.r):
            out[self.rng.randrange(n)] += 1
        return tuple(out)

    def move(self, pos: Position) -> MoveSet:
        flows = []
        for v, c in enumerate(pos.rev_count):
            for _ in range(c):
                dest = self.rng.choice(self.spec.graph.closed_neighborhood(v))
                if dest != v:
                    flows.append((v, dest, 1))
        return make_moveset(flows)


class StationaryRev(RevStrategy):
    name = "rev.stationary"

    def place(self) -> tuple[int, ...]:
        return spread_placement(self.spec.graph, self.spec.r)

    def move(self, pos: Position) -> MoveSet:
        return ()


class RandomSpy(SpyStrategy):
    name = "spy.random"

    def place(self, pos: Position) -> tuple[int, ...]:
        n = self.spec.graph.vertex_count
        out = [0] * n
        for _ in range(self.spec.s):
            out[self.rng.randrange(n)] += 1
        return tuple(out)

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        flows = []
        for v, c in enumerate(after.spy_count):
            for _ in range(c):
                dest = self.rng.choice(self.spec.graph.closed_neighborhood(v))
                if dest != v:
                    flows.append((v, dest, 1))
        return make_moveset(flows)


class StationarySpy(SpyStrategy):
    name = "spy.stationary"

    def place(self, pos: Position) -> tuple[int, ...]:
        out = [0] * self.spec.graph.vertex_count
        left = self.spec.s
        for v, c in enumerate(pos.rev_count):
            if left and c >= self.spec.m:
                out[v] += 1
                left -= 1
        v = 0
        while left:
            out[v % len(out)] += 1
            left -= 1
            v += 1
        return tuple(out)

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        return ()


class FollowerSpy(SpyStrategy):
    """Each spy shadows one distinct revolutionary; with s >= r-m+1 the
    remaining m-1 revolutionaries can never complete an unguarded meeting."""

    name = "spy.follower"

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        self.unit_pos: list[int] = []

    def place(self, pos: Position) -> tuple[int, ...]:
        self.unit_pos = []
        for v, c in enumerate(pos.rev_count):
            self.unit_pos.extend([v] * c)
        out = [0] * self.spec.graph.vertex_count
        for unit in range(min(self.spec.s, len(self.unit_pos))):
            out[self.unit_pos[unit]] += 1
        extra = self.spec.s - min(self.spec.s, len(self.unit_pos))
        if extra:
            for i in range(extra):
                out[i % len(out)] += 1
        return tuple(out)

    def _track(self, rev_move: MoveSet) -> dict[int, int]:
        """Deterministically assign flow units to tracked ids: lowest ids
        leave first, toward destinations in ascending order."""
        by_vertex: dict[int, list[int]] = {}
        for unit, v in enumerate(self.unit_pos):
            by_vertex.setdefault(v, []).append(unit)
        moves: dict[int, int] = {}
        for frm, to, count in sorted(rev_move):
            pool = by_vertex[frm]
            taken, by_vertex[frm] = pool[:count], pool[count:]
            for unit in taken:
                moves[unit] = to
        return moves

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        moves = self._track(rev_move)
        flows = []
        for unit, dest in moves.items():
            src = self.unit_pos[unit]
            if unit < self.spec.s and dest != src:
                flows.append((src, dest, 1))
            self.unit_pos[unit] = dest
        return make_moveset(flows)


class AlternatingSwarmRev(RevStrategy):
    """Swarm a different part of a complete multipartite graph each round."""

    name = "rev.swarm-alternating"

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        if spec.graph.part_labels is None:
            raise NotMultipartite("alternating swarms need part labels")
        self.k = len(spec.graph.parts())

    def place(self) -> tuple[int, ...]:
        parts = self.spec.graph.parts()
        out = [0] * self.spec.graph.vertex_count
        t = self.spec.r // self.k
        for part in parts:
            for v in part[:t]:
                out[v] += 1
        extra = self.spec.r - t * self.k
        for v in parts[-1][t : t + extra]:
            out[v] += 1
        return tuple(out)

    def move(self, pos: Position) -> MoveSet:
        target = (pos.round - 1) % self.k
        return swarm_flow(pos, target, self.spec)
