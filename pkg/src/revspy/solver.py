"""Ground-truth oracle: exact winner of small instances and sigma values.

Positions are count vectors (pieces are interchangeable).  The
revolutionary-winning region is the least fixed point of the usual attractor
recurrence over the two-phase move graph: a start-of-round state is winning
when an unguarded meeting is present; a rev-to-move state is winning when
some move reaches a winning state; a spy-to-move state is winning when every
spy reply lands in a winning state.  Everything else is a spy win (the spies
survive forever in a finite safety game).

The move relation on count vectors is symmetric (flows reverse along the
same closed neighborhoods), so predecessor enumeration reuses successor
enumeration and no edge lists are stored.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

from .engine import REV, SPY, GameSpec, MoveSet, Position, make_moveset
from .graphs import Graph

DEFAULT_STATE_CAP = 50_000_000


class StateCapExceeded(RuntimeError):
    def __init__(self, estimate: int, cap: int):
        super().__init__(f"estimated {estimate} states exceeds cap {cap}")
        self.estimate = estimate


def state_cap() -> int:
    try:
        return int(os.environ["REVSPY_STATE_CAP"])
    except (KeyError, ValueError):
        return DEFAULT_STATE_CAP


def estimate_states(n: int, r: int, s: int) -> int:
    return 2 * math.comb(n + r - 1, r) * math.comb(n + s - 1, s)


def compositions(total: int, bins: int):
    """All ways to write ``total`` as an ordered sum of ``bins`` nonnegatives."""
    if bins == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, bins - 1):
            yield (first,) + rest


def placements(n: int, count: int):
    """All count vectors of ``count`` pieces over ``n`` vertices."""
    yield from compositions(count, n)


class MoveTable:
    """Cached successor count-vectors for one graph (shared by both sides)."""

    def __init__(self, g: Graph):
        self.g = g
        self.closed = [g.closed_neighborhood(v) for v in range(g.vertex_count)]
        self._cache: dict[tuple[int, ...], tuple[tuple[int, ...], ...]] = {}

    def successors(self, counts: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        hit = self._cache.get(counts)
        if hit is not None:
            return hit
        per_vertex = []
        for v, c in enumerate(counts):
            if c == 0:
                continue
            dests = self.closed[v]
            per_vertex.append(
                [
                    tuple(zip(dests, split))
                    for split in compositions(c, len(dests))
                ]
            )
        results: set[tuple[int, ...]] = set()
        base = [0] * len(counts)
        for combo in itertools.product(*per_vertex):
            vec = base[:]
            for placed in combo:
                for dest, cnt in placed:
                    vec[dest] += cnt
            results.add(tuple(vec))
        out = tuple(sorted(results))
        self._cache[counts] = out
        return out


@dataclass
class SolveResult:
    winner: str
    rev_win_states: set = field(default_factory=set)
    states_visited: int = 0

    def state_is_rev_win(self, rev, spy, phase) -> bool:
        return (rev, spy, phase) in self.rev_win_states


def _terminal(rev: tuple[int, ...], spy: tuple[int, ...], m: int) -> bool:
    return any(c >= m and spy[v] == 0 for v, c in enumerate(rev))


def solve(spec: GameSpec, cap: int | None = None) -> SolveResult:
    """Exact winner under optimal play from the placement quantifiers."""
    g = spec.graph
    n = g.vertex_count
    cap = cap if cap is not None else state_cap()
    estimate = estimate_states(n, spec.r, spec.s)
    if estimate > cap:
        raise StateCapExceeded(estimate, cap)

    moves = MoveTable(g)
    m = spec.m
    rev_vectors = list(placements(n, spec.r))
    spy_vectors = list(placements(n, spec.s))

    # phases: "R" rev to move (start of round, terminal-checked), "S" spy to move
    win: set = set()
    queue: list = []
    spy_pending: dict = {}

    for rev in rev_vectors:
        for spy in spy_vectors:
            if _terminal(rev, spy, m):
                state = (rev, spy, "R")
                win.add(state)
                queue.append(state)

    visited = len(rev_vectors) * len(spy_vectors) * 2
    while queue:
        rev, spy, phase = queue.pop()
        if phase == "R":
            # predecessors are spy-to-move states with spy vectors one spy
            # move away (the move relation is its own reverse)
            for prev_spy in moves.successors(spy):
                pred = (rev, prev_spy, "S")
                if pred in win:
                    continue
                remaining = spy_pending.get(pred)
                if remaining is None:
                    remaining = len(moves.successors(prev_spy))
                remaining -= 1
                if remaining == 0:
                    win.add(pred)
                    queue.append(pred)
                    spy_pending.pop(pred, None)
                else:
                    spy_pending[pred] = remaining
        else:
            for prev_rev in moves.successors(rev):
                pred = (prev_rev, spy, "R")
                if pred not in win and not _terminal(prev_rev, spy, m):
                    win.add(pred)
                    queue.append(pred)

    rev_wins_game = any(
        all((rev, spy, "R") in win for spy in spy_vectors) for rev in rev_vectors
    )
    return SolveResult(
        winner=REV if rev_wins_game else SPY,
        rev_win_states=win,
        states_visited=visited,
    )


def winner(spec: GameSpec, cap: int | None = None) -> str:
    return solve(spec, cap=cap).winner


def sigma_exact(g: Graph, m: int, r: int, cap: int | None = None) -> int:
    """Least spy count that wins; binary search is valid because an extra spy
    can shadow another, so spy wins are monotone in s."""
    lo, hi = r // m, r - m + 1
    if lo > hi:
        raise ValueError("no spy count range: need r - m + 1 >= floor(r/m)")

    def spies_win(s: int) -> bool:
        spec = GameSpec(g, m, r, s, enforce_standing_assumptions=False)
        return winner(spec, cap=cap) == SPY

    if spies_win(lo):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if spies_win(mid):
            hi = mid
        else:
            lo = mid
    if not spies_win(hi):
        raise AssertionError(
            f"spies lose even at the trivial upper bound s={hi}; solver bug"
        )
    return hi


def sigma_linear(g: Graph, m: int, r: int, cap: int | None = None) -> int:
    """Linear sweep over s; cross-check for the binary search."""
    for s in range(r // m, r - m + 2):
        spec = GameSpec(g, m, r, s, enforce_standing_assumptions=False)
        if winner(spec, cap=cap) == SPY:
            return s
    raise AssertionError("spies lose at the trivial upper bound; solver bug")


# ---------------------------------------------------------------------------
# bounded-depth search

def rev_can_win_within(
    pos: Position,
    spec: GameSpec,
    rounds: int,
    node_cap: int = 20_000_000,
) -> bool:
    """Exact exists/forall evaluation to the stated depth, with the unguarded
    meeting check after each spy phase (and on the entry state)."""
    return _bounded_win(spec, pos.rev_count, pos.spy_count, rounds, node_cap) is not None


def winning_move(
    pos: Position,
    spec: GameSpec,
    rounds: int,
    preferred: list[MoveSet] | None = None,
    node_cap: int = 20_000_000,
) -> MoveSet | None:
    """A revolutionary move opening a forced win within ``rounds``, if any.

    ``preferred`` move sets are tried before the full enumeration, so callers
    can seed the search with moves they expect to win.
    """
    return _bounded_win(spec, pos.rev_count, pos.spy_count, rounds, node_cap, preferred)


class _Budget:
    def __init__(self, cap: int):
        self.left = cap

    def spend(self):
        self.left -= 1
        if self.left < 0:
            raise StateCapExceeded(0, 0)


def _bounded_win(spec, rev, spy, rounds, node_cap, preferred=None):
    g = spec.graph
    moves = MoveTable(g)
    memo: dict = {}
    budget = _Budget(node_cap)

    def rev_turn(rev, spy, depth) -> tuple[int, int, int] | tuple | None:
        """Returns a winning move-vector target or None."""
        budget.spend()
        if _terminal(rev, spy, spec.m):
            return ()
        if depth == 0:
            return None
        key = (rev, spy, depth)
        if key in memo:
            return memo[key]
        memo[key] = None  # cycle guard within same depth is impossible; placeholder
        result = None
        for rev2 in moves.successors(rev):
            if spy_turn(rev2, spy, depth):
                result = rev2
                break
        memo[key] = result
        return result

    def spy_turn(rev, spy, depth) -> bool:
        budget.spend()
        key = (rev, spy, depth, "S")
        if key in memo:
            return memo[key]
        ok = True
        for spy2 in moves.successors(spy):
            if _terminal(rev, spy2, spec.m):
                continue
            if depth == 1 or rev_turn(rev, spy2, depth - 1) is None:
                ok = False
                break
        memo[key] = ok
        return ok

    if _terminal(rev, spy, spec.m):
        return ()
    if rounds == 0:
        return None

    candidates: list[tuple[tuple[int, ...], MoveSet | None]] = []
    seen = set()
    if preferred:
        for mv in preferred:
            from .engine import apply_flow

            vec = apply_flow(rev, mv)
            if vec not in seen:
                seen.add(vec)
                candidates.append((vec, mv))
    for vec in moves.successors(rev):
        if vec not in seen:
            seen.add(vec)
            candidates.append((vec, None))

    for rev2, original in candidates:
        if spy_turn(rev2, spy, rounds):
            return original if original is not None else vector_move(rev, rev2, g)
    return None


def vector_move(before: tuple[int, ...], after: tuple[int, ...], g: Graph) -> MoveSet:
    """Recover a concrete flow realizing the change between count vectors.

    The vectors are one legal move apart by construction, so the unit
    transport problem (surplus pieces to deficit slots along closed
    neighborhoods) has a perfect matching.
    """
    from .matching import BipartiteInstance, max_matching

    deficit_units = []
    for v in range(len(before)):
        deficit_units.extend((v, i) for i in range(after[v] - before[v]))
    surplus_units = []
    for v in range(len(before)):
        surplus_units.extend((v, i) for i in range(before[v] - after[v]))
    edges = {
        d: {s for s in surplus_units if s[0] == d[0] or g.has_edge(s[0], d[0])}
        for d in deficit_units
    }
    matching = max_matching(BipartiteInstance(deficit_units, surplus_units, edges))
    if len(matching) != len(deficit_units):
        raise AssertionError("vectors are not one move apart")
    return make_moveset((s[0], d[0], 1) for d, s in matching.items())


@lru_cache(maxsize=None)
def _move_table(g: Graph) -> MoveTable:
    return MoveTable(g)
