"""Spy strategies: one per family of graphs with a proven spy win.

Each strategy exposes placement plus a per-round response and emits an audit
record after every round so tests can check the strategy's invariant rather
than just the game outcome.
"""

from __future__ import annotations

import logging
import math

from .engine import (
    GameSpec,
    MoveSet,
    Position,
    SpyStrategy,
    StrategyFault,
    make_moveset,
    unguarded_meeting,
)
from .graphs import Graph, RootedTree, dominating_vertex, validate_webbed_witness
from .matching import BipartiteInstance, NoCover, max_matching, min_movers_cover

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# shared machinery

def hub_cover_flow(
    g: Graph,
    hub: int,
    members: list[int],
    supply: dict[int, int],
    demand: dict[int, int],
) -> list[tuple[int, int, int]]:
    """Move unit spies so each member vertex gets its demanded count, surplus
    to the hub.  A slot at b accepts a spy from a when a == b, a == hub, or
    ab is an edge; the hub accepts everyone.  Raises NoCover on Hall failure.
    """
    slots = [(v, i) for v in members if v != hub for i in range(demand.get(v, 0))]
    units = [(v, i) for v in members for i in range(supply.get(v, 0))]
    units_by_vertex: dict[int, list] = {}
    for u in units:
        units_by_vertex.setdefault(u[0], []).append(u)

    def candidates(v: int) -> list:
        cands = list(units_by_vertex.get(v, ()))
        cands.extend(units_by_vertex.get(hub, ()))
        for a in sorted(units_by_vertex):
            if a != v and a != hub and g.has_edge(a, v):
                cands.extend(units_by_vertex[a])
        return cands

    inst = BipartiteInstance(slots, units, {slot: candidates(slot[0]) for slot in slots})
    matching = max_matching(inst)
    if len(matching) < len(slots):
        from .matching import hall_violator

        raise NoCover(hall_violator(inst))
    flows = []
    taken = set(matching.values())
    for (v, _), unit in matching.items():
        if unit[0] != v:
            flows.append((unit[0], v, 1))
    for unit in units:
        if unit not in taken and unit[0] != hub:
            flows.append((unit[0], hub, 1))
    return flows


def stacked_counts(g: Graph, at: dict[int, int]) -> tuple[int, ...]:
    out = [0] * g.vertex_count
    for v, c in at.items():
        out[v] += c
    return tuple(out)


def spy_units(pos: Position) -> dict[int, int]:
    """Unit spy ids from a position: spy k sits at the k-th occupied slot in
    vertex order.  Spies are interchangeable, so the labeling is free."""
    units = {}
    k = 0
    for v, c in enumerate(pos.spy_count):
        for _ in range(c):
            units[k] = v
            k += 1
    return units


# ---------------------------------------------------------------------------
# dominating vertex

class DominatingVertexSpy(SpyStrategy):
    """Keeps exactly floor(r(v)/m) spies on every vertex except the hub,
    with the surplus waiting at the hub."""

    name = "spy.dominating-vertex"

    def __init__(self, hub: int | None = None):
        self.hub_arg = hub

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        hub = self.hub_arg if self.hub_arg is not None else dominating_vertex(g)
        if hub is None or g.degree(hub) != g.vertex_count - 1:
            raise ValueError("graph has no dominating vertex")
        if spec.s < spec.r // spec.m:
            raise ValueError(f"need at least floor(r/m)={spec.r // spec.m} spies")
        self.hub = hub

    def _targets(self, rev_count: tuple[int, ...]) -> dict[int, int]:
        m = self.spec.m
        targets = {
            v: rev_count[v] // m
            for v in range(len(rev_count))
            if v != self.hub and rev_count[v] >= m
        }
        targets[self.hub] = self.spec.s - sum(targets.values())
        if targets[self.hub] < 0:
            raise StrategyFault("not enough spies for the stable layout")
        return targets

    def place(self, pos: Position) -> tuple[int, ...]:
        return stacked_counts(self.spec.graph, self._targets(pos.rev_count))

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        g = self.spec.graph
        demand = {
            v: after.rev_count[v] // self.spec.m
            for v in range(g.vertex_count)
            if v != self.hub
        }
        supply = {v: c for v, c in enumerate(after.spy_count) if c}
        try:
            flows = hub_cover_flow(g, self.hub, list(range(g.vertex_count)), supply, demand)
        except NoCover as exc:
            raise StrategyFault(f"stable position lost: {exc}") from exc
        return make_moveset(flows)

    def audit(self, pos: Position) -> dict:
        m = self.spec.m
        stable = all(
            pos.spy_count[v] == pos.rev_count[v] // m
            for v in range(len(pos.rev_count))
            if v != self.hub
        )
        return {
            "stable": stable,
            "unguarded": unguarded_meeting(pos, m),
        }


# ---------------------------------------------------------------------------
# webbed trees

class WebbedTreeSpy(SpyStrategy):
    """Spy play on a webbed tree via independent local games.

    The global invariant fixes the spy count of each vertex v from the
    subtree revolutionary weights:

        s(v) = floor(w(v)/m) - sum over children x of floor(w(x)/m)

    Each round the spies split into per-vertex local games (a parent with its
    children, a graph with a dominating vertex), play the dominating-vertex
    response there with imagined piece counts, and recombine, which restores
    the invariant with each spy moving at most once.
    """

    name = "spy.webbed-tree"

    def __init__(self, tree: RootedTree | None = None):
        self.tree_arg = tree

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        tree = self.tree_arg
        if tree is None:
            from .graphs import recognize_webbed_tree

            tree = recognize_webbed_tree(g)
        if tree is None or not validate_webbed_witness(g, tree):
            raise ValueError("graph is not a webbed tree for the given witness")
        if spec.s < spec.r // spec.m:
            raise ValueError("need at least floor(r/m) spies")
        self.tree = tree
        self.children = [tree.children(v) for v in range(g.vertex_count)]
        self.desc = [tree.descendants(v) for v in range(g.vertex_count)]
        self.strict_desc = [self.desc[v] - {v} for v in range(g.vertex_count)]
        self.extra = spec.s - spec.r // spec.m

    def _weights(self, rev_count: tuple[int, ...]) -> list[int]:
        return [
            sum(rev_count[u] for u in self.desc[v])
            for v in range(len(rev_count))
        ]

    def _invariant_counts(self, rev_count: tuple[int, ...]) -> list[int]:
        m = self.spec.m
        w = self._weights(rev_count)
        out = []
        for v in range(len(rev_count)):
            out.append(w[v] // m - sum(w[x] // m for x in self.children[v]))
        out[self.tree.root] += self.extra
        return out

    def place(self, pos: Position) -> tuple[int, ...]:
        return tuple(self._invariant_counts(pos.rev_count))

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        g = self.spec.graph
        m = self.spec.m
        n = g.vertex_count
        w = self._weights(before.rev_count)
        w_new = self._weights(after.rev_count)

        # w*(v): revolutionaries in the strict subtree before or after the move
        w_star = [0] * n
        for v in range(n):
            inside = self.strict_desc[v]
            before_inside = w[v] - before.rev_count[v]
            entered = sum(
                c for frm, to, c in rev_move if to in inside and frm not in inside
            )
            w_star[v] = before_inside + entered

        s_up = [w[v] // m - w_star[v] // m for v in range(n)]       # spies owed upward
        s_down = [
            w_star[v] // m - sum(w[x] // m for x in self.children[v])
            for v in range(n)
        ]
        s_down[self.tree.root] += self.extra
        if any(s_up[v] < 0 or s_down[v] < 0 for v in range(n)):
            raise StrategyFault("negative local spy split; invariant broken")
        for v in range(n):
            have = after.spy_count[v]
            if s_up[v] + s_down[v] != have:
                raise StrategyFault(
                    f"spy split {s_up[v]}+{s_down[v]} != {have} at vertex {v}"
                )

        flows: list[tuple[int, int, int]] = []
        for v in range(n):
            kids = self.children[v]
            if not kids:
                continue
            supply = {v: s_down[v]}
            supply.update({x: s_up[x] for x in kids})
            demand = {x: w_new[x] // m - w_star[x] // m for x in kids}
            if any(c < 0 for c in demand.values()):
                raise StrategyFault("negative local demand; invariant broken")
            try:
                flows.extend(
                    hub_cover_flow(g, v, [v] + kids, supply, demand)
                )
            except NoCover as exc:
                raise StrategyFault(f"local game at {v} infeasible: {exc}") from exc
        return make_moveset(flows)

    def audit(self, pos: Position) -> dict:
        m = self.spec.m
        targets = self._invariant_counts(pos.rev_count)
        w = self._weights(pos.rev_count)
        subtree_sums_ok = all(
            sum(pos.spy_count[u] for u in self.desc[v]) == w[v] // m
            for v in range(len(targets))
            if not (self.extra and self.tree.root in self.desc[v])
        )
        return {
            "invariant": list(pos.spy_count) == targets,
            "telescoping": subtree_sums_ok,
            "conformal": all(
                pos.spy_count[v] >= pos.rev_count[v] // m
                for v in range(len(targets))
            ),
            "unguarded": unguarded_meeting(pos, m),
        }


# ---------------------------------------------------------------------------
# dominating sets

class _Squad:
    """One dominating-vertex game on the closed neighborhood of a hub, with
    imagined revolutionaries standing in for the ones outside."""

    def __init__(self, g: Graph, hub: int, m: int, spies: int, total_revs: int):
        self.g = g
        self.hub = hub
        self.m = m
        self.spies = spies
        self.r = total_revs
        self.members = sorted(set(g.closed_neighborhood(hub)))
        self.member_set = set(self.members)
        self.imagined: dict[int, int] = {}
        self.spy_at: dict[int, int] = {}

    def imagine(self, rev_count: tuple[int, ...]) -> None:
        inside = {v: rev_count[v] for v in self.members}
        missing = self.r - sum(inside.values())
        inside[self.hub] += missing
        self.imagined = inside

    def placement(self, rev_count: tuple[int, ...]) -> dict[int, int]:
        self.imagine(rev_count)
        targets = {
            v: self.imagined[v] // self.m for v in self.members if v != self.hub
        }
        targets[self.hub] = self.spies - sum(targets.values())
        if targets[self.hub] < 0:
            raise StrategyFault("squad lacks spies for its stable layout")
        self.spy_at = {v: c for v, c in targets.items() if c}
        return self.spy_at

    def respond(self, rev_move: MoveSet, after_rev: tuple[int, ...]) -> list:
        new_imagined = dict(self.imagined)
        for frm, to, c in rev_move:
            f_in, t_in = frm in self.member_set, to in self.member_set
            if f_in and t_in:
                src, dst = frm, to
            elif f_in:
                src, dst = frm, self.hub
            elif t_in:
                src, dst = self.hub, to
            else:
                continue
            if src != dst:
                new_imagined[src] -= c
                new_imagined[dst] += c
        if any(c < 0 for c in new_imagined.values()):
            raise StrategyFault("imagined revolutionaries went negative")
        demand = {
            v: new_imagined[v] // self.m for v in self.members if v != self.hub
        }
        flows = hub_cover_flow(self.g, self.hub, self.members, self.spy_at, demand)
        self.imagined = new_imagined
        for frm, to, c in flows:
            self.spy_at[frm] = self.spy_at.get(frm, 0) - c
            self.spy_at[to] = self.spy_at.get(to, 0) + c
        self.spy_at = {v: c for v, c in self.spy_at.items() if c}
        return flows


class DominationSetSpy(SpyStrategy):
    """One squad of floor(r/m) spies per dominating vertex, each playing the
    dominating-vertex strategy on its closed neighborhood."""

    name = "spy.domination-set"

    def __init__(self, dom_set: list[int] | None = None):
        self.dom_set_arg = dom_set

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        dom = self.dom_set_arg
        if dom is None:
            from .graphs import minimum_dominating_set

            dom = list(minimum_dominating_set(g))
        covered = set()
        for u in dom:
            covered.update(g.closed_neighborhood(u))
        if covered != set(range(g.vertex_count)):
            raise ValueError("given set does not dominate the graph")
        per = spec.r // spec.m
        if spec.s < per * len(dom):
            raise ValueError(f"need {per * len(dom)} spies for {len(dom)} squads")
        self.squads = [_Squad(g, u, spec.m, per, spec.r) for u in dom]
        self.squads[0].spies += spec.s - per * len(dom)

    def place(self, pos: Position) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for squad in self.squads:
            for v, c in squad.placement(pos.rev_count).items():
                counts[v] += c
        return tuple(counts)

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        flows = []
        for squad in self.squads:
            try:
                flows.extend(squad.respond(rev_move, after.rev_count))
            except NoCover as exc:
                raise StrategyFault(f"squad at {squad.hub}: {exc}") from exc
        return make_moveset(flows)

    def audit(self, pos: Position) -> dict:
        ok = all(
            squad.spy_at.get(v, 0) >= squad.imagined.get(v, 0) // self.spec.m
            for squad in self.squads
            for v in squad.members
            if v != squad.hub
        )
        return {"squads_stable": ok, "unguarded": unguarded_meeting(pos, self.spec.m)}


# ---------------------------------------------------------------------------
# free/bound bookkeeping shared by the stability strategies

def meeting_vertices(rev_count, m: int) -> list[int]:
    return [v for v, c in enumerate(rev_count) if c >= m]


def free_spy_counts(rev_count, spy_count, m: int) -> list[int]:
    """Free spies per vertex: one spy is bound per covered meeting vertex."""
    out = list(spy_count)
    for v in meeting_vertices(rev_count, m):
        if out[v] > 0:
            out[v] -= 1
    return out


def free_rev_total(rev_count, m: int) -> int:
    return sum(rev_count) - m * len(meeting_vertices(rev_count, m))


def neighborhood_stable(g: Graph, rev_count, spy_count, m: int) -> bool:
    """All meetings covered and every closed neighborhood holds at least
    (free revolutionaries)/m free spies."""
    meets = meeting_vertices(rev_count, m)
    if any(spy_count[v] == 0 for v in meets):
        return False
    free = free_spy_counts(rev_count, spy_count, m)
    need = free_rev_total(rev_count, m) / m
    for v in range(g.vertex_count):
        if sum(free[u] for u in g.closed_neighborhood(v)) < need:
            return False
    return True


def _cover_phase(
    spec: GameSpec, after: Position, strict: bool
) -> tuple[list, dict[int, int], set[int]]:
    """Phase 1: cover all meetings moving the fewest spies.

    Returns (flows, spy unit -> final vertex, bound unit ids).  When strict,
    an uncoverable meeting set is an invariant bug and faults the game;
    otherwise (running below the strategy's proven spy count) the spies cover
    what they can and lose honestly."""
    units = spy_units(after)
    meets = set(meeting_vertices(after.rev_count, spec.m))
    try:
        cover = min_movers_cover(meets, units, spec.graph)
        assignment = cover.assignment
    except NoCover as exc:
        if strict:
            raise StrategyFault(f"cannot cover meetings: {exc}") from exc
        reachable = {
            v: [u for u in sorted(units) if units[u] == v or spec.graph.has_edge(units[u], v)]
            for v in sorted(meets)
        }
        partial = max_matching(
            BipartiteInstance(sorted(meets), sorted(units), reachable)
        )
        assignment = partial
    flows = []
    final = dict(units)
    for v, unit in assignment.items():
        if units[unit] != v:
            flows.append((units[unit], v, 1))
            final[unit] = v
    return flows, final, set(assignment.values())


class CommonNeighborhoodSpy(SpyStrategy):
    """Spy play on q-common graphs: cover all meetings with the fewest
    movers, then scatter the free spies (random neighbor steps, retried)
    until every closed neighborhood holds enough of them."""

    name = "spy.qcommon"

    RETRY_BUDGET = 50

    def __init__(self, q: float, epsilon: float = 1.0, validate_graph: bool = True):
        self.q = q
        self.epsilon = epsilon
        self.validate_graph = validate_graph

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        if self.validate_graph:
            from .graphs import is_q_common

            if not is_q_common(spec.graph, self.q):
                raise ValueError(f"graph is not {self.q}-common")
        n = spec.graph.vertex_count
        need1 = (1 + self.epsilon) / self.q * spec.r / spec.m
        need2 = spec.r / spec.m + math.log(n) / (
            2 * (1 - 1 / (1 + self.epsilon)) ** 2 * self.q**2
        )
        if spec.s < need1 or spec.s < need2:
            raise ValueError(
                f"need s >= {max(need1, need2):.2f} spies (have {spec.s})"
            )
        self.stabilization_failed = False

    def required_spies(self) -> int:
        n = self.spec.graph.vertex_count
        return max(
            math.ceil((1 + self.epsilon) / self.q * self.spec.r / self.spec.m),
            math.ceil(
                self.spec.r / self.spec.m
                + math.log(n) / (2 * (1 - 1 / (1 + self.epsilon)) ** 2 * self.q**2)
            ),
        )

    def _scatter(self, rev_count, bound_at: dict[int, int], free_at: list[int]) -> list[int]:
        """Choose destinations for the free spies; returns final vertices."""
        g = self.spec.graph
        m = self.spec.m

        def stable(free_final: list[int]) -> bool:
            spy_count = list(bound_counts)
            for v in free_final:
                spy_count[v] += 1
            return neighborhood_stable(g, rev_count, spy_count, m)

        bound_counts = [0] * g.vertex_count
        for v, c in bound_at.items():
            bound_counts[v] += c
        for _ in range(self.RETRY_BUDGET):
            trial = [self.rng.choice(g.neighbors(v)) for v in free_at]
            if stable(trial):
                return trial
        # deterministic fallback: move free spies one at a time, each to the
        # spot that most raises the worst closed neighborhood
        final = list(free_at)
        need = free_rev_total(rev_count, m) / m
        for idx, v in enumerate(free_at):
            best, best_score = v, None
            for dest in (v, *g.neighbors(v)):
                trial = final[:idx] + [dest] + final[idx + 1 :]
                spy_count = list(bound_counts)
                for u in trial:
                    spy_count[u] += 1
                free = free_spy_counts(rev_count, spy_count, m)
                score = min(
                    sum(free[u] for u in g.closed_neighborhood(w))
                    for w in range(g.vertex_count)
                )
                if best_score is None or score > best_score:
                    best, best_score = dest, score
            final[idx] = best
        if not stable(final):
            self.stabilization_failed = True
            log.warning("free-spy stabilization failed after fallback")
        return final

    def place(self, pos: Position) -> tuple[int, ...]:
        g = self.spec.graph
        meets = meeting_vertices(pos.rev_count, self.spec.m)
        counts = [0] * g.vertex_count
        for v in meets:
            counts[v] += 1
        free = self.spec.s - len(meets)
        if free < 0:
            raise StrategyFault("not enough spies to cover the initial meetings")
        # free spies may be placed anywhere: sample placements, then greedy
        for _ in range(self.RETRY_BUDGET):
            trial = [self.rng.randrange(g.vertex_count) for _ in range(free)]
            spy_count = list(counts)
            for v in trial:
                spy_count[v] += 1
            if neighborhood_stable(g, pos.rev_count, spy_count, self.spec.m):
                return tuple(spy_count)
        start = [0] * free
        final = self._scatter(pos.rev_count, {v: 1 for v in meets}, start)
        spy_count = list(counts)
        for v in final:
            spy_count[v] += 1
        return tuple(spy_count)

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        strict = self.spec.s >= self.required_spies()
        flows, final, bound_units = _cover_phase(self.spec, after, strict)
        bound_at: dict[int, int] = {}
        for unit in bound_units:
            bound_at[final[unit]] = bound_at.get(final[unit], 0) + 1
        free_units = sorted(u for u in final if u not in bound_units)
        free_at = [final[u] for u in free_units]
        free_final = self._scatter(after.rev_count, bound_at, free_at)
        for unit, dest in zip(free_units, free_final):
            if final[unit] != dest:
                flows.append((final[unit], dest, 1))
        return make_moveset(flows)

    def audit(self, pos: Position) -> dict:
        return {
            "stable": neighborhood_stable(
                self.spec.graph, pos.rev_count, pos.spy_count, self.spec.m
            ),
            "stabilization_failed": self.stabilization_failed,
            "unguarded": unguarded_meeting(pos, self.spec.m),
        }


class MultipartiteSpy(SpyStrategy):
    """Spy play on complete multipartite graphs: cover all meetings with the
    fewest movers, then split the free spies evenly across the parts."""

    name = "spy.kpartite"

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        if g.part_labels is None or not g.is_complete_multipartite():
            raise ValueError("graph must be complete multipartite")
        self.parts = g.parts()
        self.k = len(self.parts)
        if self.k < 2:
            raise ValueError("need at least two parts")

    def required_spies(self) -> int:
        return math.ceil(self.k / (self.k - 1) * self.spec.r / self.spec.m) + self.k

    def _part_targets(self, free_total: int) -> list[int]:
        base, extra = divmod(free_total, self.k)
        return [base + (1 if i < extra else 0) for i in range(self.k)]

    def place(self, pos: Position) -> tuple[int, ...]:
        g = self.spec.graph
        meets = meeting_vertices(pos.rev_count, self.spec.m)
        counts = [0] * g.vertex_count
        for v in meets:
            counts[v] += 1
        free = self.spec.s - len(meets)
        if free < 0:
            raise StrategyFault("not enough spies to cover the initial meetings")
        targets = self._part_targets(free)
        for i, part in enumerate(self.parts):
            empties = [v for v in part if counts[v] == 0]
            for j in range(targets[i]):
                counts[empties[j % len(empties)]] += 1
        return tuple(counts)

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        strict = self.spec.s >= self.required_spies()
        flows, final, bound_units = _cover_phase(self.spec, after, strict)
        label = self.spec.graph.part_labels
        free_units = sorted(u for u in final if u not in bound_units)
        by_part: dict[int, list[int]] = {i: [] for i in range(self.k)}
        for u in free_units:
            by_part[label[final[u]]].append(u)
        targets = self._part_targets(len(free_units))
        surplus: list[int] = []
        deficit: list[int] = []
        for i in range(self.k):
            have = len(by_part[i])
            if have > targets[i]:
                surplus.extend(by_part[i][targets[i] - have :])
            elif have < targets[i]:
                deficit.extend([i] * (targets[i] - have))
        for unit, part in zip(surplus, deficit):
            dest = self.parts[part][0]
            flows.append((final[unit], dest, 1))
        return make_moveset(flows)

    def audit(self, pos: Position) -> dict:
        m = self.spec.m
        label = self.spec.graph.part_labels
        meets = meeting_vertices(pos.rev_count, m)
        covered = all(pos.spy_count[v] > 0 for v in meets)
        free = free_spy_counts(pos.rev_count, pos.spy_count, m)
        free_total = sum(free)
        rhat = free_rev_total(pos.rev_count, m)
        per_part = [0] * self.k
        for v, c in enumerate(free):
            per_part[label[v]] += c
        stable = covered and all(
            (free_total - per_part[i]) * m >= rhat for i in range(self.k)
        )
        return {
            "stable": stable,
            "free_per_part": per_part,
            "unguarded": unguarded_meeting(pos, m),
        }
