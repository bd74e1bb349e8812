"""Revolutionary attack strategies, one per lower-bound family.

Every attack has a small declared horizon (one round for the swarm and
one-shot constructions, two for the bipartite and paired-hypercube attacks,
m-1 for the hypercube walk) and idles once its window has passed; whether it
actually won is the referee's call.
"""

from __future__ import annotations

import itertools
import logging
import math

from .engine import (
    GameSpec,
    MoveSet,
    Position,
    RevStrategy,
    make_moveset,
    swarm_flow,
)
from .graphs import (
    RetractionMap,
    greedy_code,
    hamming,
    hypercube_graph,
)
from .matching import avoiding_vertex

log = logging.getLogger(__name__)


class MultipartiteSwarmAttack(RevStrategy):
    """Spread evenly, then swarm the part where the fewest arriving meetings
    can be answered by spies from outside it."""

    name = "rev.kpartite-lower"

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        if g.part_labels is None or not g.is_complete_multipartite():
            raise ValueError("attack needs a complete multipartite graph")
        self.parts = g.parts()
        self.k = len(self.parts)
        if self.k < spec.m:
            log.warning("attack below its regime: k=%d < m=%d", self.k, spec.m)
        self.active: set[int] = set()
        self.horizon = 1

    def place(self) -> tuple[int, ...]:
        t = self.spec.r // self.k
        counts = [0] * self.spec.graph.vertex_count
        self.active = set()
        for part in self.parts:
            for v in part[:t]:
                counts[v] += 1
                self.active.add(v)
        extra = self.spec.r - t * self.k
        for v in self.parts[-1][t : t + extra]:
            counts[v] += 1  # extras idle for the whole game
        return tuple(counts)

    def _swarm_value(self, pos: Position, part: int) -> tuple[int, MoveSet]:
        move = swarm_flow(pos, part, self.spec, movers=self.active)
        after = list(pos.rev_count)
        for frm, to, c in move:
            after[frm] -= c
            after[to] += c
        new_meetings = sum(
            1
            for v in self.parts[part]
            if after[v] >= self.spec.m
            and pos.spy_count[v] == 0
            and pos.rev_count[v] < self.spec.m
        )
        outside_spies = pos.spy_total() - sum(
            pos.spy_count[v] for v in self.parts[part]
        )
        return new_meetings - outside_spies, move

    def move(self, pos: Position) -> MoveSet:
        if pos.round > self.horizon:
            return ()
        best_margin, best_move = None, ()
        for part in range(self.k):
            margin, move = self._swarm_value(pos, part)
            if best_margin is None or margin > best_margin:
                best_margin, best_move = margin, move
        return best_move


def attack_threshold_kpartite(k: int, m: int, r: int) -> int:
    """Largest spy count this swarm is proven to beat."""
    return math.ceil(k * (r - m + 1) / (m * (k - 1) + 1)) - 1


class _BipartiteAttackBase(RevStrategy):
    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        from .bipartite_spies import check_r_large

        self.parts = check_r_large(spec.graph, spec.r)
        self.part_index = [0] * spec.graph.vertex_count
        for v in self.parts[1]:
            self.part_index[v] = 1
        self.horizon = 2
        self.idle_vertices: set[int] = set()

    def side_totals(self, pos: Position):
        r_j, s_j, c_j = [0, 0], [0, 0], [0, 0]
        for v, c in enumerate(pos.rev_count):
            r_j[self.part_index[v]] += c
            if pos.spy_count[v] > 0:
                c_j[self.part_index[v]] += c
        for v, c in enumerate(pos.spy_count):
            s_j[self.part_index[v]] += c
        return r_j, s_j, c_j

    def fresh_vertices(self, pos: Position, side: int, count: int) -> list[int]:
        """Spy-free, revolutionary-free vertices of a side, lowest first."""
        out = [
            v
            for v in self.parts[side]
            if pos.rev_count[v] == 0 and pos.spy_count[v] == 0
        ]
        if len(out) < count:
            raise RuntimeError("r-large graph ran out of fresh vertices")
        return out[:count]

    def _swarm_margin(self, pos: Position, side: int) -> tuple[int, MoveSet]:
        """New meetings minus guards when swarming the side; meetings land on
        spy-free vertices, so only spies from the other side can answer."""
        movers = None
        if self.idle_vertices:
            movers = {
                v for v, c in enumerate(pos.rev_count) if c
            } - self.idle_vertices
        move = swarm_flow(pos, side, self.spec, movers=movers)
        after = list(pos.rev_count)
        for frm, to, c in move:
            after[frm] -= c
            after[to] += c
        new_meetings = sum(
            1
            for v in self.parts[side]
            if after[v] >= self.spec.m
            and pos.spy_count[v] == 0
            and pos.rev_count[v] < self.spec.m
        )
        _, s_j, _ = self.side_totals(pos)
        return new_meetings - s_j[1 - side], move

    def swarm_better_side(self, pos: Position) -> MoveSet:
        m0, move0 = self._swarm_margin(pos, 0)
        m1, move1 = self._swarm_margin(pos, 1)
        return move0 if m0 >= m1 else move1


class BipartitePairAttack(_BipartiteAttackBase):
    """Meeting size 2: start on one side, peel half the revolutionaries off
    the covered vertices, then swarm whichever side the spies left light."""

    name = "rev.bipartite-m2"

    @staticmethod
    def win_threshold(r: int) -> int:
        """Largest spy count the attack is proven to beat."""
        return math.ceil(((7 * r) // 2 - 3) / 5) - 1

    def begin(self, spec: GameSpec, seed: int) -> None:
        if spec.m != 2:
            raise ValueError("meeting size must be 2")
        super().begin(spec, seed)

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for v in self.parts[0][: self.spec.r]:
            counts[v] += 1
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        if pos.round == 1:
            return self._round1(pos)
        if pos.round == 2:
            return self.swarm_better_side(pos)
        return ()

    def _round1(self, pos: Position) -> MoveSet:
        r = self.spec.r
        half = r // 2
        _, s_j, _ = self.side_totals(pos)
        if s_j[0] < half:
            # too few spies on our side: pair up onto fresh far-side vertices
            sources = [v for v in self.parts[0] if pos.rev_count[v] > 0]
            units: list[int] = []
            for v in sources:
                units.extend([v] * pos.rev_count[v])
            dests = self.fresh_vertices(pos, 1, half)
            flows = []
            for pair_idx in range(half):
                flows.append((units[2 * pair_idx], dests[pair_idx], 1))
                flows.append((units[2 * pair_idx + 1], dests[pair_idx], 1))
            return make_moveset(flows)
        covered = [
            v for v in self.parts[0] if pos.rev_count[v] > 0 and pos.spy_count[v] > 0
        ]
        uncovered = [
            v for v in self.parts[0] if pos.rev_count[v] > 0 and pos.spy_count[v] == 0
        ]
        sources = (covered + uncovered)[:half]
        dests = self.fresh_vertices(pos, 1, half)
        return make_moveset(
            (src, dst, 1) for src, dst in zip(sources, dests)
        )


class BipartiteTripleAttack(_BipartiteAttackBase):
    """Meeting size 3.  For r divisible by 4 the symmetric half-and-half
    opening already wins in one round; otherwise the asymmetric two-round
    line.  An odd straggler idles (an extra revolutionary never hurts)."""

    name = "rev.bipartite-m3"

    @staticmethod
    def win_threshold(r: int) -> int:
        return r // 2 - 1

    def begin(self, spec: GameSpec, seed: int) -> None:
        if spec.m != 3:
            raise ValueError("meeting size must be 3")
        super().begin(spec, seed)
        self.er = spec.r if spec.r % 2 == 0 else spec.r - 1
        self.symmetric = self.er % 4 == 0
        self.idle_vertex: int | None = None
        self.active: set[int] = set()

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        self.active = set()
        if self.symmetric:
            for v in self.parts[0][: self.er // 2]:
                counts[v] += 1
                self.active.add(v)
            for v in self.parts[1][: self.er // 2]:
                counts[v] += 1
                self.active.add(v)
            spot = self.er // 2
        else:
            for v in self.parts[0][: self.er]:
                counts[v] += 1
                self.active.add(v)
            spot = self.er
        if self.er != self.spec.r:
            self.idle_vertex = self.parts[0][spot]
            counts[self.idle_vertex] += 1
            self.idle_vertices = {self.idle_vertex}
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        if pos.round == 1:
            # an under-garrisoned side falls to an immediate swarm (fresh
            # triples there are reachable only by the other side's spies)
            margin0, move0 = self._swarm_margin(pos, 0)
            margin1, move1 = self._swarm_margin(pos, 1)
            if max(margin0, margin1) > 0:
                return move0 if margin0 >= margin1 else move1
            if self.symmetric:
                return self._symmetric_strike(pos)
            return self._asymmetric_opening(pos)
        if pos.round == 2:
            return self.swarm_better_side(pos)
        return ()

    def _symmetric_strike(self, pos: Position) -> MoveSet:
        """Pairs from the lighter-covered side finish triples on uncovered
        revolutionaries of the other side."""
        _, s_j, _ = self.side_totals(pos)
        i = 0 if s_j[0] <= s_j[1] else 1
        other = 1 - i
        targets = [
            v
            for v in self.parts[other]
            if v in self.active and pos.rev_count[v] > 0 and pos.spy_count[v] == 0
        ]
        donors: list[int] = []
        for v in self.parts[i]:
            if v in self.active:
                donors.extend([v] * pos.rev_count[v])
        flows = []
        for idx, tgt in enumerate(targets):
            if 2 * idx + 1 >= len(donors):
                break
            flows.append((donors[2 * idx], tgt, 1))
            flows.append((donors[2 * idx + 1], tgt, 1))
        return make_moveset(flows)

    def _asymmetric_opening(self, pos: Position) -> MoveSet:
        er = self.er
        _, s_j, _ = self.side_totals(pos)
        x = s_j[1]
        j = (er - x) % 3
        p = 2 * (er - x - j) // 3
        covered = [
            v
            for v in self.parts[0]
            if v in self.active and pos.rev_count[v] > 0 and pos.spy_count[v] > 0
        ]
        uncovered = [
            v
            for v in self.parts[0]
            if v in self.active and pos.rev_count[v] > 0 and pos.spy_count[v] == 0
        ]
        sources = (covered + uncovered)[:p]
        dests = self.fresh_vertices(pos, 1, p)
        return make_moveset((src, dst, 1) for src, dst in zip(sources, dests))


class CellGroupAttack(RevStrategy):
    """Group revolutionaries into cells that move as one piece and run a
    small-meeting bipartite attack in the quotient game."""

    name = "rev.cells"

    def __init__(self, base_m: int | None = None):
        self.base_m_arg = base_m

    @staticmethod
    def win_threshold(base_m: int, m: int, r: int) -> int:
        if base_m == 2:
            cells = (2 * r) // m
            return BipartitePairAttack.win_threshold(cells)
        cells = r // math.ceil(m / 3)
        return cells // 2 - 1

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        base = self.base_m_arg
        if base is None:
            base = 2 if spec.m % 2 == 0 and spec.m % 3 != 0 else 3
        if base == 2:
            if spec.m % 2:
                raise ValueError("base-2 cells need even meeting size")
            self.cell_size = spec.m // 2
        elif base == 3:
            self.cell_size = math.ceil(spec.m / 3)
        else:
            raise ValueError("base meeting size must be 2 or 3")
        self.base = base
        self.cells = spec.r // self.cell_size
        inner_cls = BipartitePairAttack if base == 2 else BipartiteTripleAttack
        self.inner = inner_cls()
        self.inner_spec = GameSpec(
            spec.graph,
            base,
            self.cells,
            spec.s,
            enforce_standing_assumptions=False,
        )
        self.inner.begin(self.inner_spec, seed)
        self.leftover_at: list[int] = []

    def _imagined(self, pos: Position) -> Position:
        rev = list(pos.rev_count)
        for v in self.leftover_at:
            rev[v] -= 1
        assert all(c % self.cell_size == 0 for c in rev if c > 0)
        return Position(
            tuple(c // self.cell_size for c in rev),
            pos.spy_count,
            pos.phase,
            pos.round,
        )

    def place(self) -> tuple[int, ...]:
        inner_counts = self.inner.place()
        counts = [c * self.cell_size for c in inner_counts]
        leftover = self.spec.r - self.cells * self.cell_size
        self.leftover_at = []
        for v in range(len(counts)):
            if leftover == 0:
                break
            if counts[v] == 0:
                counts[v] = 1
                self.leftover_at.append(v)
                leftover -= 1
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        inner_move = self.inner.move(self._imagined(pos))
        return make_moveset(
            (frm, to, c * self.cell_size) for frm, to, c in inner_move
        )


# ---------------------------------------------------------------------------
# hypercube attacks

class HypercubePairAttack(RevStrategy):
    """Meeting size 2 on a hypercube with dimension >= revolutionaries.

    Opens around a center on the translated weight-1 vertices.  Each turn it
    first scans for a one-round kill (a vertex reachable by two pieces with
    no spy in its closed neighborhood); failing that, on small cubes it runs
    the complete two-round forced-win search seeded with the center gambit,
    and on large cubes it plays the gambit directly (two uncovered pieces
    drop to the center, forcing a guard there and opening the weight-2 kill).
    """

    name = "rev.hypercube-m2"

    SEARCH_DIM_CAP = 4

    def __init__(
        self,
        center: int = 0,
        revs: int | None = None,
        territory_radius: int | None = None,
    ):
        self.center = center
        self.revs_arg = revs
        self.territory_radius = territory_radius

    def _mine(self, v: int) -> bool:
        return (
            self.territory_radius is None
            or hamming(v, self.center) <= self.territory_radius
        )

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        if g.coordinate_dim is None:
            raise ValueError("attack needs a hypercube graph")
        self.d = g.coordinate_dim
        self.r_local = self.revs_arg if self.revs_arg is not None else spec.r
        if self.d < self.r_local or self.r_local < 2:
            raise ValueError("need dimension >= revolutionaries >= 2")
        self.horizon = 2

    def my_vertices(self) -> list[int]:
        return [self.center ^ (1 << i) for i in range(self.r_local)]

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for v in self.my_vertices():
            counts[v] += 1
        return tuple(counts)

    def _immediate_kill(self, pos: Position) -> MoveSet | None:
        """A vertex two pieces can reach with no spy able to answer."""
        g = self.spec.graph
        occupied = [v for v, c in enumerate(pos.rev_count) if c and self._mine(v)]
        candidates: set[int] = set()
        for a in occupied:
            if pos.rev_count[a] >= 2:
                candidates.update(g.closed_neighborhood(a))
        for a, b in itertools.combinations(occupied, 2):
            candidates.update(
                set(g.closed_neighborhood(a)) & set(g.closed_neighborhood(b))
            )
        for w in sorted(candidates):
            guard_zone = g.closed_neighborhood(w)
            if any(pos.spy_count[u] for u in guard_zone):
                continue
            flows = []
            need = 2
            for src in guard_zone:  # includes w itself: residents stay
                if not self._mine(src):
                    continue
                take = min(pos.rev_count[src], need)
                flows.extend((src, w, 1) for _ in range(take) if src != w)
                need -= take
                if need == 0:
                    return make_moveset(flows)
        return None

    def _gambit(self, pos: Position) -> MoveSet:
        mine = [v for v in self.my_vertices() if pos.rev_count[v] > 0]
        uncovered = [v for v in mine if pos.spy_count[v] == 0]
        pool = uncovered if len(uncovered) >= 2 else mine
        if len(pool) < 2:
            return ()
        return make_moveset([(pool[0], self.center, 1), (pool[1], self.center, 1)])

    def move(self, pos: Position) -> MoveSet:
        kill = self._immediate_kill(pos)
        if kill is not None:
            return kill
        if pos.round > self.horizon:
            return ()
        if (
            self.territory_radius is None
            and self.d <= self.SEARCH_DIM_CAP
            and self.spec.s <= 3
        ):
            from .solver import winning_move

            depth = self.horizon - pos.round + 1
            mv = winning_move(pos, self.spec, depth, preferred=[self._gambit(pos)])
            if mv is not None:
                return mv
            return ()
        if pos.round == 1:
            return self._gambit(pos)
        return ()


def project_onto_coords(mask: int, coords: list[int]) -> int:
    """Drop the other coordinates and pack the kept ones into low bits;
    equals the subcube retraction followed by the coordinate reindexing."""
    packed = 0
    for idx, c in enumerate(coords):
        if mask & (1 << c):
            packed |= 1 << idx
    return packed


def choose_walk_target(
    m: int, uncovered: list[int], spy_rel_masks, seed: int
) -> int | None:
    """Weight-m coordinate set (over the uncovered coordinates, in the
    center's frame) at distance >= m from every spy.

    Spies of relative weight < 2, and spies whose projection onto the
    uncovered coordinates has weight < 2, cannot come within m-1 of any such
    set and are dropped before the avoiding-vertex search.
    """
    t = len(uncovered)
    if t < m:
        return None
    projected = set()
    for rel in spy_rel_masks:
        if rel.bit_count() < 2:
            continue
        packed = project_onto_coords(rel, uncovered)
        if packed.bit_count() >= 2:
            projected.add(packed)
    w_packed = avoiding_vertex(t, m, projected, seed)
    if w_packed is None:
        return None
    w_rel = 0
    for idx, c in enumerate(uncovered):
        if w_packed & (1 << idx):
            w_rel |= 1 << c
    return w_rel


def walk_schedule(center: int, w_rel: int, start_round: int) -> dict[int, list[tuple[int, int, int]]]:
    """Per-round flows walking one piece per coordinate of w_rel from its
    weight-1 start to the target, all arriving on round start_round + |w| - 2.

    Each walker adds one missing coordinate per round, so after |w|-1 rounds
    every walker sits on the target simultaneously.
    """
    walk_bits = [i for i in range(w_rel.bit_length()) if w_rel & (1 << i)]
    plan: dict[int, list[tuple[int, int, int]]] = {}
    for i in walk_bits:
        at = center ^ (1 << i)
        for step, b in enumerate(bit for bit in walk_bits if bit != i):
            nxt = at ^ (1 << b)
            plan.setdefault(start_round + step, []).append((at, nxt, 1))
            at = nxt
    return plan


class HypercubeWalkAttack(RevStrategy):
    """General meeting size on a hypercube: pick a weight-m target no spy can
    reach in m-1 steps (the avoiding-vertex search over the uncovered
    coordinates), then walk the m chosen pieces to it one coordinate per
    round, arriving together."""

    name = "rev.hypercube-general"

    def __init__(
        self,
        center: int = 0,
        revs: int | None = None,
        territory_radius: int | None = None,
    ):
        self.center = center
        self.revs_arg = revs
        self.territory_radius = territory_radius

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        if g.coordinate_dim is None:
            raise ValueError("attack needs a hypercube graph")
        self.d = g.coordinate_dim
        self.r_local = self.revs_arg if self.revs_arg is not None else spec.r
        if self.d < self.r_local or self.r_local < spec.m:
            raise ValueError("need dimension >= revolutionaries >= meeting size")
        self.horizon = max(spec.m - 1, 1)
        self.plan: dict[int, list[tuple[int, int, int]]] = {}
        self.target: int | None = None
        self.walk_audit: dict = {}

    def my_vertices(self) -> list[int]:
        return [self.center ^ (1 << i) for i in range(self.r_local)]

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for v in self.my_vertices():
            counts[v] += 1
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        if pos.round == 1 and self.target is None:
            uncovered = [
                i
                for i in range(self.r_local)
                if pos.spy_count[self.center ^ (1 << i)] == 0
            ]
            spies_rel = [
                v ^ self.center
                for v, c in enumerate(pos.spy_count)
                if c
                and (
                    self.territory_radius is None
                    or hamming(v, self.center) <= self.territory_radius
                )
            ]
            w_rel = choose_walk_target(
                self.spec.m, uncovered, spies_rel, self.rng.randrange(1 << 30)
            )
            if w_rel is None:
                log.warning("walk attack found no avoiding vertex; idling")
                return ()
            self.target = self.center ^ w_rel
            self.plan = walk_schedule(self.center, w_rel, pos.round)
            self.walk_audit = {
                "target": self.target,
                "min_spy_distance": min(
                    (hamming(v, self.target) for v, c in enumerate(pos.spy_count) if c),
                    default=None,
                ),
            }
        return make_moveset(self.plan.get(pos.round, []))

    def audit(self, pos: Position) -> dict | None:
        return self.walk_audit or None


class ReplicatedHypercubeAttack(RevStrategy):
    """Run the single-center hypercube attack around the words of a greedy
    code whose distance keeps the action balls disjoint; whichever ball the
    spies under-garrison produces the win."""

    name = "rev.replicated-hypercube"

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        g = spec.graph
        if g.coordinate_dim is None:
            raise ValueError("attack needs a hypercube graph")
        self.d = g.coordinate_dim
        m = spec.m
        distance = 9 if m == 2 else 4 * m - 1
        self.radius = 4 if m == 2 else 2 * m - 1
        groups = spec.r // self.d
        if groups < 1:
            raise ValueError("need at least d revolutionaries per group")
        code = greedy_code(self.d, min(distance, self.d))
        if distance > self.d or len(code.members) < groups:
            raise ValueError(
                f"code of distance {distance} in Q_{self.d} too small for "
                f"{groups} groups"
            )
        self.centers = sorted(code.members)[:groups]
        for a, b in itertools.combinations(self.centers, 2):
            if hamming(a, b) < distance:
                raise AssertionError("code distance violated")
        inner_cls = HypercubePairAttack if m == 2 else HypercubeWalkAttack
        self.inners = []
        for c in self.centers:
            inner = inner_cls(center=c, revs=self.d, territory_radius=self.radius)
            inner.begin(spec, self.rng.randrange(1 << 30))
            self.inners.append(inner)
        self.horizon = 2 if m == 2 else m - 1

    def ball(self, center: int) -> set[int]:
        return {
            v
            for v in range(self.spec.graph.vertex_count)
            if hamming(v, center) <= self.radius
        }

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for inner in self.inners:
            for v, c in enumerate(inner.place()):
                counts[v] += c
        leftover = self.spec.r - len(self.inners) * self.d
        balls: set[int] = set()
        for c in self.centers:
            balls |= self.ball(c)
        v = 0
        while leftover > 0:
            if v not in balls and counts[v] == 0:
                counts[v] = 1
                leftover -= 1
            v += 1
            if v >= len(counts):
                v = 0
                balls = set()  # cube too crowded: park anywhere empty
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        flows = []
        for inner in self.inners:
            flows.extend(inner.move(pos))
        return make_moveset(flows)


# ---------------------------------------------------------------------------
# one-round construction attacks

class ExtensionAttack(RevStrategy):
    """On a graph with the r-extension property, m uncovered revolutionaries
    meet at a vertex adjacent to all of them and to no spy."""

    name = "rev.extension"

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for v in range(self.spec.r):
            counts[v] += 1
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        if pos.round > 1:
            return ()
        g = self.spec.graph
        m = self.spec.m
        spy_at = {v for v, c in enumerate(pos.spy_count) if c}
        uncovered = [
            v for v, c in enumerate(pos.rev_count) if c and v not in spy_at
        ]
        group = uncovered[:m]
        if len(group) < m:
            return ()
        for x in range(g.vertex_count):
            if x in spy_at or pos.rev_count[x]:
                continue
            nx = g.neighbor_set(x)
            if all(v in nx for v in group) and not (nx & spy_at):
                return make_moveset((v, x, 1) for v in group)
        return ()


class SplitGraphAttack(RevStrategy):
    """On the clique-plus-subsets split graph, the clique revolutionaries of
    an unwatched m-set walk down to its private subset vertex."""

    name = "rev.split-graph"

    def __init__(self, m: int, r: int):
        self.m_arg = m
        self.r_arg = r

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        if spec.m != self.m_arg or spec.r != self.r_arg:
            raise ValueError("attack parameters must match the game spec")
        self.subset_vertex = {
            frozenset(combo): self.r_arg + idx
            for idx, combo in enumerate(
                itertools.combinations(range(self.r_arg), self.m_arg)
            )
        }

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for v in range(self.r_arg):
            counts[v] += 1
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        if pos.round > 1:
            return ()
        free_clique = [
            v for v in range(self.r_arg) if pos.spy_count[v] == 0 and pos.rev_count[v]
        ]
        for combo in itertools.combinations(sorted(free_clique), self.m_arg):
            u = self.subset_vertex[frozenset(combo)]
            if pos.spy_count[u] == 0:
                return make_moveset((v, u, 1) for v in combo)
        return ()


class DominationSharpAttack(RevStrategy):
    """On the domination-sharpness construction, swarm the private outer
    vertices matched to the least-garrisoned hub vertex."""

    name = "rev.domsharp"

    def __init__(self, t: int, m: int, r: int):
        self.t, self.m_arg, self.r_arg = t, m, r

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        if spec.m != self.m_arg or spec.r != self.r_arg:
            raise ValueError("attack parameters must match the game spec")
        from .graphs import domination_sharp_construction

        _, labels = domination_sharp_construction(self.t, self.m_arg, self.r_arg)
        self.labels = labels

    @staticmethod
    def win_threshold(t: int, m: int, r: int) -> int:
        return math.floor(t * (r / m - 1))

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for v in self.labels.meeting_side:
            counts[v] += 1
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        if pos.round > 1:
            return ()
        hub = self.labels.hub_side
        v_star = min(hub, key=lambda v: (pos.spy_count[v], v))
        hub_slot = hub.index(v_star)
        spies_there = pos.spy_count[v_star]
        free_meet = [
            v
            for v in self.labels.meeting_side
            if pos.spy_count[v] == 0 and pos.rev_count[v]
        ]
        used: set[int] = set()
        flows = []
        groups_made = 0
        for combo in itertools.combinations(free_meet, self.m_arg):
            if groups_made > spies_there:
                break
            if used & set(combo):
                continue
            group = self.labels.outer_groups[frozenset(combo)]
            u = group[hub_slot]
            if pos.spy_count[u]:
                continue
            used.update(combo)
            flows.extend((v, u, 1) for v in combo)
            groups_made += 1
        return make_moveset(flows)


class RetractPullbackAttack(RevStrategy):
    """Play an attack for the image of a retraction inside the host graph,
    reading the spies through the retraction map."""

    name = "rev.retract-pullback"

    def __init__(self, inner: RevStrategy, retraction: RetractionMap):
        self.inner = inner
        self.retraction = retraction

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        if spec.graph is not self.retraction.host and spec.graph != self.retraction.host:
            raise ValueError("spec graph must be the retraction host")
        if self.retraction.cube_masks is not None:
            dim = max(self.retraction.cube_masks.values()).bit_length()
            self.inner_graph = hypercube_graph(dim)
            self.to_inner = dict(self.retraction.cube_masks)
        else:
            self.inner_graph, self.to_inner = self.retraction.image_graph()
        self.from_inner = {iv: hv for hv, iv in self.to_inner.items()}
        inner_spec = GameSpec(
            self.inner_graph,
            spec.m,
            spec.r,
            spec.s,
            enforce_standing_assumptions=False,
        )
        self.inner.begin(inner_spec, seed)

    def _imagined(self, pos: Position) -> Position:
        n = self.inner_graph.vertex_count
        rev = [0] * n
        spy = [0] * n
        for v, c in enumerate(pos.rev_count):
            if c:
                rev[self.to_inner[v]] += c  # our pieces stay on the image
        for v, c in enumerate(pos.spy_count):
            if c:
                spy[self.to_inner[self.retraction.apply(v)]] += c
        return Position(tuple(rev), tuple(spy), pos.phase, pos.round)

    def place(self) -> tuple[int, ...]:
        counts = [0] * self.spec.graph.vertex_count
        for iv, c in enumerate(self.inner.place()):
            if c:
                counts[self.from_inner[iv]] += c
        return tuple(counts)

    def move(self, pos: Position) -> MoveSet:
        inner_move = self.inner.move(self._imagined(pos))
        return make_moveset(
            (self.from_inner[f], self.from_inner[t], c) for f, t, c in inner_move
        )
