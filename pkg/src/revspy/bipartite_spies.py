"""Spy strategies for r-large complete bipartite graphs.

All three strategies share the greedy migration scheme: spies never stack,
and each round they compute a target split (s'_1, s'_2) and redeploy by the
three-step migration, covering the most-populated vertices first.
"""

from __future__ import annotations

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
from .graphs import Graph


class TargetInfeasible(StrategyFault):
    pass


def bipartite_parts(g: Graph) -> list[list[int]]:
    if g.part_labels is None or not g.is_complete_multipartite():
        raise ValueError("graph must be complete bipartite")
    parts = g.parts()
    if len(parts) != 2:
        raise ValueError("graph must have exactly two parts")
    return parts


def check_r_large(g: Graph, r: int) -> list[list[int]]:
    parts = bipartite_parts(g)
    if any(len(p) < 2 * r for p in parts):
        raise ValueError("graph is not r-large: every part needs >= 2r vertices")
    return parts


def greedy_migration(
    pos: Position,
    targets: tuple[int, int],
    parts: list[list[int]],
) -> MoveSet:
    """Redeploy the spies to the target per-side counts.

    Picking the side i with target_i <= current count on the other side:
    (1) target_i spies leave the other side, vacating its least-populated
    covered vertices; (2) all spies on side i cross over, covering the most
    populated uncovered vertices there; (3) the leavers land on side i the
    same way.  Never stacks two spies and moves each spy at most once.
    """
    rev = pos.rev_count
    spy_sets = [sorted(v for v in part if pos.spy_count[v] > 0) for part in parts]
    if any(pos.spy_count[v] > 1 for part in parts for v in part):
        raise TargetInfeasible("greedy migration requires at most one spy per vertex")
    current = (len(spy_sets[0]), len(spy_sets[1]))
    if sum(targets) != sum(current):
        raise TargetInfeasible(f"targets {targets} do not preserve {sum(current)} spies")
    if targets[0] <= current[1]:
        i = 0
    elif targets[1] <= current[0]:
        i = 1
    else:
        raise TargetInfeasible("no feasible migration index")
    other = 1 - i

    # (1) leavers vacate the other side's least-populated spy vertices
    pool = list(spy_sets[other])
    leavers = []
    for _ in range(targets[i]):
        pick = min(pool, key=lambda v: (rev[v], v))
        pool.remove(pick)
        leavers.append(pick)

    flows: list[tuple[int, int, int]] = []

    def land(movers: list[int], side: int, occupied: set[int]) -> None:
        free = [v for v in parts[side] if v not in occupied]
        free.sort(key=lambda v: (-rev[v], v))
        if len(movers) > len(free):
            raise TargetInfeasible("not enough uncovered landing vertices")
        for src, dest in zip(movers, free):
            if src != dest:
                flows.append((src, dest, 1))

    # (2) every spy on side i crosses to the other side
    land(list(spy_sets[i]), other, set(pool))
    # (3) the leavers land on side i (now fully vacated)
    land(leavers, i, set())
    return make_moveset(flows)


def _greedy_coverage(rev: tuple[int, ...], part: list[int], spies: int) -> int:
    """Revolutionaries covered when ``spies`` spies take the most populated
    vertices of the part, one each."""
    occupied = sorted((rev[v] for v in part if rev[v] > 0), reverse=True)
    return sum(occupied[:spies])


def _place_side(rev, part, spies: int) -> list[int]:
    """Most-populated-first placement on distinct vertices of one part."""
    order = sorted(part, key=lambda v: (-rev[v], v))
    if spies > len(part):
        raise TargetInfeasible("side target exceeds part size")
    return order[:spies]


class _BipartiteSpyBase(SpyStrategy):
    """Shared placement, migration plumbing and per-round audits."""

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        self.parts = check_r_large(spec.graph, spec.r)
        self.part_index = [0] * spec.graph.vertex_count
        for v in self.parts[1]:
            self.part_index[v] = 1
        self.last_case: str | None = None
        self.invariant_a_ok = True
        self.invariant_b_ok = True

    # -- per-strategy hooks
    def targets_for_round(self, before: Position, after: Position) -> tuple[int, int]:
        raise NotImplementedError

    def placement_ok(self, rev, split: tuple[int, int]) -> bool:
        raise NotImplementedError

    def side_counts(self, pos: Position):
        r_j = [0, 0]
        s_j = [0, 0]
        c_j = [0, 0]
        for v, c in enumerate(pos.rev_count):
            r_j[self.part_index[v]] += c
            if pos.spy_count[v] > 0:
                c_j[self.part_index[v]] += c
        for v, c in enumerate(pos.spy_count):
            s_j[self.part_index[v]] += c
        return r_j, s_j, c_j

    def _meeting_minimum(self, rev, part) -> int:
        return sum(1 for v in part if rev[v] >= self.spec.m)

    def place(self, pos: Position) -> tuple[int, ...]:
        rev = pos.rev_count
        s = self.spec.s
        need0 = self._meeting_minimum(rev, self.parts[0])
        need1 = self._meeting_minimum(rev, self.parts[1])
        if need0 + need1 > s:
            raise StrategyFault("not enough spies to cover the initial meetings")
        candidates = sorted(
            range(max(need0, 0), s - need1 + 1),
            key=lambda x: (abs(2 * x - s), x),
        )
        split = None
        for s0 in candidates:
            if self.placement_ok(rev, (s0, s - s0)):
                split = (s0, s - s0)
                break
        if split is None:
            s0 = max(need0, min(s - need1, s // 2))
            split = (s0, s - s0)
        counts = [0] * self.spec.graph.vertex_count
        for side in (0, 1):
            for v in _place_side(rev, self.parts[side], split[side]):
                counts[v] += 1
        return tuple(counts)

    def respond(self, before: Position, rev_move: MoveSet, after: Position) -> MoveSet:
        targets = self.targets_for_round(before, after)
        targets = self._clamp(targets)
        return greedy_migration(after, targets, self.parts)

    def _clamp(self, targets: tuple[int, int]) -> tuple[int, int]:
        s = self.spec.s
        t0 = max(0, min(s, targets[0]))
        return (t0, s - t0)


class BipartitePairSpy(_BipartiteSpyBase):
    """Meeting size 2 on an r-large complete bipartite graph.

    Works from the split constants alpha = s - floor(r/2) and
    beta = floor((r - alpha)/2); the per-round target keeps every side able
    to answer a swarm of the opposite side.
    """

    name = "spy.bipartite-m2"

    @staticmethod
    def required_spies(r: int) -> int:
        return math.ceil(((7 * r) // 2 - 3) / 5)

    def begin(self, spec: GameSpec, seed: int) -> None:
        if spec.m != 2:
            raise ValueError("meeting size must be 2")
        super().begin(spec, seed)
        self.alpha = max(0, spec.s - spec.r // 2)
        self.beta = (spec.r - self.alpha) // 2
        r, s = spec.r, spec.s
        self.constants_ok = (
            self.alpha <= self.beta
            and self.alpha + self.beta <= s
            and (r + self.beta) // 2 <= s
        )

    def placement_ok(self, rev, split) -> bool:
        s0, s1 = split
        if s0 < self.alpha or s1 < self.alpha:
            return False
        r_j = [sum(rev[v] for v in part) for part in self.parts]
        c_j = [_greedy_coverage(rev, self.parts[j], split[j]) for j in (0, 1)]
        need = [min(r_j[j], (self.spec.r - c_j[1 - j]) // 2) for j in (0, 1)]
        return s0 >= need[0] and s1 >= need[1]

    def targets_for_round(self, before: Position, after: Position) -> tuple[int, int]:
        s = self.spec.s
        _, s_j, _ = self.side_counts(before)
        r_new = [0, 0]
        for v, c in enumerate(after.rev_count):
            r_new[self.part_index[v]] += c
        for i in (0, 1):
            if r_new[i] <= self.alpha:
                self.last_case = f"1(i={i + 1})"
                return (self.alpha, s - self.alpha) if i == 0 else (s - self.alpha, self.alpha)
        for i in (0, 1):
            if s_j[i] >= min(r_new[1 - i], self.beta):
                self.last_case = f"2(i={i + 1})"
                tgt_other = min(r_new[1 - i], self.beta)
                return (s - tgt_other, tgt_other) if i == 0 else (tgt_other, s - tgt_other)
        self.last_case = "3"
        return (s_j[1], s_j[0])

    def audit(self, pos: Position) -> dict:
        r_j, s_j, c_j = self.side_counts(pos)
        a_ok = all(
            s_j[j] >= min(r_j[j], (self.spec.r - c_j[1 - j]) // 2) for j in (0, 1)
        )
        b_ok = all(s_j[j] >= self.alpha for j in (0, 1))
        self.invariant_a_ok = self.invariant_a_ok and a_ok
        self.invariant_b_ok = self.invariant_b_ok and b_ok
        return {
            "invariant_a": a_ok,
            "invariant_b": b_ok,
            "case": self.last_case,
            "unguarded": unguarded_meeting(pos, self.spec.m),
        }


class BipartiteTripleSpy(_BipartiteSpyBase):
    """Meeting size 3 on an r-large complete bipartite graph, floor(r/2)
    spies, with the special redeploy step in the r = 3 mod 18 classes."""

    name = "spy.bipartite-m3"

    @staticmethod
    def required_spies(r: int) -> int:
        return r // 2

    def begin(self, spec: GameSpec, seed: int) -> None:
        if spec.m != 3:
            raise ValueError("meeting size must be 3")
        super().begin(spec, seed)
        r = spec.r
        s_nominal = r // 2
        self.alpha = r // 2 - r // 3
        self.beta = s_nominal - (r - self.alpha) // 3
        self.exception_class = r % 18 == 3
        self.constants_ok = self.beta <= math.ceil((r // 2) / 2) and (
            self.beta >= (r - 2 * self.alpha) // 3 or self.exception_class
        )
        self.u_overflow = False

    def _uncovered_max(self, pos: Position, part) -> int:
        vals = [
            pos.rev_count[v] for v in part if pos.spy_count[v] == 0 and pos.rev_count[v] > 0
        ]
        return max(vals, default=0)

    def placement_ok(self, rev, split) -> bool:
        if split[0] < self.alpha or split[1] < self.alpha:
            return False
        r_j, c_j, u_j = [], [], []
        for j in (0, 1):
            occupied = sorted(
                (rev[v] for v in self.parts[j] if rev[v] > 0), reverse=True
            )
            r_j.append(sum(occupied))
            c_j.append(sum(occupied[: split[j]]))
            tallest_uncovered = occupied[split[j]] if split[j] < len(occupied) else 0
            if tallest_uncovered >= 3:
                return False
            u_j.append(tallest_uncovered)
        f = [
            min((self.spec.r - c_j[1 - j]) // 3, r_j[j] // (3 - u_j[1 - j]))
            for j in (0, 1)
        ]
        return split[0] >= f[0] and split[1] >= f[1]

    def targets_for_round(self, before: Position, after: Position) -> tuple[int, int]:
        s = self.spec.s
        r = self.spec.r
        _, s_j, _ = self.side_counts(before)
        r_new = [0, 0]
        for v, c in enumerate(after.rev_count):
            r_new[self.part_index[v]] += c
        i = 0 if r_new[0] <= r_new[1] else 1
        ri = r_new[i]
        if ri <= self.alpha:
            self.last_case = f"1(i={i + 1})"
            ti = self.alpha
        elif ri <= self.beta:
            self.last_case = f"2(i={i + 1})"
            ti = ri
        elif ri <= 2 * self.beta:
            ti = self.beta
            if self.exception_class and s_j[i] == self.alpha:
                ti = self.beta + 1
                self.last_case = f"3x(i={i + 1})"
            else:
                self.last_case = f"3(i={i + 1})"
        elif ri <= r // 2:
            self.last_case = f"4(i={i + 1})"
            ti = ri // 2
        else:
            self.last_case = f"overflow(i={i + 1})"
            ti = r // 2 // 2
        return (ti, s - ti) if i == 0 else (s - ti, ti)

    def audit(self, pos: Position) -> dict:
        r_j, s_j, c_j = self.side_counts(pos)
        u_j = [self._uncovered_max(pos, self.parts[j]) for j in (0, 1)]
        if max(u_j) > 2:
            self.u_overflow = True
        u_clamped = [min(u, 2) for u in u_j]
        f_j = [
            min(
                (self.spec.r - c_j[1 - j]) // 3,
                r_j[j] // (3 - u_clamped[1 - j]),
            )
            for j in (0, 1)
        ]
        a_ok = all(s_j[j] >= f_j[j] for j in (0, 1))
        b_ok = all(s_j[j] >= self.alpha for j in (0, 1))
        self.invariant_a_ok = self.invariant_a_ok and a_ok
        self.invariant_b_ok = self.invariant_b_ok and b_ok
        return {
            "invariant_a": a_ok,
            "invariant_b": b_ok,
            "f_j": f_j,
            "u_overflow": self.u_overflow,
            "case": self.last_case,
            "unguarded": unguarded_meeting(pos, self.spec.m),
        }


class BipartiteGeneralSpy(_BipartiteSpyBase):
    """General meeting size on an r-large complete bipartite graph.

    Each round solves the closed forms for x, u1, u2 and the common value
    alpha (four expressions that must agree), then picks the side-1 target
    from the position of alpha relative to x and floor(r/m).  In the small
    ratio regime r/m < 1/(1 - 1/sqrt(3)) the spies simply keep an even
    split (four always suffice there).
    """

    name = "spy.bipartite-general"

    CONSISTENCY_TOL = 1e-9

    @staticmethod
    def required_spies(m: int, r: int) -> int:
        if r / m < 1 / (1 - 1 / math.sqrt(3)):
            return 4
        return math.ceil((1 + 1 / math.sqrt(3)) * r / m) + 1

    def begin(self, spec: GameSpec, seed: int) -> None:
        super().begin(spec, seed)
        self.small_ratio = spec.r / spec.m < 1 / (1 - 1 / math.sqrt(3))
        if self.small_ratio and spec.s < 4:
            raise ValueError("the small-ratio regime needs at least 4 spies")
        self.alpha_spread = 0.0
        self.consistent = True

    def closed_forms(self, r1_new: int) -> tuple[float, float, float, float]:
        """Solve for (x, u1, u2, alpha); records the four-way agreement."""
        r, m = self.spec.r, self.spec.m
        r2_new = r - r1_new
        x = math.sqrt(max(0.0, 9 * r * r + 12 * r1_new * r - 12 * r1_new * r1_new)) / (6 * m)
        disc1 = r * r + 2 * r * x * m + x * x * m * m - 4 * x * r1_new * m
        disc2 = r * r - 2 * r * x * m + x * x * m * m + 4 * x * r1_new * m
        u1 = (r + m * x - math.sqrt(max(0.0, disc1))) / (2 * x)
        u2 = (r + m * x - math.sqrt(max(0.0, disc2))) / (2 * x)
        exprs = [x + r / m - (r - u1 * x) / m]
        if abs(m - u1) > 1e-6:
            exprs.append(x + r / m - r2_new / (m - u1))
        if abs(m - u2) > 1e-6:
            exprs.append(r1_new / (m - u2))
        exprs.append((r - u2 * x) / m)
        alpha = exprs[0]
        spread = max(exprs) - min(exprs)
        self.alpha_spread = max(self.alpha_spread, spread)
        if spread > self.CONSISTENCY_TOL:
            self.consistent = False
            raise StrategyFault(
                f"inconsistent closed forms for alpha: spread {spread:.3g}"
            )
        return x, u1, u2, alpha

    def placement_ok(self, rev, split) -> bool:
        r1 = sum(rev[v] for v in self.parts[0])
        want = self._case_targets(r1)
        return split == want

    def _case_targets(self, r1_new: int) -> tuple[int, int]:
        s = self.spec.s
        if self.small_ratio:
            self.last_case = "small-ratio"
            t0 = max(2, s // 2)
            return (t0, s - t0)
        x, _, _, alpha = self.closed_forms(r1_new)
        cap = self.spec.r // self.spec.m
        if alpha <= x:
            self.last_case = "1"
            t0 = math.ceil(x)
        elif alpha > cap:
            self.last_case = "2"
            t0 = cap
        else:
            self.last_case = "3"
            t0 = math.ceil(alpha)
        return (t0, s - t0)

    def targets_for_round(self, before: Position, after: Position) -> tuple[int, int]:
        r1_new = sum(after.rev_count[v] for v in self.parts[0])
        return self._case_targets(r1_new)

    def audit(self, pos: Position) -> dict:
        return {
            "alpha_spread": self.alpha_spread,
            "consistent": self.consistent,
            "case": self.last_case,
            "unguarded": unguarded_meeting(pos, self.spec.m),
        }
