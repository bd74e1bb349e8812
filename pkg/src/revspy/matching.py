"""Matching and search subroutines shared by the strategies.

All operations are pure functions of their inputs (plus an explicit seed)
and deterministic: scan order follows the declared node order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .graphs import CapExceeded, Graph


@dataclass
class BipartiteInstance:
    left: list
    right: list
    edges: dict  # left node -> set of right nodes

    def __post_init__(self):
        rset = set(self.right)
        for u, nbrs in self.edges.items():
            if u not in set(self.left):
                raise ValueError(f"edge source {u!r} not a declared left node")
            if not set(nbrs) <= rset:
                raise ValueError(f"edges of {u!r} reference undeclared right nodes")

    def neighbors(self, u) -> list:
        seen = set()
        out = []
        for v in self.edges.get(u, ()):
            if v not in seen:
                seen.add(v)
                out.append(v)
        return out


def max_matching(inst: BipartiteInstance) -> dict:
    """Maximum-cardinality matching as a left -> right partial injection.

    Augmenting-path search visits left nodes and their candidate lists in
    declared order, so the result is deterministic for a given instance and
    callers can bias which maximum matching is found by ordering edges.
    """
    match_right: dict = {}

    def augment(u, seen: set) -> bool:
        for v in inst.neighbors(u):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in inst.left:
        augment(u, set())
    return {u: v for v, u in match_right.items()}


def _sort_key(x):
    return (str(type(x)), repr(x))


def hall_violator(inst: BipartiteInstance) -> list | None:
    """A left subset S with |N(S)| < |S|, or None when the left side saturates.

    Built from the alternating-reachability certificate of an unsaturated
    left node, so |N(S)| = |S| - 1.
    """
    matching = max_matching(inst)
    unmatched = [u for u in inst.left if u not in matching]
    if not unmatched:
        return None
    match_right = {v: u for u, v in matching.items()}
    s = {unmatched[0]}
    reached_right: set = set()
    frontier = [unmatched[0]]
    while frontier:
        u = frontier.pop()
        for v in inst.neighbors(u):
            if v in reached_right:
                continue
            reached_right.add(v)
            if v in match_right and match_right[v] not in s:
                s.add(match_right[v])
                frontier.append(match_right[v])
    assert len(reached_right) < len(s)
    return sorted(s, key=_sort_key)


@dataclass
class CoverAssignment:
    assignment: dict[int, int]  # meeting vertex -> spy id
    movers: set[int] = field(default_factory=set)


class NoCover(RuntimeError):
    """The meetings cannot all be covered; carries the Hall certificate."""

    def __init__(self, violator):
        super().__init__(f"uncoverable meeting set {violator}")
        self.violator = violator


def min_movers_cover(meetings: set[int], spies: dict[int, int], g: Graph) -> CoverAssignment:
    """Cover every meeting vertex with a distinct spy at distance <= 1.

    Maximizes the number of spies that stay on a meeting vertex they already
    occupy (equivalently, minimizes movers) via a 0/1-cost assignment solved
    by shortest augmenting paths.  Deterministic: ties break toward lower
    meeting vertex and lower spy id.
    """
    meeting_list = sorted(meetings)
    spy_ids = sorted(spies)
    candidates = {
        v: [s for s in spy_ids if spies[s] == v or g.has_edge(spies[s], v)]
        for v in meeting_list
    }
    inst = BipartiteInstance(meeting_list, spy_ids, candidates)

    def cost(v: int, s: int) -> int:
        return 0 if spies[s] == v else 1

    assigned: dict[int, int] = {}   # meeting -> spy
    spy_of: dict[int, int] = {}     # spy -> meeting
    for v0 in meeting_list:
        # shortest alternating path from v0 to a free spy; edge costs are the
        # mover indicators, matched edges traversed backward at negative cost
        dist: dict[int, int] = {}
        pred: dict[int, int | None] = {}
        for s in candidates[v0]:
            dist[s] = cost(v0, s)
            pred[s] = None
        changed = True
        while changed:
            changed = False
            for s in sorted(dist):
                if s not in spy_of:
                    continue
                mv = spy_of[s]
                base = dist[s] - cost(mv, s)
                for s2 in candidates[mv]:
                    if s2 == s:
                        continue
                    nd = base + cost(mv, s2)
                    if s2 not in dist or nd < dist[s2]:
                        dist[s2] = nd
                        pred[s2] = s
                        changed = True
        free = [s for s in dist if s not in spy_of]
        if not free:
            raise NoCover(hall_violator(inst))
        end = min(free, key=lambda s: (dist[s], s))
        chain = [end]
        while pred[chain[-1]] is not None:
            chain.append(pred[chain[-1]])
        chain.reverse()
        hand_off = [v0] + [spy_of[s] for s in chain[:-1]]
        for mv, s in zip(hand_off, chain):
            spy_of[s] = mv
            assigned[mv] = s
    movers = {s for v, s in assigned.items() if spies[s] != v}
    return CoverAssignment(assignment=assigned, movers=movers)


def exhaustive_min_movers(meetings: set[int], spies: dict[int, int], g: Graph) -> int | None:
    """Brute-force minimum mover count over all covering assignments (oracle)."""
    meeting_list = sorted(meetings)
    spy_ids = sorted(spies)
    best = None
    for combo in itertools.permutations(spy_ids, len(meeting_list)):
        ok = all(
            spies[s] == v or g.has_edge(spies[s], v)
            for v, s in zip(meeting_list, combo)
        )
        if not ok:
            continue
        movers = sum(1 for v, s in zip(meeting_list, combo) if spies[s] != v)
        if best is None or movers < best:
            best = movers
    return best


SAMPLE_INCLUSION_P = 0.079532
DEFAULT_RETRY_BUDGET = 200


def weight(mask: int) -> int:
    return mask.bit_count()


def _avoids_all(w: int, spies) -> bool:
    return all(weight(v & w) * 2 < weight(v) + 1 for v in spies)


def avoiding_vertex(
    t: int,
    m: int,
    spies: set[int],
    seed: int,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    fallback_cap: int = 2_000_000,
) -> int | None:
    w, _, _ = avoiding_vertex_detail(t, m, spies, seed, retry_budget, fallback_cap)
    return w


def avoiding_vertex_detail(
    t: int,
    m: int,
    spies: set[int],
    seed: int,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
    fallback_cap: int = 2_000_000,
) -> tuple[int | None, bool, int]:
    """Weight-m index set in [t] at distance >= m from every given vertex.

    A weight-m vertex w has distance >= m from v exactly when
    |v & w| < (|v| + 1)/2, so random index sets sampled with inclusion
    probability 0.079532 are tested against that criterion; after the retry
    budget an exhaustive lexicographic scan over weight-m sets decides
    existence.  Returns (vertex or None, fallback_used, samples_tried).
    """
    if m < 1 or t < m:
        raise ValueError("need 1 <= m <= t")
    for v in spies:
        if weight(v) < 2:
            raise ValueError(f"spy vertex {v:#x} has weight < 2")
        if v >> t:
            raise ValueError(f"spy vertex {v:#x} outside Q_{t}")
    if not spies:
        return (1 << m) - 1, False, 0

    rng = random.Random(seed)
    samples = 0
    for _ in range(retry_budget):
        samples += 1
        idx = 0
        for i in range(t):
            if rng.random() < SAMPLE_INCLUSION_P:
                idx |= 1 << i
        if weight(idx) < m or not _avoids_all(idx, spies):
            continue
        # any weight-m subset of an avoiding set still avoids everything
        w = 0
        need = m
        for i in range(t):
            if idx & (1 << i):
                w |= 1 << i
                need -= 1
                if need == 0:
                    break
        return w, False, samples

    import math as _math

    if _math.comb(t, m) > fallback_cap:
        raise CapExceeded(f"exhaustive fallback over C({t},{m}) sets exceeds cap")
    for combo in itertools.combinations(range(t), m):
        w = sum(1 << i for i in combo)
        if _avoids_all(w, spies):
            return w, True, samples
    return None, True, samples
