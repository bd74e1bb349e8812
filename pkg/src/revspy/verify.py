"""Verification sweeps: exhaustive bounded-depth adversaries and the named
check suites driven by the command line.

The adversary helpers are the strongest lower-bound checks available at desk
scale: they enumerate every spy placement (and every joint spy reply, for
depth two) and certify wins with a matching argument, since one spy can
guard at most one meeting.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import engine, solver
from .engine import REV, SPY, GameSpec, Phase, Position, apply as apply_move
from .graphs import Graph
from .matching import BipartiteInstance, max_matching


def uncoverable_meetings(g: Graph, rev_count, spy_count, m: int) -> int:
    """Meetings the spies cannot cover even replying optimally: a spy guards
    at most one meeting, so a maximum matching decides it exactly."""
    meets = [v for v, c in enumerate(rev_count) if c >= m]
    open_meets = [v for v in meets if spy_count[v] == 0]
    if not open_meets:
        return 0
    units = {}
    k = 0
    for v, c in enumerate(spy_count):
        for _ in range(c):
            units[k] = v
            k += 1
    reach = {
        v: [u for u in units if units[u] == v or g.has_edge(units[u], v)]
        for v in open_meets
    }
    matching = max_matching(BipartiteInstance(open_meets, list(units), reach))
    return len(open_meets) - len(matching)


def spy_placements(n: int, s: int):
    yield from solver.placements(n, s)


def willing_spies(spec: GameSpec) -> list[str]:
    """Registered spy strategies that accept this spec at this spy count."""
    from . import registry
    from .graphs import CapExceeded

    out = []
    for entry in registry.REGISTRY.values():
        if entry.side != SPY:
            continue
        ok, _ = entry.applicable(spec)
        if not ok:
            continue
        try:
            registry.build(entry.id, spec).begin(spec, 0)
        except (ValueError, CapExceeded):
            continue
        out.append(entry.id)
    return sorted(out)


def _fresh_attack(factory, spec: GameSpec, seed: int):
    attack = factory()
    attack.begin(spec, seed)
    return attack


def attack_beats_placements_one_round(
    spec: GameSpec, factory, seed: int = 0, placements=None
) -> tuple[bool, int, tuple | None]:
    """Whether the attack's first move wins against every spy placement.

    Enumerates spy placement count-vectors (all of them by default), replays
    the attack fresh per branch, and certifies the loss for the spies with
    the matching bound.  Returns (all_win, branches, failing_placement).
    """
    n = spec.graph.vertex_count
    attack0 = _fresh_attack(factory, spec, seed)
    rev0 = tuple(attack0.place())
    branches = 0
    vectors = placements if placements is not None else spy_placements(n, spec.s)
    for spy_vec in vectors:
        branches += 1
        if engine.unguarded_meeting(
            Position(rev0, tuple(spy_vec), Phase.REV_TO_MOVE, 1), spec.m
        ) is not None:
            continue  # lost at placement already
        attack = _fresh_attack(factory, spec, seed)
        attack.place()
        pos = Position(rev0, tuple(spy_vec), Phase.REV_TO_MOVE, 1)
        move = attack.move(pos)
        mid = apply_move(pos, move, REV, spec.graph)
        if uncoverable_meetings(spec.graph, mid.rev_count, mid.spy_count, spec.m) == 0:
            return False, branches, tuple(spy_vec)
    return True, branches, None


def attack_beats_placements_two_rounds(
    spec: GameSpec, factory, seed: int = 0
) -> tuple[bool, int, tuple | None]:
    """Whether the attack forces a win within two rounds against every spy
    placement and every joint spy reply (complete depth-2 adversary)."""
    g = spec.graph
    n = g.vertex_count
    moves = solver.MoveTable(g)
    attack0 = _fresh_attack(factory, spec, seed)
    rev0 = tuple(attack0.place())
    branches = 0
    for spy_vec in spy_placements(n, spec.s):
        spy_vec = tuple(spy_vec)
        pos1 = Position(rev0, spy_vec, Phase.REV_TO_MOVE, 1)
        if engine.unguarded_meeting(pos1, spec.m) is not None:
            continue
        attack = _fresh_attack(factory, spec, seed)
        attack.place()
        move1 = attack.move(pos1)
        mid1 = apply_move(pos1, move1, REV, g)
        for spy_reply in moves.successors(mid1.spy_count):
            branches += 1
            pos2 = Position(mid1.rev_count, spy_reply, Phase.REV_TO_MOVE, 2)
            if engine.unguarded_meeting(pos2, spec.m) is not None:
                continue  # round-1 win in this branch
            branch_attack = _fresh_attack(factory, spec, seed)
            branch_attack.place()
            replay_move = branch_attack.move(pos1)
            assert replay_move == move1, "attack must be deterministic"
            move2 = branch_attack.move(pos2)
            mid2 = apply_move(pos2, move2, REV, g)
            if uncoverable_meetings(g, mid2.rev_count, mid2.spy_count, spec.m) == 0:
                return False, branches, (spy_vec, spy_reply)
    return True, branches, None


# ---------------------------------------------------------------------------
# named suites

@dataclass
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
        }


@dataclass
class Suite:
    name: str
    checks: list = field(default_factory=list)

    def run(self) -> list[CheckResult]:
        results = []
        for name, fn in self.checks:
            start = time.time()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crashed check is a failed check
                passed, detail = False, f"{type(exc).__name__}: {exc}"
            results.append(
                CheckResult(self.name, name, passed, detail, time.time() - start)
            )
        return results


def _suite_solver_oracle() -> Suite:
    from . import graphs

    suite = Suite("solver-oracle")

    def tree_values():
        trees = small_trees()
        bad = []
        for tree_name, g in trees:
            for m, r in [(2, 2), (2, 3), (2, 4), (3, 3)]:
                n = g.vertex_count
                if not n >= r - m + 1 >= r // m >= 1:
                    continue
                got = solver.sigma_exact(g, m, r)
                if got != r // m:
                    bad.append((tree_name, m, r, got))
        return not bad, f"mismatches: {bad}" if bad else "all tree values match"

    def cycle_value():
        got = solver.sigma_exact(graphs.cycle_graph(4), 2, 3)
        return got == 2, f"sigma(C4,2,3) = {got}"

    def star_values():
        g = graphs.star_graph(5)
        bad = []
        for m, r in [(2, 2), (2, 3), (2, 4), (3, 3)]:
            got = solver.sigma_exact(g, m, r)
            if got != r // m:
                bad.append((m, r, got))
        return not bad, f"mismatches: {bad}" if bad else "star values match"

    def hypercube_small():
        q2 = graphs.hypercube_graph(2)
        w = solver.winner(GameSpec(q2, 2, 3, 1))
        return w == REV, f"winner(Q2,2,3,1) = {w}"

    suite.checks = [
        ("trees <=5 vertices", tree_values),
        ("cycle C4", cycle_value),
        ("star", star_values),
        ("hypercube Q2", hypercube_small),
    ]
    return suite


def small_trees() -> list[tuple[str, Graph]]:
    """All unlabeled trees on at most five vertices."""
    from . import graphs

    return [
        ("K1", graphs.graph_from_edges(1, [])),
        ("P2", graphs.path_graph(2)),
        ("P3", graphs.path_graph(3)),
        ("P4", graphs.path_graph(4)),
        ("star4", graphs.star_graph(4)),
        ("P5", graphs.path_graph(5)),
        ("star5", graphs.star_graph(5)),
        ("chair5", graphs.graph_from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)])),
    ]


def _suite_table1() -> Suite:
    """Desk-scale checks of the complete-bipartite bounds table."""
    from . import attacks, bipartite_spies, graphs

    suite = Suite("table1")

    def m2_bracket():
        r = 8
        g = graphs.complete_multipartite_graph([2 * r, 2 * r])
        s = bipartite_spies.BipartitePairSpy.required_spies(r)
        hi = engine.play(
            GameSpec(g, 2, r, s),
            attacks.BipartitePairAttack(),
            bipartite_spies.BipartitePairSpy(),
            horizon=40,
            seed=0,
        )
        lo = engine.play(
            GameSpec(g, 2, r, s - 1),
            attacks.BipartitePairAttack(),
            bipartite_spies.BipartitePairSpy(),
            horizon=40,
            seed=0,
        )
        ok = hi.outcome.winner == SPY and lo.outcome.winner == REV and lo.outcome.round <= 2
        return ok, f"s={s}: {hi.outcome.winner}; s-1: {lo.outcome.winner}@{lo.outcome.round}"

    def m3_bracket():
        r = 8
        g = graphs.complete_multipartite_graph([2 * r, 2 * r])
        s = r // 2
        hi = engine.play(
            GameSpec(g, 3, r, s),
            attacks.BipartiteTripleAttack(),
            bipartite_spies.BipartiteTripleSpy(),
            horizon=40,
            seed=0,
        )
        lo = engine.play(
            GameSpec(g, 3, r, s - 1),
            attacks.BipartiteTripleAttack(),
            bipartite_spies.BipartiteTripleSpy(),
            horizon=40,
            seed=0,
        )
        ok = hi.outcome.winner == SPY and lo.outcome.winner == REV and lo.outcome.round <= 2
        return ok, f"s={s}: {hi.outcome.winner}; s-1: {lo.outcome.winner}@{lo.outcome.round}"

    def general_upper():
        m, r = 4, 12
        g = graphs.complete_multipartite_graph([2 * r, 2 * r])
        s = bipartite_spies.BipartiteGeneralSpy.required_spies(m, r)
        t = engine.play(
            GameSpec(g, m, r, s),
            attacks.CellGroupAttack(),
            bipartite_spies.BipartiteGeneralSpy(),
            horizon=60,
            seed=0,
        )
        consistent = all(rec.audits["spy"]["consistent"] for rec in t.rounds)
        return (
            t.outcome.winner == SPY and consistent,
            f"s={s}: {t.outcome.winner}, closed forms consistent: {consistent}",
        )

    def cells_lower():
        m, r = 6, 24
        g = graphs.complete_multipartite_graph([2 * r, 2 * r])
        thr = attacks.CellGroupAttack.win_threshold(3, m, r)
        t = engine.play(
            GameSpec(g, m, r, thr - 1),
            attacks.CellGroupAttack(),
            bipartite_spies.BipartiteGeneralSpy(),
            horizon=20,
            seed=0,
        )
        return (
            t.outcome.winner == REV and t.outcome.round <= 2,
            f"cells beat s={thr - 1}: {t.outcome.winner}@{t.outcome.round}",
        )

    suite.checks = [
        ("m=2 bracketing r=8", m2_bracket),
        ("m=3 bracketing r=8", m3_bracket),
        ("general-m upper (4,12)", general_upper),
        ("cells lower (6,24)", cells_lower),
    ]
    return suite


def _suite_kpartite() -> Suite:
    import math

    from . import attacks, graphs, spies

    suite = Suite("kpartite")

    def upper():
        g = graphs.complete_multipartite_graph([18, 18, 18])
        s = math.ceil(3 / 2 * 9 / 3) + 3
        t = engine.play(
            GameSpec(g, 3, 9, s),
            attacks.MultipartiteSwarmAttack(),
            spies.MultipartiteSpy(),
            horizon=60,
            seed=0,
        )
        stable = all(rec.audits["spy"]["stable"] for rec in t.rounds)
        return t.outcome.winner == SPY and stable, f"s={s}: {t.outcome.winner}"

    def lower():
        g = graphs.complete_multipartite_graph([18, 18, 18])
        s = attacks.attack_threshold_kpartite(3, 3, 9)
        spec = GameSpec(g, 3, 9, s)
        ok, branches, bad = attack_beats_placements_one_round(
            spec, attacks.MultipartiteSwarmAttack
        )
        return ok, f"beat all {branches} placements at s={s}" if ok else f"failed at {bad}"

    suite.checks = [("upper bound k=3", upper), ("lower bound k=3", lower)]
    return suite


SUITES = {
    "solver-oracle": _suite_solver_oracle,
    "table1": _suite_table1,
    "kpartite": _suite_kpartite,
}


def run_suite(name: str) -> list[CheckResult]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {sorted(SUITES)}")
    return SUITES[name]().run()


def _as_range(value) -> list:
    return value if isinstance(value, list) else [value]


def run_experiment(entry: dict) -> list[CheckResult]:
    """One experiment descriptor: graph family, m/r/s ranges, a strategy
    pairing, horizon and explicit seeds, plus the expected winner."""
    from . import registry
    from .cli import parse_graph_arg

    results = []
    name = entry.get("name", "duel")
    expect = entry.get("expect")
    horizon = entry.get("horizon")
    seeds = entry.get("seeds", [0])
    if not seeds or not _as_range(entry["r"]):
        raise ValueError("experiment ranges and seeds must be nonempty")
    for m in _as_range(entry["m"]):
        for r in _as_range(entry["r"]):
            for s in _as_range(entry["s"]):
                for seed in seeds:
                    label = f"{name}[m={m},r={r},s={s},seed={seed}]"
                    start = time.time()
                    try:
                        graph = parse_graph_arg(
                            str(entry["graph"]).format(m=m, r=r, s=s, r2=2 * r)
                        )
                        spec = GameSpec(
                            graph,
                            m,
                            r,
                            s,
                            enforce_standing_assumptions=not entry.get(
                                "relax_assumptions", False
                            ),
                        )
                        rev = registry.build(entry["rev"], spec, **entry.get("rev_params", {}))
                        spy = registry.build(entry["spy"], spec, **entry.get("spy_params", {}))
                        outcome = engine.play(spec, rev, spy, horizon=horizon, seed=seed).outcome
                        passed = expect is None or outcome.winner == expect
                        detail = f"winner={outcome.winner} round={outcome.round}"
                    except Exception as exc:
                        passed, detail = False, f"{type(exc).__name__}: {exc}"
                    results.append(
                        CheckResult("experiment", label, passed, detail, time.time() - start)
                    )
    return results
