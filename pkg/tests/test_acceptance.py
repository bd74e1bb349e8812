"""Acceptance suite: one test per criterion, exact tolerances, one printed
pass/fail line each (run with -v -s for the full narrative)."""

import math
import random

import pytest

from revspy import engine, registry, solver, verify
from revspy.attacks import (
    BipartitePairAttack,
    BipartiteTripleAttack,
    CellGroupAttack,
    DominationSharpAttack,
    ExtensionAttack,
    HypercubePairAttack,
    MultipartiteSwarmAttack,
    RetractPullbackAttack,
    SplitGraphAttack,
    attack_threshold_kpartite,
)
from revspy.bipartite_spies import (
    BipartiteGeneralSpy,
    BipartitePairSpy,
    BipartiteTripleSpy,
)
from revspy.engine import REV, SPY, GameSpec, Phase, Position, play
from revspy.graphs import (
    complete_multipartite_graph,
    cycle_graph,
    domination_number,
    domination_sharp_construction,
    hamming,
    has_r_extension_property,
    hypercube_graph,
    is_q_common,
    path_graph,
    product_retraction,
    random_graph,
    random_webbed_tree,
    split_graph_construction,
    star_graph,
)
from revspy.matching import avoiding_vertex, weight
from revspy.spies import (
    CommonNeighborhoodSpy,
    DominationSetSpy,
    MultipartiteSpy,
    WebbedTreeSpy,
)


def report(criterion: str, detail: str):
    print(f"[{criterion}] PASS {detail}")


def kb(r):
    return complete_multipartite_graph([2 * r, 2 * r])


GRID = [(2, 2), (2, 3), (2, 4), (3, 3)]


def test_criterion_01_oracle_closed_forms():
    checked = 0
    for name, g in verify.small_trees():
        for m, r in GRID:
            if not g.vertex_count >= r - m + 1 >= r // m >= 1:
                continue
            assert solver.sigma_exact(g, m, r) == r // m, (name, m, r)
            checked += 1
    assert solver.sigma_exact(cycle_graph(4), 2, 3) == 2
    star = star_graph(5)
    for m, r in GRID:
        assert solver.sigma_exact(star, m, r) == r // m
        checked += 1
    report("criterion-01", f"{checked} sigma values match the closed forms")


def test_criterion_02_hypercube_m2_small():
    assert solver.winner(GameSpec(hypercube_graph(2), 2, 3, 1)) == REV
    q3 = hypercube_graph(3)
    spec = GameSpec(q3, 2, 3, 1)
    assert solver.winner(spec) == REV
    # depth-2 forced win from the weight-1 opening, whatever the spy does
    rev = [0] * 8
    for i in range(3):
        rev[1 << i] = 1
    for spy_vec in solver.placements(8, 1):
        pos = Position(tuple(rev), tuple(spy_vec), Phase.REV_TO_MOVE, 1)
        assert solver.rev_can_win_within(pos, spec, 2)
    for d, r in ((3, 3), (4, 4)):
        follower_spec = GameSpec(hypercube_graph(d), 2, r, r - 1)
        t = play(
            follower_spec, engine.RandomRev(), engine.FollowerSpy(), horizon=100, seed=d
        )
        assert t.outcome.winner == SPY
    report("criterion-02", "Q2/Q3 winners exact; follower survives on Q3, Q4")


@pytest.mark.parametrize("r", [4, 6, 8, 10])
def test_criterion_03_bipartite_m2_spy_side(r):
    g = kb(r)
    s = BipartitePairSpy.required_spies(r)
    opponents = [
        BipartitePairAttack(),
        engine.RandomRev(),
        engine.AlternatingSwarmRev(),
    ]
    for rev in opponents:
        spec = GameSpec(g, 2, r, s)
        t = play(spec, rev, BipartitePairSpy(), horizon=200, seed=41)
        assert t.outcome.winner == SPY, (r, rev.name)
        assert all(rec.audits["spy"]["invariant_a"] for rec in t.rounds)
        assert all(rec.audits["spy"]["invariant_b"] for rec in t.rounds)
    report("criterion-03", f"r={r}: spy survives 200 rounds vs 3 opponents at s={s}")


def test_criterion_03_bipartite_m2_attack_side():
    for r in (4, 6, 8, 10):
        s = BipartitePairSpy.required_spies(r) - 1
        spec = GameSpec(kb(r), 2, r, s)
        for sid in verify.willing_spies(spec):
            strat = registry.build(sid, spec)
            t = play(spec, BipartitePairAttack(), strat, horizon=25, seed=17)
            assert t.outcome.winner == REV and t.outcome.round <= 2, (r, sid)
    spec4 = GameSpec(kb(4), 2, 4, BipartitePairSpy.required_spies(4) - 1)
    ok, branches, bad = verify.attack_beats_placements_two_rounds(
        spec4, BipartitePairAttack
    )
    assert ok, bad
    report(
        "criterion-03",
        f"attack wins <=2 rounds at s-1 everywhere; depth-2 adversary {branches} branches",
    )


@pytest.mark.parametrize("r", [4, 6, 8, 10])
def test_criterion_04_bipartite_m3_bracketing(r):
    g = kb(r)
    s = r // 2
    for rev in (BipartiteTripleAttack(), engine.RandomRev(), engine.AlternatingSwarmRev()):
        spec = GameSpec(g, 3, r, s)
        t = play(spec, rev, BipartiteTripleSpy(), horizon=200, seed=43)
        assert t.outcome.winner == SPY, (r, rev.name)
    spec_lo = GameSpec(g, 3, r, s - 1, enforce_standing_assumptions=False)
    for sid in verify.willing_spies(spec_lo):
        strat = registry.build(sid, spec_lo)
        t = play(spec_lo, BipartiteTripleAttack(), strat, horizon=25, seed=43)
        assert t.outcome.winner == REV and t.outcome.round <= 2, (r, sid)
    report("criterion-04", f"r={r}: bracketed at s={s} / s-1")


def test_criterion_04_exception_class_r21():
    r = 21
    g = kb(r)
    s = r // 2
    spec = GameSpec(g, 3, r, s)
    spy = BipartiteTripleSpy()
    t = play(spec, engine.RandomRev(), spy, horizon=200, seed=44)
    assert spy.exception_class
    assert t.outcome.winner == SPY
    assert all(rec.audits["spy"]["invariant_a"] for rec in t.rounds)
    assert all(rec.audits["spy"]["invariant_b"] for rec in t.rounds)
    report("criterion-04", "r=21 (3 mod 18) exception branch: invariants hold, no loss")


@pytest.mark.parametrize("m,r", [(4, 12), (5, 15), (6, 24)])
def test_criterion_05_general_m(m, r):
    g = kb(r)
    s = BipartiteGeneralSpy.required_spies(m, r)
    assert s == math.ceil((1 + 1 / math.sqrt(3)) * r / m) + 1
    opponents = [
        CellGroupAttack(),
        engine.AlternatingSwarmRev(),
        engine.RandomRev(),
    ]
    for rev in opponents:
        spec = GameSpec(g, m, r, s)
        t = play(spec, rev, BipartiteGeneralSpy(), horizon=200, seed=45)
        assert t.outcome.winner == SPY, (m, r, rev.name)
        assert all(rec.audits["spy"]["consistent"] for rec in t.rounds)
        assert max(
            (rec.audits["spy"]["alpha_spread"] for rec in t.rounds), default=0.0
        ) <= 1e-9
    report("criterion-05", f"(m={m}, r={r}): spy survives at s={s}, forms agree to 1e-9")


def test_criterion_06_kpartite():
    g = complete_multipartite_graph([18, 18, 18])
    k, m, r = 3, 3, 9
    s_up = math.ceil(k / (k - 1) * r / m) + k
    for rev in (MultipartiteSwarmAttack(), engine.AlternatingSwarmRev()):
        spec = GameSpec(g, m, r, s_up)
        t = play(spec, rev, MultipartiteSpy(), horizon=200, seed=46)
        assert t.outcome.winner == SPY, rev.name
        assert all(rec.audits["spy"]["stable"] for rec in t.rounds)
    s_lo = attack_threshold_kpartite(k, m, r)
    assert s_lo == math.ceil(k * (r - m + 1) / (m * (k - 1) + 1)) - 1
    spec = GameSpec(g, m, r, s_lo)
    ok, branches, bad = verify.attack_beats_placements_one_round(
        spec, MultipartiteSwarmAttack
    )
    assert ok, bad
    report(
        "criterion-06",
        f"spy survives at {s_up}; attack beats all {branches} placements at {s_lo}",
    )


def test_criterion_07_webbed_trees():
    m, r = 2, 6
    s = r // m
    violations = 0
    for seed in range(50):
        n = 5 + seed % 8
        g, tree = random_webbed_tree(n, seed)
        spec = GameSpec(g, m, r, s)
        t = play(spec, engine.RandomRev(), WebbedTreeSpy(tree), horizon=500, seed=seed)
        assert t.outcome.winner == SPY, seed
        for rec in t.rounds:
            note = rec.audits["spy"]
            if not (note["invariant"] and note["conformal"]):
                violations += 1
    assert violations == 0
    report("criterion-07", "50 webbed trees x 500 rounds, zero invariant violations")


def test_criterion_08_random_graphs():
    qcommon_hits = []
    extension_hits = []
    for seed in range(50):
        g = random_graph(40, 0.5, seed)
        if is_q_common(g, 0.4):
            qcommon_hits.append(seed)
        if has_r_extension_property(g, 3):
            extension_hits.append(seed)
    for seed in qcommon_hits:
        g = random_graph(40, 0.5, seed)
        r, m, q, eps = 24, 2, 0.4, 1.0
        s = max(
            math.ceil((1 + eps) / q * r / m),
            math.ceil(r / m + math.log(40) / (2 * (1 - 1 / (1 + eps)) ** 2 * q * q)),
        )
        spec = GameSpec(g, m, r, s)
        t = play(spec, engine.RandomRev(), CommonNeighborhoodSpy(q, eps), horizon=200, seed=seed)
        assert t.outcome.winner == SPY
        assert all(rec.audits["spy"]["stable"] for rec in t.rounds)
    for seed in extension_hits:
        g = random_graph(40, 0.5, seed)
        spec = GameSpec(g, 2, 3, 1)
        ok, _, bad = verify.attack_beats_placements_one_round(spec, ExtensionAttack)
        assert ok, (seed, bad)
    # the asymptotic properties rarely hold at n=40, p=0.5; the machinery is
    # exercised on verified instances regardless
    g = random_graph(40, 0.7, 0)
    assert is_q_common(g, 0.4)
    spec = GameSpec(g, 2, 24, 60)
    t = play(spec, engine.RandomRev(), CommonNeighborhoodSpy(0.4, 1.0), horizon=200, seed=8)
    assert t.outcome.winner == SPY
    assert all(rec.audits["spy"]["stable"] for rec in t.rounds)
    ge = random_graph(100, 0.5, 4)
    assert has_r_extension_property(ge, 3)
    ok, branches, bad = verify.attack_beats_placements_one_round(
        GameSpec(ge, 2, 3, 1), ExtensionAttack
    )
    assert ok, bad
    report(
        "criterion-08",
        f"G(40,.5) qualifiers: {len(qcommon_hits)} q-common / {len(extension_hits)} "
        f"extension (all tested); verified instances pass ({branches} placements)",
    )


def test_criterion_09_constructions():
    g, _ = split_graph_construction(2, 4)
    ok, branches, bad = verify.attack_beats_placements_one_round(
        GameSpec(g, 2, 4, 2), lambda: SplitGraphAttack(2, 4)
    )
    assert ok, bad

    gd, labels = domination_sharp_construction(2, 2, 6)
    assert domination_number(gd, cap=40) == 2
    ok, branches_d, bad = verify.attack_beats_placements_one_round(
        GameSpec(gd, 2, 6, 4), lambda: DominationSharpAttack(2, 2, 6)
    )
    assert ok, bad
    spec_up = GameSpec(gd, 2, 6, 6)
    t = play(
        spec_up,
        DominationSharpAttack(2, 2, 6),
        DominationSetSpy(list(labels.hub_side)),
        horizon=100,
        seed=9,
    )
    assert t.outcome.winner == SPY
    report(
        "criterion-09",
        f"split beats all {branches} placements; gamma=2; domsharp beats all "
        f"{branches_d} placements at s=4 and loses at s=6",
    )


@pytest.mark.parametrize("m,t", [(2, 78), (3, 117)])
def test_criterion_10_avoiding_vertex_search(m, t):
    assert t == math.ceil(38.73 * m)
    rng = random.Random(1000 + m)
    for instance in range(1000):
        spies = set()
        while len(spies) < t:
            k = rng.choice([2, 2, 3, 4, 5])
            spies.add(sum(1 << b for b in rng.sample(range(t), k)))
        w = avoiding_vertex(t, m, spies, seed=instance)
        assert w is not None and weight(w) == m
        for v in spies:
            assert hamming(v, w) >= m
    report("criterion-10", f"(m={m}, t={t}): 1000/1000 instances verified exactly")


def test_criterion_11_retract_pullback():
    p3 = path_graph(3)
    rmap = product_retraction([(p3, (0, 1))] * 3)
    spec = GameSpec(rmap.host, 2, 3, 1)
    ok, branches, bad = verify.attack_beats_placements_two_rounds(
        spec, lambda: RetractPullbackAttack(HypercubePairAttack(), rmap)
    )
    assert ok, bad
    report(
        "criterion-11",
        f"pullback onto P3^3 wins within 2 rounds over {branches} adversary branches",
    )
