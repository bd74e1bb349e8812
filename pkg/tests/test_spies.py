import math

import pytest

from revspy import engine
from revspy.engine import REV, SPY, GameSpec, Phase, Position, play
from revspy.graphs import (
    complete_multipartite_graph,
    cycle_graph,
    graph_from_edges,
    path_graph,
    random_graph,
    random_webbed_tree,
    recognize_webbed_tree,
    star_graph,
)
from revspy.spies import (
    CommonNeighborhoodSpy,
    DominatingVertexSpy,
    DominationSetSpy,
    MultipartiteSpy,
    WebbedTreeSpy,
    free_rev_total,
    free_spy_counts,
    meeting_vertices,
    neighborhood_stable,
)


def audits(transcript, key):
    return [rec.audits["spy"][key] for rec in transcript.rounds]


# ---------------------------------------------------------------------------
# dominating vertex

def test_dominating_vertex_placement_matches_stable_layout():
    g = star_graph(5)
    spec = GameSpec(g, 2, 4, 2)
    spy = DominatingVertexSpy()
    spy.begin(spec, 0)
    pos = Position((0, 2, 2, 0, 0), (0,) * 5, Phase.SPY_PLACEMENT, 0)
    assert spy.place(pos) == (0, 1, 1, 0, 0)
    pos = Position((4, 0, 0, 0, 0), (0,) * 5, Phase.SPY_PLACEMENT, 0)
    assert spy.place(pos) == (2, 0, 0, 0, 0)


def test_dominating_vertex_requires_hub():
    spy = DominatingVertexSpy()
    with pytest.raises(ValueError):
        spy.begin(GameSpec(cycle_graph(5), 2, 4, 2), 0)


def test_dominating_vertex_long_randomized_run():
    g = star_graph(7)  # K_{1,6}
    spec = GameSpec(g, 2, 5, 2)
    t = play(spec, engine.RandomRev(), DominatingVertexSpy(), horizon=10_000, seed=17)
    assert t.outcome.winner == SPY
    assert all(audits(t, "stable"))
    assert not any(audits(t, "unguarded"))


def test_dominating_vertex_on_complete_graph():
    g = complete_multipartite_graph([1, 1, 1, 1])
    spec = GameSpec(g, 2, 4, 2)
    t = play(spec, engine.RandomRev(), DominatingVertexSpy(), horizon=300, seed=3)
    assert t.outcome.winner == SPY


# ---------------------------------------------------------------------------
# webbed trees

def test_webbed_placement_on_path_single_spy():
    g = path_graph(4)
    tree = recognize_webbed_tree(g)
    spec = GameSpec(g, 2, 3, 1)
    spy = WebbedTreeSpy(tree)
    spy.begin(spec, 0)
    # all revolutionaries on one leaf: the one spy must sit on it
    stacked = [0] * 4
    leaf = next(v for v in range(4) if v != tree.root and g.degree(v) == 1)
    stacked[leaf] = 3
    counts = spy.place(Position(tuple(stacked), (0,) * 4, Phase.SPY_PLACEMENT, 0))
    assert counts[leaf] == 1 and sum(counts) == 1
    # all revolutionaries at the root: the spy sits at the root
    at_root = [0] * 4
    at_root[tree.root] = 3
    counts = spy.place(Position(tuple(at_root), (0,) * 4, Phase.SPY_PLACEMENT, 0))
    assert counts[tree.root] == 1 and sum(counts) == 1


def test_webbed_placement_subtree_sums():
    g, tree = random_webbed_tree(9, 2)
    spec = GameSpec(g, 2, 6, 3)
    spy = WebbedTreeSpy(tree)
    spy.begin(spec, 0)
    rev = (2, 1, 0, 1, 0, 0, 1, 1, 0)
    counts = spy.place(Position(rev, (0,) * 9, Phase.SPY_PLACEMENT, 0))
    for v in range(9):
        inside = tree.descendants(v)
        w = sum(rev[u] for u in inside)
        assert sum(counts[u] for u in inside) == w // 2


def test_webbed_tree_long_run_with_invariant():
    g, tree = random_webbed_tree(10, 8)
    spec = GameSpec(g, 2, 6, 3)
    t = play(spec, engine.RandomRev(), WebbedTreeSpy(tree), horizon=500, seed=12)
    assert t.outcome.winner == SPY
    assert all(audits(t, "invariant"))
    assert all(audits(t, "conformal"))
    assert all(audits(t, "telescoping"))


def test_webbed_tree_rejects_bad_witness():
    g = cycle_graph(5)
    with pytest.raises(ValueError):
        WebbedTreeSpy().begin(GameSpec(g, 2, 4, 2), 0)


# ---------------------------------------------------------------------------
# domination sets

def test_domination_set_reduces_to_dominating_vertex():
    g = star_graph(6)
    spec = GameSpec(g, 2, 4, 2)
    t = play(spec, engine.RandomRev(), DominationSetSpy([0]), horizon=400, seed=5)
    assert t.outcome.winner == SPY
    assert all(audits(t, "squads_stable"))


def test_domination_set_on_path():
    g = path_graph(4)
    spec = GameSpec(g, 2, 4, 4)
    t = play(spec, engine.RandomRev(), DominationSetSpy([1, 2]), horizon=500, seed=6)
    assert t.outcome.winner == SPY
    assert not any(audits(t, "unguarded"))


def test_domination_set_on_cycle_upper_bound_only():
    g = cycle_graph(6)
    spec = GameSpec(g, 2, 2, 2)
    t = play(spec, engine.RandomRev(), DominationSetSpy([0, 3]), horizon=500, seed=7)
    assert t.outcome.winner == SPY


def test_domination_set_validates_set():
    g = cycle_graph(6)
    with pytest.raises(ValueError):
        DominationSetSpy([0]).begin(GameSpec(g, 2, 2, 1), 0)


# ---------------------------------------------------------------------------
# q-common graphs

def qcommon_spec():
    g = random_graph(40, 0.7, 0)  # verified 0.4-common
    r, m, q, eps = 24, 2, 0.4, 1.0
    s = max(
        math.ceil((1 + eps) / q * r / m),
        math.ceil(r / m + math.log(40) / (2 * (1 - 1 / (1 + eps)) ** 2 * q * q)),
    )
    return GameSpec(g, m, r, s), q, eps


def test_qcommon_requires_the_property():
    g = star_graph(6)
    with pytest.raises(ValueError):
        CommonNeighborhoodSpy(0.4).begin(GameSpec(g, 2, 4, 30), 0)


def test_qcommon_requires_enough_spies():
    spec, q, eps = qcommon_spec()
    thin = GameSpec(spec.graph, spec.m, spec.r, 10)
    with pytest.raises(ValueError):
        CommonNeighborhoodSpy(q, eps).begin(thin, 0)


def test_qcommon_simulation_with_stability_audit():
    spec, q, eps = qcommon_spec()
    t = play(spec, engine.RandomRev(), CommonNeighborhoodSpy(q, eps), horizon=200, seed=23)
    assert t.outcome.winner == SPY
    assert all(audits(t, "stable"))
    assert not any(audits(t, "stabilization_failed"))


def test_stability_predicate_flags_unstable_position():
    g = complete_multipartite_graph([1, 1, 1, 1])  # K4; N[v] is everything
    # two meetings, one uncovered: unstable regardless of counts
    rev = (2, 2, 0, 0)
    spy = (1, 0, 0, 0)
    assert not neighborhood_stable(g, rev, spy, 2)
    # covered meetings and enough frees: stable
    spy = (1, 1, 1, 0)
    assert neighborhood_stable(g, rev, spy, 2)
    # no revolutionaries at all: any layout is stable
    assert neighborhood_stable(g, (0, 0, 0, 0), (0, 0, 1, 0), 2)


def test_free_bound_bookkeeping():
    rev = (3, 2, 1, 0)
    spy = (2, 1, 0, 0)
    assert meeting_vertices(rev, 2) == [0, 1]
    assert free_spy_counts(rev, spy, 2) == [1, 0, 0, 0]
    assert free_rev_total(rev, 2) == 2


# ---------------------------------------------------------------------------
# complete multipartite

def kpartite_spec():
    g = complete_multipartite_graph([18, 18, 18])
    s = math.ceil(3 / 2 * 9 / 3) + 3
    return GameSpec(g, 3, 9, s)


def test_kpartite_requires_structure():
    with pytest.raises(ValueError):
        MultipartiteSpy().begin(GameSpec(path_graph(9), 3, 9, 8), 0)


def test_kpartite_survives_alternating_swarms():
    spec = kpartite_spec()
    t = play(spec, engine.AlternatingSwarmRev(), MultipartiteSpy(), horizon=100, seed=2)
    assert t.outcome.winner == SPY
    assert all(audits(t, "stable"))


def test_kpartite_rebalances_after_onesided_start():
    spec = kpartite_spec()

    class OneSideRev(engine.StationaryRev):
        def place(self):
            counts = [0] * spec.graph.vertex_count
            for v in spec.graph.parts()[0][: spec.r // spec.m]:
                counts[v] = spec.m
            return tuple(counts)

    t = play(spec, OneSideRev(), MultipartiteSpy(), horizon=30, seed=2)
    assert t.outcome.winner == SPY
    assert all(audits(t, "stable"))
    # free spies end up nearly equal across parts
    final = t.rounds[-1].audits["spy"]["free_per_part"]
    assert max(final) - min(final) <= 1


def test_webbed_placement_p4_direct_formula():
    # rooted path: spy counts must equal the subtree-weight formula at every
    # vertex, evaluated here by independent arithmetic
    g = path_graph(4)
    tree = recognize_webbed_tree(g)
    spec = GameSpec(g, 2, 3, 1)
    spy = WebbedTreeSpy(tree)
    spy.begin(spec, 0)
    rev = (1, 1, 1, 0)
    counts = spy.place(Position(rev, (0,) * 4, Phase.SPY_PLACEMENT, 0))
    for v in range(4):
        down = tree.descendants(v)
        w_v = sum(rev[u] for u in down)
        expected = w_v // 2 - sum(
            sum(rev[u] for u in tree.descendants(x)) // 2 for x in tree.children(v)
        )
        assert counts[v] == expected, v
    assert sum(counts) == 1


def test_strategy_fault_terminates_transcript():
    from revspy.engine import StrategyFault

    class FaultySpy(engine.StationarySpy):
        def respond(self, before, rev_move, after):
            raise StrategyFault("synthetic failure")

    spec = GameSpec(star_graph(5), 2, 4, 2)
    t = play(spec, engine.StationaryRev(), FaultySpy(), horizon=10, seed=0)
    assert t.outcome.winner == "fault"
    assert "synthetic failure" in t.outcome.detail


def test_webbed_tree_spy_uses_sibling_edges():
    # two siblings joined by a web edge: the response must move a spy along
    # it when the revolutionaries shift within the sibling pair
    from revspy.engine import REV, apply
    from revspy.graphs import RootedTree, graph_from_edges, validate_webbed_witness

    g = graph_from_edges(5, [(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (3, 4)])
    tree = RootedTree(root=0, parent=(-1, 0, 0, 1, 1))
    assert validate_webbed_witness(g, tree)
    spec = GameSpec(g, 2, 4, 2)
    spy = WebbedTreeSpy(tree)
    spy.begin(spec, 0)
    rev0 = (0, 0, 0, 4, 0)
    pos0 = Position(rev0, (0,) * 5, Phase.SPY_PLACEMENT, 0)
    counts = spy.place(pos0)
    assert counts == (0, 0, 0, 2, 0)
    before = Position(rev0, counts, Phase.REV_TO_MOVE, 1)
    move = ((3, 4, 2),)  # two revolutionaries cross the sibling edge
    after = apply(before, move, REV, g)
    reply = spy.respond(before, move, after)
    assert (3, 4, 1) in reply  # a spy crosses the same sibling edge
    end = apply(after, reply, "spies", g)
    note = spy.audit(end)
    assert note["invariant"] and note["conformal"]


def test_webbed_tree_spy_with_surplus_spies():
    g, tree = random_webbed_tree(8, 4)
    spec = GameSpec(g, 2, 6, 4)  # one spy above floor(r/m)
    t = play(spec, engine.RandomRev(), WebbedTreeSpy(tree), horizon=300, seed=2)
    assert t.outcome.winner == SPY
    assert all(rec.audits["spy"]["invariant"] for rec in t.rounds)
