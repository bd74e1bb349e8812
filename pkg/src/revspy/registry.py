"""Registry of strategies under stable string identifiers.

Factories take the game spec and optional keyword parameters and return a
fresh single-game strategy instance; ``applicable`` lets callers (CLI,
service) reject a strategy/graph mismatch before play starts.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import attacks, bipartite_spies, engine, spies
from .engine import REV, SPY, GameSpec
from .graphs import dominating_vertex, recognize_webbed_tree


@dataclass
class Entry:
    id: str
    side: str
    factory: object
    applicable: object  # spec -> (bool, reason)
    description: str


def _ok(spec: GameSpec):
    return True, ""


def _needs_multipartite(spec: GameSpec):
    g = spec.graph
    if g.part_labels is None or not g.is_complete_multipartite():
        return False, "graph is not complete multipartite"
    return True, ""


def _needs_r_large_bipartite(spec: GameSpec):
    ok, reason = _needs_multipartite(spec)
    if not ok:
        return ok, reason
    parts = spec.graph.parts()
    if len(parts) != 2:
        return False, "graph is not bipartite"
    if any(len(p) < 2 * spec.r for p in parts):
        return False, "parts smaller than 2r"
    return True, ""


def _needs_r_large_multipartite(spec: GameSpec):
    ok, reason = _needs_multipartite(spec)
    if not ok:
        return ok, reason
    if any(len(p) < 2 * spec.r for p in spec.graph.parts()):
        return False, "parts smaller than 2r"
    return True, ""


def _needs_dominating_vertex(spec: GameSpec):
    if dominating_vertex(spec.graph) is None:
        return False, "graph has no dominating vertex"
    return True, ""


def _needs_webbed_tree(spec: GameSpec):
    try:
        tree = recognize_webbed_tree(spec.graph)
    except Exception as exc:
        return False, str(exc)
    if tree is None:
        return False, "graph is not a webbed tree"
    return True, ""


def _needs_hypercube(spec: GameSpec):
    if spec.graph.coordinate_dim is None:
        return False, "graph is not a hypercube"
    return True, ""


def _meeting_size(want: int):
    def check(spec: GameSpec):
        if spec.m != want:
            return False, f"meeting size must be {want}"
        return True, ""

    return check


def _all(*checks):
    def run(spec: GameSpec):
        for c in checks:
            ok, reason = c(spec)
            if not ok:
                return ok, reason
        return True, ""

    return run


REGISTRY: dict[str, Entry] = {}


def _register(id: str, side: str, factory, applicable, description: str):
    REGISTRY[id] = Entry(id, side, factory, applicable, description)


_register(
    "spy.dominating-vertex",
    SPY,
    lambda **kw: spies.DominatingVertexSpy(**kw),
    _needs_dominating_vertex,
    "floor(r(v)/m) spies per vertex, surplus at the dominating vertex",
)
_register(
    "spy.webbed-tree",
    SPY,
    lambda **kw: spies.WebbedTreeSpy(**kw),
    _needs_webbed_tree,
    "subtree-weight invariant play on a webbed tree",
)
_register(
    "spy.domination-set",
    SPY,
    lambda **kw: spies.DominationSetSpy(**kw),
    _ok,
    "one dominating-vertex squad per vertex of a dominating set",
)
_register(
    "spy.qcommon",
    SPY,
    lambda q=0.4, epsilon=1.0, **kw: spies.CommonNeighborhoodSpy(q, epsilon, **kw),
    _ok,
    "cover-then-scatter play for q-common graphs",
)
_register(
    "spy.kpartite",
    SPY,
    lambda **kw: spies.MultipartiteSpy(**kw),
    _needs_multipartite,
    "cover-then-balance play on complete multipartite graphs",
)
_register(
    "spy.bipartite-m2",
    SPY,
    lambda **kw: bipartite_spies.BipartitePairSpy(**kw),
    _all(_needs_r_large_bipartite, _meeting_size(2)),
    "greedy-migration spy play for meeting size 2",
)
_register(
    "spy.bipartite-m3",
    SPY,
    lambda **kw: bipartite_spies.BipartiteTripleSpy(**kw),
    _all(_needs_r_large_bipartite, _meeting_size(3)),
    "greedy-migration spy play for meeting size 3",
)
_register(
    "spy.bipartite-general",
    SPY,
    lambda **kw: bipartite_spies.BipartiteGeneralSpy(**kw),
    _needs_r_large_bipartite,
    "greedy-migration spy play for general meeting size",
)
_register(
    "spy.follower",
    SPY,
    lambda **kw: engine.FollowerSpy(**kw),
    _ok,
    "each spy shadows one revolutionary (needs s >= r-m+1 to be safe)",
)
_register("spy.random", SPY, lambda **kw: engine.RandomSpy(**kw), _ok, "random walk")
_register(
    "spy.stationary",
    SPY,
    lambda **kw: engine.StationarySpy(**kw),
    _ok,
    "covers the initial meetings and never moves",
)

_register(
    "rev.random", REV, lambda **kw: engine.RandomRev(**kw), _ok, "random walk"
)
_register(
    "rev.stationary",
    REV,
    lambda **kw: engine.StationaryRev(**kw),
    _ok,
    "spread placement, never moves",
)
_register(
    "rev.swarm-alternating",
    REV,
    lambda **kw: engine.AlternatingSwarmRev(**kw),
    _needs_r_large_multipartite,
    "swarm a different part every round",
)
_register(
    "rev.kpartite-lower",
    REV,
    lambda **kw: attacks.MultipartiteSwarmAttack(**kw),
    _needs_r_large_multipartite,
    "one-round swarm of the least defensible part",
)
_register(
    "rev.bipartite-m2",
    REV,
    lambda **kw: attacks.BipartitePairAttack(**kw),
    _all(_needs_r_large_bipartite, _meeting_size(2)),
    "two-round pair attack on complete bipartite graphs",
)
_register(
    "rev.bipartite-m3",
    REV,
    lambda **kw: attacks.BipartiteTripleAttack(**kw),
    _all(_needs_r_large_bipartite, _meeting_size(3)),
    "two-round triple attack on complete bipartite graphs",
)
_register(
    "rev.cells",
    REV,
    lambda **kw: attacks.CellGroupAttack(**kw),
    _needs_r_large_bipartite,
    "cell-grouped reduction to the small-meeting bipartite attacks",
)
_register(
    "rev.hypercube-m2",
    REV,
    lambda **kw: attacks.HypercubePairAttack(**kw),
    _all(_needs_hypercube, _meeting_size(2)),
    "center gambit plus forced-win search on hypercubes",
)
_register(
    "rev.hypercube-general",
    REV,
    lambda **kw: attacks.HypercubeWalkAttack(**kw),
    _needs_hypercube,
    "avoiding-vertex walk on hypercubes",
)
_register(
    "rev.replicated-hypercube",
    REV,
    lambda **kw: attacks.ReplicatedHypercubeAttack(**kw),
    _needs_hypercube,
    "code-replicated local hypercube attacks",
)
_register(
    "rev.extension",
    REV,
    lambda **kw: attacks.ExtensionAttack(**kw),
    _ok,
    "one-round win on graphs with the r-extension property",
)
_register(
    "rev.split-graph",
    REV,
    lambda m, r, **kw: attacks.SplitGraphAttack(m, r, **kw),
    _ok,
    "one-round win on the split-graph construction",
)
_register(
    "rev.domsharp",
    REV,
    lambda t, m, r, **kw: attacks.DominationSharpAttack(t, m, r, **kw),
    _ok,
    "one-round win on the domination-sharpness construction",
)


def get(strategy_id: str):
    if strategy_id not in REGISTRY:
        raise KeyError(f"unknown strategy {strategy_id!r}")
    return REGISTRY[strategy_id]


def build(strategy_id: str, spec: GameSpec, **params):
    entry = get(strategy_id)
    ok, reason = entry.applicable(spec)
    if not ok:
        raise ValueError(f"{strategy_id} not applicable: {reason}")
    if strategy_id == "rev.split-graph":
        params.setdefault("m", spec.m)
        params.setdefault("r", spec.r)
    if strategy_id == "rev.domsharp":
        params.setdefault("m", spec.m)
        params.setdefault("r", spec.r)
        if "t" not in params:
            raise ValueError("rev.domsharp needs the construction parameter t")
    return entry.factory(**params)


def listing() -> list[dict]:
    return [
        {"id": e.id, "side": e.side, "description": e.description}
        for e in sorted(REGISTRY.values(), key=lambda e: e.id)
    ]
