"""Graph representation, generators, constructions and structural predicates.

Vertices are dense integer ids 0..n-1.  Hypercube vertices are coordinate
bitmasks, with the vertex id equal to the mask value, so Hamming distance is
popcount of xor.  Graphs are immutable after construction and safe to share
between threads.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction


class GraphError(ValueError):
    """Invalid graph construction or malformed graph input."""


class CapExceeded(RuntimeError):
    """An exhaustive search was asked to exceed its configured size cap."""


class IsolatedVertexError(GraphError):
    """Neighborhood-ratio predicates are undefined on isolated vertices."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with sorted adjacency lists.

    ``part_labels`` marks a complete multipartite structure (label per
    vertex); ``coordinate_dim`` marks hypercube coordinates (vertex id is the
    subset bitmask).
    """

    adjacency: tuple[tuple[int, ...], ...]
    part_labels: tuple[int, ...] | None = None
    coordinate_dim: int | None = None
    _neighbor_sets: tuple[frozenset[int], ...] = field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self):
        n = len(self.adjacency)
        for v, nbrs in enumerate(self.adjacency):
            if any(u < 0 or u >= n for u in nbrs):
                raise GraphError(f"neighbor out of range at vertex {v}")
            if v in nbrs:
                raise GraphError(f"loop at vertex {v}")
            if tuple(sorted(set(nbrs))) != tuple(nbrs):
                raise GraphError(f"adjacency of {v} not sorted/deduplicated")
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if v not in self.adjacency[u]:
                    raise GraphError(f"edge {v}-{u} not symmetric")
        if self.part_labels is not None:
            if len(self.part_labels) != n:
                raise GraphError("part_labels length mismatch")
            for v, nbrs in enumerate(self.adjacency):
                for u in nbrs:
                    if self.part_labels[u] == self.part_labels[v]:
                        raise GraphError(f"edge {v}-{u} inside part")
        object.__setattr__(
            self, "_neighbor_sets", tuple(frozenset(a) for a in self.adjacency)
        )

    @property
    def vertex_count(self) -> int:
        return len(self.adjacency)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._neighbor_sets[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._neighbor_sets[u]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.vertex_count) for v in self.adjacency[u] if u < v]

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def closed_neighborhood(self, v: int) -> tuple[int, ...]:
        return tuple(sorted(self.adjacency[v] + (v,)))

    def parts(self) -> list[list[int]]:
        if self.part_labels is None:
            raise GraphError("graph has no part labels")
        k = max(self.part_labels) + 1
        out: list[list[int]] = [[] for _ in range(k)]
        for v, p in enumerate(self.part_labels):
            out[p].append(v)
        return out

    def is_complete_multipartite(self) -> bool:
        if self.part_labels is None:
            return False
        for u in range(self.vertex_count):
            for v in range(u + 1, self.vertex_count):
                if self.part_labels[u] != self.part_labels[v] and not self.has_edge(u, v):
                    return False
        return True

    def distances_from(self, source: int) -> list[int]:
        """BFS distances; unreachable vertices get -1."""
        dist = [-1] * self.vertex_count
        dist[source] = 0
        queue = [source]
        for v in queue:
            for u in self.adjacency[v]:
                if dist[u] < 0:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist

    def to_text(self) -> str:
        lines = [f"n {self.vertex_count}"]
        if self.part_labels is not None:
            lines.append("parts " + " ".join(str(p) for p in self.part_labels))
        if self.coordinate_dim is not None:
            lines.append(f"hypercube {self.coordinate_dim}")
        for u, v in sorted(self.edges()):
            lines.append(f"e {u} {v}")
        return "\n".join(lines) + "\n"


def graph_from_edges(
    n: int,
    edges,
    part_labels: tuple[int, ...] | None = None,
    coordinate_dim: int | None = None,
) -> Graph:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise GraphError(f"loop at vertex {u}")
        adj[u].add(v)
        adj[v].add(u)
    return Graph(
        adjacency=tuple(tuple(sorted(a)) for a in adj),
        part_labels=part_labels,
        coordinate_dim=coordinate_dim,
    )


def parse_graph(text: str) -> Graph:
    """Parse the line-oriented graph format (strict: sorted ``e u v``, u<v, no duplicates)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("n "):
        raise GraphError("first line must be 'n <count>'")
    n = int(lines[0].split()[1])
    if n < 0:
        raise GraphError("negative vertex count")
    idx = 1
    part_labels = None
    coordinate_dim = None
    if idx < len(lines) and lines[idx].startswith("parts "):
        part_labels = tuple(int(x) for x in lines[idx].split()[1:])
        idx += 1
    if idx < len(lines) and lines[idx].startswith("hypercube "):
        coordinate_dim = int(lines[idx].split()[1])
        idx += 1
    edges = []
    prev = None
    for ln in lines[idx:]:
        fields = ln.split()
        if len(fields) != 3 or fields[0] != "e":
            raise GraphError(f"bad edge line: {ln!r}")
        u, v = int(fields[1]), int(fields[2])
        if not u < v:
            raise GraphError(f"edge must satisfy u < v: {ln!r}")
        if prev is not None and (u, v) <= prev:
            raise GraphError(f"edges out of order or duplicated at {ln!r}")
        prev = (u, v)
        edges.append((u, v))
    return graph_from_edges(n, edges, part_labels=part_labels, coordinate_dim=coordinate_dim)


@dataclass(frozen=True)
class RootedTree:
    """Rooted spanning tree given by parent pointers (parent[root] is -1)."""

    root: int
    parent: tuple[int, ...]

    def __post_init__(self):
        n = len(self.parent)
        if not 0 <= self.root < n:
            raise GraphError("root out of range")
        if self.parent[self.root] != -1:
            raise GraphError("root must have parent -1")
        seen_root = 0
        for v, p in enumerate(self.parent):
            if p == -1:
                seen_root += 1
                continue
            if not 0 <= p < n:
                raise GraphError(f"parent of {v} out of range")
        if seen_root != 1:
            raise GraphError("exactly one root required")
        # acyclic and spanning: walking up from each vertex must reach the root
        for v in range(n):
            steps = 0
            u = v
            while u != self.root:
                u = self.parent[u]
                steps += 1
                if steps > n:
                    raise GraphError("parent pointers contain a cycle")

    @property
    def vertex_count(self) -> int:
        return len(self.parent)

    def children(self, v: int) -> list[int]:
        return [u for u, p in enumerate(self.parent) if p == v]

    def descendants(self, v: int) -> frozenset[int]:
        """All vertices whose path to the root passes through v (v included)."""
        out = {v}
        frontier = [v]
        kids: dict[int, list[int]] = {}
        for u, p in enumerate(self.parent):
            if p >= 0:
                kids.setdefault(p, []).append(u)
        while frontier:
            x = frontier.pop()
            for c in kids.get(x, ()):
                out.add(c)
                frontier.append(c)
        return frozenset(out)

    def depth(self, v: int) -> int:
        d = 0
        while v != self.root:
            v = self.parent[v]
            d += 1
        return d

    def tree_edges(self) -> set[tuple[int, int]]:
        return {
            (min(v, p), max(v, p))
            for v, p in enumerate(self.parent)
            if p >= 0
        }


@dataclass(frozen=True)
class RetractionMap:
    """Projection of a host graph onto an induced subgraph it fixes.

    For hypercube-image retractions ``cube_masks`` gives the bitmask of each
    image vertex in the isomorphic cube.
    """

    host: Graph
    image_vertices: frozenset[int]
    mapping: tuple[int, ...]
    cube_masks: dict[int, int] | None = None

    def __post_init__(self):
        if len(self.mapping) != self.host.vertex_count:
            raise GraphError("retraction map must cover all host vertices")
        for v in self.image_vertices:
            if self.mapping[v] != v:
                raise GraphError(f"retraction must fix image vertex {v}")
        for v, img in enumerate(self.mapping):
            if img not in self.image_vertices:
                raise GraphError(f"vertex {v} maps outside the image")
        for u, v in self.host.edges():
            fu, fv = self.mapping[u], self.mapping[v]
            if fu != fv and not self.host.has_edge(fu, fv):
                raise GraphError(f"edge {u}-{v} maps to non-edge {fu}-{fv}")

    def apply(self, v: int) -> int:
        return self.mapping[v]

    def image_graph(self) -> tuple[Graph, dict[int, int]]:
        """Induced image as a standalone graph plus host-vertex -> new-id map."""
        order = sorted(self.image_vertices)
        newid = {v: i for i, v in enumerate(order)}
        edges = [
            (newid[u], newid[v])
            for u, v in self.host.edges()
            if u in self.image_vertices and v in self.image_vertices
        ]
        return graph_from_edges(len(order), edges), newid


@dataclass(frozen=True)
class CodeSet:
    """Set of hypercube vertices with pairwise Hamming distance >= min_distance."""

    dimension: int
    min_distance: int
    members: frozenset[int]

    def __post_init__(self):
        for a, b in itertools.combinations(sorted(self.members), 2):
            if hamming(a, b) < self.min_distance:
                raise GraphError(f"code words {a:#x},{b:#x} too close")


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


# ---------------------------------------------------------------------------
# generators

def path_graph(n: int) -> Graph:
    if n <= 0:
        raise GraphError("path needs at least one vertex")
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least three vertices")
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(n: int) -> Graph:
    """Star on n vertices: center 0 adjacent to all leaves."""
    if n <= 0:
        raise GraphError("star needs at least one vertex")
    return graph_from_edges(n, [(0, i) for i in range(1, n)])


def hypercube_graph(d: int) -> Graph:
    if d < 0:
        raise GraphError("dimension must be nonnegative")
    n = 1 << d
    edges = [(v, v | (1 << i)) for v in range(n) for i in range(d) if not v & (1 << i)]
    return graph_from_edges(n, edges, coordinate_dim=d)


def complete_multipartite_graph(sizes: list[int]) -> Graph:
    if not sizes or any(s <= 0 for s in sizes):
        raise GraphError("part sizes must be positive")
    labels: list[int] = []
    for part, size in enumerate(sizes):
        labels.extend([part] * size)
    n = len(labels)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if labels[u] != labels[v]
    ]
    return graph_from_edges(n, edges, part_labels=tuple(labels))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph; deterministic given seed (python-random-v1 contract)."""
    if n <= 0:
        raise GraphError("random graph needs at least one vertex")
    if not 0.0 <= p <= 1.0:
        raise GraphError("edge probability must be in [0,1]")
    rng = random.Random(seed)
    edges = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if rng.random() < p
    ]
    return graph_from_edges(n, edges)


def random_tree(n: int, seed: int) -> tuple[Graph, RootedTree]:
    """Random recursive tree rooted at 0; deterministic given seed."""
    if n <= 0:
        raise GraphError("tree needs at least one vertex")
    rng = random.Random(seed)
    parent = [-1] * n
    for v in range(1, n):
        parent[v] = rng.randrange(v)
    g = graph_from_edges(n, [(v, parent[v]) for v in range(1, n)])
    return g, RootedTree(root=0, parent=tuple(parent))


def random_webbed_tree(n: int, seed: int, sibling_edge_prob: float = 0.4) -> tuple[Graph, RootedTree]:
    """Random rooted tree plus random sibling edges; returns the witness tree."""
    if n <= 0:
        raise GraphError("webbed tree needs at least one vertex")
    rng = random.Random(seed)
    parent = [-1] * n
    for v in range(1, n):
        parent[v] = rng.randrange(v)
    edges = {(min(v, parent[v]), max(v, parent[v])) for v in range(1, n)}
    by_parent: dict[int, list[int]] = {}
    for v in range(1, n):
        by_parent.setdefault(parent[v], []).append(v)
    for sibs in by_parent.values():
        for a, b in itertools.combinations(sibs, 2):
            if rng.random() < sibling_edge_prob:
                edges.add((a, b))
    g = graph_from_edges(n, sorted(edges))
    return g, RootedTree(root=0, parent=tuple(parent))


def generate(family: str, *args) -> Graph:
    """Build one of the named graph families.

    Accepted: path(n), cycle(n), star(n), hypercube(d),
    complete_multipartite(sizes), random(n, p, seed), tree(n, seed),
    webbed_tree(n, seed).  Tree-like families return just the graph; the
    witness tree is available from the underlying functions.
    """
    if family == "path":
        return path_graph(*args)
    if family == "cycle":
        return cycle_graph(*args)
    if family == "star":
        return star_graph(*args)
    if family == "hypercube":
        return hypercube_graph(*args)
    if family == "complete_multipartite":
        return complete_multipartite_graph(*args)
    if family == "random":
        return random_graph(*args)
    if family == "tree":
        return random_tree(*args)[0]
    if family == "webbed_tree":
        return random_webbed_tree(*args)[0]
    raise GraphError(f"unknown graph family {family!r}")


# ---------------------------------------------------------------------------
# constructions

DEFAULT_SIZE_CAP = 200_000


def split_graph_construction(m: int, r: int, size_cap: int = DEFAULT_SIZE_CAP) -> tuple[Graph, dict[int, frozenset[int]]]:
    """Clique of size r plus an independent vertex per m-subset of the clique.

    Returns the graph and the map from independent-set vertex to its clique
    m-set.  Clique vertices are 0..r-1; subset vertices follow in
    lexicographic subset order.
    """
    if not 1 <= m <= r:
        raise GraphError("need r >= m >= 1")
    n_subsets = math.comb(r, m)
    if r + n_subsets > size_cap:
        raise CapExceeded(f"split graph would have {r + n_subsets} vertices")
    edges = [(u, v) for u in range(r) for v in range(u + 1, r)]
    labels: dict[int, frozenset[int]] = {}
    vid = r
    for subset in itertools.combinations(range(r), m):
        labels[vid] = frozenset(subset)
        edges.extend((q, vid) for q in subset)
        vid += 1
    return graph_from_edges(vid, edges), labels


@dataclass(frozen=True)
class DominationSharpLabels:
    """Vertex roles in the sharpness construction for the domination bound."""

    hub_side: tuple[int, ...]          # T: the dominating side, size t
    meeting_side: tuple[int, ...]      # R: size r
    outer_groups: dict[frozenset[int], tuple[int, ...]]  # m-set A (of R ids) -> A'
    matching: dict[int, int]           # A' vertex -> its hub-side partner


def domination_sharp_construction(
    t: int, m: int, r: int, size_cap: int = DEFAULT_SIZE_CAP
) -> tuple[Graph, DominationSharpLabels]:
    """Graph with domination number t on which t*(r/m - 1) spies lose.

    K_{t,r} plus, for each m-subset A of the r-side, a group A' of t outer
    vertices adjacent to all of A and matched one-to-one into the t-side.
    """
    if not t <= m <= r - m:
        raise GraphError("need t <= m <= r - m")
    n_groups = math.comb(r, m)
    n = t + r + t * n_groups
    if n > size_cap:
        raise CapExceeded(f"construction would have {n} vertices")
    hub = tuple(range(t))
    meet = tuple(range(t, t + r))
    edges = [(a, b) for a in hub for b in meet]
    groups: dict[frozenset[int], tuple[int, ...]] = {}
    matching: dict[int, int] = {}
    vid = t + r
    for subset in itertools.combinations(meet, m):
        group = tuple(range(vid, vid + t))
        groups[frozenset(subset)] = group
        for u in group:
            edges.extend((a, u) for a in subset)
        for i, u in enumerate(group):
            edges.append((u, hub[i]))
            matching[u] = hub[i]
        vid += t
    return graph_from_edges(n, edges), DominationSharpLabels(hub, meet, groups, matching)


def graph_power(g: Graph, k: int) -> Graph:
    """Graph on the same vertices with edges between vertices at distance <= k."""
    if k < 1:
        raise GraphError("power must be at least 1")
    edges = []
    for v in range(g.vertex_count):
        dist = g.distances_from(v)
        edges.extend((v, u) for u in range(v + 1, g.vertex_count) if 0 < dist[u] <= k)
    return graph_from_edges(g.vertex_count, edges)


@dataclass(frozen=True)
class ExpansionMap:
    original_vertex: int
    clique: tuple[int, ...]


def expand_vertex(g: Graph, v: int, size: int) -> tuple[Graph, ExpansionMap]:
    """Replace v by a clique of ``size`` vertices sharing v's outside neighborhood."""
    if not 0 <= v < g.vertex_count:
        raise GraphError("vertex out of range")
    if size < 1:
        raise GraphError("expansion size must be at least 1")
    n = g.vertex_count
    clique = (v,) + tuple(range(n, n + size - 1))
    edges = [(a, b) for a, b in g.edges()]
    for extra in clique[1:]:
        edges.extend((min(u, extra), max(u, extra)) for u in g.adjacency[v])
    edges.extend((min(a, b), max(a, b)) for a, b in itertools.combinations(clique, 2))
    return graph_from_edges(n + size - 1, edges), ExpansionMap(v, clique)


# ---------------------------------------------------------------------------
# structural predicates

def dominating_vertex(g: Graph) -> int | None:
    """Lowest-index vertex adjacent to all others, if any."""
    for v in range(g.vertex_count):
        if g.degree(v) == g.vertex_count - 1:
            return v
    return None


def dominating_sets(g: Graph, size: int):
    full = (1 << g.vertex_count) - 1
    closed = [
        (1 << v) | sum(1 << u for u in g.adjacency[v]) for v in range(g.vertex_count)
    ]
    for combo in itertools.combinations(range(g.vertex_count), size):
        mask = 0
        for v in combo:
            mask |= closed[v]
        if mask == full:
            yield combo


def domination_number(g: Graph, cap: int = 24) -> int:
    """Exact minimum dominating set size by subset search."""
    if g.vertex_count > cap:
        raise CapExceeded(f"{g.vertex_count} vertices exceeds cap {cap}")
    if g.vertex_count == 0:
        return 0
    for size in range(1, g.vertex_count + 1):
        for _ in dominating_sets(g, size):
            return size
    raise AssertionError("unreachable: V(G) dominates")


def minimum_dominating_set(g: Graph, cap: int = 24) -> tuple[int, ...]:
    size = domination_number(g, cap=cap)
    return next(iter(dominating_sets(g, size)))


def validate_webbed_witness(g: Graph, tree: RootedTree) -> bool:
    """Check tree spans g and every non-tree edge joins two same-parent vertices."""
    if tree.vertex_count != g.vertex_count:
        return False
    tedges = tree.tree_edges()
    if any(not g.has_edge(u, v) for u, v in tedges):
        return False
    for u, v in g.edges():
        if (u, v) in tedges:
            continue
        if tree.parent[u] != tree.parent[v] or tree.parent[u] == -1:
            return False
    return True


def recognize_webbed_tree(g: Graph, cap: int = 16) -> RootedTree | None:
    """Find a rooted spanning tree whose non-tree edges all join siblings.

    In such a tree, depth equals BFS distance from the root and every vertex
    has exactly one neighbor in the previous BFS layer (its forced parent), so
    a witness per candidate root is forced rather than searched.
    """
    if g.vertex_count > cap:
        raise CapExceeded(f"{g.vertex_count} vertices exceeds cap {cap}")
    n = g.vertex_count
    if n == 0:
        return None
    for root in range(n):
        dist = g.distances_from(root)
        if any(d < 0 for d in dist):
            continue  # disconnected: no spanning tree from any root
        parent = [-1] * n
        ok = True
        for v in range(n):
            if v == root:
                continue
            above = [u for u in g.adjacency[v] if dist[u] == dist[v] - 1]
            if len(above) != 1:
                ok = False
                break
            parent[v] = above[0]
        if not ok:
            continue
        tree = RootedTree(root=root, parent=tuple(parent))
        if validate_webbed_witness(g, tree):
            return tree
    return None


def is_q_common(g: Graph, q: Fraction | float) -> bool:
    """True iff every ordered pair v,w has |N(v) & N(w)| / |N(v)| >= q."""
    if not 0 < float(q) < 1:
        raise GraphError("q must be in (0,1)")
    for v in range(g.vertex_count):
        if g.degree(v) == 0:
            raise IsolatedVertexError(f"vertex {v} is isolated")
    threshold = Fraction(q) if not isinstance(q, float) else Fraction(q).limit_denominator(10**9)
    for v in range(g.vertex_count):
        nv = g.neighbor_set(v)
        for w in range(g.vertex_count):
            common = len(nv & g.neighbor_set(w))
            if Fraction(common, len(nv)) < threshold:
                return False
    return True


def has_r_extension_property(g: Graph, r: int, pair_cap: int = 20_000_000) -> bool:
    """True iff every disjoint (T, U) with |T|+|U| <= r extends by some outside
    vertex adjacent to all of T and none of U.  Bitset scan over all pairs."""
    if r < 1:
        raise GraphError("r must be at least 1")
    n = g.vertex_count
    total = sum(
        math.comb(n, a) * math.comb(n - a, b)
        for a in range(r + 1)
        for b in range(r + 1 - a)
    )
    if total > pair_cap:
        raise CapExceeded(f"{total} (T,U) pairs exceeds cap {pair_cap}")
    full = (1 << n) - 1
    nbr = [sum(1 << u for u in g.adjacency[v]) for v in range(n)]
    for size_t in range(r + 1):
        for t_set in itertools.combinations(range(n), size_t):
            t_mask = sum(1 << t for t in t_set)
            base = full
            for t in t_set:
                base &= nbr[t]
            rest = [v for v in range(n) if not t_mask & (1 << v)]
            for size_u in range(r + 1 - size_t):
                for u_set in itertools.combinations(rest, size_u):
                    cands = base & ~t_mask
                    for u in u_set:
                        cands &= ~nbr[u] & ~(1 << u)
                    if not cands:
                        return False
    return True


# ---------------------------------------------------------------------------
# codes and retractions

def ball_count(d: int, k: int) -> int:
    """Number of vertices of Q_d within distance < k of a fixed vertex."""
    return sum(math.comb(d, i) for i in range(k))


def greedy_code(d: int, k: int, size_cap: int = 1 << 22) -> CodeSet:
    """Lexicographic greedy code of minimum distance k in Q_d."""
    if not 1 <= k <= d:
        raise GraphError("need 1 <= k <= d")
    if (1 << d) > size_cap:
        raise CapExceeded(f"2^{d} vertices exceeds cap")
    members: list[int] = []
    for v in range(1 << d):
        if all(hamming(v, c) >= k for c in members):
            members.append(v)
    return CodeSet(dimension=d, min_distance=k, members=frozenset(members))


def subcube_retraction(d: int, coords: set[int]) -> RetractionMap:
    """Retract Q_d onto the subcube spanned by the given coordinate indices."""
    if not coords:
        raise GraphError("coords must be nonempty")
    if any(not 0 <= c < d for c in coords):
        raise GraphError("coordinate out of range")
    host = hypercube_graph(d)
    mask = sum(1 << c for c in coords)
    image = frozenset(v for v in range(1 << d) if v & ~mask == 0)
    mapping = tuple(v & mask for v in range(1 << d))
    # image vertex -> bitmask in Q_{|coords|} by packing the kept coordinates
    kept = sorted(coords)
    cube_masks = {
        v: sum(1 << i for i, c in enumerate(kept) if v & (1 << c)) for v in image
    }
    return RetractionMap(host=host, image_vertices=image, mapping=mapping, cube_masks=cube_masks)


def cartesian_product(graphs: list[Graph]) -> tuple[Graph, list[tuple[int, ...]]]:
    """Cartesian product graph; returns it plus the coordinate tuple per vertex."""
    coords = list(itertools.product(*[range(g.vertex_count) for g in graphs]))
    index = {c: i for i, c in enumerate(coords)}
    edges = []
    for c in coords:
        for axis, g in enumerate(graphs):
            for u in g.adjacency[c[axis]]:
                if u > c[axis]:
                    other = c[:axis] + (u,) + c[axis + 1 :]
                    edges.append((index[c], index[other]))
    return graph_from_edges(len(coords), edges), coords


def product_retraction(factors: list[tuple[Graph, tuple[int, int]]]) -> RetractionMap:
    """Retract a cartesian product onto a cube spanned by one edge per factor.

    Coordinate i maps to v_i if it equals v_i and to w_i otherwise, where
    (v_i, w_i) is the designated edge of factor i.
    """
    for g, (v, w) in factors:
        if not g.has_edge(v, w):
            raise GraphError(f"designated pair {v},{w} is not an edge")
    host, coords = cartesian_product([g for g, _ in factors])
    index = {c: i for i, c in enumerate(coords)}

    def proj(c: tuple[int, ...]) -> tuple[int, ...]:
        out = []
        for axis, (_, (v, w)) in enumerate(factors):
            out.append(v if c[axis] == v else w)
        return tuple(out)

    mapping = tuple(index[proj(c)] for c in coords)
    image = frozenset(
        index[c] for c in itertools.product(*[(v, w) for _, (v, w) in factors])
    )
    cube_masks = {}
    for vid in image:
        c = coords[vid]
        mask = 0
        for axis, (_, (v, w)) in enumerate(factors):
            if c[axis] == w:
                mask |= 1 << axis
        cube_masks[vid] = mask
    return RetractionMap(host=host, image_vertices=image, mapping=mapping, cube_masks=cube_masks)
