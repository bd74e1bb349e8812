import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revspy import graphs
from revspy.graphs import (
    CapExceeded,
    GraphError,
    IsolatedVertexError,
    RetractionMap,
    ball_count,
    cartesian_product,
    complete_multipartite_graph,
    cycle_graph,
    domination_number,
    domination_sharp_construction,
    dominating_vertex,
    expand_vertex,
    generate,
    graph_from_edges,
    graph_power,
    greedy_code,
    hamming,
    has_r_extension_property,
    hypercube_graph,
    is_q_common,
    parse_graph,
    path_graph,
    product_retraction,
    random_graph,
    random_webbed_tree,
    recognize_webbed_tree,
    split_graph_construction,
    star_graph,
    subcube_retraction,
    validate_webbed_witness,
)

import oracles


def test_hypercube_structure():
    g = hypercube_graph(3)
    assert g.vertex_count == 8
    assert g.edge_count() == 12
    assert all(g.degree(v) == 3 for v in range(8))
    assert g.coordinate_dim == 3


def test_k22_is_c4():
    g = complete_multipartite_graph([2, 2])
    assert g.vertex_count == 4
    assert g.edge_count() == 4
    assert all(g.degree(v) == 2 for v in range(4))


def test_random_graph_regenerates_identically():
    a = random_graph(30, 0.5, 7)
    b = random_graph(30, 0.5, 7)
    assert a.adjacency == b.adjacency
    c = random_graph(30, 0.5, 8)
    assert a.adjacency != c.adjacency


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from(["path", "cycle", "star", "hypercube", "random", "tree", "webbed_tree"]),
    st.integers(min_value=0, max_value=10_000),
)
def test_generators_simple_and_symmetric(family, seed):
    if family == "hypercube":
        g = generate(family, 3)
    elif family in ("random",):
        g = generate(family, 9, 0.4, seed)
    elif family in ("tree", "webbed_tree"):
        g = generate(family, 9, seed)
    elif family == "cycle":
        g = generate(family, 7)
    else:
        g = generate(family, 8)
    for v in range(g.vertex_count):
        assert v not in g.adjacency[v]
        for u in g.adjacency[v]:
            assert v in g.adjacency[u]


def test_generate_rejects_bad_args():
    with pytest.raises(GraphError):
        generate("path", 0)
    with pytest.raises(GraphError):
        generate("random", 5, 1.5, 0)
    with pytest.raises(GraphError):
        generate("no-such-family", 3)


def test_webbed_tree_generator_carries_witness():
    g, tree = random_webbed_tree(12, 5)
    assert validate_webbed_witness(g, tree)


def test_graph_text_roundtrip():
    g = complete_multipartite_graph([2, 3])
    text = g.to_text()
    back = parse_graph(text)
    assert back.adjacency == g.adjacency
    assert back.part_labels == g.part_labels


def test_graph_text_strictness():
    with pytest.raises(GraphError):
        parse_graph("n 3\ne 1 0\n")  # u < v required
    with pytest.raises(GraphError):
        parse_graph("n 3\ne 0 1\ne 0 1\n")  # duplicate
    with pytest.raises(GraphError):
        parse_graph("n 3\ne 0 2\ne 0 1\n")  # out of order
    with pytest.raises(GraphError):
        parse_graph("e 0 1\n")  # missing header


# ---------------------------------------------------------------------------
# constructions

def test_split_graph_small_counts():
    g, labels = split_graph_construction(2, 3)
    assert g.vertex_count == 6
    assert len(labels) == 3
    g, _ = split_graph_construction(3, 4)
    assert g.vertex_count == 8


def test_split_graph_structure_exhaustive():
    g, labels = split_graph_construction(2, 4)
    assert g.vertex_count == 10
    # clique side: every pair of 0..3 adjacent
    for u, v in itertools.combinations(range(4), 2):
        assert g.has_edge(u, v)
    # subset side: independent, each adjacent to exactly its own pair
    for vid, subset in labels.items():
        assert g.neighbor_set(vid) == subset
    for a, b in itertools.combinations(labels, 2):
        assert not g.has_edge(a, b)
    # degrees: clique vertex sees r-1 clique plus C(r-1, m-1) subset vertices
    for v in range(4):
        assert g.degree(v) == 3 + math.comb(3, 1)


def test_split_graph_cap():
    with pytest.raises(CapExceeded):
        split_graph_construction(10, 40, size_cap=1000)


def test_domination_sharp_counts_and_gamma():
    g, labels = domination_sharp_construction(2, 2, 4)
    assert len(labels.hub_side) == 2
    assert len(labels.meeting_side) == 4
    assert sum(len(grp) for grp in labels.outer_groups.values()) == 2 * 6
    assert g.vertex_count == 18
    assert domination_number(g) == 2

    g6, _ = domination_sharp_construction(2, 2, 6)
    assert g6.vertex_count == 2 + 6 + 2 * 15


def test_domination_sharp_degenerate_t1():
    g, labels = domination_sharp_construction(1, 2, 4)
    assert len(labels.hub_side) == 1
    hub = labels.hub_side[0]
    for group in labels.outer_groups.values():
        assert len(group) == 1
        assert labels.matching[group[0]] == hub
    assert domination_number(g) == 1


def test_domination_sharp_precondition():
    with pytest.raises(GraphError):
        domination_sharp_construction(3, 2, 4)  # t > m


def test_graph_power_path():
    g = graph_power(path_graph(4), 2)
    assert sorted(g.edges()) == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]


def test_graph_power_identity_and_complete():
    p = path_graph(5)
    assert graph_power(p, 1).adjacency == p.adjacency
    k6 = graph_power(cycle_graph(6), 3)
    assert k6.edge_count() == 15


def test_graph_power_monotone():
    g = random_graph(9, 0.3, 2)
    prev = set()
    for k in range(1, 5):
        edges = set(graph_power(g, k).edges())
        assert prev <= edges
        prev = edges


def test_expand_vertex_star_center():
    g, emap = expand_vertex(star_graph(4), 0, 2)
    assert g.vertex_count == 5
    assert emap.clique == (0, 4)
    assert g.has_edge(0, 4)
    for leaf in (1, 2, 3):
        assert g.has_edge(0, leaf) and g.has_edge(4, leaf)


def test_expand_vertex_identity():
    p = path_graph(3)
    g, _ = expand_vertex(p, 1, 1)
    assert g.adjacency == p.adjacency


def test_expand_vertex_p3_middle():
    # hand construction: 0-1-2 with middle blown into the 3-clique {1,3,4}
    g, emap = expand_vertex(path_graph(3), 1, 3)
    assert g.vertex_count == 5
    expected = {(0, 1), (0, 3), (0, 4), (1, 2), (2, 3), (2, 4), (1, 3), (1, 4), (3, 4)}
    assert set(g.edges()) == expected
    assert emap.clique == (1, 3, 4)


def test_dominating_vertex():
    assert dominating_vertex(star_graph(5)) == 0
    assert dominating_vertex(cycle_graph(5)) is None
    assert dominating_vertex(complete_multipartite_graph([1, 1, 1, 1])) == 0


def test_domination_number_small():
    assert domination_number(path_graph(4)) == 2
    assert domination_number(star_graph(6)) == 1
    assert domination_number(hypercube_graph(3)) == 2
    with pytest.raises(CapExceeded):
        domination_number(hypercube_graph(3), cap=4)


# ---------------------------------------------------------------------------
# webbed tree recognition

def test_webbed_dominating_vertex_and_trees():
    for g in (star_graph(6), path_graph(6), complete_multipartite_graph([1, 2, 2])):
        tree = recognize_webbed_tree(g)
        assert tree is not None
        assert validate_webbed_witness(g, tree)


def test_webbed_counterexample_two_chorded_squares():
    # two 4-cycles sharing vertex 0, each with a chord creating degree-3
    # vertices; every block has a dominating vertex but the graph does not
    g = graph_from_edges(
        7,
        [
            (0, 1), (1, 2), (2, 3), (0, 3), (1, 3),
            (0, 4), (4, 5), (5, 6), (0, 6), (4, 6),
        ],
    )
    assert recognize_webbed_tree(g) is None
    assert not oracles.has_webbed_witness(g)


def test_webbed_recognition_matches_oracle_on_small_graphs():
    cases = [(4, 0.45, 12), (5, 0.45, 12), (6, 0.45, 12), (7, 0.35, 6), (8, 0.3, 4)]
    for n, p, seeds in cases:
        for seed in range(seeds):
            g = random_graph(n, p, seed)
            got = recognize_webbed_tree(g)
            want = oracles.has_webbed_witness(g)
            assert (got is not None) == want, f"n={n} seed={seed}"
            if got is not None:
                assert validate_webbed_witness(g, got)


def test_webbed_recognition_cap():
    with pytest.raises(CapExceeded):
        recognize_webbed_tree(random_graph(20, 0.3, 0))


# ---------------------------------------------------------------------------
# q-common / extension

def test_q_common_complete_graph():
    k5 = complete_multipartite_graph([1] * 5)
    assert is_q_common(k5, 0.74)
    assert not is_q_common(k5, 0.76)


def test_q_common_star_and_isolated():
    assert not is_q_common(star_graph(4), 0.1)
    lonely = graph_from_edges(3, [(0, 1)])
    with pytest.raises(IsolatedVertexError):
        is_q_common(lonely, 0.3)


def test_q_common_matches_double_loop():
    from fractions import Fraction

    for seed in (0, 3):
        g = random_graph(18, 0.6, seed)
        for q in (Fraction(1, 4), Fraction(2, 5)):
            want = all(
                Fraction(len(g.neighbor_set(v) & g.neighbor_set(w)), g.degree(v)) >= q
                for v in range(18)
                for w in range(18)
            )
            assert is_q_common(g, q) == want


def test_r_extension_small_cases():
    k3 = complete_multipartite_graph([1, 1, 1])
    assert not has_r_extension_property(k3, 1)
    edgeless = graph_from_edges(3, [])
    assert not has_r_extension_property(edgeless, 1)


def test_r_extension_matches_plain_loop():
    for seed in (0, 1):
        g = random_graph(12, 0.5, seed)
        for r in (1, 2):
            assert has_r_extension_property(g, r) == oracles.plain_r_extension(g, r)
    g40 = random_graph(40, 0.5, 7)
    assert has_r_extension_property(g40, 3) == oracles.plain_r_extension(g40, 3)


# ---------------------------------------------------------------------------
# codes and retractions

def test_greedy_code_small():
    assert greedy_code(3, 1).members == frozenset(range(8))
    assert greedy_code(3, 2).members == frozenset({0b000, 0b011, 0b101, 0b110})


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=1, max_value=9), st.data())
def test_greedy_code_distance_and_bound(d, data):
    k = data.draw(st.integers(min_value=1, max_value=d))
    code = greedy_code(d, k)
    members = sorted(code.members)
    for a, b in itertools.combinations(members, 2):
        assert hamming(a, b) >= k
    assert len(members) >= (1 << d) / ball_count(d, k)


def test_subcube_retraction():
    rmap = subcube_retraction(3, {0, 1})
    assert rmap.apply(0b111) == 0b011
    assert rmap.apply(0b100) == 0
    for v in rmap.image_vertices:
        assert rmap.apply(v) == v
    assert sorted(rmap.cube_masks.values()) == [0, 1, 2, 3]


def test_product_retraction_two_edges_is_q2():
    e = path_graph(2)
    rmap = product_retraction([(e, (0, 1)), (e, (0, 1))])
    assert len(rmap.image_vertices) == 4
    assert all(rmap.apply(v) == v for v in rmap.image_vertices)


def test_product_retraction_p3_grid():
    p3 = path_graph(3)
    rmap = product_retraction([(p3, (0, 1)), (p3, (0, 1))])
    host = rmap.host
    assert host.vertex_count == 9
    assert len(rmap.image_vertices) == 4
    # retraction clauses on every host edge (also enforced at construction)
    for u, v in host.edges():
        fu, fv = rmap.apply(u), rmap.apply(v)
        assert fu == fv or host.has_edge(fu, fv)
    image, _ = rmap.image_graph()
    assert image.edge_count() == 4  # a 4-cycle


def test_retraction_map_rejects_bad_map():
    host = path_graph(3)
    with pytest.raises(GraphError):
        RetractionMap(
            host=host, image_vertices=frozenset({0, 2}), mapping=(0, 2, 2)
        )  # edge 0-1 maps to non-edge 0-2


def test_cartesian_product_sizes():
    g, coords = cartesian_product([path_graph(3), path_graph(3), path_graph(3)])
    assert g.vertex_count == 27
    assert len(coords) == 27
    assert g.edge_count() == 54  # 3 axes x 2 path edges x 9 fibers


def test_domination_sharp_gamma_t2_m3():
    g, _ = domination_sharp_construction(2, 3, 6)
    assert domination_number(g, cap=g.vertex_count) == 2
