import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from oracles import imbalanced_bruteforce, triangles_bruteforce
from triadic.signed_graph import (EdgeState, GraphError, SignedGraph, complete_graph,
                                  count_imbalanced, flip_edge, format_edge_list,
                                  generate_triadic_cycle, imbalanced_triangles, is_2_regular_simplex,
                                  is_balanced, is_triadic_simplex, max_triangles_per_edge, octahedron,
                                  parse_edge_list, triangle_sign, triangular_lattice_section,
                                  triangulated_torus)


@st.composite
def signed_graphs(draw, max_n=8):
    n = draw(st.integers(3, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, unique=True))
    labels = draw(st.lists(st.sampled_from((1, -1)), min_size=len(chosen), max_size=len(chosen)))
    return chosen, labels


@given(signed_graphs())
def test_triangles_match_bruteforce(data):
    edges, _ = data
    g = SignedGraph(edges)
    assert list(g.triangles) == triangles_bruteforce(edges)


@given(signed_graphs())
def test_imbalanced_match_bruteforce(data):
    edges, labels = data
    g = SignedGraph(edges)
    s = g.state(labels)
    got = [g.triangles[t] for t in imbalanced_triangles(g, s)]
    assert got == imbalanced_bruteforce(edges, labels)
    assert count_imbalanced(g, s) == len(got)


@given(signed_graphs(), st.data())
def test_flip_changes_only_incident_triangles(data, draw):
    edges, labels = data
    g = SignedGraph(edges)
    s = g.state(labels)
    e = draw.draw(st.integers(0, g.n_edges - 1))
    s2 = flip_edge(s, e)
    for t in range(g.n_triangles):
        before, after = triangle_sign(g, s, t), triangle_sign(g, s2, t)
        assert (before != after) == (e in g.triangle_edges[t])
    assert flip_edge(s2, e) == s


def test_k3_one_negative_is_imbalanced():
    g = complete_graph(3)
    s = g.state_from_negatives([0])
    assert not is_balanced(g, s, 0)
    assert count_imbalanced(g, s) == 1


def test_k4_all_negative_has_four_imbalanced():
    g = complete_graph(4)
    assert count_imbalanced(g, g.all_negative()) == 4


def test_triangle_id_lookup():
    g = complete_graph(4)
    assert g.triangle_id((2, 0, 1)) == 0
    with pytest.raises(GraphError):
        g.triangle_id((0, 1, 5))
    with pytest.raises(GraphError):
        g.triangle_id(7)


def test_rejects_bad_edges():
    with pytest.raises(GraphError):
        SignedGraph([(1, 1)])
    with pytest.raises(GraphError):
        SignedGraph([(0, 1), (1, 0)])
    with pytest.raises(GraphError):
        SignedGraph([(-1, 2)])


def test_edge_state_validates_labels():
    with pytest.raises(ValueError):
        EdgeState((1, 0, -1))


@pytest.mark.parametrize("n", [4, 5, 6, 9, 16])
def test_triadic_cycle_fan(n):
    g = generate_triadic_cycle(n)
    assert g.n_triangles == n
    counts = sorted(len(ts) for ts in g.edge_triangles)
    assert counts == [1] * n + [2] * n
    assert is_triadic_simplex(g)
    assert not is_2_regular_simplex(g)


@pytest.mark.parametrize("n", [7, 8, 12])
def test_triadic_cycle_strip_matches_fan_incidence(n):
    a, b = generate_triadic_cycle(n), generate_triadic_cycle(n, "strip")
    assert a.n_triangles == b.n_triangles == n
    assert sorted(map(len, a.edge_triangles)) == sorted(map(len, b.edge_triangles))


def test_triadic_cycle_too_small():
    with pytest.raises(GraphError):
        generate_triadic_cycle(3)
    with pytest.raises(GraphError):
        generate_triadic_cycle(6, "strip")


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_lattice_section_counts(k):
    g = triangular_lattice_section(k)
    assert g.n_triangles == 2 * k * k
    assert max_triangles_per_edge(g) <= 2
    assert is_triadic_simplex(g)


@pytest.mark.parametrize("k", [4, 5, 6])
def test_torus_is_two_regular(k):
    g = triangulated_torus(k)
    assert g.n_triangles == 2 * k * k
    assert is_2_regular_simplex(g)


def test_octahedron_and_k4_are_two_regular():
    assert is_2_regular_simplex(octahedron())
    assert is_2_regular_simplex(complete_graph(4))
    assert max_triangles_per_edge(complete_graph(5)) == 3


def test_edge_list_round_trip(tmp_path):
    g = generate_triadic_cycle(5)
    rng = random.Random(3)
    s = g.state(rng.choice((1, -1)) for _ in range(g.n_edges))
    text = format_edge_list(g, s)
    g2, s2 = parse_edge_list("# comment\n" + text)
    assert g2.edges == g.edges and s2 == s


def test_edge_list_errors():
    with pytest.raises(GraphError):
        parse_edge_list("0 1\n")
    with pytest.raises(GraphError):
        parse_edge_list("0 1 2\n")
    with pytest.raises(GraphError):
        parse_edge_list("0 x 1\n")


@settings(max_examples=30)
@given(st.integers(4, 12))
def test_triangle_count_matches_networkx(n):
    g = generate_triadic_cycle(n)
    nxg = nx.Graph(list(g.edges))
    assert sum(nx.triangles(nxg).values()) // 3 == g.n_triangles
