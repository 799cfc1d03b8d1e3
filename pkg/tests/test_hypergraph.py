import pytest
from hypothesis import given, strategies as st

from triadic.hypergraph import (Hypergraph, build_triadic_dual, config_to_mask, dual_is_connected,
                                dual_is_graph, format_config, format_hypergraph, has_no_graph_edges,
                                mask_to_config, parse_config, parse_hypergraph, state_to_particles,
                                switch)
from triadic.signed_graph import (GraphError, SignedGraph, complete_graph, count_imbalanced,
                                  flip_edge, generate_triadic_cycle, octahedron)


def test_k4_dual_is_k4():
    d = build_triadic_dual(complete_graph(4))
    assert d.n_vertices == 4 and d.n_hyperedges == 6
    assert dual_is_graph(d) and dual_is_connected(d)
    pairs = {tuple(he) for he in d.hyperedges}
    assert pairs == {(a, b) for a in range(4) for b in range(a + 1, 4)}


def test_tc_dual_is_cycle_with_loops():
    n = 7
    d = build_triadic_dual(generate_triadic_cycle(n))
    sizes = sorted(d.edge_sizes())
    assert sizes == [1] * n + [2] * n
    for v in range(n):
        assert len(d.neighbours(v)) == 2


def test_k3_dual_has_three_loops():
    d = build_triadic_dual(complete_graph(3))
    assert d.hyperedges == ((0,), (0,), (0,))
    assert d.incidence == ((0, 1, 2),)


def test_k5_dual_has_triple_hyperedges():
    d = build_triadic_dual(complete_graph(5))
    assert set(d.edge_sizes()) == {3}
    assert has_no_graph_edges(d)


def test_dual_rejects_edge_outside_triangles():
    g = SignedGraph([(0, 1), (1, 2), (0, 2), (2, 3)])
    with pytest.raises(GraphError, match="no triangle"):
        build_triadic_dual(g)


def test_components_and_restrict():
    h = Hypergraph(6, [(0, 1, 2), (3, 4), (5,)])
    assert h.components == ((0, 1, 2), (3, 4), (5,))
    sub, kept = h.restrict((3, 4))
    assert kept == [1] and sub.hyperedges == ((0, 1),)
    with pytest.raises(GraphError):
        h.restrict((0, 1))


def test_switch_rules():
    h = Hypergraph(3, [(0,), (0, 1), (1, 2)])
    assert switch(h, (1, 0, 0), 0) == (0, 0, 0)          # loop removes the ball
    assert switch(h, (1, 0, 0), 1) == (0, 1, 0)          # ball moves across
    assert switch(h, (1, 1, 0), 1) == (0, 0, 0)          # two balls annihilate
    with pytest.raises(GraphError):
        switch(h, (1, 0, 0), 2)


@given(st.lists(st.sampled_from((1, -1)), min_size=12, max_size=12), st.integers(0, 11))
def test_particles_follow_edge_flips(labels, e):
    g = octahedron()
    d = build_triadic_dual(g)
    s = g.state(labels)
    w = state_to_particles(g, s)
    assert sum(w) == count_imbalanced(g, s)
    w2 = state_to_particles(g, flip_edge(s, e))
    toggled = tuple(a ^ b for a, b in zip(w, w2))
    assert toggled == tuple(1 if t in d.hyperedges[e] else 0 for t in range(d.n_vertices))


def test_text_round_trip():
    d = build_triadic_dual(generate_triadic_cycle(5))
    d2 = parse_hypergraph(format_hypergraph(d))
    assert d2.hyperedges == d.hyperedges and d2.source_edges == d.source_edges
    assert d2.n_vertices == d.n_vertices
    c = (1, 0, 1, 1, 0)
    assert parse_config(format_config(c)) == c
    assert parse_config("1 0 1 # note\n1\n") == (1, 0, 1, 1)


def test_parse_errors():
    with pytest.raises(GraphError):
        parse_hypergraph("0 1 2\n")
    with pytest.raises(GraphError):
        parse_config("2\n")


@given(st.lists(st.integers(0, 1), min_size=1, max_size=20))
def test_mask_round_trip(c):
    assert mask_to_config(config_to_mask(c), len(c)) == tuple(c)
