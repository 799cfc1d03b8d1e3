import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from oracles import cheeger_regular_bruteforce
from triadic.analysis import (EdgeGraph, as_edge_graph, cheeger_time_exact, cheeger_time_regular,
                              cheeger_time_sampled, convergence_bound, edge_connectivity,
                              exponent_for, fit_constant)
from triadic.hypergraph import Hypergraph, build_triadic_dual
from triadic.signed_graph import (GraphError, complete_graph, generate_triadic_cycle, octahedron,
                                  triangulated_torus)


@pytest.mark.parametrize("g, want", [
    (nx.cycle_graph(4), Fraction(1, 4)),
    (nx.path_graph(2), Fraction(1, 2)),
    (nx.complete_graph(4), Fraction(1, 12)),
    (nx.cycle_graph(8), Fraction(1, 2)),
])
def test_hand_values(g, want):
    assert cheeger_time_exact(g).value == want
    assert cheeger_time_regular(g).value == want


def test_witness_attains_value():
    rep = cheeger_time_exact(nx.cycle_graph(8))
    a = set(rep.witness)
    cut = sum(1 for u, v in nx.cycle_graph(8).edges if (u in a) != (v in a))
    assert Fraction(len(a) * (8 - len(a)), 2 * 8 * cut) == rep.value
    assert rep.exact and rep.vol(rep.witness) == 2 * len(a)


def test_kernel_convention_scales_by_r_squared():
    for g in (nx.cycle_graph(6), nx.petersen_graph(), nx.complete_graph(5)):
        r = next(iter(dict(g.degree).values()))
        reg = cheeger_time_exact(g).value
        ker = cheeger_time_exact(g, "kernel").value
        assert ker == reg * r * r


def test_irregular_graph_exact_vs_bruteforce_kernel():
    g = nx.Graph([(0, 1), (1, 2), (2, 0), (2, 3)])
    deg = dict(g.degree)
    best = None
    for mask in range(1, 15):
        a = {i for i in range(4) if mask >> i & 1}
        flow = sum(Fraction(1, deg[u]) if u in a else Fraction(1, deg[v])
                   for u, v in g.edges if (u in a) != (v in a))
        val = Fraction(len(a) * (4 - len(a)), 16) / (flow / 4)
        best = val if best is None else max(best, val)
    assert cheeger_time_exact(g, "kernel").value == best
    with pytest.raises(GraphError):
        cheeger_time_regular(g)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([4, 6, 8, 10]), st.integers(0, 10**6))
def test_random_regular_against_oracle(n, seed):
    g = nx.random_regular_graph(3, n, seed=seed)
    if not nx.is_connected(g):
        return
    edges = list(g.edges)
    want = cheeger_regular_bruteforce(n, edges)
    assert cheeger_time_exact(g).value == want
    assert cheeger_time_regular(g).value == want
    # relabelling leaves the value unchanged
    perm = list(range(n))
    random.Random(seed).shuffle(perm)
    h = nx.relabel_nodes(g, dict(enumerate(perm)))
    assert cheeger_time_exact(h).value == want


def test_sampled_is_a_lower_bound():
    g = nx.random_regular_graph(3, 14, seed=5)
    ex = cheeger_time_exact(g).value
    sm = cheeger_time_sampled(g, samples=50, seed=1)
    assert not sm.exact
    assert sm.value <= ex


def test_cheeger_preconditions():
    with pytest.raises(GraphError):
        cheeger_time_exact(nx.Graph([(0, 1), (2, 3)]))
    with pytest.raises(GraphError):
        cheeger_time_exact(nx.cycle_graph(30))
    with pytest.raises(ValueError):
        cheeger_time_exact(nx.cycle_graph(4), "other")


def test_dual_of_signed_graph_as_input():
    d = build_triadic_dual(octahedron())
    eg = as_edge_graph(d)
    assert isinstance(eg, EdgeGraph) and eg.regular_degree() == 3
    assert cheeger_time_exact(d).value == cheeger_time_regular(eg).value
    assert as_edge_graph(complete_graph(4)).n == 4


def test_edge_connectivity():
    assert edge_connectivity(nx.cycle_graph(7)) == 2
    assert edge_connectivity(nx.complete_graph(4)) == 3
    assert edge_connectivity(EdgeGraph(2, ((0, 1), (0, 1)))) == 2
    # the cycle part of the TC dual; loops do not help connectivity
    d = build_triadic_dual(generate_triadic_cycle(9))
    assert edge_connectivity(d) == 2
    for seed in range(5):
        g = nx.random_regular_graph(3, 12, seed=seed)
        if nx.is_connected(g):
            assert edge_connectivity(g) == nx.edge_connectivity(g)


def test_convergence_bound():
    b = convergence_bound(build_triadic_dual(octahedron()))
    assert b.exponent == exponent_for(b.tau_c)
    assert b.below_two == (b.exponent < 2)
    assert b.upper(10) is None and b.upper(10, c=2.0) == 2.0 * 10 ** b.exponent
    k4 = convergence_bound(nx.complete_graph(4), tau_m=3.0)
    assert k4.tau_c == Fraction(1, 12) and k4.below_two
    assert exponent_for(Fraction(4)) == 3.0
    with pytest.raises(GraphError, match="loops"):
        convergence_bound(build_triadic_dual(generate_triadic_cycle(6)))
    with pytest.raises(GraphError, match="3-regular"):
        convergence_bound(nx.cycle_graph(5))
    with pytest.raises(GraphError, match="exact limit"):
        convergence_bound(build_triadic_dual(triangulated_torus(4)))
    with pytest.raises(GraphError):
        convergence_bound(Hypergraph(3, [(0, 1, 2)]))


def test_fit_constant():
    assert fit_constant([2, 4], [4.0, 32.0], 2.0) == 2.0
