import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from oracles import xor_solutions
from triadic.analysis import cheeger_time_exact
from triadic.rng import make_rng
from triadic.signed_graph import complete_graph, generate_triadic_cycle, octahedron
from triadic.walks import run_switching
from triadic.xorsat import (FormulaError, XorFormula, antipodal_cycle_formula, assignment_from_state,
                            brute_force_solutions, cubic_graph_formula, format_formula,
                            formula_dual, formula_from_graph, is_2_regular, is_connected,
                            is_reduced, is_s_connected, max_s_connectivity, parse_formula,
                            random_cubic_formula, random_walk_sat, reduce, solve_gf2_formula,
                            time_bound)


@st.composite
def formulas(draw, max_n=9, max_m=9):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    clauses = []
    for _ in range(m):
        vs = draw(st.sets(st.integers(0, n - 1), min_size=1, max_size=min(3, n)))
        clauses.append((tuple(vs), draw(st.integers(0, 1))))
    return XorFormula(n, tuple(clauses))


@settings(max_examples=300, deadline=None)
@given(formulas())
def test_reduction_preserves_solvability_and_lifts(f):
    sols = xor_solutions(f.n, f.clauses)
    red, trace = reduce(f)
    if trace.unsat:
        assert not sols
        return
    assert is_reduced(red)
    red_sols = xor_solutions(red.n, red.clauses)
    assert bool(red_sols) == bool(sols)
    for a in red_sols:
        assert trace.lift(a) in sols
    # eliminated variables no longer occur
    used = {v for vs, _ in red.clauses for v in vs}
    assert not used & set(trace.eliminated)


def test_reduction_merges_shared_pair():
    f = XorFormula(4, (((0, 1, 2), 0), ((0, 1, 3), 1)))
    red, trace = reduce(f)
    assert trace.events[0].kind == "merge"
    assert red.m == 0
    assert f.satisfied_by(trace.lift((0, 0, 0, 0)))


def test_reduction_detects_contradiction():
    f = XorFormula(3, (((0, 1, 2), 0), ((0, 1, 2), 1)))
    red, trace = reduce(f)
    assert trace.unsat and red.m == 0


def test_reduction_leaves_reduced_formula_alone():
    f = antipodal_cycle_formula(8)
    red, trace = reduce(f)
    assert red == f and not trace.events


@settings(max_examples=200, deadline=None)
@given(formulas())
def test_gf2_solve_matches_bruteforce(f):
    sols = xor_solutions(f.n, f.clauses)
    assert brute_force_solutions(f) == sols
    res = solve_gf2_formula(f)
    assert bool(res) == bool(sols)
    if sols:
        assert res.assignment in sols


@settings(max_examples=100, deadline=None)
@given(formulas(), st.randoms(use_true_random=False))
def test_relabelling_invariance(f, r):
    perm = list(range(f.n))
    r.shuffle(perm)
    g = f.relabel(perm)
    assert len(brute_force_solutions(g)) == len(brute_force_solutions(f))
    assert is_reduced(g) == is_reduced(f)
    assert is_connected(g) == is_connected(f)


def test_predicates():
    f = antipodal_cycle_formula(8)
    assert is_2_regular(f) and is_reduced(f) and is_connected(f)
    assert max_s_connectivity(f) == 2
    assert is_s_connected(f, 2) and not is_s_connected(f, 3)
    assert not is_2_regular(XorFormula(3, (((0, 1), 0),)))
    assert not is_reduced(XorFormula(3, (((0, 1, 2), 0),)))
    split = XorFormula(6, (((0, 1, 2), 0), ((0, 1, 2), 1), ((3, 4, 5), 0), ((3, 4, 5), 0)))
    assert not is_connected(split) and max_s_connectivity(split) == 0
    with pytest.raises(ValueError):
        is_s_connected(f, 0)


def test_k4_formula_never_disconnects():
    # any two surviving clauses of K4 still share their variable
    f = cubic_graph_formula(nx.complete_graph(4), planted=[0] * 6)
    assert is_2_regular(f) and is_reduced(f)
    assert max_s_connectivity(f) == 6 and max_s_connectivity(f, limit=3) == 3


def test_parse_format_round_trip():
    f = antipodal_cycle_formula(6)
    assert parse_formula(format_formula(f)) == f
    assert parse_formula("c note\np xor 3 1\n1 2 3 1\n") == XorFormula(3, (((0, 1, 2), 1),))
    for bad in ("1 2 3 0\n", "p xor 3 2\n1 2 3 0\n", "p xor 3 1\n0 1 2 0\n", "p xor 3 1\n1 a 0\n",
                "p xor 3 1\n1 1 2 0\n", "p xor 3 1\n1 2 4 0\n", "", "p sat 3 1\n1 2 3 0\n"):
        with pytest.raises(FormulaError):
            parse_formula(bad)


def test_walksat_trivial_cases():
    f = antipodal_cycle_formula(6, planted=[0] * 9)
    r = random_walk_sat(f, (0,) * 9, 1)
    assert r.steps == 0 and r.assignment == (0,) * 9
    one = XorFormula(1, (((0,), 1),))
    r = random_walk_sat(one, (0,), random.Random(0), record=True)
    assert r.steps == 1 and r.flips == [0] and r.assignment == (1,)
    r = random_walk_sat(XorFormula(1, (((0,), 1), ((0,), 0))), (0,), 0, max_steps=50)
    assert r.censored and r.steps == 50
    with pytest.raises(FormulaError):
        random_walk_sat(one, (0, 0), 0)


def test_walksat_solutions_are_valid():
    for i in range(30):
        f = random_cubic_formula(10, random.Random(i))
        r = random_walk_sat(f, (0,) * f.n, make_rng(4, i))
        assert f.satisfied_by(r.assignment)


def test_walksat_lockstep_with_switching_walk():
    f = antipodal_cycle_formula(12)
    d = formula_dual(f)
    for i in range(100):
        rng = random.Random(i)
        u0 = tuple(rng.randrange(2) for _ in range(f.n))
        config = tuple(0 if f.clause_satisfied(k, u0) else 1 for k in range(f.m))
        a = random_walk_sat(f, u0, random.Random(1000 + i), record=True)
        b = run_switching(d, config, random.Random(1000 + i), max_steps=10**7)
        assert a.steps == b.steps and a.flips == b.schedule
        assert b.emptied


def test_walksat_steps_invariant_under_renaming():
    f = antipodal_cycle_formula(10, rng=random.Random(3))
    perm = list(range(f.n))
    random.Random(4).shuffle(perm)
    g = f.relabel(perm)
    u0 = tuple(random.Random(5).randrange(2) for _ in range(f.n))
    v0 = tuple(u0[perm.index(j)] for j in range(f.n))
    assert f.unsatisfied(u0) == g.unsatisfied(v0)
    a = [random_walk_sat(f, u0, make_rng(6, i)).steps for i in range(3000)]
    b = [random_walk_sat(g, v0, make_rng(7, i)).steps for i in range(3000)]
    ma, mb = sum(a) / len(a), sum(b) / len(b)
    va = sum((x - ma) ** 2 for x in a) / (len(a) - 1)
    vb = sum((x - mb) ** 2 for x in b) / (len(b) - 1)
    assert abs(ma - mb) < 4 * ((va + vb) / len(a)) ** 0.5


def test_time_bound():
    f = antipodal_cycle_formula(16)
    tb = time_bound(f)
    assert tb.s == 2 and tb.tau_c == Fraction(1, 3)
    assert tb.tau_c == cheeger_time_exact(formula_dual(f)).value
    assert tb.cubic == 16 ** 3 / 4
    assert tb.bound_ln == min(tb.cubic, tb.cheeger_ln)
    assert tb.bound_strict <= tb.bound_unit
    assert time_bound(f, s=1).cubic == 2 * tb.cubic
    with pytest.raises(FormulaError, match="3-connected"):
        time_bound(f, s=3)
    with pytest.raises(FormulaError, match="2-regular"):
        time_bound(XorFormula(3, (((0, 1, 2), 0),)))
    with pytest.raises(FormulaError, match="reduced"):
        time_bound(XorFormula(3, (((0, 1, 2), 0), ((0, 1, 2), 0))))
    clauses = list(f.clauses)
    clauses[0] = (clauses[0][0], 1 - clauses[0][1])
    # a 2-regular formula has total rhs parity fixed by satisfiability
    with pytest.raises(FormulaError, match="satisfiable"):
        time_bound(XorFormula(f.n, tuple(clauses)))


def test_formula_from_graph_balance():
    g = octahedron()
    f, ids = formula_from_graph(g)
    assert f.n == g.n_edges and f.m == g.n_triangles and is_2_regular(f)
    s = g.state_from_negatives([0, 3])
    a = assignment_from_state(ids, s)
    imbalanced = {t for t, tri in enumerate(g.triangle_edges) if sum(s[e] < 0 for e in tri) % 2}
    assert set(f.unsatisfied(a)) == imbalanced
    tc, _ = formula_from_graph(generate_triadic_cycle(6))
    assert not is_reduced(tc)
    assert formula_from_graph(complete_graph(4))[0].m == 4


def test_generators_reject_bad_input():
    with pytest.raises(FormulaError):
        antipodal_cycle_formula(7)
    with pytest.raises(FormulaError):
        cubic_graph_formula(nx.cycle_graph(5))
    with pytest.raises(FormulaError):
        XorFormula(2, (((0, 0), 1),))
    with pytest.raises(FormulaError):
        XorFormula(2, (((0, 1), 2),))
    with pytest.raises(FormulaError):
        XorFormula(2, (((0,), 0),)).satisfied_by((0,))
