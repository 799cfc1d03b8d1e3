"""3-XOR formulas: reduction, structural predicates, RandomWalkSat and its time bound.

Variables are 0-based in memory; the text format is 1-based::

    p xor <n> <m>
    <i1> <i2> <i3> <b>
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .analysis import cheeger_time_exact
from .gf2 import Gf2Solution, Gf2System, Gf2Unsat, solve_gf2
from .hypergraph import Hypergraph
from .indexed import IndexedSet
from .signed_graph import SignedGraph

Assignment = tuple[int, ...]
Clause = tuple[tuple[int, ...], int]


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class XorFormula:
    """``n`` variables and clauses ``(sorted variable tuple, rhs)``."""

    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        norm = []
        for k, (vs, b) in enumerate(self.clauses):
            vs = tuple(sorted(int(v) for v in vs))
            if len(set(vs)) != len(vs):
                raise FormulaError(f"clause {k} repeats a variable")
            if vs and (vs[0] < 0 or vs[-1] >= self.n):
                raise FormulaError(f"clause {k} has a variable out of range")
            if b not in (0, 1):
                raise FormulaError(f"clause {k} has right-hand side {b!r}")
            norm.append((vs, int(b)))
        object.__setattr__(self, "clauses", tuple(norm))

    @classmethod
    def from_triples(cls, n: int, clauses: Iterable[Sequence[int]]) -> "XorFormula":
        """From ``(i1, i2, i3, b)`` rows."""
        return cls(n, tuple((tuple(c[:-1]), c[-1]) for c in clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def occurrences(self) -> list[list[int]]:
        occ: list[list[int]] = [[] for _ in range(self.n)]
        for k, (vs, _) in enumerate(self.clauses):
            for v in vs:
                occ[v].append(k)
        return occ

    def clause_satisfied(self, k: int, a: Sequence[int]) -> bool:
        vs, b = self.clauses[k]
        return sum(a[v] for v in vs) % 2 == b

    def satisfied_by(self, a: Sequence[int]) -> bool:
        if len(a) != self.n:
            raise FormulaError("assignment length does not match the variable count")
        return all(self.clause_satisfied(k, a) for k in range(self.m))

    def unsatisfied(self, a: Sequence[int]) -> list[int]:
        return [k for k in range(self.m) if not self.clause_satisfied(k, a)]

    def relabel(self, perm: Sequence[int]) -> "XorFormula":
        """Rename variable ``v`` to ``perm[v]``."""
        return XorFormula(self.n, tuple((tuple(perm[v] for v in vs), b) for vs, b in self.clauses))


# ----------------------------------------------------------------- text I/O

def parse_formula(text: str) -> XorFormula:
    n = m = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("c", "#")):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "xor":
                raise FormulaError(f"line {lineno}: header must be 'p xor n m'")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise FormulaError(f"line {lineno}: clause before header")
        try:
            vals = [int(x) for x in parts]
        except ValueError:
            raise FormulaError(f"line {lineno}: non-integer field") from None
        if len(vals) < 2:
            raise FormulaError(f"line {lineno}: clause needs variables and a right-hand side")
        if any(v < 1 for v in vals[:-1]):
            raise FormulaError(f"line {lineno}: variables are 1-based")
        rows.append((tuple(v - 1 for v in vals[:-1]), vals[-1]))
    if n is None:
        raise FormulaError("missing 'p xor n m' header")
    if m != len(rows):
        raise FormulaError(f"header announces {m} clauses, found {len(rows)}")
    return XorFormula(n, tuple(rows))


def format_formula(f: XorFormula) -> str:
    lines = [f"p xor {f.n} {f.m}"]
    lines += [" ".join(str(v + 1) for v in vs) + f" {b}" for vs, b in f.clauses]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ solving

def to_gf2(f: XorFormula) -> Gf2System:
    return Gf2System.from_lists(f.n, f.clauses)


def solve_gf2_formula(f: XorFormula) -> Gf2Solution | Gf2Unsat:
    """Exact satisfiability with a witness (``assignment``) or an UNSAT certificate."""
    return solve_gf2(to_gf2(f))


def brute_force_solutions(f: XorFormula) -> set[Assignment]:
    """Every satisfying assignment; only for small ``n``."""
    if f.n > 22:
        raise FormulaError("too many variables for exhaustive enumeration")
    masks = [(sum(1 << v for v in vs), b) for vs, b in f.clauses]
    out = set()
    for x in range(1 << f.n):
        if all(bin(x & mk).count("1") % 2 == b for mk, b in masks):
            out.add(tuple((x >> i) & 1 for i in range(f.n)))
    return out


# ---------------------------------------------------------------- reduction

@dataclass(frozen=True)
class Elimination:
    """``var := rhs XOR (sum of others)``.

    ``kind`` is ``"pure"`` (the variable's only clause was dropped),
    ``"merge"`` (a two-variable constraint from two clauses sharing
    variables) or ``"fix"`` (a one-variable constraint).
    """

    kind: str
    var: int
    others: tuple[int, ...]
    rhs: int
    removed_clause: tuple[int, ...] = ()


@dataclass
class ReductionTrace:
    events: list[Elimination] = field(default_factory=list)
    unsat: bool = False

    def lift(self, a: Sequence[int]) -> Assignment:
        """Extend a solution of the reduced formula to one of the original."""
        out = list(a)
        for ev in reversed(self.events):
            out[ev.var] = (ev.rhs + sum(out[v] for v in ev.others)) % 2
        return tuple(out)

    @property
    def eliminated(self) -> list[int]:
        return [ev.var for ev in self.events]


def reduce(f: XorFormula) -> tuple[XorFormula, ReductionTrace]:
    """Rewrite ``f`` into a reduced formula plus a back-substitution trace.

    Rules, in priority order, applied to a fixpoint: constraints on one or
    two variables are solved for their smallest variable and substituted
    away; of two clauses sharing two or more variables, the later one is
    replaced by their sum; a clause holding a variable that occurs nowhere
    else is dropped. A derived
    ``0 = 1`` stops with ``trace.unsat`` set and an empty formula.
    """
    alive: dict[int, tuple[set[int], int]] = {}
    occ: dict[int, set[int]] = {v: set() for v in range(f.n)}
    for k, (vs, b) in enumerate(f.clauses):
        alive[k] = (set(vs), b)
        for v in vs:
            occ[v].add(k)
    trace = ReductionTrace()

    def drop(k: int) -> None:
        vs, _ = alive.pop(k)
        for v in vs:
            occ[v].discard(k)

    def substitute(x: int, ys: tuple[int, ...], lam: int) -> None:
        for k in sorted(occ[x]):
            vs, b = alive[k]
            vs.discard(x)
            for y in ys:
                if y in vs:
                    vs.discard(y)
                    occ[y].discard(k)
                else:
                    vs.add(y)
                    occ[y].add(k)
            alive[k] = (vs, b ^ lam)
        occ[x].clear()

    def sweep_small() -> bool:
        for k in sorted(alive):
            vs, b = alive[k]
            if len(vs) > 2:
                continue
            removed = tuple(sorted(vs))
            drop(k)
            if not vs:
                if b:
                    trace.unsat = True
                return True
            x, *rest = removed
            trace.events.append(Elimination("fix" if not rest else "merge", x, tuple(rest), b, removed))
            substitute(x, tuple(rest), b)
            return True
        return False

    def sweep_pure() -> bool:
        for v in range(f.n):
            if len(occ[v]) == 1:
                (k,) = occ[v]
                vs, b = alive[k]
                removed = tuple(sorted(vs))
                drop(k)
                trace.events.append(Elimination("pure", v, tuple(u for u in removed if u != v), b, removed))
                return True
        return False

    def sweep_pairs() -> bool:
        for k1 in sorted(alive):
            s1, b1 = alive[k1]
            partners: dict[int, int] = {}
            for v in s1:
                for k2 in occ[v]:
                    if k2 > k1:
                        partners[k2] = partners.get(k2, 0) + 1
            for k2 in sorted(partners):
                if partners[k2] >= 2:
                    s2, b2 = alive[k2]
                    drop(k2)
                    d = s1 ^ s2
                    alive[k2] = (set(d), b1 ^ b2)
                    for v in d:
                        occ[v].add(k2)
                    return True
        return False

    while not trace.unsat and (sweep_small() or sweep_pairs() or sweep_pure()):
        pass
    if trace.unsat:
        return XorFormula(f.n, ()), trace
    out = XorFormula(f.n, tuple((tuple(sorted(vs)), b) for _, (vs, b) in sorted(alive.items())))
    return out, trace


# ---------------------------------------------------------------- predicates

def is_reduced(f: XorFormula) -> bool:
    """No variable in exactly one clause, and no two clauses sharing two variables."""
    occ = f.occurrences()
    if any(len(o) == 1 for o in occ):
        return False
    seen: set[tuple[int, int]] = set()
    for vs, _ in f.clauses:
        for pair in itertools.combinations(vs, 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


def is_2_regular(f: XorFormula) -> bool:
    return f.n > 0 and all(len(o) == 2 for o in f.occurrences())


def _clauses_connected(f: XorFormula, deleted: frozenset[int] = frozenset()) -> bool:
    keep = [k for k, (vs, _) in enumerate(f.clauses) if not deleted.intersection(vs)]
    if len(keep) <= 1:
        return True
    parent = {k: k for k in keep}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first: dict[int, int] = {}
    groups = len(keep)
    for k in keep:
        for v in f.clauses[k][0]:
            if v in first:
                a, b = find(first[v]), find(k)
                if a != b:
                    parent[a] = b
                    groups -= 1
            else:
                first[v] = k
    return groups == 1


def is_connected(f: XorFormula) -> bool:
    """Clauses cannot be split into two variable-disjoint groups."""
    return _clauses_connected(f)


def is_s_connected(f: XorFormula, s: int) -> bool:
    """Deleting any ``s - 1`` or fewer variables, with their clauses, leaves ``f`` connected."""
    if s < 1:
        raise ValueError("s must be at least 1")
    used = sorted({v for vs, _ in f.clauses for v in vs})
    for size in range(0, s):
        for dele in itertools.combinations(used, size):
            if not _clauses_connected(f, frozenset(dele)):
                return False
    return True


def max_s_connectivity(f: XorFormula, limit: int = 6) -> int:
    """Largest ``s <= limit`` with ``is_s_connected(f, s)``; 0 if disconnected."""
    if not is_connected(f):
        return 0
    used = sorted({v for vs, _ in f.clauses for v in vs})
    s = 1
    while s < limit:
        # s + 1 needs every deletion set of size s to keep connectivity
        if any(not _clauses_connected(f, frozenset(d)) for d in itertools.combinations(used, s)):
            break
        s += 1
    return s


# ------------------------------------------------------------ dual and walk

def formula_dual(f: XorFormula) -> Hypergraph:
    """Clauses as vertices; variable ``k`` becomes hyperedge ``k`` over its clauses."""
    if not is_2_regular(f):
        raise FormulaError("formula is not 2-regular")
    return Hypergraph(f.m, f.occurrences(), range(f.n))


@dataclass
class WalkSatResult:
    assignment: Assignment | None
    steps: int
    flips: list[int] = field(default_factory=list)

    @property
    def censored(self) -> bool:
        return self.assignment is None


def random_walk_sat(f: XorFormula, u0: Sequence[int], rng: random.Random | int,
                    max_steps: int = 10**7, record: bool = False) -> WalkSatResult:
    """Flip a random variable of a random unsatisfied clause until none is left.

    Draws per step: ``randrange(#unsatisfied)`` then ``randrange(clause size)``.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    if len(u0) != f.n:
        raise FormulaError("initial assignment length does not match the variable count")
    a = [int(x) & 1 for x in u0]
    occ = [sorted(o) for o in f.occurrences()]
    clauses = [vs for vs, _ in f.clauses]
    unsat = IndexedSet(f.m, f.unsatisfied(a))
    flips: list[int] = []
    t = 0
    while len(unsat):
        if t >= max_steps:
            return WalkSatResult(None, t, flips)
        c = unsat.items[rng.randrange(len(unsat))]
        vs = clauses[c]
        x = vs[rng.randrange(len(vs))]
        a[x] ^= 1
        for k in occ[x]:
            unsat.toggle(k)
        if record:
            flips.append(x)
        t += 1
    return WalkSatResult(tuple(a), t, flips)


# --------------------------------------------------------------- time bound

@dataclass(frozen=True)
class TimeBound:
    m: int
    n: int
    s: int
    tau_c: Fraction
    cubic: float
    cheeger_ln: float
    cheeger_unit: float

    @property
    def bound_ln(self) -> float:
        """Reading the log factor as the natural logarithm of 2."""
        return min(self.cubic, self.cheeger_ln)

    @property
    def bound_unit(self) -> float:
        """Reading the log factor as log base 2 of 2, i.e. 1."""
        return min(self.cubic, self.cheeger_unit)

    @property
    def bound_strict(self) -> float:
        return min(self.bound_ln, self.bound_unit)


def time_bound(f: XorFormula, s: int | None = None, tau_c: Fraction | None = None,
               check_satisfiable: bool = True) -> TimeBound:
    """Both terms of the RandomWalkSat expected-time bound, under both log readings."""
    if not is_2_regular(f):
        raise FormulaError("hypothesis failed: formula is not 2-regular")
    if not is_reduced(f):
        raise FormulaError("hypothesis failed: formula is not reduced")
    if check_satisfiable and not solve_gf2_formula(f):
        raise FormulaError("hypothesis failed: formula is not satisfiable")
    if s is None:
        s = max_s_connectivity(f)
        if s < 1:
            raise FormulaError("hypothesis failed: formula is not connected")
    elif not is_s_connected(f, s):
        raise FormulaError(f"hypothesis failed: formula is not {s}-connected")
    if tau_c is None:
        tau_c = cheeger_time_exact(formula_dual(f)).value
    m = f.m
    return TimeBound(m, f.n, s, tau_c, m ** 3 / (2 * s), 2 * math.log(2) * float(tau_c) * m * m,
                     2 * float(tau_c) * m * m)


# ---------------------------------------------------------------- generators

def _planted(clauses: Sequence[tuple[int, ...]], n: int, planted: Sequence[int]) -> XorFormula:
    return XorFormula(n, tuple((vs, sum(planted[v] for v in vs) % 2) for vs in clauses))


def cubic_graph_formula(g: nx.Graph, planted: Sequence[int] | None = None,
                        rng: random.Random | None = None) -> XorFormula:
    """Clauses are vertices of a simple 3-regular graph, variables are its edges."""
    nodes = sorted(g.nodes)
    pos = {v: i for i, v in enumerate(nodes)}
    edges = sorted(tuple(sorted((pos[a], pos[b]))) for a, b in g.edges)
    if any(d != 3 for _, d in g.degree()):
        raise FormulaError("graph is not 3-regular")
    inc: list[list[int]] = [[] for _ in nodes]
    for k, (a, b) in enumerate(edges):
        inc[a].append(k)
        inc[b].append(k)
    if planted is None:
        rng = rng or random.Random(0)
        planted = [rng.randrange(2) for _ in edges]
    return _planted([tuple(c) for c in inc], len(edges), planted)


def antipodal_cycle_formula(m: int, planted: Sequence[int] | None = None,
                            rng: random.Random | None = None) -> XorFormula:
    """2-regular formula built from the triadic cycle with ``m`` triangles.

    Triangle i contributes a clause on its two shared edges (variables
    ``i - 1`` and ``i`` mod m); its private edge is identified with the
    private edge of the opposite triangle ``i + m/2`` (variable
    ``m + i mod m/2``). The clause graph is a cycle with antipodal chords.
    """
    if m < 6 or m % 2:
        raise FormulaError("need an even number of clauses, at least 6")
    half = m // 2
    clauses = [((i - 1) % m, i, m + i % half) for i in range(m)]
    n = m + half
    if planted is None:
        rng = rng or random.Random(0)
        planted = [rng.randrange(2) for _ in range(n)]
    return _planted(clauses, n, planted)


def random_cubic_formula(m: int, rng: random.Random) -> XorFormula:
    """Planted formula on a random connected simple 3-regular graph with ``m`` vertices."""
    while True:
        g = nx.random_regular_graph(3, m, seed=rng.randrange(2**32))
        if nx.is_connected(g):
            return cubic_graph_formula(g, rng=rng)


def formula_from_graph(g: SignedGraph, state: Sequence[int] | None = None) -> tuple[XorFormula, list[int]]:
    """Balance equations: one clause per triangle over the edges that lie in a triangle.

    A clause is satisfied iff its triangle is balanced (value 1 means a
    negative edge). Returns the formula and the edge id of each variable.
    With ``state`` the formula is unchanged; use :func:`assignment_from_state`.
    """
    edge_ids = [e for e, ts in enumerate(g.edge_triangles) if ts]
    var_of = {e: k for k, e in enumerate(edge_ids)}
    clauses = tuple((tuple(var_of[e] for e in g.triangle_edges[t]), 0) for t in range(g.n_triangles))
    return XorFormula(len(edge_ids), clauses), edge_ids


def assignment_from_state(edge_ids: Sequence[int], state: Sequence[int]) -> Assignment:
    return tuple(1 if state[e] < 0 else 0 for e in edge_ids)
