"""Cheeger time, edge connectivity and the cubic-vs-Cheeger convergence exponent.

The Cheeger ratio of a vertex set A is

    pi[A] pi[B] / sum_{i in A, j in B} pi[i] w(i, j),    B = V \\ A,

with pi uniform on vertices. Two weightings are supported. The default,
``convention="regular"``, takes w(i, j) = deg(i) per edge, which on an
r-regular graph gives |A||B| / (r n |E(A, B)|), the closed form used for
regular graphs. ``convention="kernel"`` takes w(i, j) = 1/deg(i), the
transition probability of the simple random walk; on an r-regular graph
it equals r^2 times the default value.

All arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence, Union

import networkx as nx
import numpy as np

from .hypergraph import Hypergraph
from .signed_graph import GraphError, SignedGraph

MAX_EXACT_VERTICES = 24
CONVENTIONS = ("regular", "kernel")

GraphInput = Union[nx.Graph, Hypergraph, SignedGraph]


@dataclass(frozen=True)
class EdgeGraph:
    """Vertices ``0..n-1`` and an edge multiset; loops count towards degree only."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        d = [0] * self.n
        for a, b in self.edges:
            d[a] += 1
            d[b] += 1
        return tuple(d)

    @property
    def cut_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(e for e in self.edges if e[0] != e[1])

    def regular_degree(self) -> int | None:
        ds = set(self.degrees)
        return ds.pop() if len(ds) == 1 else None

    def to_networkx(self) -> nx.MultiGraph:
        g = nx.MultiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


def as_edge_graph(g: GraphInput | EdgeGraph) -> EdgeGraph:
    """Normalise a networkx graph, a graph-like hypergraph or a signed graph."""
    if isinstance(g, EdgeGraph):
        return g
    if isinstance(g, Hypergraph):
        edges = []
        for k, he in enumerate(g.hyperedges):
            if len(he) > 2:
                raise GraphError(f"hyperedge {k} has {len(he)} vertices; not a graph")
            edges.append((he[0], he[-1]))
        return EdgeGraph(g.n_vertices, tuple(edges))
    if isinstance(g, SignedGraph):
        pos = {v: i for i, v in enumerate(g.vertices)}
        return EdgeGraph(len(g.vertices), tuple((pos[a], pos[b]) for a, b in g.edges))
    if isinstance(g, nx.Graph):
        nodes = sorted(g.nodes)
        pos = {v: i for i, v in enumerate(nodes)}
        return EdgeGraph(len(nodes), tuple((pos[a], pos[b]) for a, b, *_ in g.edges))
    raise TypeError(f"unsupported graph type {type(g).__name__}")


def is_connected(g: EdgeGraph) -> bool:
    return g.n > 0 and nx.is_connected(g.to_networkx())


# ------------------------------------------------------------------ Cheeger

@dataclass(frozen=True)
class CheegerReport:
    value: Fraction
    witness: tuple[int, ...]
    method: str
    n: int
    r: int | None
    convention: str
    degrees: tuple[int, ...] = ()

    def __float__(self) -> float:
        return float(self.value)

    @property
    def exact(self) -> bool:
        return self.method != "sampled-lower-bound"

    def vol(self, s: Sequence[int]) -> int:
        return sum(self.degrees[v] for v in s)


def _weights(deg: Sequence[int], convention: str) -> tuple[list[int], int]:
    """Integer weights plus a scale so that w(i) = weight[i] / scale."""
    if convention == "regular":
        return list(deg), 1
    if convention == "kernel":
        lcm = reduce(math.lcm, deg, 1)
        return [lcm // d for d in deg], lcm
    raise ValueError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")


def _ratio(size: int, n: int, flow: int, scale: int) -> Fraction:
    # (|A| |B| / n^2) / (flow / (n * scale))
    return Fraction(size * (n - size) * scale, n * flow)


def _prepare(g: GraphInput | EdgeGraph) -> EdgeGraph:
    eg = as_edge_graph(g)
    if eg.n < 2:
        raise GraphError("need at least two vertices")
    if not is_connected(eg):
        raise GraphError("graph is disconnected; a cut with no crossing edge has no finite ratio")
    return eg


def cheeger_time_exact(g: GraphInput | EdgeGraph, convention: str = "regular") -> CheegerReport:
    """Supremum of the Cheeger ratio over every nonempty proper vertex subset.

    Subsets are visited in Gray-code order, so each one costs a pass over
    the neighbours of a single toggled vertex.
    """
    eg = _prepare(g)
    n = eg.n
    if n > MAX_EXACT_VERTICES:
        raise GraphError(f"{n} vertices exceeds the exact limit {MAX_EXACT_VERTICES}; "
                         "use cheeger_time_sampled for a lower bound")
    deg = eg.degrees
    w, scale = _weights(deg, convention)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for a, b in eg.cut_edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    in_a = [False] * n
    flow = size = 0
    best_num, best_den, best_mask = -1, 1, 0
    mask = 0
    for k in range(1, 1 << n):
        v = (k & -k).bit_length() - 1
        if in_a[v]:
            in_a[v] = False
            size -= 1
            for u in nbrs[v]:
                flow += w[u] if in_a[u] else -w[v]
        else:
            in_a[v] = True
            size += 1
            for u in nbrs[v]:
                flow += -w[u] if in_a[u] else w[v]
        mask ^= 1 << v
        if size == n:
            continue
        num = size * (n - size)
        # compare num/flow against best_num/best_den without division
        if num * best_den > best_num * flow:
            best_num, best_den, best_mask = num, flow, mask
    witness = tuple(i for i in range(n) if best_mask >> i & 1)
    value = Fraction(best_num * scale, n * best_den)
    return CheegerReport(value, witness, "exact", n, eg.regular_degree(), convention, deg)


def cheeger_time_regular(g: GraphInput | EdgeGraph, r: int | None = None) -> CheegerReport:
    """Closed form |A||B| / (r n |E(A, B)|) for r-regular graphs.

    Cut sizes for all subsets are computed at once with numpy bit arrays, an
    independent route from the incremental enumeration above.
    """
    eg = _prepare(g)
    deg_r = eg.regular_degree()
    if deg_r is None or (r is not None and r != deg_r):
        raise GraphError(f"graph is not {r if r is not None else 'r'}-regular")
    n = eg.n
    if n > MAX_EXACT_VERTICES:
        raise GraphError(f"{n} vertices exceeds the exact limit {MAX_EXACT_VERTICES}")
    masks = np.arange(1, (1 << n) - 1, dtype=np.int64)
    bits = [(masks >> i) & 1 for i in range(n)]
    cut = np.zeros_like(masks)
    for a, b in eg.cut_edges:
        cut += bits[a] ^ bits[b]
    size = np.zeros_like(masks)
    for b in bits:
        size += b
    num = size * (n - size)
    # maximise num / cut: find candidates by float then settle exactly
    ratio = num / cut
    top = np.flatnonzero(ratio >= ratio.max() * (1 - 1e-9))
    best = max(top, key=lambda i: Fraction(int(num[i]), int(cut[i])))
    value = Fraction(int(num[best]), deg_r * n * int(cut[best]))
    m = int(masks[best])
    witness = tuple(i for i in range(n) if m >> i & 1)
    return CheegerReport(value, witness, "regular-formula", n, deg_r, "regular", eg.degrees)


def _ratio_of(eg: EdgeGraph, members: set[int], w: Sequence[int], scale: int) -> Fraction | None:
    size = len(members)
    if size in (0, eg.n):
        return None
    flow = 0
    for a, b in eg.cut_edges:
        if (a in members) != (b in members):
            flow += w[a] if a in members else w[b]
    return _ratio(size, eg.n, flow, scale)


def cheeger_time_sampled(g: GraphInput | EdgeGraph, samples: int = 200, seed: int = 0,
                         convention: str = "regular") -> CheegerReport:
    """Lower bound from random balanced cuts improved by single-vertex moves."""
    eg = _prepare(g)
    rng = random.Random(seed)
    w, scale = _weights(eg.degrees, convention)
    best: Fraction | None = None
    best_set: set[int] = set()
    verts = list(range(eg.n))
    for _ in range(samples):
        rng.shuffle(verts)
        cur = set(verts[: eg.n // 2])
        val = _ratio_of(eg, cur, w, scale)
        improved = True
        while improved:
            improved = False
            for v in range(eg.n):
                cand = cur ^ {v}
                cv = _ratio_of(eg, cand, w, scale)
                if cv is not None and cv > val:
                    cur, val, improved = cand, cv, True
        if best is None or val > best:
            best, best_set = val, set(cur)
    assert best is not None
    return CheegerReport(best, tuple(sorted(best_set)), "sampled-lower-bound", eg.n,
                         eg.regular_degree(), convention, eg.degrees)


# --------------------------------------------------------- connectivity

def edge_connectivity(g: GraphInput | EdgeGraph) -> int:
    """Minimum, over targets, of the max-flow from vertex 0 (parallel edges add capacity)."""
    eg = as_edge_graph(g)
    if not is_connected(eg):
        raise GraphError("graph is disconnected")
    if eg.n == 1:
        return 0
    d = nx.DiGraph()
    d.add_nodes_from(range(eg.n))
    for a, b in eg.cut_edges:
        for x, y in ((a, b), (b, a)):
            if d.has_edge(x, y):
                d[x][y]["capacity"] += 1
            else:
                d.add_edge(x, y, capacity=1)
    return min(int(nx.maximum_flow_value(d, 0, t)) for t in range(1, eg.n))


# ------------------------------------------------------ convergence bound

@dataclass(frozen=True)
class ConvergenceBound:
    tau_c: Fraction
    exponent: float
    below_two: bool
    tau_m: float | None = None
    fitted_c: float | None = None

    def upper(self, n: int, c: float | None = None) -> float | None:
        """``c * n**exponent``; None when no constant is available."""
        c = self.fitted_c if c is None else c
        return None if c is None else c * n ** self.exponent


def exponent_for(tau_c: Fraction | float) -> float:
    return min(3.0, 2.0 + math.log2(float(tau_c)))


def convergence_bound(dual: GraphInput | EdgeGraph, tau_m: float | None = None,
                      fitted_c: float | None = None) -> ConvergenceBound:
    """Exponent min(3, 2 + log2 tau_c) for a 3-regular loopless dual.

    The multiplicative constant is not known; ``fitted_c`` may carry an
    empirical fit and is reported as such. Exponents below 2 are flagged,
    not clamped.
    """
    eg = as_edge_graph(dual)
    if any(a == b for a, b in eg.edges):
        raise GraphError("dual has loops")
    if eg.regular_degree() != 3:
        raise GraphError("dual is not 3-regular")
    tau = cheeger_time_exact(eg).value
    e = exponent_for(tau)
    return ConvergenceBound(tau, e, e < 2, tau_m, fitted_c)


def fit_constant(sizes: Sequence[int], means: Sequence[float], exponent: float) -> float:
    """Smallest c with mean <= c * n**exponent over the given data (empirical)."""
    return max(m / n ** exponent for n, m in zip(sizes, means))
