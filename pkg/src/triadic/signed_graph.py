"""Signed graphs, their triangle structure, and the graph families used in experiments."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


class GraphError(ValueError):
    pass


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def enumerate_triangles(vertices: Iterable[int], edges: Iterable[Edge]) -> list[Triangle]:
    """All 3-cliques as sorted vertex triples, in lexicographic order."""
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    out = []
    for u in sorted(adj):
        higher = sorted(w for w in adj[u] if w > u)
        for i, v in enumerate(higher):
            for w in higher[i + 1:]:
                if w in adj[v]:
                    out.append((u, v, w))
    return out


class SignedGraph:
    """Undirected simple graph with stable edge and triangle ids.

    Edge ids follow input order; triangle ids follow the sorted triple order.
    The +/-1 labels live in :class:`EdgeState`, so one topology can carry
    many states.
    """

    def __init__(self, edges: Iterable[Sequence[int]], vertices: Iterable[int] | None = None):
        edge_list: list[Edge] = []
        index: dict[Edge, int] = {}
        for item in edges:
            u, v = int(item[0]), int(item[1])
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if u < 0 or v < 0:
                raise GraphError(f"negative vertex id in edge ({u}, {v})")
            key = _norm(u, v)
            if key in index:
                raise GraphError(f"duplicate edge {key}")
            index[key] = len(edge_list)
            edge_list.append(key)
        vset = set(vertices) if vertices is not None else set()
        for u, v in edge_list:
            vset.add(u)
            vset.add(v)
        self.vertices: tuple[int, ...] = tuple(sorted(vset))
        self.edges: tuple[Edge, ...] = tuple(edge_list)
        self._index = index
        self.triangles: tuple[Triangle, ...] = tuple(enumerate_triangles(self.vertices, edge_list))
        self.triangle_edges: tuple[tuple[int, int, int], ...] = tuple(
            (index[(a, b)], index[(a, c)], index[(b, c)]) for a, b, c in self.triangles
        )
        inc: list[list[int]] = [[] for _ in edge_list]
        for t, tri in enumerate(self.triangle_edges):
            for e in tri:
                inc[e].append(t)
        self.edge_triangles: tuple[tuple[int, ...], ...] = tuple(tuple(x) for x in inc)
        self._tri_index = {t: i for i, t in enumerate(self.triangles)}

    def __repr__(self) -> str:
        return (f"SignedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, "
                f"|T|={len(self.triangles)})")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[_norm(u, v)]
        except KeyError:
            raise GraphError(f"no edge ({u}, {v})") from None

    def triangle_id(self, t: Sequence[int] | int) -> int:
        if isinstance(t, int):
            if not 0 <= t < len(self.triangles):
                raise GraphError(f"unknown triangle id {t}")
            return t
        key = tuple(sorted(int(x) for x in t))
        if key not in self._tri_index:
            raise GraphError(f"{tuple(t)} is not a triangle of the graph")
        return self._tri_index[key]

    def all_positive(self) -> "EdgeState":
        return EdgeState((1,) * self.n_edges)

    def all_negative(self) -> "EdgeState":
        return EdgeState((-1,) * self.n_edges)

    def state(self, labels: Iterable[int]) -> "EdgeState":
        s = EdgeState(tuple(int(x) for x in labels))
        if len(s) != self.n_edges:
            raise GraphError(f"state has {len(s)} labels, graph has {self.n_edges} edges")
        return s

    def state_from_negatives(self, negative: Iterable[int]) -> "EdgeState":
        labels = [1] * self.n_edges
        for e in negative:
            labels[e] = -1
        return EdgeState(tuple(labels))


@dataclass(frozen=True)
class EdgeState:
    """Immutable vector of +/-1 labels indexed by edge id."""

    labels: tuple[int, ...]

    def __post_init__(self):
        if any(x not in (1, -1) for x in self.labels):
            raise GraphError("edge labels must be +1 or -1")

    def __len__(self) -> int:
        return len(self.labels)

    def __getitem__(self, e: int) -> int:
        return self.labels[e]

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)

    def negatives(self) -> list[int]:
        return [e for e, x in enumerate(self.labels) if x < 0]


def flip_edge(state: EdgeState, e: int) -> EdgeState:
    if not 0 <= e < len(state):
        raise GraphError(f"edge id {e} out of range")
    labels = list(state.labels)
    labels[e] = -labels[e]
    return EdgeState(tuple(labels))


def triangle_sign(g: SignedGraph, state: Sequence[int] | EdgeState, t: int) -> int:
    a, b, c = g.triangle_edges[t]
    return state[a] * state[b] * state[c]


def is_balanced(g: SignedGraph, state: EdgeState, t: Sequence[int] | int) -> bool:
    return triangle_sign(g, state, g.triangle_id(t)) == 1


def imbalanced_triangles(g: SignedGraph, state: Sequence[int] | EdgeState) -> list[int]:
    return [t for t in range(g.n_triangles) if triangle_sign(g, state, t) == -1]


def count_imbalanced(g: SignedGraph, state: Sequence[int] | EdgeState) -> int:
    """The potential: number of triangles whose label product is -1."""
    return len(imbalanced_triangles(g, state))


def is_triadic_simplex(g: SignedGraph) -> bool:
    return all(len(ts) >= 1 for ts in g.edge_triangles)


def is_2_regular_simplex(g: SignedGraph) -> bool:
    return g.n_edges > 0 and all(len(ts) == 2 for ts in g.edge_triangles)


def max_triangles_per_edge(g: SignedGraph) -> int:
    return max((len(ts) for ts in g.edge_triangles), default=0)


# ---------------------------------------------------------------- generators

def generate_triadic_cycle(n: int, layout: str = "fan") -> SignedGraph:
    """Ring of ``n`` triangles, consecutive ones sharing an edge.

    ``layout="fan"`` glues an open fan around a hub (a wheel; valid for
    n >= 4). ``layout="strip"`` closes a zig-zag strip into an annulus, the
    square of the n-cycle, which has extra 3-cliques unless n >= 7. Both give
    the same triangle/edge incidence: each triangle owns one private edge and
    shares the other two with its ring neighbours. No simple graph realises
    n = 3: its three shared edges would themselves form a fourth triangle.
    """
    if layout == "fan":
        if n < 4:
            raise GraphError("a triadic cycle needs n >= 4 triangles in a simple graph")
        hub = n
        edges = [(hub, i) for i in range(n)] + [(i, (i + 1) % n) for i in range(n)]
        return SignedGraph(edges)
    if layout == "strip":
        if n < 7:
            raise GraphError("strip layout needs n >= 7 (smaller rings create extra triangles)")
        edges = [(i, (i + 1) % n) for i in range(n)] + [(i, (i + 2) % n) for i in range(n)]
        return SignedGraph(edges)
    raise GraphError(f"unknown layout {layout!r}")


def triangular_lattice_section(k: int) -> SignedGraph:
    """Triangles of a k-by-k rhombic patch of the triangular lattice, open boundary.

    Vertices (i, j) with 0 <= i, j <= k are numbered i * (k + 1) + j; the
    patch has 2 k^2 triangles and its boundary edges lie in one triangle.
    """
    if k < 1:
        raise GraphError("k must be >= 1")
    vid = lambda i, j: i * (k + 1) + j  # noqa: E731
    edges = []
    for i in range(k + 1):
        for j in range(k + 1):
            if i < k:
                edges.append((vid(i, j), vid(i + 1, j)))
            if j < k:
                edges.append((vid(i, j), vid(i, j + 1)))
            if i < k and j < k:
                edges.append((vid(i, j), vid(i + 1, j + 1)))
    return SignedGraph(edges)


def triangulated_torus(k: int) -> SignedGraph:
    """Periodic k-by-k triangular grid: a 2-regular triadic simplex with 2 k^2 triangles."""
    if k < 4:
        raise GraphError("torus triangulation needs k >= 4 to avoid extra 3-cliques")
    vid = lambda i, j: (i % k) * k + (j % k)  # noqa: E731
    edges = []
    for i in range(k):
        for j in range(k):
            edges.append((vid(i, j), vid(i + 1, j)))
            edges.append((vid(i, j), vid(i, j + 1)))
            edges.append((vid(i, j), vid(i + 1, j + 1)))
    return SignedGraph(edges)


def complete_graph(n: int) -> SignedGraph:
    return SignedGraph(combinations(range(n), 2))


def octahedron() -> SignedGraph:
    """K_{2,2,2}: 8 triangles, every edge in exactly two of them."""
    parts = [(0, 1), (2, 3), (4, 5)]
    edges = [(u, v) for (a, b) in combinations(parts, 2) for u in a for v in b]
    return SignedGraph(edges)


# ---------------------------------------------------------------- text format

def parse_edge_list(text: str) -> tuple[SignedGraph, EdgeState]:
    """Parse ``u v sign`` lines (``#`` comments). Returns graph and labels."""
    edges, labels = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise GraphError(f"line {lineno}: expected 'u v sign', got {raw!r}")
        try:
            u, v, s = int(parts[0]), int(parts[1]), int(parts[2])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer field in {raw!r}") from None
        if s not in (1, -1):
            raise GraphError(f"line {lineno}: sign must be +1 or -1")
        edges.append((u, v))
        labels.append(s)
    g = SignedGraph(edges)
    return g, EdgeState(tuple(labels))


def format_edge_list(g: SignedGraph, state: EdgeState | None = None) -> str:
    state = state or g.all_positive()
    lines = [f"{u} {v} {'+1' if s > 0 else '-1'}" for (u, v), s in zip(g.edges, state)]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> tuple[SignedGraph, EdgeState]:
    with open(path) as fh:
        return parse_edge_list(fh.read())
