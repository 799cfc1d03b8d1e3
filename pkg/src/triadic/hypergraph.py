"""Hypergraphs with self-loops and the triadic dual of a signed graph.

Dual vertices are triangle ids; hyperedge ``k`` is the set of triangles that
contain source edge ``source_edges[k]``. A hyperedge of size one is a
self-loop, so the edge/hyperedge correspondence stays a bijection.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from .signed_graph import GraphError, SignedGraph, triangle_sign

ParticleConfig = tuple[int, ...]


class Hypergraph:
    """Vertices ``0..n_vertices-1`` and an ordered list of hyperedges.

    Hyperedges are stored as sorted vertex tuples. Repeated hyperedges are
    allowed and keep distinct ids (two private edges of one triangle give two
    self-loops on the same dual vertex).
    """

    def __init__(self, n_vertices: int, hyperedges: Iterable[Iterable[int]],
                 source_edges: Sequence[int] | None = None):
        self.n_vertices = int(n_vertices)
        edges = []
        for k, he in enumerate(hyperedges):
            verts = tuple(sorted(set(int(v) for v in he)))
            if not verts:
                raise GraphError(f"hyperedge {k} is empty")
            if verts[0] < 0 or verts[-1] >= self.n_vertices:
                raise GraphError(f"hyperedge {k} has a vertex out of range")
            edges.append(verts)
        self.hyperedges: tuple[tuple[int, ...], ...] = tuple(edges)
        if source_edges is None:
            source_edges = range(len(edges))
        self.source_edges: tuple[int, ...] = tuple(source_edges)
        if len(self.source_edges) != len(edges):
            raise GraphError("source_edges must have one entry per hyperedge")

    def __repr__(self) -> str:
        return f"Hypergraph(n_vertices={self.n_vertices}, n_hyperedges={self.n_hyperedges})"

    @property
    def n_hyperedges(self) -> int:
        return len(self.hyperedges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Hyperedges as vertex bitmasks."""
        return tuple(sum(1 << v for v in he) for he in self.hyperedges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """For each vertex, the ids of hyperedges containing it (ascending)."""
        inc: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for k, he in enumerate(self.hyperedges):
            for v in he:
                inc[v].append(k)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Vertex sets of connected components (self-loops ignored; isolated vertices count)."""
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for he in self.hyperedges:
            r = find(he[0])
            for v in he[1:]:
                s = find(v)
                if s != r:
                    parent[s] = r
        groups: dict[int, list[int]] = {}
        for v in range(self.n_vertices):
            groups.setdefault(find(v), []).append(v)
        return tuple(sorted(tuple(g) for g in groups.values()))

    def edge_sizes(self) -> list[int]:
        return [len(he) for he in self.hyperedges]

    def neighbours(self, v: int) -> list[int]:
        """Walk neighbours of ``v`` through size-2 hyperedges, with multiplicity."""
        out = []
        for k in self.incidence[v]:
            he = self.hyperedges[k]
            if len(he) == 2:
                out.append(he[1] if he[0] == v else he[0])
        return out

    def restrict(self, vertices: Sequence[int]) -> tuple["Hypergraph", list[int]]:
        """Sub-hypergraph induced on a union of components, relabelled to 0..k-1.

        Returns the sub-hypergraph and the list of original hyperedge ids kept.
        """
        pos = {v: i for i, v in enumerate(vertices)}
        kept, edges = [], []
        for k, he in enumerate(self.hyperedges):
            if he[0] in pos:
                if any(v not in pos for v in he):
                    raise GraphError("restriction must be a union of components")
                kept.append(k)
                edges.append([pos[v] for v in he])
        return Hypergraph(len(vertices), edges, [self.source_edges[k] for k in kept]), kept


def build_triadic_dual(g: SignedGraph) -> Hypergraph:
    """One dual vertex per triangle, one hyperedge per edge of ``g``.

    Raises if some edge lies in no triangle (the dual would have an empty hyperedge).
    """
    for e, ts in enumerate(g.edge_triangles):
        if not ts:
            u, v = g.edges[e]
            raise GraphError(f"edge {e} ({u}, {v}) lies in no triangle; graph is not a triadic simplex")
    return Hypergraph(g.n_triangles, g.edge_triangles, range(g.n_edges))


def dual_is_graph(d: Hypergraph) -> bool:
    """Every hyperedge has at most two vertices (a graph with loops)."""
    return all(len(he) <= 2 for he in d.hyperedges)


def dual_is_connected(d: Hypergraph) -> bool:
    return d.n_vertices > 0 and len(d.components) == 1


def has_no_graph_edges(d: Hypergraph) -> bool:
    """Every hyperedge has at least three vertices (vacuously true with no hyperedges)."""
    return all(len(he) >= 3 for he in d.hyperedges)


def state_to_particles(g: SignedGraph, state: Sequence[int]) -> ParticleConfig:
    """Ball on dual vertex t iff triangle t is imbalanced."""
    return tuple(1 if triangle_sign(g, state, t) == -1 else 0 for t in range(g.n_triangles))


def switch(h: Hypergraph, config: ParticleConfig, k: int) -> ParticleConfig:
    """Hyperedge switch: complement occupation on hyperedge ``k``.

    Requires at least one ball on the hyperedge.
    """
    he = h.hyperedges[k]
    if not any(config[v] for v in he):
        raise GraphError(f"hyperedge {k} holds no ball; switch is not allowed")
    out = list(config)
    for v in he:
        out[v] ^= 1
    return tuple(out)


# ------------------------------------------------------------- conversions

def config_to_mask(config: Sequence[int]) -> int:
    return sum(1 << i for i, x in enumerate(config) if x)


def mask_to_config(mask: int, n: int) -> ParticleConfig:
    return tuple((mask >> i) & 1 for i in range(n))


# -------------------------------------------------------------- text format

def format_hypergraph(h: Hypergraph) -> str:
    """``edge_id : t1 t2 ...`` per hyperedge; a leading comment records the vertex count."""
    lines = [f"# vertices {h.n_vertices}"]
    lines += [f"{src} : {' '.join(map(str, he))}" for src, he in zip(h.source_edges, h.hyperedges)]
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str, n_vertices: int | None = None) -> Hypergraph:
    """Inverse of :func:`format_hypergraph`.

    The vertex count comes from ``n_vertices``, a ``# vertices N`` line, or
    the largest vertex id seen, in that order of preference.
    """
    header_n = None
    ids, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#"):
            parts = line[1:].split()
            if len(parts) == 2 and parts[0] == "vertices":
                header_n = int(parts[1])
            continue
        if not line:
            continue
        if ":" not in line:
            raise GraphError(f"line {lineno}: expected 'edge_id : t1 t2 ...'")
        left, right = line.split(":", 1)
        try:
            ids.append(int(left))
            edges.append([int(x) for x in right.split()])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer field") from None
    n = n_vertices if n_vertices is not None else header_n
    if n is None:
        n = 1 + max((v for he in edges for v in he), default=-1)
    return Hypergraph(n, edges, ids)


def parse_config(text: str) -> ParticleConfig:
    """One 0/1 value per non-comment line (whitespace-separated values also accepted)."""
    vals = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        for tok in line.split():
            if tok not in ("0", "1"):
                raise GraphError(f"config values must be 0 or 1, got {tok!r}")
            vals.append(int(tok))
    return tuple(vals)


def format_config(config: Sequence[int]) -> str:
    return "\n".join(str(int(x)) for x in config) + "\n"
