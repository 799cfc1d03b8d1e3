"""Reachability and recurrence for the nondeterministic hyperedge switching process.

Two deciders are provided.

``method="gf2"`` is the linear-algebra criterion: ``w2`` is declared
reachable from ``w1`` iff the parity system of the pair (one equation per
vertex: the hyperedges containing it are used an odd number of times
exactly when ``w1`` and ``w2`` differ there)
is solvable and no component goes from all-zero to non-zero. Solvability is
necessary for reachability on every hypergraph, but it is not sufficient:
on ``{0,1,2}, {0,1,3}, {0,1,4}`` the pair ``w1 = {0,1}``,
``w2 = {0,1,2,3}`` passes the test yet only ``{0,1}``, ``{2}``, ``{3}``
and ``{4}`` are reachable. The all-ones configuration is another
counterexample: it has no predecessor, so it is never reachable from
anywhere else.

``method="exact"`` (the default) uses the linear test as a fast filter and
settles the rest by explicit search over each connected component's
configurations. Components evolve independently, so the search cost is
``2**(largest component)`` rather than ``2**n``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Sequence

from .gf2 import Gf2Solution, Gf2System, Gf2Unsat, solve_gf2
from .hypergraph import (Hypergraph, ParticleConfig, config_to_mask,
                         dual_is_connected, has_no_graph_edges)
from .signed_graph import EdgeState, GraphError, SignedGraph, count_imbalanced

DEFAULT_MAX_COMPONENT = 20


class SearchTooLarge(GraphError):
    pass


def build_system(h: Hypergraph, w1: Sequence[int], w2: Sequence[int]) -> Gf2System:
    """One equation per vertex over the hyperedge variables; empty left sides allowed."""
    _check_configs(h, w1, w2)
    rows = []
    for v in range(h.n_vertices):
        mask = 0
        for k in h.incidence[v]:
            mask ^= 1 << k
        rows.append((mask, (w1[v] ^ w2[v]) & 1))
    return Gf2System(h.n_hyperedges, tuple(rows))


def flip_config(w: Sequence[int], hyperedge: Sequence[int]) -> ParticleConfig:
    """Toggle ``w`` on the vertices of ``hyperedge`` (no legality check)."""
    out = list(w)
    for v in hyperedge:
        out[v] ^= 1
    return tuple(out)


def _check_configs(h: Hypergraph, *configs: Sequence[int]) -> None:
    for c in configs:
        if len(c) != h.n_vertices:
            raise GraphError(f"configuration has length {len(c)}, hypergraph has {h.n_vertices} vertices")
        if any(x not in (0, 1) for x in c):
            raise GraphError("configurations must be 0/1 vectors")


def _require_no_graph_edges(h: Hypergraph) -> None:
    if not has_no_graph_edges(h):
        raise GraphError("graph edges present: every hyperedge must have at least 3 vertices")


# ------------------------------------------------------------------ linear test

def gf2_criterion(h: Hypergraph, w1: Sequence[int], w2: Sequence[int]) -> bool:
    """Solvability of the parity system plus the all-zero component restriction."""
    _check_configs(h, w1, w2)
    for comp in h.components:
        if not any(w1[v] for v in comp) and any(w2[v] for v in comp):
            return False
    return bool(solve_gf2(build_system(h, w1, w2)))


# ---------------------------------------------------------------- exact search

@lru_cache(maxsize=8192)
def _forward_closure(masks: tuple[int, ...], start: int) -> frozenset[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for m in masks:
            if x & m:
                y = x ^ m
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return frozenset(seen)


@lru_cache(maxsize=8192)
def _backward_closure(masks: tuple[int, ...], target: int) -> frozenset[int]:
    seen = {target}
    stack = [target]
    while stack:
        x = stack.pop()
        for m in masks:
            y = x ^ m
            if y & m and y not in seen:
                seen.add(y)
                stack.append(y)
    return frozenset(seen)


def _local(h: Hypergraph, comp: Sequence[int], w: Sequence[int]) -> tuple[tuple[int, ...], int]:
    pos = {v: i for i, v in enumerate(comp)}
    masks = []
    for he, m in zip(h.hyperedges, h.masks):
        if he[0] in pos:
            masks.append(sum(1 << pos[v] for v in he))
    start = sum(1 << i for i, v in enumerate(comp) if w[v])
    return tuple(masks), start


def _guard(comp: Sequence[int], limit: int) -> None:
    if len(comp) > limit:
        raise SearchTooLarge(
            f"component with {len(comp)} vertices exceeds the exact-search limit {limit}; "
            "raise max_component or use method='gf2' (necessary condition only)")


def reachable_set(h: Hypergraph, w1: Sequence[int],
                  max_component: int = DEFAULT_MAX_COMPONENT) -> set[ParticleConfig]:
    """All configurations reachable from ``w1`` (including ``w1``)."""
    _check_configs(h, w1)
    per_comp = []
    for comp in h.components:
        _guard(comp, max_component)
        masks, start = _local(h, comp, w1)
        per_comp.append((comp, _forward_closure(masks, start)))
    out: list[list[int]] = [[0] * h.n_vertices]
    for comp, states in per_comp:
        nxt = []
        for partial in out:
            for s in states:
                c = list(partial)
                for i, v in enumerate(comp):
                    c[v] = (s >> i) & 1
                nxt.append(c)
        out = nxt
    return {tuple(c) for c in out}


def is_reachable(h: Hypergraph, w1: Sequence[int], w2: Sequence[int], method: str = "exact",
                 max_component: int = DEFAULT_MAX_COMPONENT) -> bool:
    """Can the switching process take ``w1`` to ``w2``?

    Requires every hyperedge to have at least three vertices.
    """
    _require_no_graph_edges(h)
    _check_configs(h, w1, w2)
    if method == "gf2":
        return gf2_criterion(h, w1, w2)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if not gf2_criterion(h, w1, w2):
        return False
    for comp in h.components:
        if all(w1[v] == w2[v] for v in comp):
            continue
        _guard(comp, max_component)
        masks, start = _local(h, comp, w1)
        _, target = _local(h, comp, w2)
        if target not in _forward_closure(masks, start):
            return False
    return True


def is_recurrent(h: Hypergraph, w1: Sequence[int], w2: Sequence[int], method: str = "exact",
                 max_component: int = DEFAULT_MAX_COMPONENT) -> bool:
    """Is ``w2`` recurrent for the process started at ``w1``?

    Recurrent means reachable from ``w1`` and reachable again from every
    configuration it can lead to (membership in a terminal strongly connected
    class). ``method="gf2"`` runs the two-test procedure: if the linear test
    says 0 is reachable, only 0 is recurrent; otherwise ``w2`` is recurrent
    iff the linear test says it is reachable.
    """
    _require_no_graph_edges(h)
    _check_configs(h, w1, w2)
    if not dual_is_connected(h):
        raise GraphError("hypergraph must be connected")
    if not any(w1):
        raise GraphError("starting configuration must not be all-zero")
    zero = (0,) * h.n_vertices
    if method == "gf2":
        if gf2_criterion(h, w1, zero):
            return not any(w2)
        return gf2_criterion(h, w1, w2)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    comp = tuple(range(h.n_vertices))
    _guard(comp, max_component)
    masks = h.masks
    a, b = config_to_mask(w1), config_to_mask(w2)
    if b not in _forward_closure(masks, a):
        return False
    return _forward_closure(masks, b) <= _backward_closure(masks, b)


def witness_path(h: Hypergraph, w1: Sequence[int], w2: Sequence[int],
                 max_component: int = DEFAULT_MAX_COMPONENT) -> list[int] | None:
    """A legal schedule of hyperedge ids taking ``w1`` to ``w2``, or None.

    Each scheduled hyperedge holds a ball when it fires. Components are
    solved one after another by breadth-first search, so each component's
    part of the schedule is as short as possible.
    """
    if not is_reachable(h, w1, w2, max_component=max_component):
        return None
    schedule: list[int] = []
    for comp in h.components:
        if all(w1[v] == w2[v] for v in comp):
            continue
        pos = {v: i for i, v in enumerate(comp)}
        ids = [k for k, he in enumerate(h.hyperedges) if he[0] in pos]
        masks = [sum(1 << pos[v] for v in h.hyperedges[k]) for k in ids]
        _, start = _local(h, comp, w1)
        _, target = _local(h, comp, w2)
        parent: dict[int, tuple[int, int]] = {start: (-1, -1)}
        queue = deque([start])
        while queue and target not in parent:
            x = queue.popleft()
            for k, m in zip(ids, masks):
                if x & m:
                    y = x ^ m
                    if y not in parent:
                        parent[y] = (x, k)
                        queue.append(y)
        path = []
        x = target
        while x != start:
            x, k = parent[x]
            path.append(k)
        schedule.extend(reversed(path))
    return schedule


def replay(h: Hypergraph, w: Sequence[int], schedule: Sequence[int]) -> ParticleConfig:
    """Apply a schedule, raising if some hyperedge is empty when it fires."""
    cur = tuple(w)
    for step, k in enumerate(schedule):
        he = h.hyperedges[k]
        if not any(cur[v] for v in he):
            raise GraphError(f"step {step}: hyperedge {k} holds no ball")
        cur = flip_config(cur, he)
    return cur


def forced_to_one(sol: Gf2Solution | Gf2Unsat, j: int) -> bool:
    """True iff every solution sets variable ``j`` to 1."""
    return bool(sol) and sol.forced(j) == 1


# ------------------------------------------------------ graph-dual recurrence

class Recurrence(Enum):
    BALANCED_REACHABLE = "balanced"
    ONE_IMBALANCED = "one-imbalanced"


@dataclass(frozen=True)
class RecurrenceClass:
    kind: Recurrence
    case: int

    @property
    def target_imbalance(self) -> int:
        return 0 if self.kind is Recurrence.BALANCED_REACHABLE else 1


def classify_recurrent_graphdual(g: SignedGraph, s0: EdgeState | Sequence[int]) -> RecurrenceClass:
    """Which states are recurrent when every edge lies in at most two triangles.

    Case 1: some edge lies in exactly one triangle; recurrent states are the
    balanced states reachable from ``s0``. Cases 2 and 3: every edge lies in
    exactly two triangles, and the parity of the imbalanced-triangle count
    decides between balanced states (even) and states with exactly one
    imbalanced triangle (odd).
    """
    counts = [len(ts) for ts in g.edge_triangles]
    if any(c >= 3 for c in counts):
        raise GraphError("some edge lies in three or more triangles; the dual is not a graph")
    if g.n_triangles == 0:
        raise GraphError("graph has no triangles")
    used = [e for e, c in enumerate(counts) if c > 0]
    dual = Hypergraph(g.n_triangles, [g.edge_triangles[e] for e in used], used)
    if not dual_is_connected(dual):
        raise GraphError("triadic dual is disconnected")
    if any(c == 1 for c in counts):
        return RecurrenceClass(Recurrence.BALANCED_REACHABLE, 1)
    if count_imbalanced(g, s0) % 2 == 0:
        return RecurrenceClass(Recurrence.BALANCED_REACHABLE, 2)
    return RecurrenceClass(Recurrence.ONE_IMBALANCED, 3)


__all__ = [
    "SearchTooLarge", "build_system", "flip_config", "gf2_criterion", "reachable_set",
    "is_reachable", "is_recurrent", "witness_path", "replay", "forced_to_one",
    "Recurrence", "RecurrenceClass", "classify_recurrent_graphdual"
]
