"""Annihilating and coalescing random walks, their coupling, and hyperedge switching.

Time is discrete and exactly one particle (or cluster) moves per step. The
mover is chosen uniformly and jumps to a uniform neighbour, counting
parallel edges with multiplicity. Self-loops are not allowed in walk graphs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence, Union

import networkx as nx
import numpy as np

from .hypergraph import Hypergraph, ParticleConfig
from .indexed import IndexedSet
from .rng import run_trials
from .signed_graph import GraphError

Adjacency = tuple[tuple[int, ...], ...]
GraphLike = Union[Hypergraph, nx.Graph, nx.MultiGraph, Sequence[Sequence[int]]]


def adjacency(graph: GraphLike) -> Adjacency:
    """Neighbour lists (with multiplicity) for a loopless graph.

    Accepts a hypergraph whose hyperedges all have two vertices, a networkx
    graph on ``0..n-1``, or neighbour lists.
    """
    if isinstance(graph, Hypergraph):
        adj: list[list[int]] = [[] for _ in range(graph.n_vertices)]
        for k, he in enumerate(graph.hyperedges):
            if len(he) != 2:
                raise GraphError(f"hyperedge {k} has {len(he)} vertices; walks need a loopless graph")
            a, b = he
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(x) for x in adj)
    if isinstance(graph, nx.Graph):
        n = graph.number_of_nodes()
        if set(graph.nodes) != set(range(n)):
            raise GraphError("networkx graph nodes must be 0..n-1")
        adj = [[] for _ in range(n)]
        for a, b in graph.edges():
            if a == b:
                raise GraphError("self-loops are not allowed in walk graphs")
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(x) for x in adj)
    out = tuple(tuple(int(v) for v in nb) for nb in graph)
    for i, nb in enumerate(out):
        if i in nb:
            raise GraphError("self-loops are not allowed in walk graphs")
    return out


def _check_walkable(adj: Adjacency) -> None:
    for i, nb in enumerate(adj):
        if not nb:
            raise GraphError(f"vertex {i} has no neighbour")


# ------------------------------------------------------------------ CRW

@dataclass
class CrwState:
    """Cluster positions plus the balls each cluster carries."""

    positions: list[int]
    members: list[list[int]]

    @classmethod
    def from_positions(cls, positions: Sequence[int]) -> "CrwState":
        st = cls([], [])
        where: dict[int, int] = {}
        for ball, v in enumerate(positions):
            if v in where:
                st.members[where[v]].append(ball)
            else:
                where[v] = len(st.positions)
                st.positions.append(v)
                st.members.append([ball])
        return st

    @property
    def n_clusters(self) -> int:
        return len(self.positions)

    def ball_positions(self) -> list[int]:
        out = [0] * sum(len(m) for m in self.members)
        for v, ms in zip(self.positions, self.members):
            for b in ms:
                out[b] = v
        return out


def step_crw(adj: Adjacency, state: CrwState, rng: random.Random) -> CrwState:
    """Move one uniformly chosen cluster; merge with whatever sits at the target."""
    if not state.positions:
        raise GraphError("no cluster to move")
    i = rng.randrange(len(state.positions))
    nb = adj[state.positions[i]]
    v = nb[rng.randrange(len(nb))]
    try:
        j = state.positions.index(v)
    except ValueError:
        state.positions[i] = v
        return state
    state.members[j].extend(state.members[i])
    state.members[i] = state.members[-1]
    state.positions[i] = state.positions[-1]
    state.members.pop()
    state.positions.pop()
    return state


def run_crw(adj: Adjacency, positions: Sequence[int], rng: random.Random,
            max_steps: int = 10**7) -> int | None:
    """Steps until one cluster remains, or None if the cap is hit."""
    _check_walkable(adj)
    st = CrwState.from_positions(positions)
    t = 0
    while st.n_clusters > 1:
        if t >= max_steps:
            return None
        step_crw(adj, st, rng)
        t += 1
    return t


# ------------------------------------------------------------------ ARW

@dataclass
class ArwState:
    occupied: IndexedSet

    @classmethod
    def from_config(cls, config: Sequence[int]) -> "ArwState":
        return cls(IndexedSet(len(config), [v for v, x in enumerate(config) if x]))

    def config(self) -> ParticleConfig:
        return tuple(1 if v in self.occupied else 0 for v in range(len(self.occupied.pos)))


def step_arw(adj: Adjacency, state: ArwState, rng: random.Random) -> ArwState:
    """Move one uniformly chosen particle; two particles on one vertex both vanish."""
    items = state.occupied.items
    if not items:
        raise GraphError("no particle to move")
    u = items[rng.randrange(len(items))]
    nb = adj[u]
    v = nb[rng.randrange(len(nb))]
    state.occupied.remove(u)
    state.occupied.toggle(v)
    return state


def run_arw(adj: Adjacency, config: Sequence[int], rng: random.Random,
            max_steps: int = 10**7) -> int | None:
    """Steps until at most one particle remains (zero for even starts)."""
    _check_walkable(adj)
    st = ArwState.from_config(config)
    t = 0
    while len(st.occupied) > 1:
        if t >= max_steps:
            return None
        step_arw(adj, st, rng)
        t += 1
    return t


# ---------------------------------------------------------------- switching

def eligible_hyperedges(h: Hypergraph, config: Sequence[int]) -> list[int]:
    return [k for k, he in enumerate(h.hyperedges) if any(config[v] for v in he)]


def _toggle(config: Sequence[int], he: Sequence[int]) -> ParticleConfig:
    out = list(config)
    for v in he:
        out[v] ^= 1
    return tuple(out)


def step_switching(h: Hypergraph, config: Sequence[int], scheduler: str | int,
                   rng: random.Random | None = None) -> tuple[ParticleConfig, int]:
    """Fire one occupied hyperedge and return ``(new config, hyperedge id)``.

    Schedulers: ``"uniform"`` picks uniformly among hyperedges holding a
    ball; ``"clause-first"`` picks a uniform occupied vertex and then a
    uniform hyperedge through it (the triangle-first rule of the triad
    dynamics at p = 1/3); an int fires that hyperedge.
    """
    if isinstance(scheduler, int) and not isinstance(scheduler, bool):
        k = scheduler
        if not any(config[v] for v in h.hyperedges[k]):
            raise GraphError(f"hyperedge {k} holds no ball")
        return _toggle(config, h.hyperedges[k]), k
    if rng is None:
        raise ValueError("random schedulers need an rng")
    if scheduler == "uniform":
        elig = eligible_hyperedges(h, config)
        if not elig:
            raise GraphError("no hyperedge holds a ball")
        k = elig[rng.randrange(len(elig))]
    elif scheduler == "clause-first":
        occ = [v for v, x in enumerate(config) if x]
        if not occ:
            raise GraphError("no ball to move")
        v = occ[rng.randrange(len(occ))]
        inc = h.incidence[v]
        k = inc[rng.randrange(len(inc))]
    else:
        raise ValueError(f"unknown scheduler {scheduler!r}")
    return _toggle(config, h.hyperedges[k]), k


@dataclass
class SwitchingRun:
    steps: int
    schedule: list[int]
    final: ParticleConfig
    emptied: bool


def run_switching(h: Hypergraph, config: Sequence[int], rng: random.Random,
                  max_steps: int, record: bool = True) -> SwitchingRun:
    """Clause-first switching until no ball is left or ``max_steps`` fire.

    The occupied set is kept incrementally, so the draw sequence matches a
    walk-based XOR-SAT solver on the corresponding formula.
    """
    occ = IndexedSet(h.n_vertices, [v for v, x in enumerate(config) if x])
    inc, hes = h.incidence, h.hyperedges
    sched: list[int] = []
    t = 0
    while len(occ) and t < max_steps:
        v = occ.items[rng.randrange(len(occ))]
        k = inc[v][rng.randrange(len(inc[v]))]
        for u in hes[k]:
            occ.toggle(u)
        if record:
            sched.append(k)
        t += 1
    final = tuple(1 if v in occ else 0 for v in range(h.n_vertices))
    return SwitchingRun(t, sched, final, not len(occ))


# ----------------------------------------------------------------- coupling

@dataclass
class CoupledResult:
    t_arw: int | None
    t_crw: int | None
    parity_ok: bool
    eta_consistent: bool
    ghosts_at_end: bool
    eta_sizes: list[int] = field(default_factory=list)

    @property
    def dominated(self) -> bool:
        return self.t_arw is not None and self.t_crw is not None and self.t_arw <= self.t_crw


def _eta(st: CrwState) -> set[int]:
    return {v for v, ms in zip(st.positions, st.members) if len(ms) % 2}


def run_coupled(adj: Adjacency, config: Sequence[int], rng: random.Random,
                max_steps: int = 10**7, record: bool = False) -> CoupledResult:
    """Drive coalescing clusters and read the annihilating walk off their parities.

    The annihilating configuration at time t is the set of vertices holding
    an odd number of the original balls. ``t_arw`` is the first time it has
    at most one vertex, ``t_crw`` the first time a single cluster remains.
    """
    _check_walkable(adj)
    balls = [v for v, x in enumerate(config) if x]
    if not balls:
        raise GraphError("no balls")
    st = CrwState.from_positions(balls)
    floor = len(balls) % 2
    t = 0
    t_arw = 0 if len(_eta(st)) <= floor else None
    t_crw = 0 if st.n_clusters == 1 else None
    parity_ok = eta_ok = True
    prev = len(_eta(st))
    sizes = [prev] if record else []
    while t_crw is None and t < max_steps:
        step_crw(adj, st, rng)
        t += 1
        eta = _eta(st)
        # recompute from individual trajectories as a cross-check
        counts: dict[int, int] = {}
        for v in st.ball_positions():
            counts[v] = counts.get(v, 0) + 1
        if eta != {v for v, c in counts.items() if c % 2}:
            eta_ok = False
        if len(eta) % 2 != floor or (len(eta) != prev and prev - len(eta) != 2):
            parity_ok = False
        prev = len(eta)
        if record:
            sizes.append(prev)
        if t_arw is None and prev <= floor:
            t_arw = t
        if st.n_clusters == 1:
            t_crw = t
    ghosts = t_crw is None or len(_eta(st)) == floor
    return CoupledResult(t_arw, t_crw, parity_ok, eta_ok, ghosts, sizes)


# ------------------------------------------------------------- meeting time

def meeting_time(adj: Adjacency, i: int, j: int, rng: random.Random,
                 max_steps: int = 10**7) -> int | None:
    """Two walkers; each step one of them, chosen uniformly, moves."""
    x, y = i, j
    t = 0
    while x != y:
        if t >= max_steps:
            return None
        if rng.random() < 0.5:
            nb = adj[x]
            x = nb[rng.randrange(len(nb))]
        else:
            nb = adj[y]
            y = nb[rng.randrange(len(nb))]
        t += 1
    return t


def meeting_time_exact(adj: Adjacency) -> np.ndarray:
    """Expected meeting time for every start pair, by solving the absorbing chain."""
    _check_walkable(adj)
    n = len(adj)
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    idx = {pr: k for k, pr in enumerate(pairs)}
    m = len(pairs)
    a_mat = np.eye(m)
    rhs = np.ones(m)
    for (a, b), k in idx.items():
        for mover, other, first in ((a, b, True), (b, a, False)):
            nb = adj[mover]
            w = 0.5 / len(nb)
            for z in nb:
                nxt = (z, other) if first else (other, z)
                if nxt[0] != nxt[1]:
                    a_mat[k, idx[nxt]] -= w
    sol = np.linalg.solve(a_mat, rhs)
    out = np.zeros((n, n))
    for (a, b), k in idx.items():
        out[a, b] = sol[k]
    return out


@dataclass
class MeetingEstimate:
    table: dict[tuple[int, int], tuple[float, float]]  # pair -> (mean, sem)

    @property
    def worst_pair(self) -> tuple[int, int]:
        return max(self.table, key=lambda pr: self.table[pr][0])

    @property
    def tau(self) -> float:
        return self.table[self.worst_pair][0] if self.table else 0.0

    @property
    def tau_sem(self) -> float:
        return self.table[self.worst_pair][1] if self.table else 0.0


def _meet_trial(rng: random.Random, adj: Adjacency, i: int, j: int) -> int:
    t = meeting_time(adj, i, j, rng)
    assert t is not None
    return t


def estimate_meeting_time(adj: Adjacency, trials: int, seed: int,
                          pairs: Sequence[tuple[int, int]] | None = None,
                          max_pairs: int = 200, threads: int | None = None) -> MeetingEstimate:
    """Monte-Carlo meeting time per start pair; the worst pair gives the estimate.

    All unordered pairs are used up to ``max_pairs``; beyond that a seeded
    sample of pairs is taken.
    """
    _check_walkable(adj)
    n = len(adj)
    if pairs is None:
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
        if len(pairs) > max_pairs:
            pairs = random.Random(seed).sample(pairs, max_pairs)
    table: dict[tuple[int, int], tuple[float, float]] = {}
    for k, (a, b) in enumerate(pairs):
        if a == b:
            table[(a, b)] = (0.0, 0.0)
            continue
        ts = np.array(run_trials(_meet_trial, trials, seed, (adj, a, b), threads,
                                   stream=(a, b)),
                      dtype=float)
        sem = float(ts.std(ddof=1) / np.sqrt(len(ts))) if len(ts) > 1 else 0.0
        table[(a, b)] = (float(ts.mean()), sem)
    return MeetingEstimate(table)
