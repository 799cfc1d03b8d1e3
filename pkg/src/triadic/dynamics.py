"""Probabilistic triad dynamics and convergence-time estimation.

One step picks an imbalanced triangle uniformly at random. If it has a
single negative edge, that edge turns positive with probability ``p``;
otherwise one of the two positive edges (uniformly) turns negative. A
triangle with three negative edges flips a uniformly chosen edge.

Random draws per step, in order: ``randrange(#imbalanced)`` for the
triangle, then ``random()`` for the ``p`` decision (single-negative case
only), then ``randrange(2)`` or ``randrange(3)`` for the edge.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .indexed import IndexedSet
from .reach import classify_recurrent_graphdual
from .rng import run_trials
from .signed_graph import (EdgeState, GraphError, SignedGraph, count_imbalanced,
                           imbalanced_triangles)

STRATEGIES = ("all-negative", "random", "explicit")


def p_minus(p: float) -> float:
    return min(p, 0.5)


@dataclass(frozen=True)
class DynamicsParams:
    p: float = 0.5
    seed: int = 0
    max_steps: int | None = None
    trials: int = 100

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie strictly between 0 and 1, got {self.p}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")

    def step_cap(self, g: SignedGraph) -> int:
        if self.max_steps is not None:
            return self.max_steps
        return 100 * max(1, g.n_triangles) ** 3


@dataclass(frozen=True)
class StepRecord:
    triangle: int
    edge: int
    potential: int


@dataclass
class Trajectory:
    initial_state: EdgeState
    initial_potential: int
    target: int
    final_state: EdgeState
    steps: int
    terminated: bool
    triangles: list[int] = field(default_factory=list)
    edges: list[int] = field(default_factory=list)
    potentials: list[int] = field(default_factory=list)

    @property
    def censored(self) -> bool:
        return not self.terminated

    @property
    def terminal_imbalance(self) -> int:
        return self.potentials[-1] if self.potentials else self.initial_potential

    def records(self) -> list[StepRecord]:
        return [StepRecord(*r) for r in zip(self.triangles, self.edges, self.potentials)]

    def potential_trace(self) -> list[int]:
        return [self.initial_potential, *self.potentials]

    def consistent_with(self, g: SignedGraph) -> bool:
        """Replay the flips from the initial state and compare every recorded potential."""
        labels = list(self.initial_state)
        for t, e, pot in zip(self.triangles, self.edges, self.potentials):
            if e not in g.triangle_edges[t]:
                return False
            labels[e] = -labels[e]
            if count_imbalanced(g, labels) != pot:
                return False
        return tuple(labels) == self.final_state.labels


def _as_p(params: DynamicsParams | float) -> float:
    p = params.p if isinstance(params, DynamicsParams) else float(params)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return p


def _choose_edge(labels: Sequence[int], tri_edges: tuple[int, int, int], p: float,
                 rng: random.Random) -> int:
    neg = [e for e in tri_edges if labels[e] < 0]
    if len(neg) == 1:
        if rng.random() < p:
            return neg[0]
        others = [e for e in tri_edges if labels[e] > 0]
        return others[rng.randrange(2)]
    return tri_edges[rng.randrange(3)]


def step(g: SignedGraph, state: EdgeState | Sequence[int], params: DynamicsParams | float,
         rng: random.Random) -> tuple[EdgeState, StepRecord]:
    """One step of the dynamics from ``state``.

    ``params`` may be a bare probability, in which case the closed range
    [0, 1] is accepted (useful for forcing a branch).
    """
    p = _as_p(params)
    labels = list(state)
    imb = imbalanced_triangles(g, labels)
    if not imb:
        raise GraphError("no imbalanced triangle: the state is already balanced")
    t = imb[rng.randrange(len(imb))]
    e = _choose_edge(labels, g.triangle_edges[t], p, rng)
    labels[e] = -labels[e]
    new = EdgeState(tuple(labels))
    return new, StepRecord(t, e, count_imbalanced(g, labels))


class _Engine:
    """Mutable state with an incrementally maintained imbalanced-triangle set."""

    def __init__(self, g: SignedGraph, labels: Sequence[int]):
        self.g = g
        self.labels = list(labels)
        self.imb = IndexedSet(g.n_triangles, imbalanced_triangles(g, self.labels))

    def step(self, p: float, rng: random.Random) -> tuple[int, int]:
        items = self.imb.items
        if not items:
            raise GraphError("no imbalanced triangle: the state is already balanced")
        t = items[rng.randrange(len(items))]
        e = _choose_edge(self.labels, self.g.triangle_edges[t], p, rng)
        self.labels[e] = -self.labels[e]
        for u in self.g.edge_triangles[e]:
            self.imb.toggle(u)
        return t, e


def _target_for(g: SignedGraph, s0: Sequence[int]) -> int:
    return classify_recurrent_graphdual(g, s0).target_imbalance


def run_until_recurrent(g: SignedGraph, s0: EdgeState | Sequence[int],
                        params: DynamicsParams | float, rng: random.Random,
                        max_steps: int | None = None, target: int | None = None,
                        record: bool = True, debug: bool = False) -> Trajectory:
    """Run until the imbalance count reaches the recurrent level, or censor at the step cap.

    The level (0 or 1) comes from the recurrence classification unless
    ``target`` is given. ``debug`` recounts the imbalanced set after every step.
    """
    p = _as_p(params)
    s0 = s0 if isinstance(s0, EdgeState) else EdgeState(tuple(s0))
    if target is None:
        target = _target_for(g, s0)
    if max_steps is None:
        max_steps = params.step_cap(g) if isinstance(params, DynamicsParams) else 100 * g.n_triangles ** 3
    eng = _Engine(g, s0.labels)
    pot0 = len(eng.imb)
    tris: list[int] = []
    edges: list[int] = []
    pots: list[int] = []
    steps = 0
    while len(eng.imb) > target and steps < max_steps:
        t, e = eng.step(p, rng)
        steps += 1
        if record:
            tris.append(t)
            edges.append(e)
            pots.append(len(eng.imb))
        if debug:
            assert sorted(eng.imb.items) == imbalanced_triangles(g, eng.labels)
    return Trajectory(s0, pot0, target, EdgeState(tuple(eng.labels)), steps,
                      len(eng.imb) <= target, tris, edges, pots)


# ------------------------------------------------------------- estimation

@dataclass
class ConvergenceStats:
    times: list[int]
    censored: list[bool]
    terminal_imbalance: list[int]
    strategy: str = "all-negative"
    p: float = 0.5

    @property
    def n_censored(self) -> int:
        return sum(self.censored)

    def _done(self) -> list[int]:
        return [t for t, c in zip(self.times, self.censored) if not c]

    @property
    def mean(self) -> float:
        done = self._done()
        return sum(done) / len(done) if done else math.nan

    @property
    def variance(self) -> float:
        done = self._done()
        if len(done) < 2:
            return 0.0 if done else math.nan
        m = self.mean
        return sum((t - m) ** 2 for t in done) / (len(done) - 1)

    @property
    def sem(self) -> float:
        done = self._done()
        return math.sqrt(self.variance / len(done)) if done else math.nan

    @property
    def max(self) -> int:
        return max(self.times)


def _tau_trial(rng: random.Random, g: SignedGraph, labels: tuple[int, ...] | None,
               p: float, max_steps: int, target: int | None) -> tuple[int, bool, int]:
    if labels is None:
        labels = tuple(rng.choice((1, -1)) for _ in range(g.n_edges))
    tr = run_until_recurrent(g, labels, p, rng, max_steps=max_steps, target=target, record=False)
    return tr.steps, tr.censored, count_imbalanced(g, tr.final_state)


def estimate_tau_sb(g: SignedGraph, params: DynamicsParams, strategy: str = "all-negative",
                    state: EdgeState | Sequence[int] | None = None,
                    threads: int | None = None) -> ConvergenceStats:
    """Convergence times over ``params.trials`` seeded runs.

    Strategies: ``all-negative`` (every edge negative, the default stand-in
    for the worst start), ``random`` (independent fair labels per trial) and
    ``explicit`` (``state``).
    """
    if strategy == "all-negative":
        labels: tuple[int, ...] | None = g.all_negative().labels
    elif strategy == "random":
        labels = None
    elif strategy == "explicit":
        if state is None:
            raise ValueError("strategy 'explicit' needs a state")
        labels = tuple(state)
        if len(labels) != g.n_edges:
            raise GraphError("state length does not match the edge count")
    else:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    target = None if labels is None else _target_for(g, labels)
    out = run_trials(_tau_trial, params.trials, params.seed,
                     (g, labels, params.p, params.step_cap(g), target), threads)
    return ConvergenceStats([o[0] for o in out], [o[1] for o in out], [o[2] for o in out],
                            strategy, params.p)


# ------------------------------------------------------------- drift check

@dataclass(frozen=True)
class DriftReport:
    n_steps: int
    n_decreases: int
    frequency: float
    sigma: float
    p_minus: float
    increases: int
    bad_decrements: int

    @property
    def monotone(self) -> bool:
        return self.increases == 0 and self.bad_decrements == 0

    @property
    def meets_p_minus(self) -> bool:
        return self.frequency >= self.p_minus - 3 * self.sigma


def drift_check(trajectories: Trajectory | Sequence[Trajectory], p: float) -> DriftReport:
    """Per-step decrease frequency of the potential, pooled over trajectories."""
    if isinstance(trajectories, Trajectory):
        trajectories = [trajectories]
    n = dec = inc = bad = 0
    for tr in trajectories:
        trace = tr.potential_trace()
        for a, b in zip(trace, trace[1:]):
            n += 1
            if b > a:
                inc += 1
            elif b < a:
                dec += 1
                if a - b > 2:
                    bad += 1
    freq = dec / n if n else math.nan
    sigma = math.sqrt(freq * (1 - freq) / n) if n else math.nan
    return DriftReport(n, dec, freq, sigma, p_minus(p), inc, bad)
