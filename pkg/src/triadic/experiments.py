"""Experiment orchestration: scaling fits, run manifests and CSV output."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import platform
import random
import time
from dataclasses import asdict, dataclass, field
from importlib import metadata
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .dynamics import DynamicsParams, run_until_recurrent
from .rng import RNG_ALGORITHM, run_trials
from .signed_graph import (GraphError, SignedGraph, generate_triadic_cycle,
                           triangular_lattice_section, triangulated_torus)

FAMILIES = ("tc", "lattice", "torus")
CLOCKS = ("step", "sequential")


def package_version() -> str:
    try:
        return metadata.version("triadic")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def family_graph(family: str, size: int) -> SignedGraph:
    if family == "tc":
        return generate_triadic_cycle(size)
    if family == "lattice":
        return triangular_lattice_section(size)
    if family == "torus":
        return triangulated_torus(size)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


# ----------------------------------------------------------------- fitting

@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    stderr: float


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> SlopeFit:
    """Least-squares line through (log x, log y); stderr is nan with two points."""
    if len(x) < 2:
        raise ValueError("a slope needs at least two sizes")
    lx, ly = np.log(np.asarray(x, float)), np.log(np.asarray(y, float))
    if len(x) == 2:
        slope, icpt = np.polyfit(lx, ly, 1)
        return SlopeFit(float(slope), float(icpt), math.nan)
    coef, cov = np.polyfit(lx, ly, 1, cov=True)
    return SlopeFit(float(coef[0]), float(coef[1]), float(math.sqrt(cov[0, 0])))


# ------------------------------------------------------------ trial bodies

def _trial(rng: random.Random, g: SignedGraph, labels: tuple[int, ...] | None, p: float,
           max_steps: int, trace: bool) -> tuple[int, int, bool, float, list[int] | None]:
    if labels is None:
        labels = tuple(rng.choice((1, -1)) for _ in range(g.n_edges))
    tr = run_until_recurrent(g, labels, p, rng, max_steps=max_steps, record=True)
    n = g.n_triangles
    # expected number of uniform triangle draws (balanced ones included) per flip
    sequential = sum(n / k for k in tr.potential_trace()[:-1] if k)
    return tr.steps, tr.terminal_imbalance, tr.censored, sequential, tr.potential_trace() if trace else None


@dataclass
class TrialRow:
    trial: int
    steps: int
    terminal_imbalance: int
    censored: bool
    sequential_time: float
    trace: list[int] | None = None


def simulate(g: SignedGraph, params: DynamicsParams, strategy: str = "all-negative",
             state: Sequence[int] | None = None, trace: bool = False,
             threads: int | None = None) -> list[TrialRow]:
    if strategy == "all-negative":
        labels: tuple[int, ...] | None = g.all_negative().labels
    elif strategy == "random":
        labels = None
    elif strategy == "explicit":
        if state is None:
            raise ValueError("strategy 'explicit' needs a state")
        labels = tuple(state)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    out = run_trials(_trial, params.trials, params.seed,
                     (g, labels, params.p, params.step_cap(g), trace), threads)
    return [TrialRow(i, *o) for i, o in enumerate(out)]


# ----------------------------------------------------------------- scaling

@dataclass
class ScalingPoint:
    size: int
    n_triangles: int
    mean_steps: float
    sem_steps: float
    mean_sequential: float
    censored: int
    trials: int


@dataclass
class ScalingResult:
    family: str
    p: float
    strategy: str
    points: list[ScalingPoint]
    fit: SlopeFit
    fit_sequential: SlopeFit
    x_axis: str = "n_triangles"

    def rows(self) -> list[dict[str, Any]]:
        return [{"family": self.family, "p": self.p, **asdict(pt)} for pt in self.points]


def scaling_experiment(family: str, sizes: Sequence[int], p: float, trials: int, seed: int,
                       strategy: str = "all-negative", max_steps: int | None = None,
                       threads: int | None = None) -> ScalingResult:
    """Mean convergence time per size and log-log slopes against the triangle count.

    Two clocks are fitted: dynamics steps (one flip per step) and the
    expected number of uniform draws over all triangles, balanced ones
    included, that a random-sequential updater would spend.
    """
    sizes = list(sizes)
    if len(sizes) < 2:
        raise ValueError("a slope needs at least two sizes")
    pts = []
    for idx, size in enumerate(sizes):
        g = family_graph(family, size)
        params = DynamicsParams(p=p, seed=seed, max_steps=max_steps, trials=trials)
        labels = g.all_negative().labels if strategy == "all-negative" else None
        out = run_trials(_trial, trials, seed, (g, labels, p, params.step_cap(g), False),
                         threads, stream=(idx,))
        done = [o for o in out if not o[2]]
        if not done:
            raise GraphError(f"every trial at size {size} hit the step cap")
        steps = np.array([o[0] for o in done], float)
        seq = np.array([o[3] for o in done], float)
        sem = float(steps.std(ddof=1) / math.sqrt(len(steps))) if len(steps) > 1 else math.nan
        pts.append(ScalingPoint(size, g.n_triangles, float(steps.mean()), sem, float(seq.mean()),
                                len(out) - len(done), trials))
    xs = [pt.n_triangles for pt in pts]
    return ScalingResult(family, p, strategy, pts,
                         loglog_slope(xs, [pt.mean_steps for pt in pts]),
                         loglog_slope(xs, [pt.mean_sequential for pt in pts]))


# ---------------------------------------------------------------- manifest

def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    params: dict[str, Any]
    seed: int
    argv: list[str]
    rng_algorithm: str = RNG_ALGORITHM
    version: str = field(default_factory=package_version)
    inputs: dict[str, str] = field(default_factory=dict)
    wall_clock: float = 0.0
    steps: int = 0
    python: str = field(default_factory=platform.python_version)

    REPRODUCIBLE = ("subcommand", "params", "seed", "argv", "rng_algorithm", "version", "inputs")

    def digest(self) -> str:
        core = {k: getattr(self, k) for k in self.REPRODUCIBLE}
        return hashlib.sha256(json.dumps(core, sort_keys=True).encode()).hexdigest()[:16]

    def to_json(self) -> str:
        data = {k: v for k, v in asdict(self).items()}
        data["digest"] = self.digest()
        return json.dumps(data, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        data = json.loads(text)
        data.pop("digest", None)
        return cls(**data)


def manifest_path(csv_path: str | Path) -> Path:
    p = Path(csv_path)
    return p.with_name(p.name + ".manifest.json")


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]], manifest: RunManifest) -> str:
    buf = io.StringIO()
    buf.write(f"# manifest: {manifest.digest()}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(x) for x in r])
    return buf.getvalue()


def _fmt(x: Any) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (list, tuple)):
        return " ".join(map(str, x))
    return "" if x is None else str(x)


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[Any]],
              manifest: RunManifest) -> None:
    Path(path).write_text(render_csv(header, rows, manifest))
    manifest_path(path).write_text(manifest.to_json())


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0
