"""Command-line entry point.

Exit codes: 0 success, 1 a decision came out false (not reachable, not
recurrent, unsatisfiable, replay mismatch), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile
from pathlib import Path
from typing import Sequence

import networkx as nx

from . import analysis, dynamics, reach, walks, xorsat
from .experiments import (FAMILIES, RunManifest, file_digest, render_csv, scaling_experiment,
                          simulate, timed, write_csv)
from .hypergraph import Hypergraph, build_triadic_dual, parse_config, parse_hypergraph
from .rng import THREADS_ENV, run_trials
from .signed_graph import GraphError, SignedGraph, generate_triadic_cycle, read_edge_list

UNSTABLE_FLAGS = ("--out", "--threads")


class UsageError(Exception):
    pass


# ------------------------------------------------------------ arg helpers

def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--out", help="CSV output path; a .manifest.json is written next to it")
    p.add_argument("--format", choices=("csv",), default="csv")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker processes (default from {THREADS_ENV}, else 1)")
    return p


def _canonical_argv(argv: Sequence[str]) -> list[str]:
    """Drop flags that do not affect results, so the manifest digest ignores them."""
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
            continue
        if a in UNSTABLE_FLAGS:
            skip = True
            continue
        if any(a.startswith(f + "=") for f in UNSTABLE_FLAGS):
            continue
        out.append(a)
    return out


def _inputs(*paths: str | None) -> dict[str, str]:
    return {p: file_digest(p) for p in paths if p}


def _load_graph(args) -> tuple[SignedGraph, tuple[int, ...] | None]:
    if getattr(args, "graph", None):
        g, st = read_edge_list(args.graph)
        return g, st.labels
    if getattr(args, "tc", None):
        return generate_triadic_cycle(args.tc, args.layout), None
    raise UsageError("give --graph FILE or --tc N")


def _load_hypergraph(path: str) -> Hypergraph:
    return parse_hypergraph(Path(path).read_text())


def _load_config(path: str) -> tuple[int, ...]:
    return parse_config(Path(path).read_text())


def _emit(args, sub: str, header, rows, params: dict, argv, inputs=None, wall=0.0, steps=0) -> None:
    man = RunManifest(sub, params, args.seed, _canonical_argv(argv), inputs=inputs or {},
                      wall_clock=wall, steps=steps)
    if args.out:
        write_csv(args.out, header, rows, man)
        print(f"wrote {args.out} (manifest {man.digest()})")
    else:
        sys.stdout.write(render_csv(header, rows, man))


# -------------------------------------------------------------- commands

def cmd_simulate(args, argv) -> int:
    g, file_state = _load_graph(args)
    params = dynamics.DynamicsParams(p=args.p, seed=args.seed, max_steps=args.max_steps,
                                     trials=args.trials)
    strategy, state = args.strategy, None
    if strategy == "file":
        if file_state is None:
            raise UsageError("--strategy file needs --graph")
        strategy, state = "explicit", file_state
    rows, wall = timed(simulate, g, params, strategy, state, args.trace, args.threads)
    header = ["trial", "steps", "terminal_imbalance", "censored", "sequential_time"]
    if args.trace:
        header.append("potential_trace")
    out = []
    for r in rows:
        line = [r.trial, r.steps, r.terminal_imbalance, r.censored, r.sequential_time]
        if args.trace:
            line.append(r.trace)
        out.append(line)
    done = [r.steps for r in rows if not r.censored]
    mean = sum(done) / len(done) if done else float("nan")
    print(f"# triangles={g.n_triangles} p={args.p} strategy={args.strategy} "
          f"mean_steps={mean:.4f} censored={len(rows) - len(done)}", file=sys.stderr)
    params_rec = {"p": args.p, "trials": args.trials, "max_steps": params.step_cap(g),
                  "strategy": args.strategy, "tc": args.tc, "layout": args.layout, "trace": args.trace}
    _emit(args, "simulate", header, out, params_rec, argv, _inputs(args.graph), wall,
          sum(r.steps for r in rows))
    return 0


def _walk_graph(args):
    if args.hypergraph:
        return _load_hypergraph(args.hypergraph)
    if args.graph:
        g, _ = read_edge_list(args.graph)
        return build_triadic_dual(g)
    if args.regular:
        r, n = args.regular
        return nx.random_regular_graph(r, n, seed=args.seed)
    if args.tc:
        return build_triadic_dual(generate_triadic_cycle(args.tc))
    raise UsageError("give --hypergraph, --graph, --regular R N or --tc N")


def _walk_trial(rng: random.Random, mode: str, target, config, balls: int | None,
                max_steps: int) -> tuple:
    n = len(target) if mode != "hs" else target.n_vertices
    if config is None:
        if balls is None:
            config = (1,) * n
        else:
            chosen = set(rng.sample(range(n), balls))
            config = tuple(1 if v in chosen else 0 for v in range(n))
    if mode == "crw":
        t = walks.run_crw(target, [v for v, x in enumerate(config) if x], rng, max_steps)
        return (t, None, None)
    if mode == "arw":
        return (walks.run_arw(target, config, rng, max_steps), None, None)
    if mode == "coupled":
        res = walks.run_coupled(target, config, rng, max_steps)
        return (res.t_arw, res.t_crw, res.dominated and res.parity_ok)
    run = walks.run_switching(target, config, rng, max_steps, record=False)
    return (run.steps if run.emptied else None, sum(run.final), None)


def cmd_walk(args, argv) -> int:
    graph = _walk_graph(args)
    if args.mode == "hs":
        if not isinstance(graph, Hypergraph):
            graph = Hypergraph(graph.number_of_nodes(), list(graph.edges()))
        target = graph
    else:
        target = walks.adjacency(graph)
    config = _load_config(args.config) if args.config else None
    rows, wall = timed(run_trials, _walk_trial, args.trials, args.seed,
                       (args.mode, target, config, args.balls, args.max_steps), args.threads)
    if args.mode == "coupled":
        header = ["trial", "t_arw", "t_crw", "dominated"]
        out = [[i, a, c, d] for i, (a, c, d) in enumerate(rows)]
        bad = sum(1 for r in rows if not r[2])
        print(f"# domination violations={bad}", file=sys.stderr)
    elif args.mode == "hs":
        header = ["trial", "steps", "balls_left"]
        out = [[i, a, b] for i, (a, b, _) in enumerate(rows)]
    else:
        header = ["trial", "steps"]
        out = [[i, a] for i, (a, _, _) in enumerate(rows)]
    params = {"mode": args.mode, "trials": args.trials, "balls": args.balls,
              "max_steps": args.max_steps, "regular": args.regular, "tc": args.tc}
    _emit(args, "walk", header, out, params, argv,
          _inputs(args.hypergraph, args.graph, args.config), wall)
    return 0


def _reach_inputs(args) -> tuple[Hypergraph, tuple[int, ...], tuple[int, ...]]:
    h = _load_hypergraph(args.hypergraph)
    return h, _load_config(args.source), _load_config(args.target)


def cmd_reach(args, argv) -> int:
    h, w1, w2 = _reach_inputs(args)
    ok = reach.is_reachable(h, w1, w2, method=args.method, max_component=args.max_component)
    print("reachable" if ok else "not reachable")
    if ok and args.witness:
        path = reach.witness_path(h, w1, w2, max_component=args.max_component)
        print("schedule: " + " ".join(map(str, path or [])))
    return 0 if ok else 1


def cmd_recur(args, argv) -> int:
    h, w1, w2 = _reach_inputs(args)
    ok = reach.is_recurrent(h, w1, w2, method=args.method, max_component=args.max_component)
    print("recurrent" if ok else "not recurrent")
    return 0 if ok else 1


def _read_plain_graph(path: str) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) < 2:
            raise GraphError(f"line {lineno}: expected 'u v'")
        g.add_edge(int(line[0]), int(line[1]))
    return g


def cmd_cheeger(args, argv) -> int:
    if args.hypergraph:
        g = analysis.as_edge_graph(_load_hypergraph(args.hypergraph))
    elif args.dual:
        sg, _ = read_edge_list(args.file)
        g = analysis.as_edge_graph(build_triadic_dual(sg))
    elif args.file:
        g = analysis.as_edge_graph(_read_plain_graph(args.file))
    else:
        raise UsageError("give a graph file or --hypergraph")
    if args.method == "regular":
        rep = analysis.cheeger_time_regular(g)
    elif args.method == "sampled":
        rep = analysis.cheeger_time_sampled(g, seed=args.seed, convention=args.convention)
    else:
        rep = analysis.cheeger_time_exact(g, args.convention)
    exp = analysis.exponent_for(rep.value)
    print(f"tau_c = {rep.value} ({float(rep.value):.6g}) method={rep.method} convention={rep.convention}")
    print("witness: " + " ".join(map(str, rep.witness)))
    print(f"exponent min(3, 2 + log2 tau_c) = {exp:.6g}" + ("  [below 2]" if exp < 2 else ""))
    return 0


def _formula(path: str) -> xorsat.XorFormula:
    return xorsat.parse_formula(Path(path).read_text())


def _bench_trial(rng: random.Random, f: xorsat.XorFormula, max_steps: int) -> tuple[int, bool]:
    u0 = [rng.randrange(2) for _ in range(f.n)]
    res = xorsat.random_walk_sat(f, u0, rng, max_steps)
    return res.steps, res.censored


def cmd_xorsat(args, argv) -> int:
    if args.verb == "solve":
        f = _formula(args.file)
        sol = xorsat.solve_gf2_formula(f)
        if not sol:
            print("UNSAT (clauses " + " ".join(str(k + 1) for k in sol.certificate) + " sum to 0 = 1)")
            return 1
        print("SAT " + " ".join(map(str, sol.assignment)))
        return 0
    if args.verb == "reduce":
        f = _formula(args.file)
        red, trace = xorsat.reduce(f)
        if trace.unsat:
            print("UNSAT found during reduction")
            return 1
        text = xorsat.format_formula(red)
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        for ev in trace.events:
            print(f"# {ev.kind}: x{ev.var + 1} := {ev.rhs}" +
                  "".join(f" + x{v + 1}" for v in ev.others), file=sys.stderr)
        return 0
    if args.verb == "bound":
        f = _formula(args.file)
        tb = xorsat.time_bound(f, s=args.s)
        print(f"m={tb.m} n={tb.n} s={tb.s} tau_c={tb.tau_c}")
        print(f"m^3/(2s) = {tb.cubic:.6g}")
        print(f"cheeger term, natural log: {tb.cheeger_ln:.6g}; log base 2: {tb.cheeger_unit:.6g}")
        print(f"bound (ln 2 reading) = {tb.bound_ln:.6g}; bound (log2 reading) = {tb.bound_unit:.6g}")
        return 0
    # bench
    instances: list[tuple[str, xorsat.XorFormula]] = []
    for path in args.files:
        instances.append((path, _formula(path)))
    gen = random.Random(args.seed)
    for k in range(args.instances):
        if args.antipodal:
            instances.append((f"antipodal-{args.antipodal}-{k}",
                              xorsat.antipodal_cycle_formula(args.antipodal, rng=gen)))
        if args.cubic:
            instances.append((f"cubic-{args.cubic}-{k}", xorsat.random_cubic_formula(args.cubic, gen)))
    if not instances:
        raise UsageError("bench needs formula files, --antipodal M or --cubic M")
    rows, total = [], 0
    for idx, (name, f) in enumerate(instances):
        tb = xorsat.time_bound(f)
        res = run_trials(_bench_trial, args.trials, args.seed, (f, args.max_steps), args.threads,
                         stream=(idx,))
        done = [s for s, c in res if not c]
        total += sum(s for s, _ in res)
        mean = sum(done) / len(done) if done else float("nan")
        rows.append([name, tb.m, tb.n, tb.s, str(tb.tau_c), tb.cubic, tb.cheeger_ln, tb.cheeger_unit,
                     mean, max(s for s, _ in res), args.trials, len(res) - len(done)])
    header = ["instance", "m", "n", "s", "tau_c", "cubic_term", "cheeger_term_ln",
              "cheeger_term_log2", "mean_steps", "max_steps", "trials", "censored"]
    params = {"trials": args.trials, "antipodal": args.antipodal, "cubic": args.cubic,
              "instances": args.instances, "max_steps": args.max_steps}
    _emit(args, "xorsat-bench", header, rows, params, argv, _inputs(*args.files), steps=total)
    return 0


def cmd_scaling(args, argv) -> int:
    fams = [(name, getattr(args, name)) for name in FAMILIES if getattr(args, name)]
    if len(fams) != 1:
        raise UsageError("give exactly one of --tc, --lattice, --torus")
    family, sizes = fams[0]
    res, wall = timed(scaling_experiment, family, sizes, args.p, args.trials, args.seed,
                      args.strategy, args.max_steps, args.threads)
    header = ["family", "p", "size", "n_triangles", "mean_steps", "sem_steps", "mean_sequential",
              "censored", "trials"]
    rows = [[r[h] for h in header] for r in res.rows()]
    print(f"# slope (steps) = {res.fit.slope:.4f} +/- {res.fit.stderr:.4f}; "
          f"slope (sequential clock) = {res.fit_sequential.slope:.4f} +/- {res.fit_sequential.stderr:.4f}",
          file=sys.stderr)
    params = {"family": family, "sizes": sizes, "p": args.p, "trials": args.trials,
              "strategy": args.strategy, "max_steps": args.max_steps}
    _emit(args, "scaling", header, rows, params, argv, wall=wall)
    return 0


def cmd_replay(args, argv) -> int:
    man = RunManifest.from_json(Path(args.manifest).read_text())
    recorded = Path(args.manifest).with_name(Path(args.manifest).name.removesuffix(".manifest.json"))
    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "replay.csv")
        code = dispatch(list(man.argv) + ["--out", out])
        if code != 0:
            print(f"replay exited with {code}")
            return 2
        same = recorded.exists() and Path(out).read_bytes() == recorded.read_bytes()
    print("identical" if same else f"differs from {recorded}")
    return 0 if same else 1


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="triadic", description="Triad dynamics and particle-walk toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="probabilistic triad dynamics")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="signed edge list 'u v sign'")
    src.add_argument("--tc", type=int, help="triadic cycle with N triangles")
    s.add_argument("--layout", choices=("fan", "strip"), default="fan")
    s.add_argument("--p", type=float, default=0.5)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--max-steps", type=int, default=None)
    s.add_argument("--strategy", choices=("all-negative", "random", "file"), default="all-negative",
                   help="initial state; 'file' uses the signs in --graph")
    s.add_argument("--trace", action="store_true", help="add per-step potential traces")
    s.set_defaults(func=cmd_simulate)

    w = sub.add_parser("walk", parents=[common], help="ARW, CRW, coupled or hyperedge switching")
    w.add_argument("--mode", choices=("arw", "crw", "coupled", "hs"), required=True)
    w.add_argument("--hypergraph", help="dual file 'id : v1 v2 ...'")
    w.add_argument("--graph", help="signed edge list; its triadic dual is used")
    w.add_argument("--regular", type=int, nargs=2, metavar=("R", "N"), help="random R-regular graph")
    w.add_argument("--tc", type=int, help="dual of the triadic cycle with N triangles (hs mode; it has loops)")
    w.add_argument("--config", help="initial 0/1 configuration file")
    w.add_argument("--balls", type=int, help="random placement of K balls per trial")
    w.add_argument("--trials", type=int, default=100)
    w.add_argument("--max-steps", type=int, default=10**7)
    w.set_defaults(func=cmd_walk)

    for name, fn, helptext in (("reach", cmd_reach, "reachability of w2 from w1"),
                               ("recur", cmd_recur, "is w2 recurrent from w1")):
        r = sub.add_parser(name, parents=[common], help=helptext)
        r.add_argument("--hypergraph", required=True)
        r.add_argument("--from", dest="source", required=True, help="configuration file w1")
        r.add_argument("--to", dest="target", required=True, help="configuration file w2")
        r.add_argument("--method", choices=("exact", "gf2"), default="exact")
        r.add_argument("--max-component", type=int, default=reach.DEFAULT_MAX_COMPONENT)
        if name == "reach":
            r.add_argument("--witness", action="store_true")
        r.set_defaults(func=fn)

    c = sub.add_parser("cheeger", parents=[common], help="Cheeger time")
    c.add_argument("file", nargs="?", help="edge list 'u v' (signs ignored)")
    c.add_argument("--hypergraph", help="graph-like dual file instead of an edge list")
    c.add_argument("--dual", action="store_true", help="use the triadic dual of the signed graph in FILE")
    m = c.add_mutually_exclusive_group()
    m.add_argument("--exact", dest="method", action="store_const", const="exact")
    m.add_argument("--regular", dest="method", action="store_const", const="regular")
    m.add_argument("--sampled", dest="method", action="store_const", const="sampled")
    c.add_argument("--convention", choices=analysis.CONVENTIONS, default="regular")
    c.set_defaults(func=cmd_cheeger, method="exact")

    x = sub.add_parser("xorsat", parents=[common], help="3-XOR-SAT tools")
    x.add_argument("verb", choices=("solve", "reduce", "bound", "bench"))
    x.add_argument("files", nargs="*", help="formula files ('p xor n m' format)")
    x.add_argument("--s", type=int, default=None, help="connectivity to use in the bound")
    x.add_argument("--trials", type=int, default=100)
    x.add_argument("--max-steps", type=int, default=10**7)
    x.add_argument("--antipodal", type=int, help="bench: generated antipodal-cycle formulas with M clauses")
    x.add_argument("--cubic", type=int, help="bench: planted formulas on random cubic graphs with M clauses")
    x.add_argument("--instances", type=int, default=1)
    x.set_defaults(func=cmd_xorsat)

    sc = sub.add_parser("scaling", parents=[common], help="convergence-time scaling fit")
    sc.add_argument("--tc", type=_ints, help="triadic cycle sizes, e.g. 8,16,32,64")
    sc.add_argument("--lattice", type=_ints, help="triangular-lattice section sides")
    sc.add_argument("--torus", type=_ints, help="triangulated torus sides")
    sc.add_argument("--p", type=float, default=0.5)
    sc.add_argument("--trials", type=int, default=100)
    sc.add_argument("--strategy", choices=("all-negative", "random"), default="all-negative")
    sc.add_argument("--max-steps", type=int, default=None)
    sc.set_defaults(func=cmd_scaling)

    rp = sub.add_parser("replay", help="re-run a manifest and compare the CSV byte for byte")
    rp.add_argument("manifest")
    rp.set_defaults(func=cmd_replay)
    return ap


def dispatch(argv: Sequence[str]) -> int:
    argv = list(argv)
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    if args.command == "xorsat" and args.verb != "bench" and len(args.files) != 1:
        print("xorsat solve/reduce/bound take exactly one formula file", file=sys.stderr)
        return 2
    if args.command == "xorsat" and args.files:
        args.file = args.files[0]
    try:
        return args.func(args, argv)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except (GraphError, xorsat.FormulaError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
