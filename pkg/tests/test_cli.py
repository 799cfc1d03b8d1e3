import math

import pytest

from triadic.cli import dispatch
from triadic.experiments import (RunManifest, family_graph, loglog_slope, manifest_path, render_csv,
                                 scaling_experiment)
from triadic.xorsat import antipodal_cycle_formula, format_formula


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_loglog_slope():
    fit = loglog_slope([1, 2, 4, 8], [3, 12, 48, 192])
    assert fit.slope == pytest.approx(2.0) and fit.stderr == pytest.approx(0.0, abs=1e-9)
    assert math.isnan(loglog_slope([1, 2], [1, 2]).stderr)
    with pytest.raises(ValueError):
        loglog_slope([1], [1])


def test_family_graphs():
    assert family_graph("tc", 8).n_triangles == 8
    assert family_graph("lattice", 3).n_triangles == 18
    with pytest.raises(ValueError):
        family_graph("sphere", 3)


def test_scaling_parallel_matches_serial():
    a = scaling_experiment("tc", [6, 12], 0.5, 20, seed=3, threads=1)
    b = scaling_experiment("tc", [6, 12], 0.5, 20, seed=3, threads=2)
    assert a.rows() == b.rows()


def test_manifest_digest_ignores_timing():
    m1 = RunManifest("scaling", {"p": 0.5}, 1, ["scaling"], wall_clock=1.0, steps=5)
    m2 = RunManifest("scaling", {"p": 0.5}, 1, ["scaling"], wall_clock=9.0, steps=7)
    assert m1.digest() == m2.digest()
    assert RunManifest.from_json(m1.to_json()).digest() == m1.digest()
    assert render_csv(["a"], [[1.5]], m1).splitlines()[0] == f"# manifest: {m1.digest()}"
    assert m1.digest() != RunManifest("scaling", {"p": 0.5}, 2, ["scaling"]).digest()


@pytest.mark.parametrize("args", [
    ["scaling", "--tc", "6,8", "--trials", "10", "--seed", "5"],
    ["simulate", "--tc", "8", "--trials", "5", "--p", "0.3", "--seed", "2"],
    ["walk", "--mode", "coupled", "--regular", "3", "8", "--balls", "4", "--trials", "5"],
    ["walk", "--mode", "hs", "--tc", "6", "--trials", "5", "--seed", "4"],
    ["xorsat", "bench", "--antipodal", "8", "--trials", "5", "--seed", "1"],
])
def test_replay_is_byte_identical(tmp_path, capsys, args):
    out = str(tmp_path / "run.csv")
    assert dispatch(args + ["--out", out]) == 0
    first = (tmp_path / "run.csv").read_text()
    assert first.startswith("# manifest: ")
    assert dispatch(["replay", str(manifest_path(out))]) == 0
    assert "identical" in capsys.readouterr().out
    # the thread count is excluded from the canonical command line
    out2 = str(tmp_path / "run2.csv")
    assert dispatch(args + ["--out", out2, "--threads", "2"]) == 0
    assert (tmp_path / "run2.csv").read_text() == first


def test_replay_detects_tampering(tmp_path):
    out = str(tmp_path / "run.csv")
    assert dispatch(["scaling", "--tc", "6,8", "--trials", "4", "--out", out]) == 0
    with open(out, "a") as fh:
        fh.write("extra\n")
    assert dispatch(["replay", str(manifest_path(out))]) == 1


def test_exit_codes(tmp_path, capsys):
    assert dispatch(["nonsense"]) == 2
    assert dispatch(["scaling", "--tc", "8"]) == 2
    assert dispatch(["scaling", "--tc", "8,16", "--lattice", "3,4"]) == 2
    assert dispatch(["simulate", "--tc", "8", "--p", "1.5"]) == 2
    assert dispatch(["cheeger", str(tmp_path / "missing.txt")]) == 2
    # the triadic-cycle dual has loops, so graph walks refuse it
    assert dispatch(["walk", "--mode", "arw", "--tc", "6"]) == 2
    unsat = _write(tmp_path, "u.xor", "p xor 3 2\n1 2 3 0\n1 2 3 1\n")
    assert dispatch(["xorsat", "solve", unsat]) == 1
    sat = _write(tmp_path, "s.xor", format_formula(antipodal_cycle_formula(8)))
    assert dispatch(["xorsat", "solve", sat]) == 0
    assert dispatch(["xorsat", "bound", sat]) == 0
    assert "m^3/(2s)" in capsys.readouterr().out
    assert dispatch(["xorsat", "bound", unsat]) == 2


def test_reach_and_recur_commands(tmp_path, capsys):
    h = _write(tmp_path, "fan.hg", "0 : 0 1 2\n1 : 0 1 3\n2 : 0 1 4\n")
    w1 = _write(tmp_path, "w1", "1 1 0 0 0\n")
    w2 = _write(tmp_path, "w2", "1 1 1 1 0\n")
    w3 = _write(tmp_path, "w3", "0 0 1 0 0\n")
    assert dispatch(["reach", "--hypergraph", h, "--from", w1, "--to", w2]) == 1
    assert dispatch(["reach", "--hypergraph", h, "--from", w1, "--to", w2, "--method", "gf2"]) == 0
    assert dispatch(["reach", "--hypergraph", h, "--from", w1, "--to", w3, "--witness"]) == 0
    assert "schedule:" in capsys.readouterr().out
    assert dispatch(["recur", "--hypergraph", h, "--from", w1, "--to", w3]) == 0


def test_cheeger_command(tmp_path, capsys):
    c4 = _write(tmp_path, "c4.txt", "0 1\n1 2\n2 3\n3 0\n")
    assert dispatch(["cheeger", c4]) == 0
    assert "tau_c = 1/4" in capsys.readouterr().out
    assert dispatch(["cheeger", c4, "--regular"]) == 0
    assert dispatch(["cheeger", c4, "--sampled"]) == 0
    assert dispatch(["cheeger", c4, "--convention", "kernel"]) == 0
    assert "tau_c = 1 " in capsys.readouterr().out.splitlines()[-3] + " "
