import json
import math

import numpy as np
import pytest

from qwalk import cli, coined
from qwalk import graph as G
from qwalk.errors import InvariantViolation
from qwalk.formats import dump_json, fmt, read_distributions, write_distributions
from qwalk.runner import RunConfig, compare, run_walk


def run_cli(*argv):
    return cli.main([str(a) for a in argv])


def load_run(prefix):
    times, dists = read_distributions(f"{prefix}.csv")
    return times, dists, json.loads(open(f"{prefix}.json").read())


# formats

def test_fmt():
    assert fmt(3) == "3"
    assert fmt(np.int64(4)) == "4"
    assert fmt(0.1) == "1.0000000000000001e-01"
    assert float(fmt(math.pi)) == math.pi


def test_distribution_roundtrip(tmp_path):
    dists = [np.array([1.0, 0.0]), np.array([1 / 3, 2 / 3])]
    write_distributions(tmp_path / "d.csv", [0, 1], dists)
    text = (tmp_path / "d.csv").read_text()
    assert text.splitlines()[0] == "t,P0,P1"
    times, back = read_distributions(tmp_path / "d.csv")
    np.testing.assert_array_equal(times, [0, 1])
    np.testing.assert_array_equal(back, np.array(dists))


def test_dump_json_numpy_types():
    text = dump_json({"b": np.float64(0.5), "a": np.arange(2), "c": np.bool_(True)})
    assert json.loads(text) == {"a": [0, 1], "b": 0.5, "c": True}
    assert text.index('"a"') < text.index('"b"')
    with pytest.raises(TypeError):
        dump_json({"x": object()})


# runner

def test_run_config_validation():
    with pytest.raises(ValueError, match="seed"):
        RunConfig(walk="classical-sample")
    with pytest.raises(ValueError):
        RunConfig(walk="levy")
    with pytest.raises(ValueError):
        RunConfig.from_mapping({"walk": "coined", "colour": "red"})
    with pytest.raises(ValueError):
        RunConfig(every=0)
    cfg = RunConfig.from_mapping({"walk": "continuous_exact", "t": "2", "steps": "5"})
    assert cfg.walk == "continuous-exact" and cfg.t == 2.0 and cfg.steps == 5


def test_run_walk_records_every_kth():
    res = run_walk(G.cycle(4), RunConfig(walk="coined", steps=10, every=3))
    assert res.times == [0, 3, 6, 9, 10]
    assert res.report.oracle_calls["quantum_calls"] == 20


def test_run_walk_trotter_time_grid():
    res = run_walk(G.cycle(6), RunConfig(walk="trotter", t=2.0, j=8, every=4))
    assert res.times == [0.0, 1.0, 2.0]
    assert res.checks["ancilla_leakage"] < 1e-13
    res = run_walk(G.cycle(6), RunConfig(walk="trotter", t=2.0, j=8, ordering="per_color_power"))
    assert res.times == [0.0, 2.0]
    assert res.report.oracle_calls["quantum_calls"] == 96


def test_run_walk_detects_broken_engine(monkeypatch):
    real = coined.step

    def leaky(psi, g, coin, ctr=None):
        return 1.001 * real(psi, g, coin, ctr)

    monkeypatch.setattr(coined, "step", leaky)
    with pytest.raises(InvariantViolation, match="norm_drift"):
        run_walk(G.cycle(4), RunConfig(walk="coined", steps=5))


def test_compare_trotter_against_exact():
    g = G.cycle(8)
    out = compare(g, RunConfig(walk="trotter", j=16), RunConfig(walk="continuous-exact"),
                  [8, 16, 32, 64])
    assert len(out["rows"]) == 17
    assert out["rows"][0]["tv"] < 1e-14 and out["rows"][0]["fidelity"] == pytest.approx(1)
    errs = [r["error"] for r in out["convergence"]]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_compare_continuous_first_uses_other_grid():
    out = compare(G.cycle(4), RunConfig(walk="continuous-exact", t=2.0),
                  RunConfig(walk="trotter", t=2.0, j=4))
    assert [r["t"] for r in out["rows"]] == [0.0, 0.5, 1.0, 1.5, 2.0]


# command line

def test_gen_writes_graph(tmp_path):
    path = tmp_path / "c16.json"
    assert run_cli("gen", "cycle", 16, "-o", path) == 0
    g = G.Graph.load(path)
    assert g == G.cycle(16)


def test_gen_glued_trees_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("gen", "glued-trees", 3, "--seed", 7, "-o", a) == 0
    assert run_cli("gen", "glued-trees", 3, "--seed", 7, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()
    assert G.Graph.load(a).n == 30


def test_gen_random_passes_invariants(tmp_path):
    path = tmp_path / "r.json"
    assert run_cli("gen", "random", 8, 0.4, "--seed", 1, "-o", path) == 0
    G.Graph.load(path).check_invariants()


def test_gen_to_stdout(capsys):
    assert run_cli("gen", "complete", 3) == 0
    assert json.loads(capsys.readouterr().out)["n"] == 3


def test_run_coined_c4(tmp_path):
    prefix = tmp_path / "c4"
    assert run_cli("run", "--gen", "cycle", 4, "--walk", "coined", "--steps", 10,
                   "--coin", "hadamard", "--start", 0, "--out", prefix) == 0
    times, dists, meta = load_run(prefix)
    assert len(times) == 11
    assert meta["report"]["oracle_calls"]["quantum_calls"] == 20
    np.testing.assert_allclose(dists[2], [0.375, 0.375, 0.125, 0.125], atol=1e-14)


def test_run_continuous_k2(tmp_path):
    prefix = tmp_path / "k2"
    assert run_cli("run", "--gen", "complete", 2, "--walk", "continuous-exact", "--gamma", 1,
                   "--t", math.pi / 4, "--out", prefix) == 0
    _, dists, meta = load_run(prefix)
    np.testing.assert_allclose(dists[-1], [0.5, 0.5], atol=1e-15)
    np.testing.assert_allclose(meta["final_distribution"], [0.5, 0.5], atol=1e-15)


def test_run_classical_alpha_zero(tmp_path):
    prefix = tmp_path / "frozen"
    assert run_cli("run", "--gen", "cycle", 5, "--walk", "classical-discrete", "--alpha", 0,
                   "--steps", 6, "--start", 2, "--out", prefix) == 0
    _, dists, _ = load_run(prefix)
    for row in dists:
        np.testing.assert_array_equal(row, [0, 0, 1, 0, 0])


def test_run_from_graph_file_and_config(tmp_path):
    graph = tmp_path / "g.json"
    G.hypercube(8).save(graph)
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"graph": str(graph), "walk": "classical-sample", "seed": 3,
                                  "steps": 40, "walkers": 20, "alpha": 0.5,
                                  "out": str(tmp_path / "fromcfg")}))
    assert run_cli("run", "--config", config) == 0
    _, _, meta = load_run(tmp_path / "fromcfg")
    assert meta["report"]["oracle_calls"]["classical_queries"] == 800
    # flags win over the file
    assert run_cli("run", "--config", config, "--steps", 10, "--out", tmp_path / "flag") == 0
    times, _, meta = load_run(tmp_path / "flag")
    assert len(times) == 11 and meta["config"]["steps"] == 10


def test_run_generator_in_config(tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"graph": {"kind": "random", "params": [6, 0.5], "seed": 2},
                                  "walk": "trotter", "j": 4}))
    assert run_cli("run", "--config", config, "--out", tmp_path / "tr") == 0
    _, _, meta = load_run(tmp_path / "tr")
    assert meta["report"]["oracle_calls"]["quantum_calls"] == 48


def test_compare_adjacency_vs_laplacian_q3(tmp_path):
    out = tmp_path / "cmp.json"
    assert run_cli("compare", "--gen", "hypercube", 8, "--a", "walk=continuous-exact",
                   "--b", "walk=continuous-exact,hamiltonian=laplacian", "--t", 2,
                   "-o", out) == 0
    data = json.loads(out.read_text())
    assert data["max_tv"] < 1e-10
    assert all(r["fidelity"] == pytest.approx(1, abs=1e-10) for r in data["rows"])


def test_compare_trotter_sweep(tmp_path):
    out = tmp_path / "cmp.json"
    assert run_cli("compare", "--gen", "cycle", 8, "--a", "walk=trotter",
                   "--b", "walk=continuous-exact", "--j-sweep", "8,16,32,64", "-o", out) == 0
    errs = [r["error"] for r in json.loads(out.read_text())["convergence"]]
    assert len(errs) == 4 and all(b < a for a, b in zip(errs, errs[1:]))


def test_compare_coined_vs_classical(tmp_path):
    side = tmp_path / "b.json"
    side.write_text(json.dumps({"walk": "classical-discrete", "alpha": 1.0}))
    out = tmp_path / "cmp.json"
    assert run_cli("compare", "--gen", "cycle", 4, "--a", "walk=coined", "--b", side,
                   "--steps", 6, "-o", out) == 0
    rows = json.loads(out.read_text())["rows"]
    assert len(rows) == 7 and all("tv" in r for r in rows)


@pytest.mark.parametrize("what, key", [("summary", "n"), ("hamiltonian", "max_block_error"),
                                        ("phase", "max_dist_diff"), ("coloring", "consistent")])
def test_report(what, key, capsys):
    assert run_cli("report", "--gen", "cycle", 6, "--what", what) == 0
    data = json.loads(capsys.readouterr().out)
    assert key in data
    if what == "coloring":
        assert data["consistent"] and sum(data["edges_per_color"]) == 6


def test_exit_code_usage(tmp_path, capsys):
    assert run_cli("run", "--gen", "cycle", 4, "--walk", "classical-sample",
                   "--out", tmp_path / "x") == 1
    assert run_cli("run", "--walk", "coined") == 1
    assert run_cli("run", "--graph", tmp_path / "missing.json", "--walk", "coined") == 1
    assert run_cli("gen", "cycle", 2) == 1
    with pytest.raises(SystemExit) as exc:
        run_cli("frobnicate")
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        run_cli("run", "--walk", "levy")
    assert exc.value.code == 1


def test_exit_code_bad_graph_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 3, "edges": [[0, 0]]}))
    assert run_cli("report", "--graph", path) == 1


def test_exit_code_invariant(tmp_path, monkeypatch, capsys):
    real = coined.step
    monkeypatch.setattr(coined, "step", lambda psi, g, coin, ctr=None: 1.01 * real(psi, g, coin, ctr))
    assert run_cli("run", "--gen", "cycle", 4, "--walk", "coined", "--out", tmp_path / "x") == 2
    assert "invariant" in capsys.readouterr().err


def test_run_byte_identical(tmp_path):
    outs = []
    for name in ("a", "b"):
        prefix = tmp_path / name
        assert run_cli("run", "--gen", "random", 10, 0.3, "--gen-seed", 5, "--walk",
                       "classical-sample", "--seed", 9, "--walkers", 50, "--steps", 30,
                       "--out", prefix) == 0
        outs.append((prefix.with_suffix(".csv").read_bytes(), prefix.with_suffix(".json").read_bytes()))
    assert outs[0] == outs[1]
