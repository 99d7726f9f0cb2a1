import json

import numpy as np
import pytest

import netforge as nf
from netforge.cli import main


@pytest.fixture()
def triangle_file(tmp_path):
    path = tmp_path / "triangle.json"
    nf.save_graph(nf.toy1_network(), path)
    return path


def test_solve_to_stdout(triangle_file, capsys):
    assert main(["solve", "--graph", str(triangle_file)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["solvable"]
    assert doc["fluxes"][0] == pytest.approx(2.0 / 3.0)


def test_solve_with_conductivities(triangle_file, tmp_path, capsys):
    cpath = tmp_path / "c.json"
    nf.save_conductivities(nf.toy1_network(), [1.0, 0.0, 0.0], cpath)
    assert main(["solve", "--graph", str(triangle_file), "--conductivities", str(cpath)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["components"] == [[0, 1], [2]]
    assert doc["fluxes"][0] == pytest.approx(1.0)


def test_optimize_writes_outputs(triangle_file, tmp_path):
    out = tmp_path / "run"
    code = main(
        [
            "optimize", "--graph", str(triangle_file),
            "--gamma", "1", "--nu", "1", "--mu", "0.2",
            "--tau0", "0.1", "--iters", "3000", "--seed", "0",
            "--out", str(out),
        ]
    )
    assert code == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["mu"] == 0.2
    assert summary["termination"] == "completed"
    assert (out / "trace.csv").exists()
    best = nf.load_conductivities(nf.toy1_network(), out / "best_c.json")
    assert best.values[0] == pytest.approx(1.0, abs=0.05)


def test_optimize_rejects_sublinear_gamma(triangle_file, tmp_path, capsys):
    code = main(
        [
            "optimize", "--graph", str(triangle_file),
            "--gamma", "0.5", "--nu", "1", "--iters", "10",
            "--out", str(tmp_path / "x"),
        ]
    )
    assert code == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValueError"


def test_optimize_divergence_exit_code(tmp_path):
    gpath = tmp_path / "edge.json"
    nf.save_graph(nf.new_network(2, [(0, 1)], [1.0, -1.0]), gpath)
    code = main(
        [
            "optimize", "--graph", str(gpath),
            "--nu", "1", "--mu", "2.0", "--tau0", "1e6",
            "--iters", "5000", "--seed", "0",
            "--out", str(tmp_path / "div"),
        ]
    )
    assert code == 2
    summary = json.loads((tmp_path / "div" / "summary.json").read_text())
    assert summary["termination"] == "diverged"


def test_sweep_outputs(triangle_file, tmp_path):
    out = tmp_path / "sweep"
    code = main(
        [
            "sweep", "--graph", str(triangle_file),
            "--nu", "1", "--mu-list", "0,0.8",
            "--iters", "2000", "--seed", "0",
            "--out", str(out),
        ]
    )
    assert code == 0
    lines = (out / "summary.csv").read_text().strip().splitlines()
    assert len(lines) == 3
    assert (out / "run_00_mu_0" / "best_c.json").exists()
    assert (out / "run_01_mu_0.8" / "trace.csv").exists()


def test_trees_table(triangle_file, capsys):
    assert main(["trees", "--graph", str(triangle_file), "--gamma", "1", "--nu", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "rank,energy,edges"
    assert len(lines) == 4  # three spanning trees
    best_energy = float(lines[1].split(",")[1])
    assert best_energy == pytest.approx(2.0, rel=1e-12)


def test_render_svg(triangle_file, tmp_path):
    cpath = tmp_path / "c.json"
    nf.save_conductivities(nf.toy1_network(), [1.0, 0.5, 0.0], cpath)
    out = tmp_path / "net.svg"
    code = main(
        [
            "render", "--graph", str(triangle_file),
            "--conductivities", str(cpath), "--out", str(out),
        ]
    )
    assert code == 0
    svg = out.read_text()
    assert svg.startswith("<svg") and svg.count("<line") == 2


def test_gen_leaf(tmp_path):
    out = tmp_path / "leaf.json"
    assert main(["gen-leaf", "--nodes", "25", "--seed", "3", "--out", str(out)]) == 0
    net = nf.load_graph(out)
    assert net.vertex_count == 25
    assert net == nf.leaf_network(nodes=25, seed=3)


def test_seed_env_override(triangle_file, tmp_path, monkeypatch):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    monkeypatch.setenv("NETFORGE_SEED", "11")
    main(["optimize", "--graph", str(triangle_file), "--nu", "1",
          "--iters", "200", "--seed", "0", "--out", str(out_a)])
    monkeypatch.delenv("NETFORGE_SEED")
    main(["optimize", "--graph", str(triangle_file), "--nu", "1",
          "--iters", "200", "--seed", "11", "--out", str(out_b)])
    assert json.loads((out_a / "summary.json").read_text()) == json.loads(
        (out_b / "summary.json").read_text()
    )


def test_validation_error_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "vertices": [{"id": 0, "source": 1.0}, {"id": 1, "source": -0.5}],
        "edges": [{"u": 0, "v": 1}],
    }))
    assert main(["solve", "--graph", str(bad)]) == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "UnbalancedSourcesError"


def test_usage_error_json(capsys):
    assert main(["optimize", "--graph", "missing.json"]) == 1
    err = json.loads(capsys.readouterr().err)
    assert "message" in err
