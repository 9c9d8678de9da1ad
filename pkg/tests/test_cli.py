"""CLI surface: dump, check, bench, prepare, serve."""

import base64
import json

import numpy as np
import pytest
from click.testing import CliRunner

from fockgates import container, tensors
from fockgates.cli import EXIT_CONFIG, EXIT_TOLERANCE, main


@pytest.fixture
def runner():
    return CliRunner()


def test_gate_dump_round_trip(runner, tmp_path):
    out = tmp_path / "d.fgt1"
    res = runner.invoke(
        main, ["gate", "dump", "displacement", "-N", "8", "--gamma", "0.5+0.2j", "--out", str(out)]
    )
    assert res.exit_code == 0, res.output
    assert "sha256=" in res.output
    t = container.load(out)
    ref = tensors.displacement(0.5 + 0.2j, 8)
    assert np.array_equal(t.data, ref.data)


def test_gate_dump_missing_param(runner, tmp_path):
    res = runner.invoke(
        main, ["gate", "dump", "displacement", "-N", "8", "--out", str(tmp_path / "x.fgt1")]
    )
    assert res.exit_code == EXIT_CONFIG


def test_gate_check_passes(runner):
    res = runner.invoke(
        main,
        ["gate", "check", "single_mode_gaussian", "-N", "8", "--gamma", "0.3",
         "--phi", "0.4", "--zeta", "0.2+0.1j"],
    )
    assert res.exit_code == 0, res.output
    assert "PASS" in res.output and "FAIL" not in res.output


def test_gate_check_beamsplitter(runner):
    res = runner.invoke(
        main, ["gate", "check", "beamsplitter", "-N", "6", "--theta", "0.6", "--varphi", "0.2"]
    )
    assert res.exit_code == 0, res.output


def test_gate_check_cubic(runner):
    res = runner.invoke(main, ["gate", "check", "cubic", "-N", "6", "--eta", "2.0"])
    assert res.exit_code == 0, res.output


def test_gate_bench_writes_csv_and_figure(runner, tmp_path):
    out = tmp_path / "bench.csv"
    res = runner.invoke(
        main,
        ["gate", "bench", "--gates", "displacement", "--cutoffs", "8,16",
         "--repeats", "2", "--out", str(out)],
    )
    assert res.exit_code == 0, res.output
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "gate,cutoff,repeat,seconds"
    assert len(lines) == 1 + 2 * 2
    assert (tmp_path / "bench.png").exists()


def test_gate_bench_unknown_gate(runner, tmp_path):
    res = runner.invoke(
        main, ["gate", "bench", "--gates", "nope", "--out", str(tmp_path / "b.csv")]
    )
    assert res.exit_code == EXIT_CONFIG


def test_prepare_vacuum_config(runner, tmp_path):
    cfg = tmp_path / "vac.json"
    cfg.write_text(json.dumps({
        "cutoff": 6, "layers": 1, "steps": 80, "seeds": [0], "tol": 1e-6,
        "target": {"fock": 0},
    }))
    res = runner.invoke(main, ["prepare", str(cfg), "--out", str(tmp_path)])
    assert res.exit_code == 0, res.output
    rec = json.loads((tmp_path / "vac_record.json").read_text())
    assert rec["final_fidelity"] > 1 - 1e-5
    assert (tmp_path / "vac_trace.csv").exists()
    assert (tmp_path / "vac_trace.png").exists()


def test_prepare_bundled_config_shape(runner, tmp_path):
    """The packaged configs parse and drive a (shortened) run."""
    from importlib import resources

    text = resources.files("fockgates").joinpath("configs/vacuum.toml").read_text()
    cfg = tmp_path / "vacuum.toml"
    cfg.write_text(text)
    res = runner.invoke(main, ["prepare", str(cfg), "--out", str(tmp_path), "--seed", "0"])
    assert res.exit_code == 0, res.output


def test_prepare_bad_config(runner, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"cutoff": 6, "layers": 1, "steps": 10, "target": {}}))
    res = runner.invoke(main, ["prepare", str(cfg), "--out", str(tmp_path)])
    assert res.exit_code == EXIT_CONFIG


def serve_lines(runner, requests):
    payload = "\n".join(json.dumps(r) for r in requests) + "\n"
    res = runner.invoke(main, ["serve"], input=payload)
    assert res.exit_code == 0, res.output
    return [json.loads(line) for line in res.output.strip().splitlines()]


def test_serve_ping(runner):
    (resp,) = serve_lines(runner, [{"op": "ping"}])
    assert resp["ok"] and "displacement" in resp["kinds"]


def test_serve_tensor_round_trip(runner):
    (resp,) = serve_lines(
        runner,
        [{"op": "tensor", "kind": "squeezer", "params": {"zeta": [0.4, 0.1]}, "cutoff": 6}],
    )
    assert resp["ok"], resp
    t = container.load_bytes(base64.b64decode(resp["fgt1"]))
    ref = tensors.squeezer(0.4 + 0.1j, 6)
    assert np.array_equal(t.data, ref.data)


def test_serve_gradients(runner):
    (resp,) = serve_lines(
        runner,
        [{"op": "gradients", "kind": "kerr", "params": {"kappa": 0.5}, "cutoff": 5}],
    )
    assert resp["ok"], resp
    assert [g["param"] for g in resp["grads"]] == ["kappa"]
    g = container.load_bytes(base64.b64decode(resp["grads"][0]["fgt1"]))
    assert g.cutoff == 5


def test_serve_errors_as_data(runner):
    resps = serve_lines(
        runner,
        [
            {"op": "tensor", "kind": "nope", "cutoff": 4},
            {"op": "frobnicate"},
            {"op": "tensor", "kind": "beamsplitter",
             "params": {"theta": 0.1, "varphi": 0.0}, "cutoff": 500},
            {"op": "ping"},
        ],
    )
    assert not resps[0]["ok"] and "unknown gate kind" in resps[0]["error"]
    assert not resps[1]["ok"]
    assert not resps[2]["ok"] and resps[2]["error"].startswith("budget:")
    assert resps[3]["ok"]  # the server survives bad requests
