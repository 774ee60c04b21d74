import json
import math

import numpy as np
import pytest

from tqpsim import cli, thermal


def run(args):
    return cli.main(args)


def test_entropy_sweep_output_and_columns(tmp_path):
    out = tmp_path / "entropy.csv"
    assert run(["entropy-sweep", "--out", str(out), "--seed", "1"]) == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == ["n_mean", "S_thermal", "S_tqp", "n_tilde",
                      "landauer_pure", "landauer_tqp", "crossover_flag"]
    assert len(lines) - 1 == 20  # grid [0.1, 2.0] step 0.1
    meta = json.loads((tmp_path / "entropy.csv.meta.json").read_text())
    assert 0.7 <= meta["crossover_root"] <= 0.9
    assert meta["version"]
    # the pair-entropy column reproduces the closed form
    for line in lines[1:]:
        vals = line.split(",")
        n = float(vals[0])
        assert abs(float(vals[2]) - thermal.tqp_entropy_bits(n)) < 1e-6
        assert abs(float(vals[3]) - thermal.effective_pair_excitation(n)) < 1e-9


def test_reproducible_csv_bodies(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_min": 0.2, "n_max": 1.0, "n_step": 0.2}))
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["entropy-sweep", "--config", str(cfg), "--out", str(out1), "--seed", "9"]) == 0
    assert run(["entropy-sweep", "--config", str(cfg), "--out", str(out2), "--seed", "9"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_unknown_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"n_minimum": 0.1}))
    out = tmp_path / "x.csv"
    assert run(["entropy-sweep", "--config", str(cfg), "--out", str(out)]) == 2
    assert not out.exists()


def test_algebra_check_passes(tmp_path):
    out = tmp_path / "algebra.json"
    assert run(["algebra-check", "--out", str(out), "--seed", "2"]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert [r["cutoff"] for r in doc["results"]] == [6, 12, 20]
    worst = max(max(r["residuals"].values()) for r in doc["results"])
    assert worst <= 1e-10


def test_fidelity_sweep_small_grid(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_min": 0.5, "n_max": 2.0, "n_step": 0.5,
                               "repetitions": [50, 100]}))
    out = tmp_path / "fid.csv"
    assert run(["fidelity-sweep", "--config", str(cfg), "--out", str(out), "--seed", "3"]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) - 1 == 8  # 2 configs x 4 grid points
    rows = [line.split(",") for line in lines[1:]]
    for r in rows:
        n, fid, baseline = float(r[0]), float(r[3]), float(r[6])
        assert abs(baseline - 1.0 / (n + 1.0)) < 1e-9
        if n >= 1.0:
            assert fid > baseline
    meta = json.loads((tmp_path / "fid.csv.meta.json").read_text())
    assert meta["checks_passed"] is True


def test_msuqc_demo_small(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_circuits": 3, "max_steps": 2,
                               "mean_excitations": [0.5], "qubit_counts": [1]}))
    out = tmp_path / "demo.json"
    assert run(["msuqc-demo", "--config", str(cfg), "--out", str(out), "--seed", "4"]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["worst_deviation"] <= 1e-6
    assert len(doc["runs"]) == 3


def test_ns_check(tmp_path):
    out = tmp_path / "ns.json"
    assert run(["ns-check", "--out", str(out), "--seed", "5", "--cutoff", "18"]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert doc["dfs_report"]["all_null_dims_zero"] is True
    assert doc["dfs_report"]["negative_control_commutator"] > 0.1


def test_metadata_embeds_resolved_config(tmp_path):
    out = tmp_path / "entropy.csv"
    run(["entropy-sweep", "--out", str(out), "--seed", "31"])
    meta = json.loads((tmp_path / "entropy.csv.meta.json").read_text())
    cfg = meta["config"]
    assert cfg["seed"] == 31
    assert "n_min" in cfg and "n_step" in cfg and "agreement_tol" in cfg
    assert "cutoff_override" in cfg
