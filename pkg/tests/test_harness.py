"""JSON-config front end: exit codes, reports, and byte-identical replays.

Exit code contract: 0 all checks passed, 1 some check failed, 2 the config
or its parameters were unusable, 3 the iteration itself broke down.
"""
import json
import os

import pytest

from fixedlab import ConfigError, cmd_check, cmd_run, cmd_schedule, cmd_sweep, load_config, main

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg_path(name):
    return os.path.join(CONFIGS, name)


def write_cfg(tmp_path, name, payload):
    p = tmp_path / name
    p.write_text(json.dumps(payload))
    return str(p)


# --- load_config ------------------------------------------------------------

def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.json"))


def test_load_config_rejects_bad_json(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_load_config_names_missing_fields(tmp_path):
    p = write_cfg(tmp_path, "nodomain.json",
                  {"name": "x", "mappings": [{"name": "identity"}]})
    with pytest.raises(ConfigError, match="domain"):
        load_config(p)


def test_load_config_shipped_files_parse():
    for name in os.listdir(CONFIGS):
        cfg = load_config(cfg_path(name))
        assert cfg.name, name


# --- check ------------------------------------------------------------------

def test_check_example1_fails_with_witness(tmp_path):
    code, report = cmd_check(cfg_path("example1_check.json"),
                             out_dir=str(tmp_path), quiet=True)
    assert code == 1
    assert report["passed"] is False
    by_label = {v["condition"]: v for v in report["verdicts"]}
    assert not by_label["nonexpansive"]["passed"]
    assert by_label["nonexpansive"]["witness"]["x"] == [2.5]
    assert by_label["nonexpansive"]["witness"]["y"] == [4.0]
    # the zero-parameter two-parameter check degenerates to the same verdict
    assert not by_label["condition_B"]["passed"]
    assert by_label["condition_B"]["witness"] == by_label["nonexpansive"]["witness"]
    assert (tmp_path / "example1_check_report.json").exists()


def test_check_passing_config(tmp_path):
    p = write_cfg(tmp_path, "ok.json", {
        "name": "ok",
        "domain": {"shape": "box", "lower": [-1.0, -1.0], "upper": [1.0, 1.0],
                   "norm": "l2"},
        "mappings": [{"name": "affine", "matrix": [[0.6, 0.1], [-0.1, 0.5]],
                      "shift": [0.2, -0.1]}],
        "plan": {"mode": "grid", "resolution": 6, "epsilon": 1e-9},
        "checks": ["nonexpansive", "condition_C",
                   {"check": "condition_B", "gamma": 0.7, "mu": 0.35}],
    })
    code, report = cmd_check(p, out_dir=str(tmp_path), quiet=True)
    assert code == 0
    assert report["passed"] is True
    assert len(report["verdicts"]) == 3


def test_check_fixed_point_shrink_entry(tmp_path):
    base = {
        "name": "shrink",
        "domain": {"shape": "box", "lower": [-1.0, -1.0], "upper": [1.0, 1.0],
                   "norm": "l2"},
        "mappings": [{"name": "affine", "matrix": [[0.6, 0.1], [-0.1, 0.5]],
                      "shift": [0.2, -0.1]}],
        "plan": {"mode": "grid", "resolution": 6, "epsilon": 1e-9},
        "checks": [{"check": "fixed_point_shrink", "gamma": 0.7, "mu": 0.35}],
    }
    p = write_cfg(tmp_path, "shrink.json", base)
    code, report = cmd_check(p, out_dir=str(tmp_path), quiet=True)
    assert code == 0
    (v,) = report["verdicts"]
    assert v["condition"] == "fixed_point_shrink"
    assert v["params"] == {"gamma": 0.7, "mu": 0.35}

    base["checks"] = ["fixed_point_shrink"]   # hypothesis parameters required
    p2 = write_cfg(tmp_path, "shrink_bare.json", base)
    assert main(["check", "--config", p2, "--quiet"]) == 2


def test_check_commuting_entry(tmp_path):
    p = write_cfg(tmp_path, "fam.json", {
        "name": "fam",
        "domain": {"shape": "ball", "center": [0.0, 0.0], "radius": 1.0,
                   "norm": "l2"},
        "mappings": [{"name": "scaling", "factor": 0.9},
                     {"name": "scaling", "factor": 0.7}],
        "plan": {"mode": "grid", "resolution": 6, "epsilon": 1e-9},
        "checks": ["nonexpansive", "commuting"],
    })
    code, report = cmd_check(p, out_dir=str(tmp_path), quiet=True)
    assert code == 0
    assert report["commuting"]["passed"] is True


def test_unknown_check_name_is_config_error(tmp_path):
    p = write_cfg(tmp_path, "bad.json", {
        "name": "bad",
        "domain": {"shape": "box", "lower": [0.0], "upper": [4.0], "norm": "l2"},
        "mappings": [{"name": "example1"}],
        "plan": {"mode": "grid", "resolution": 5, "epsilon": 1e-9},
        "checks": ["no_such_check"],
    })
    assert main(["check", "--config", p, "--quiet"]) == 2


def test_unknown_mapping_is_config_error(tmp_path):
    p = write_cfg(tmp_path, "bad.json", {
        "name": "bad",
        "domain": {"shape": "box", "lower": [0.0], "upper": [4.0], "norm": "l2"},
        "mappings": [{"name": "mystery"}],
        "plan": {"mode": "grid", "resolution": 5, "epsilon": 1e-9},
        "checks": ["nonexpansive"],
    })
    assert main(["check", "--config", p, "--quiet", "--out", str(tmp_path)]) == 2


# --- run --------------------------------------------------------------------

def test_run_example1_writes_trace_and_report(tmp_path):
    code, report = cmd_run(cfg_path("example1.json"), out_dir=str(tmp_path),
                           quiet=True)
    assert code == 0
    assert report["passed"] is True
    assert report["engine"] == "single"
    assert report["summary"]["total_steps"] == 40
    assert report["summary"]["final_x"] == [3.0 * 2.0 ** -40]
    assert report["diagnostics"]["replay"]["passed"] is True
    assert report["diagnostics"]["monotone"][0]["passed"] is True
    assert report["diagnostics"]["residual_vanishes"]["passed"] is True
    csv = (tmp_path / "example1_trace.csv").read_text().splitlines()
    assert csv[0] == "step,x_0,residual,residual_1,alpha,dist_1"
    assert len(csv) == 1 + 41
    assert float(csv[-1].split(",")[1]) == 3.0 * 2.0 ** -40


def test_run_multi_includes_commuting_and_schedule(tmp_path):
    code, report = cmd_run(cfg_path("three_scalings.json"),
                           out_dir=str(tmp_path), quiet=True)
    assert code == 0
    assert report["engine"] == "multi"
    assert report["commuting"]["passed"] is True
    assert report["schedule_report"]["compliant"] is True
    assert report["summary"]["stop_reason"] == "max_iters"


def test_run_truncated_config(tmp_path):
    code, report = cmd_run(cfg_path("truncated_family.json"),
                           out_dir=str(tmp_path), quiet=True)
    assert code == 0
    assert report["engine"] == "truncated"
    assert len(report["summary"]["mappings"]) == 2


def test_run_x0_outside_domain_is_config_error(tmp_path):
    p = write_cfg(tmp_path, "far.json", {
        "name": "far",
        "domain": {"shape": "box", "lower": [0.0], "upper": [4.0], "norm": "l2"},
        "mappings": [{"name": "example1"}],
        "engine": "single",
        "iteration": {"lambda": 0.5, "x0": [9.0], "max_iters": 5},
    })
    assert main(["run", "--config", p, "--quiet", "--out", str(tmp_path)]) == 2


def test_run_domain_escape_is_runtime_error(tmp_path, capsys):
    p = write_cfg(tmp_path, "escape.json", {
        "name": "escape",
        "domain": {"shape": "box", "lower": [-1.0, -1.0], "upper": [1.0, 1.0],
                   "norm": "l2"},
        "mappings": [{"name": "translation", "offset": [0.5, 0.0]}],
        "engine": "single",
        "iteration": {"lambda": 0.9, "x0": [0.9, 0.0], "max_iters": 10},
    })
    assert main(["run", "--config", p, "--quiet", "--out", str(tmp_path)]) == 3
    assert "runtime error at step 1" in capsys.readouterr().err


def test_run_replay_is_byte_identical(tmp_path):
    a = tmp_path / "a"
    b = tmp_path / "b"
    code, report = cmd_run(cfg_path("example1.json"), out_dir=str(a),
                           quiet=True)
    assert code == 0
    echo = write_cfg(tmp_path, "echo.json", report["config"])
    code2, report2 = cmd_run(echo, out_dir=str(b), quiet=True)
    assert code2 == 0
    report.pop("duration_seconds")
    report2.pop("duration_seconds")
    assert report == report2
    assert (a / "example1_trace.csv").read_bytes() \
        == (b / "example1_trace.csv").read_bytes()


# --- schedule -----------------------------------------------------------------

def test_schedule_command_pass(tmp_path):
    code, report = cmd_schedule(cfg_path("tent_schedule.json"),
                                out_dir=str(tmp_path), quiet=True)
    assert code == 0
    assert report["passed"] is True
    assert report["report"]["limsup_proxy"] == 0.25


def test_schedule_command_flags_constant(tmp_path):
    code, report = cmd_schedule(cfg_path("constant_schedule.json"),
                                out_dir=str(tmp_path), quiet=True)
    assert code == 1
    assert report["report"]["flags"]


def test_schedule_command_bad_horizon(tmp_path):
    p = write_cfg(tmp_path, "h.json", {
        "name": "h",
        "schedule": {"kind": "constant", "value": 0.1},
        "horizon": 5,
    })
    assert main(["schedule", "--config", p, "--quiet", "--out", str(tmp_path)]) == 2


# --- sweep ----------------------------------------------------------------------

def test_sweep_command_writes_frozen_table(tmp_path):
    code, report = cmd_sweep(cfg_path("example1_sweep.json"),
                             out_dir=str(tmp_path), quiet=True)
    assert code == 1      # two failing cells on the diagonal
    statuses = [row["status"] for row in report["cells"]]
    assert statuses == ["fail", "fail", "pass", "pass", "pass", "pass"]
    lines = (tmp_path / "example1_sweep_sweep.csv").read_text().splitlines()
    assert lines[0] == "gamma,mu,status,witness_x,witness_y,lhs,rhs"
    assert lines[1] == ("0.5,0.25,fail,2.0100000000000002,4,2,"
                        "1.9974999999999998")
    assert lines[2] == ("0.59999999999999998,0.29999999999999999,fail,"
                        "2.0100000000000002,4,2,1.9989999999999997")
    assert lines[3] == "0.69999999999999996,0.34999999999999998,pass,,,,"


def test_seed_override_rewrites_plan(tmp_path):
    p = write_cfg(tmp_path, "rand.json", {
        "name": "rand",
        "domain": {"shape": "ball", "center": [0.0, 0.0], "radius": 1.0,
                   "norm": "l2"},
        "mappings": [{"name": "scaling", "factor": 0.8}],
        "plan": {"mode": "random", "seed": 7, "count": 40, "epsilon": 1e-9},
        "checks": ["nonexpansive"],
    })
    _, r7 = cmd_check(p, out_dir=str(tmp_path / "7"), quiet=True)
    _, r99 = cmd_check(p, out_dir=str(tmp_path / "99"), seed=99, quiet=True)
    assert r7["config"]["plan"]["seed"] == 7
    assert r99["config"]["plan"]["seed"] == 99
    native = write_cfg(tmp_path, "rand99.json",
                       {**json.loads((tmp_path / "rand.json").read_text()),
                        "plan": {"mode": "random", "seed": 99, "count": 40,
                                 "epsilon": 1e-9}})
    _, rn = cmd_check(native, out_dir=str(tmp_path / "n"), quiet=True)
    assert r99["verdicts"] == rn["verdicts"]
