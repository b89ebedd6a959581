"""Config-driven command line: check, run, schedule, sweep.

One JSON document describes an experiment (domain, mappings, sample plan,
schedule, iteration settings, checks or sweep grids); each subcommand
consumes the parts it needs and writes a JSON report next to any CSV
output. Reports echo the fully resolved config, and feeding that echo back
in reproduces every verdict and trace byte for byte — wall-clock duration
is the one field that may differ.

Exit codes: 0 all verdicts passed, 1 some check failed, 2 the config could
not be resolved, 3 an engine failed mid-run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .conditions import (BGammaMu, check_condition_B, check_condition_C,
                         check_condition_C_lambda, check_lemma3,
                         check_nonexpansive, check_prop1,
                         check_quasi_nonexpansive, sweep_condition_B)
from .errors import ConfigError, IterationRuntimeError
from .iterate import (IterationConfig, Trace, goebel_kirk_gap,
                      krasnoselskii_run, monotone_distance_check,
                      multi_map_run, replay_trace, residual_vanishes_check,
                      trace_to_csv, truncated_family_run)
from .mappings import Mapping, build_mapping, make_family
from .schedules import (AlphaSchedule, ConstantSchedule, DecaySchedule,
                        TentSchedule, verify_schedule)
from .vecspace import Domain, SamplePlan, as_vector

__all__ = ["ExperimentConfig", "load_config", "cmd_check", "cmd_run",
           "cmd_schedule", "cmd_sweep", "main"]

_CHECK_NAMES = ("nonexpansive", "quasi_nonexpansive", "fixed_point_shrink",
                "condition_C", "condition_C_lambda", "condition_B", "prop1",
                "commuting")


@dataclass
class ExperimentConfig:
    """A parsed experiment: resolved objects plus the re-serializable echo."""

    name: str
    echo: dict
    domain: Optional[Domain] = None
    mappings: list[Mapping] = field(default_factory=list)
    plan: Optional[SamplePlan] = None
    schedule: Optional[AlphaSchedule] = None
    horizon: Optional[int] = None
    iteration: Optional[IterationConfig] = None
    x0: Optional[tuple[float, ...]] = None
    engine: Optional[str] = None
    checks: list[dict] = field(default_factory=list)
    sweep: Optional[dict] = None
    out: dict = field(default_factory=dict)


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"{where}: missing required field {key!r}")
    return d[key]


def _parse_domain(d: dict) -> Domain:
    shape = _need(d, "shape", "domain")
    norm = d.get("norm", "l2")
    try:
        if shape == "box":
            return Domain.box(_need(d, "lower", "domain"),
                              _need(d, "upper", "domain"), norm)
        if shape == "ball":
            return Domain.ball(_need(d, "center", "domain"),
                               _need(d, "radius", "domain"), norm)
    except ValueError as exc:
        raise ConfigError(f"domain: {exc}") from exc
    raise ConfigError(f"domain: unknown shape {shape!r}")


def _parse_plan(d: dict, seed_override: Optional[int]) -> SamplePlan:
    mode = _need(d, "mode", "plan")
    eps = d.get("epsilon", 1e-9)
    try:
        if mode == "grid":
            return SamplePlan.grid(_need(d, "resolution", "plan"), epsilon=eps)
        if mode == "random":
            seed = _need(d, "seed", "plan") if seed_override is None else seed_override
            return SamplePlan.random(seed, _need(d, "count", "plan"), epsilon=eps)
    except ValueError as exc:
        raise ConfigError(f"plan: {exc}") from exc
    raise ConfigError(f"plan: unknown mode {mode!r}")


def _parse_schedule(d: dict) -> AlphaSchedule:
    kind = _need(d, "kind", "schedule")
    try:
        if kind == "constant":
            return ConstantSchedule(_need(d, "value", "schedule"))
        if kind == "decay":
            return DecaySchedule(_need(d, "scale", "schedule"), d.get("rate", 1.0))
        if kind == "tent":
            return TentSchedule(_need(d, "peak", "schedule"),
                                _need(d, "first_block_length", "schedule"),
                                _need(d, "growth", "schedule"))
    except ValueError as exc:
        raise ConfigError(f"schedule: {exc}") from exc
    raise ConfigError(f"schedule: unknown kind {kind!r}")


def _parse_iteration(d: dict) -> tuple[IterationConfig, Optional[tuple[float, ...]]]:
    try:
        cfg = IterationConfig(
            lam=_need(d, "lambda", "iteration"),
            max_iters=_need(d, "max_iters", "iteration"),
            residual_tol=d.get("residual_tol", 0.0),
            truncation_K=d.get("truncation_K"),
            record_every=d.get("record_every", 1),
            gamma=d.get("gamma"))
    except ValueError as exc:
        raise ConfigError(f"iteration: {exc}") from exc
    x0 = d.get("x0")
    if x0 is not None:
        x0 = tuple(float(c) for c in as_vector(x0))
    return cfg, x0


def _normalize_checks(entries) -> list[dict]:
    out = []
    for i, entry in enumerate(entries):
        spec = {"check": entry} if isinstance(entry, str) else dict(entry)
        if "check" not in spec:
            raise ConfigError(f"checks[{i}]: missing required field 'check'")
        if spec["check"] not in _CHECK_NAMES:
            raise ConfigError(
                f"checks[{i}]: unknown check {spec['check']!r}; "
                f"known: {', '.join(_CHECK_NAMES)}")
        out.append(spec)
    return out


def load_config(path: str, seed_override: Optional[int] = None) -> ExperimentConfig:
    """Read and resolve a JSON experiment config.

    seed_override replaces the seed of a random sample plan (a no-op for
    grid plans) and is reflected in the echo, so a report always names the
    seed that actually ran.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"config {path!r} must be a JSON object")

    name = raw.get("name") or os.path.splitext(os.path.basename(path))[0]
    cfg = ExperimentConfig(name=name, echo={})

    if "domain" in raw:
        cfg.domain = _parse_domain(raw["domain"])
    if "mappings" in raw:
        if cfg.domain is None:
            raise ConfigError("mappings given without a domain")
        for i, desc in enumerate(raw["mappings"]):
            try:
                cfg.mappings.append(build_mapping(desc, cfg.domain))
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"mappings[{i}]: {exc}") from exc
    if "plan" in raw:
        cfg.plan = _parse_plan(raw["plan"], seed_override)
    if "schedule" in raw:
        cfg.schedule = _parse_schedule(raw["schedule"])
    if "horizon" in raw:
        h = raw["horizon"]
        if not isinstance(h, int) or h < 10:
            raise ConfigError(f"horizon: must be an integer >= 10, got {h!r}")
        cfg.horizon = h
    if "iteration" in raw:
        cfg.iteration, cfg.x0 = _parse_iteration(raw["iteration"])
    if "engine" in raw:
        if raw["engine"] not in ("single", "multi", "truncated"):
            raise ConfigError(f"engine: unknown engine {raw['engine']!r}")
        cfg.engine = raw["engine"]
    if "checks" in raw:
        cfg.checks = _normalize_checks(raw["checks"])
    if "sweep" in raw:
        sw = raw["sweep"]
        for k in ("gamma_grid", "mu_grid"):
            _need(sw, k, "sweep")
        if sw.get("pairing", "cross") not in ("cross", "zip"):
            raise ConfigError(f"sweep: unknown pairing {sw.get('pairing')!r}")
        cfg.sweep = sw
    cfg.out = dict(raw.get("out", {}))

    echo: dict = {"name": name}
    if cfg.domain is not None:
        echo["domain"] = cfg.domain.to_dict()
    if cfg.mappings:
        echo["mappings"] = [dict(d) for d in raw["mappings"]]
    if cfg.plan is not None:
        echo["plan"] = cfg.plan.to_dict()
    if cfg.schedule is not None:
        echo["schedule"] = cfg.schedule.to_dict()
    if cfg.horizon is not None:
        echo["horizon"] = cfg.horizon
    if cfg.iteration is not None:
        it = cfg.iteration.to_dict()
        if cfg.x0 is not None:
            it["x0"] = list(cfg.x0)
        echo["iteration"] = it
    if cfg.engine is not None:
        echo["engine"] = cfg.engine
    if cfg.checks:
        echo["checks"] = cfg.checks
    if cfg.sweep is not None:
        echo["sweep"] = dict(cfg.sweep)
    if cfg.out:
        echo["out"] = dict(cfg.out)
    cfg.echo = echo
    return cfg


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _out_path(cfg: ExperimentConfig, out_dir: Optional[str], key: str,
              default_suffix: str) -> str:
    base = cfg.out.get(key, f"{cfg.name}{default_suffix}")
    root = out_dir or "."
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, base)


def _write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def _say(quiet: bool, msg: str) -> None:
    if not quiet:
        print(msg)


def _fmt17(v: float) -> str:
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _dispatch_check(spec: dict, T: Mapping, plan: SamplePlan):
    name = spec["check"]
    if name == "nonexpansive":
        return check_nonexpansive(T, plan)
    if name == "quasi_nonexpansive":
        return check_quasi_nonexpansive(T, plan)
    if name == "fixed_point_shrink":
        p = BGammaMu(_need(spec, "gamma", "check"), _need(spec, "mu", "check"))
        return check_lemma3(T, p, plan)
    if name == "condition_C":
        return check_condition_C(T, plan)
    if name == "condition_C_lambda":
        return check_condition_C_lambda(T, _need(spec, "lambda", "check"), plan)
    if name == "condition_B":
        p = BGammaMu(_need(spec, "gamma", "check"), _need(spec, "mu", "check"))
        return check_condition_B(T, p, plan)
    if name == "prop1":
        p = BGammaMu(_need(spec, "gamma", "check"), _need(spec, "mu", "check"))
        return check_prop1(T, _need(spec, "theta", "check"), p, plan)
    raise ConfigError(f"check: unknown check {name!r}")


def cmd_check(config_path: str, out_dir: Optional[str] = None,
              seed: Optional[int] = None, quiet: bool = False) -> tuple[int, dict]:
    """Run the configured condition checks; exit 0 only if all pass."""
    t0 = time.perf_counter()
    cfg = load_config(config_path, seed)
    if not cfg.mappings:
        raise ConfigError("check: config names no mappings")
    if cfg.plan is None:
        raise ConfigError("check: config has no sample plan")
    if not cfg.checks:
        raise ConfigError("check: config requests no checks")
    point_checks = [s for s in cfg.checks if s["check"] != "commuting"]
    want_commuting = any(s["check"] == "commuting" for s in cfg.checks)
    verdicts = []
    for T in cfg.mappings:
        for spec in point_checks:
            v = _dispatch_check(spec, T, cfg.plan)
            verdicts.append((T.label, v))
            _say(quiet, f"[{'PASS' if v.passed else 'FAIL'}] {T.label}: "
                        f"{v.condition_label}"
                        f"{dict(v.params) if v.params else ''}")
    commuting = None
    if want_commuting:
        if len(cfg.mappings) < 2:
            raise ConfigError("check: 'commuting' needs at least two mappings")
        commuting = make_family(cfg.mappings, cfg.plan).commuting_certificate
        _say(quiet, f"[{'PASS' if commuting.passed else 'FAIL'}] family: commuting")
    passed = all(v.passed for _, v in verdicts) and (
        commuting is None or commuting.passed)
    report = {
        "command": "check",
        "config": cfg.echo,
        "verdicts": [{"mapping": lbl, **v.to_dict()} for lbl, v in verdicts],
        "commuting": commuting.to_dict() if commuting else None,
        "passed": passed,
        "duration_seconds": time.perf_counter() - t0,
    }
    path = _out_path(cfg, out_dir, "report", "_report.json")
    _write_json(path, report)
    _say(quiet, f"{'PASS' if passed else 'FAIL'} -> {path}")
    return (0 if passed else 1), report


def cmd_run(config_path: str, out_dir: Optional[str] = None,
            seed: Optional[int] = None, quiet: bool = False) -> tuple[int, dict]:
    """Execute the configured iteration; write trace CSV and JSON report."""
    t0 = time.perf_counter()
    cfg = load_config(config_path, seed)
    if cfg.iteration is None:
        raise ConfigError("run: config has no iteration settings")
    if cfg.x0 is None:
        raise ConfigError("run: iteration settings lack x0")
    if not cfg.mappings:
        raise ConfigError("run: config names no mappings")
    engine = cfg.engine or ("single" if len(cfg.mappings) == 1 else "multi")
    commuting = None
    if engine == "single":
        if len(cfg.mappings) != 1:
            raise ConfigError(
                f"run: engine 'single' needs exactly one mapping, got {len(cfg.mappings)}")
        subject = cfg.mappings[0]
        trace = krasnoselskii_run(subject, cfg.x0, cfg.iteration)
    else:
        if cfg.schedule is None:
            raise ConfigError(f"run: engine {engine!r} needs a schedule")
        family = make_family(cfg.mappings, cfg.plan)
        commuting = family.commuting_certificate
        subject = family
        if engine == "multi":
            trace = multi_map_run(family, cfg.schedule, cfg.x0, cfg.iteration)
        else:
            trace = truncated_family_run(family, cfg.schedule, cfg.x0, cfg.iteration)
    gap = goebel_kirk_gap(trace)
    replay = replay_trace(trace, subject)
    monotone = [monotone_distance_check(trace, z) for z in trace.fixed_points]
    residual_note = None
    residual = None
    if len(trace.records) >= 20:
        residual = residual_vanishes_check(trace)
    else:
        residual_note = (f"skipped: needs >= 20 recorded steps, "
                         f"trace has {len(trace.records)}")
    schedule_report = None
    if cfg.schedule is not None and cfg.horizon is not None:
        schedule_report = verify_schedule(cfg.schedule, cfg.horizon).to_dict()
    all_verdicts = [replay] + monotone + ([residual] if residual else []) \
        + ([commuting] if commuting else [])
    passed = all(v.passed for v in all_verdicts)
    trace_path = _out_path(cfg, out_dir, "trace", "_trace.csv")
    trace_to_csv(trace, trace_path)
    report = {
        "command": "run",
        "config": cfg.echo,
        "engine": engine,
        "commuting": commuting.to_dict() if commuting else None,
        "summary": trace.summary(),
        "diagnostics": {
            "gap_tail_max": gap.tail_max,
            "gap_pairs": len(gap.gaps),
            "replay": replay.to_dict(),
            "monotone": [v.to_dict() for v in monotone],
            "residual_vanishes": residual.to_dict() if residual else None,
            "residual_note": residual_note,
        },
        "schedule_report": schedule_report,
        "trace_csv": os.path.basename(trace_path),
        "passed": passed,
        "duration_seconds": time.perf_counter() - t0,
    }
    path = _out_path(cfg, out_dir, "report", "_report.json")
    _write_json(path, report)
    s = trace.summary()
    _say(quiet, f"stop={s['stop_reason']} steps={s['total_steps']} "
                f"final_residual={s['final_residual']:.3e}")
    _say(quiet, f"{'PASS' if passed else 'FAIL'} -> {path}")
    return (0 if passed else 1), report


def cmd_schedule(config_path: str, out_dir: Optional[str] = None,
                 seed: Optional[int] = None, quiet: bool = False) -> tuple[int, dict]:
    """Verify the configured schedule's tail behavior at the horizon."""
    t0 = time.perf_counter()
    cfg = load_config(config_path, seed)
    if cfg.schedule is None:
        raise ConfigError("schedule: config has no schedule descriptor")
    if cfg.horizon is None:
        raise ConfigError("schedule: config has no horizon")
    rep = verify_schedule(cfg.schedule, cfg.horizon)
    report = {
        "command": "schedule",
        "config": cfg.echo,
        "report": rep.to_dict(),
        "passed": rep.compliant,
        "duration_seconds": time.perf_counter() - t0,
    }
    path = _out_path(cfg, out_dir, "report", "_report.json")
    _write_json(path, report)
    _say(quiet, f"liminf_proxy={rep.liminf_proxy:.6g} "
                f"limsup_proxy={rep.limsup_proxy:.6g} "
                f"diff_proxy={rep.diff_proxy:.6g}")
    for flag in rep.flags():
        _say(quiet, f"flag: {flag}")
    _say(quiet, f"{'PASS' if rep.compliant else 'FAIL'} -> {path}")
    return (0 if rep.compliant else 1), report


def _sweep_csv(table, path: str) -> None:
    lines = ["gamma,mu,status,witness_x,witness_y,lhs,rhs"]
    for c in table.cells:
        w = c.verdict.witness if c.verdict else None
        wx = ";".join(_fmt17(v) for v in w.x) if w else ""
        wy = ";".join(_fmt17(v) for v in w.y) if w and w.y is not None else ""
        lhs = _fmt17(w.lhs) if w else ""
        rhs = _fmt17(w.rhs) if w else ""
        lines.append(",".join([_fmt17(c.gamma), _fmt17(c.mu), c.status,
                               wx, wy, lhs, rhs]))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_sweep(config_path: str, out_dir: Optional[str] = None,
              seed: Optional[int] = None, quiet: bool = False) -> tuple[int, dict]:
    """Sweep the two-parameter condition over the configured grids."""
    t0 = time.perf_counter()
    cfg = load_config(config_path, seed)
    if cfg.sweep is None:
        raise ConfigError("sweep: config has no sweep grids")
    if len(cfg.mappings) != 1:
        raise ConfigError(
            f"sweep: config must name exactly one mapping, got {len(cfg.mappings)}")
    if cfg.plan is None:
        raise ConfigError("sweep: config has no sample plan")
    table = sweep_condition_B(cfg.mappings[0], cfg.sweep["gamma_grid"],
                              cfg.sweep["mu_grid"], cfg.plan,
                              pairing=cfg.sweep.get("pairing", "cross"))
    table_path = _out_path(cfg, out_dir, "table", "_sweep.csv")
    _sweep_csv(table, table_path)
    passed = table.all_passed
    report = {
        "command": "sweep",
        "config": cfg.echo,
        "mapping": table.mapping_label,
        "pairing": table.pairing,
        "cells": table.to_rows(),
        "table_csv": os.path.basename(table_path),
        "passed": passed,
        "duration_seconds": time.perf_counter() - t0,
    }
    path = _out_path(cfg, out_dir, "report", "_report.json")
    _write_json(path, report)
    for c in table.cells:
        _say(quiet, f"gamma={c.gamma:g} mu={c.mu:g}: {c.status}")
    _say(quiet, f"{'PASS' if passed else 'FAIL'} -> {path}")
    return (0 if passed else 1), report


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

_COMMANDS = {"check": cmd_check, "run": cmd_run,
             "schedule": cmd_schedule, "sweep": cmd_sweep}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="fixedlab",
        description="Empirical fixed-point laboratory: condition checks, "
                    "averaged iteration runs, schedule verification, and "
                    "parameter sweeps, all driven by JSON configs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("check", "run condition checks from a config"),
            ("run", "execute an iteration experiment"),
            ("schedule", "verify a blend-weight schedule"),
            ("sweep", "sweep the two-parameter condition over grids")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True, help="path to a JSON config")
        sp.add_argument("--out", default=None, help="output directory (default: .)")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the random sample plan's seed")
        sp.add_argument("--quiet", action="store_true",
                        help="suppress progress lines")
    args = parser.parse_args(argv)
    try:
        code, _ = _COMMANDS[args.command](args.config, args.out, args.seed,
                                          args.quiet)
        return code
    except IterationRuntimeError as exc:
        print(f"runtime error at step {exc.step}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:   # ConfigError and every contract violation
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
