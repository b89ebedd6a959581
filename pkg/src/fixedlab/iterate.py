"""Averaged fixed-point iteration engines and trace diagnostics.

All engines share one step rule: blend the current images into
w_n = sum_k c_k * T_k(x_n), then average x_{n+1} = lam*w_n + (1-lam)*x_n.
They differ only in how the blend weights c_k are produced:

  krasnoselskii_run     one map, c = (1,)
  multi_map_run         m maps, c_1 = 1 - sum_{k=1}^{m-1} a_n^k,
                        c_k = a_n^{k-1} for k = 2..m
  truncated_family_run  first K maps of a family, c_k = a_n^{k-1} for
                        k = 2..K, and c_1 = 1 - a_n/(1-a_n) + a_n^K/(1-a_n)
                        (the weight mass of the dropped geometric tail is
                        folded into the first map)

Weight vectors are nonnegative and sum to 1 whenever a_n <= 1/2; the
engines assert this every step. Zero weights are skipped in the blend, so
the constant-zero schedule makes every engine execute bit-for-bit the same
arithmetic as `krasnoselskii_run` — degeneracy is an identity here, not an
approximation.

A run stops when the blend residual ||w_n - x_n|| falls to residual_tol,
or after max_iters steps. The Trace records enough per step (iterate,
residuals, blend weight parameter, distances to known common fixed points)
to re-derive everything offline; `replay_trace` does exactly that.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, IO, Optional, Sequence, Union

import numpy as np

from .errors import (ContractViolation, DomainError, InvariantError,
                     IterationRuntimeError, PreconditionError)
from .mappings import Mapping, MappingFamily, common_fixed_points
from .schedules import AlphaSchedule
from .vecspace import Domain, Vector, as_vector, dist
from .verdicts import Verdict, Witness

__all__ = [
    "IterationConfig", "TraceStep", "Trace", "GapReport",
    "krasnoselskii_run", "multi_map_run", "truncated_family_run",
    "multi_map_weights", "truncated_weights",
    "goebel_kirk_gap", "monotone_distance_check", "residual_vanishes_check",
    "asymptotic_radius", "replay_trace", "trace_to_csv",
    "DECIMATION_START", "MONOTONE_TOL", "REPLAY_TOL", "WEIGHT_TOL",
]

#: Steps below this index honor record_every as given; from it on the
#: stride is multiplied by 10 to bound trace memory on long runs.
DECIMATION_START = 10_000

MONOTONE_TOL = 1e-12
REPLAY_TOL = 1e-12
WEIGHT_TOL = 1e-12

#: Above this, the averaging floor lam >= gamma is far from the regime the
#: convergence experiments explore; runs proceed but warn.
GAMMA_WARN_THRESHOLD = 0.1

STOP_TOL = "tol"
STOP_MAX_ITERS = "max_iters"


@dataclass(frozen=True)
class IterationConfig:
    """Step rule parameters shared by all engines.

    lam is the averaging weight in (0, 1). When a condition context is
    supplied via `gamma`, lam must additionally satisfy lam >= gamma for
    gamma > 0 (the step rule's admissible range shrinks with gamma).
    truncation_K is only consumed by truncated_family_run.
    """

    lam: float
    max_iters: int
    residual_tol: float = 0.0
    truncation_K: Optional[int] = None
    record_every: int = 1
    gamma: Optional[float] = None

    def __post_init__(self):
        if not (0.0 < self.lam < 1.0):
            raise ContractViolation(f"lam must lie in (0, 1), got {self.lam}")
        if self.max_iters < 1:
            raise ContractViolation(f"max_iters must be >= 1, got {self.max_iters}")
        if self.residual_tol < 0.0:
            raise ContractViolation(
                f"residual_tol must be >= 0, got {self.residual_tol}")
        if self.record_every < 1:
            raise ContractViolation(
                f"record_every must be >= 1, got {self.record_every}")
        if self.truncation_K is not None and self.truncation_K < 1:
            raise ContractViolation(
                f"truncation_K must be >= 1, got {self.truncation_K}")
        if self.gamma is not None:
            if not (0.0 <= self.gamma <= 1.0):
                raise ContractViolation(
                    f"gamma context must lie in [0, 1], got {self.gamma}")
            if self.gamma > 0.0 and self.lam < self.gamma:
                raise ContractViolation(
                    f"lam must be >= gamma when gamma > 0; "
                    f"got lam={self.lam}, gamma={self.gamma}")

    def to_dict(self) -> dict:
        return {"lambda": self.lam, "max_iters": self.max_iters,
                "residual_tol": self.residual_tol,
                "truncation_K": self.truncation_K,
                "record_every": self.record_every, "gamma": self.gamma}


@dataclass(frozen=True)
class TraceStep:
    step: int
    x: tuple[float, ...]
    residual: float                      # ||w_n - x_n||
    map_residuals: tuple[float, ...]     # ||T_k x_n - x_n|| per engine map
    alpha: float
    fp_distances: tuple[float, ...]      # ||x_n - z|| per known fixed point


@dataclass(frozen=True)
class Trace:
    engine: str                          # "single" | "multi" | "truncated"
    records: tuple[TraceStep, ...]
    lam: Optional[float]
    stop_reason: str                     # STOP_TOL | STOP_MAX_ITERS
    total_steps: int
    config: IterationConfig
    mapping_labels: tuple[str, ...]
    fixed_points: tuple[tuple[float, ...], ...]
    domain: Domain
    schedule: Optional[dict] = None

    @property
    def final(self) -> TraceStep:
        return self.records[-1]

    def summary(self) -> dict:
        last = self.final
        return {
            "engine": self.engine,
            "mappings": list(self.mapping_labels),
            "stop_reason": self.stop_reason,
            "total_steps": self.total_steps,
            "recorded_steps": len(self.records),
            "lambda": self.lam,
            "schedule": self.schedule,
            "final_x": list(last.x),
            "final_residual": last.residual,
            "final_fp_distances": list(last.fp_distances),
            "fixed_points": [list(z) for z in self.fixed_points],
            "config": self.config.to_dict(),
        }


def multi_map_weights(a: float, m: int) -> list[float]:
    """Blend weights (c_1 .. c_m) of the m-map scheme at blend level a.

    c_1 = 1 - (a + a^2 + ... + a^{m-1}), c_k = a^{k-1} for k >= 2. For
    a = 0 this is exactly (1.0, 0.0, ..., 0.0).
    """
    if m < 1:
        raise ContractViolation(f"need at least one map, got m={m}")
    powers = [a ** k for k in range(1, m)]
    return [1.0 - math.fsum(powers)] + powers


def truncated_weights(a: float, K: int) -> list[float]:
    """Weights for the first K maps of the infinite blend at level a < 1.

    The infinite scheme gives the first map 1 - a/(1-a) and map k the
    weight a^{k-1}; dropping maps beyond K leaves the geometric tail mass
    a^K/(1-a), which is returned to the first map so the vector still sums
    to 1. For a = 0 this is exactly (1.0, 0.0, ..., 0.0).
    """
    if K < 1:
        raise ContractViolation(f"need at least one map, got K={K}")
    if not (0.0 <= a < 1.0):
        raise ContractViolation(f"blend level must lie in [0, 1), got {a}")
    powers = [a ** k for k in range(1, K)]
    head = 1.0 - a / (1.0 - a) + a ** K / (1.0 - a)
    return [head] + powers


def _blend(images: Sequence[np.ndarray], weights: Sequence[float]) -> np.ndarray:
    # zero weights are skipped, not multiplied in: the degenerate scheme
    # must take the same arithmetic path as its reduced form
    acc = None
    for w_k, img in zip(weights, images):
        if w_k == 0.0:
            continue
        term = w_k * img
        acc = term if acc is None else acc + term
    if acc is None:
        raise InvariantError("blend weights were all zero")
    return acc


def _run_engine(engine: str,
                fns: Sequence[Callable[[np.ndarray], np.ndarray]],
                labels: Sequence[str],
                domain: Domain,
                x0,
                cfg: IterationConfig,
                weights_of: Callable[[int], tuple[float, list[float]]],
                fixed_points: Sequence[np.ndarray],
                schedule_echo: Optional[dict]) -> Trace:
    if cfg.gamma is not None and cfg.gamma > GAMMA_WARN_THRESHOLD:
        warnings.warn(
            f"gamma context {cfg.gamma} exceeds {GAMMA_WARN_THRESHOLD}; the "
            "shipped experiments only probe small values", stacklevel=3)
    x = np.asarray(as_vector(x0), dtype=float).copy()
    if x.shape[0] != domain.dimension:
        raise DomainError(
            f"start point has dimension {x.shape[0]}, domain needs {domain.dimension}")
    if not domain.contains(x):
        raise DomainError(f"start point {x.tolist()} lies outside the domain")
    kind = domain.norm_kind
    fps = [np.asarray(z, dtype=float) for z in fixed_points]
    lam = cfg.lam
    carry = 1.0 - lam
    records: list[TraceStep] = []
    n = 0
    while True:
        a_n, wts = weights_of(n)
        if any(c < 0.0 for c in wts) or abs(math.fsum(wts) - 1.0) > WEIGHT_TOL:
            raise InvariantError(
                f"blend weights {wts} invalid at step {n} (alpha={a_n})")
        images = []
        for fn, lbl in zip(fns, labels):
            img = np.asarray(fn(x), dtype=float)
            if img.shape != x.shape or not np.all(np.isfinite(img)):
                raise IterationRuntimeError(
                    f"mapping {lbl!r} returned an invalid image at step {n}", step=n)
            images.append(img)
        w = _blend(images, wts)
        residual = dist(w, x, kind)
        stop = None
        if residual <= cfg.residual_tol:
            stop = STOP_TOL
        elif n >= cfg.max_iters:
            stop = STOP_MAX_ITERS
        stride = cfg.record_every if n < DECIMATION_START else cfg.record_every * 10
        if n % stride == 0 or stop is not None:
            records.append(TraceStep(
                step=n, x=tuple(map(float, x)), residual=residual,
                map_residuals=tuple(dist(img, x, kind) for img in images),
                alpha=a_n,
                fp_distances=tuple(dist(x, z, kind) for z in fps)))
        if stop is not None:
            return Trace(engine=engine, records=tuple(records), lam=lam,
                         stop_reason=stop, total_steps=n, config=cfg,
                         mapping_labels=tuple(labels),
                         fixed_points=tuple(tuple(map(float, z)) for z in fps),
                         domain=domain, schedule=schedule_echo)
        x_next = lam * w + carry * x
        if not domain.contains(x_next):
            raise IterationRuntimeError(
                f"iterate left the domain at step {n + 1}: {x_next.tolist()}",
                step=n + 1)
        x = x_next
        n += 1


def krasnoselskii_run(T: Mapping, x0, cfg: IterationConfig) -> Trace:
    """Single-map averaged iteration x_{n+1} = lam*T(x_n) + (1-lam)*x_n."""
    one = [1.0]
    return _run_engine("single", [T.fn], [T.label], T.domain, x0, cfg,
                       lambda n: (0.0, one),
                       T.known_fixed_points, schedule_echo=None)


def multi_map_run(F: MappingFamily, s: AlphaSchedule, x0,
                  cfg: IterationConfig) -> Trace:
    """m-map blend iteration driven by the schedule; needs m >= 2.

    Distances are tracked to the family's verified common fixed points.
    """
    m = len(F)
    if m < 2:
        raise ContractViolation(f"multi_map_run needs at least 2 maps, got {m}")
    fps = common_fixed_points(F)

    def weights_of(n: int) -> tuple[float, list[float]]:
        a = s.alpha(n)
        return a, multi_map_weights(a, m)

    return _run_engine("multi", [t.fn for t in F.members],
                       [t.label for t in F.members], F.domain, x0, cfg,
                       weights_of, fps, schedule_echo=s.to_dict())


def truncated_family_run(F: MappingFamily, s: AlphaSchedule, x0,
                         cfg: IterationConfig) -> Trace:
    """Blend over the first K = cfg.truncation_K family members.

    Images, residual columns and weights cover exactly those K members;
    the dropped tail's weight mass rides on the first map (see
    `truncated_weights`). K must not exceed the family size.
    """
    if cfg.truncation_K is None:
        raise ContractViolation("truncated_family_run needs cfg.truncation_K")
    K = cfg.truncation_K
    if K > len(F):
        raise ContractViolation(
            f"truncation_K={K} exceeds the family size {len(F)}")
    active = F.members[:K]
    fps = common_fixed_points(F)

    def weights_of(n: int) -> tuple[float, list[float]]:
        a = s.alpha(n)
        return a, truncated_weights(a, K)

    return _run_engine("truncated", [t.fn for t in active],
                       [t.label for t in active], F.domain, x0, cfg,
                       weights_of, fps, schedule_echo=s.to_dict())


# ---------------------------------------------------------------------------
# diagnostics on traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GapReport:
    """Blend residuals recovered from consecutive recorded iterates."""

    steps: tuple[int, ...]
    gaps: tuple[float, ...]
    tail_max: float

    def to_dict(self) -> dict:
        return {"steps": list(self.steps), "gaps": list(self.gaps),
                "tail_max": self.tail_max}


def goebel_kirk_gap(t: Trace) -> GapReport:
    """Recover ||w_n - x_n|| from the iterates alone.

    Inverts the step rule: w_n = (x_{n+1} - (1-lam)*x_n)/lam. Only pairs of
    records one step apart can be inverted, so decimated stretches
    contribute nothing. tail_max is the maximum over the last quarter of
    the recovered series (the whole series if shorter than 4).
    """
    if t.lam is None:
        raise ContractViolation("trace carries no lam; cannot invert the step rule")
    lam = t.lam
    carry = 1.0 - lam
    kind = t.domain.norm_kind
    steps: list[int] = []
    gaps: list[float] = []
    for rec, nxt in zip(t.records[:-1], t.records[1:]):
        if nxt.step != rec.step + 1:
            continue
        x = np.asarray(rec.x, dtype=float)
        x_next = np.asarray(nxt.x, dtype=float)
        w = (x_next - carry * x) / lam
        steps.append(rec.step)
        gaps.append(dist(w, x, kind))
    if not gaps:
        return GapReport(steps=(), gaps=(), tail_max=0.0)
    q = max(1, len(gaps) // 4)
    return GapReport(steps=tuple(steps), gaps=tuple(gaps),
                     tail_max=max(gaps[-q:]))


def monotone_distance_check(t: Trace, z) -> Verdict:
    """Distances to z must never increase along the recorded iterates."""
    zv = as_vector(z)
    kind = t.domain.norm_kind
    ds = [dist(np.asarray(r.x, dtype=float), zv, kind) for r in t.records]
    pairs = len(ds) - 1
    for j in range(pairs):
        if ds[j + 1] > ds[j] + MONOTONE_TOL:
            return Verdict(condition_label="monotone_distance", passed=False,
                           checked_pairs=pairs,
                           witness=Witness.at(t.records[j + 1].x, lhs=ds[j + 1],
                                              rhs=ds[j],
                                              step=t.records[j + 1].step))
    return Verdict(condition_label="monotone_distance", passed=True,
                   checked_pairs=pairs,
                   observed_max=max(ds) if ds else None)


def residual_vanishes_check(t: Trace) -> Verdict:
    """Tail residuals must not exceed head residuals.

    Pass iff the max residual over the last quarter of records is <= the
    max over the first quarter, and — when the run stopped on tolerance —
    the final residual actually honors it. Needs >= 20 records.
    """
    n = len(t.records)
    if n < 20:
        raise PreconditionError(
            f"residual check needs >= 20 recorded steps, got {n}")
    q = n // 4
    head = max(r.residual for r in t.records[:q])
    tail_recs = t.records[-q:]
    tail = max(r.residual for r in tail_recs)
    passed = tail <= head
    if t.stop_reason == STOP_TOL:
        passed = passed and t.final.residual <= t.config.residual_tol
    if passed:
        return Verdict(condition_label="residual_vanishes", passed=True,
                       checked_pairs=n, observed_max=tail)
    worst = max(tail_recs, key=lambda r: r.residual)
    return Verdict(condition_label="residual_vanishes", passed=False,
                   checked_pairs=n,
                   witness=Witness.at(worst.x, lhs=tail, rhs=head,
                                      step=worst.step),
                   observed_max=tail)


def asymptotic_radius(t: Trace, x, window: int) -> float:
    """Max distance from the last `window` recorded iterates to x."""
    if window < 1:
        raise ContractViolation(f"window must be >= 1, got {window}")
    if window > len(t.records):
        raise PreconditionError(
            f"window {window} exceeds the {len(t.records)} recorded steps")
    xv = as_vector(x)
    kind = t.domain.norm_kind
    return max(dist(np.asarray(r.x, dtype=float), xv, kind)
               for r in t.records[-window:])


def replay_trace(t: Trace, maps: Union[Mapping, MappingFamily]) -> Verdict:
    """Recompute each recorded step from its predecessor and compare.

    Uses the stored alpha and lam, the engine's own weight rule, and the
    supplied mappings (which must match the trace's labels). Pass iff every
    stride-1 record pair reproduces within 1e-12.
    """
    members = (maps,) if isinstance(maps, Mapping) else maps.members
    # a truncated trace names only the active members; accept the full family
    members = members[:len(t.mapping_labels)]
    labels = tuple(m.label for m in members)
    if labels != t.mapping_labels:
        raise ContractViolation(
            f"trace was produced by {list(t.mapping_labels)}, got {list(labels)}")
    if t.lam is None:
        raise ContractViolation("trace carries no lam; cannot replay")
    m = len(members)
    if t.engine == "single":
        weights_of = lambda a: [1.0]
    elif t.engine == "multi":
        weights_of = lambda a: multi_map_weights(a, m)
    elif t.engine == "truncated":
        weights_of = lambda a: truncated_weights(a, m)
    else:
        raise ContractViolation(f"unknown engine kind {t.engine!r}")
    lam = t.lam
    carry = 1.0 - lam
    kind = t.domain.norm_kind
    worst = 0.0
    pairs = 0
    for rec, nxt in zip(t.records[:-1], t.records[1:]):
        if nxt.step != rec.step + 1:
            continue
        pairs += 1
        x = np.asarray(rec.x, dtype=float)
        images = [np.asarray(mem.fn(x), dtype=float) for mem in members]
        w = _blend(images, weights_of(rec.alpha))
        x_pred = lam * w + carry * x
        dev = dist(x_pred, np.asarray(nxt.x, dtype=float), kind)
        if dev > REPLAY_TOL:
            return Verdict(condition_label="replay", passed=False,
                           checked_pairs=pairs,
                           witness=Witness.at(rec.x, lhs=dev, rhs=REPLAY_TOL,
                                              step=nxt.step))
        worst = max(worst, dev)
    return Verdict(condition_label="replay", passed=True, checked_pairs=pairs,
                   observed_max=worst)


# ---------------------------------------------------------------------------
# trace export
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(v, ".17g")


def trace_to_csv(t: Trace, dest: Union[str, IO[str]]) -> None:
    """Write the trace as CSV with a fixed column order.

    Columns: step, x_0..x_{d-1}, residual, residual_1..residual_m, alpha,
    dist_1..dist_K (one per tracked fixed point). Floats carry 17
    significant digits so a parse round-trips the exact double.
    """
    d = len(t.records[0].x)
    m = len(t.records[0].map_residuals)
    k = len(t.records[0].fp_distances)
    header = (["step"] + [f"x_{i}" for i in range(d)] + ["residual"]
              + [f"residual_{i + 1}" for i in range(m)] + ["alpha"]
              + [f"dist_{i + 1}" for i in range(k)])
    lines = [",".join(header)]
    for r in t.records:
        row = ([str(r.step)] + [_fmt(c) for c in r.x] + [_fmt(r.residual)]
               + [_fmt(v) for v in r.map_residuals] + [_fmt(r.alpha)]
               + [_fmt(v) for v in r.fp_distances])
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        dest.write(text)
