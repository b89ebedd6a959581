"""Finite-dimensional normed-space primitives.

Vectors are read-only float64 numpy arrays. Domains (boxes and balls) and
sample plans are frozen value types; every operation here is a pure
function of its inputs, so everything can be shared freely across threads.

Built for desk scale: low dimension, domain diameters up to ~1e3, plain
double precision with no compensated summation. The l2 norm is computed as
sqrt(sum(v*v)) rather than through BLAS so that scalar and vectorized code
paths produce bitwise-identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ContractViolation, InvalidInputError

Vector = np.ndarray

#: Absolute tolerance for domain membership. Samplers guarantee membership
#: up to rounding, and convex combinations of members may drift by a few ULP.
MEMBERSHIP_TOL = 1e-9

#: Convex weights must sum to 1 within this absolute tolerance.
WEIGHT_SUM_TOL = 1e-12


def as_vector(coords: Union[float, Sequence[float], np.ndarray]) -> Vector:
    """Coerce to a read-only 1-d float64 array, rejecting non-finite input."""
    v = np.atleast_1d(np.asarray(coords, dtype=float))
    if v.ndim != 1 or v.size < 1:
        raise InvalidInputError(f"expected a 1-d vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"non-finite coordinate in {v.tolist()!r}")
    v = v.copy()
    v.flags.writeable = False
    return v


def _freeze(v: np.ndarray) -> Vector:
    v.flags.writeable = False
    return v


class NormKind(str, Enum):
    """Which norm a domain carries: l1, l2 (default), or linf."""

    L1 = "l1"
    L2 = "l2"
    LINF = "linf"


def norm(v: Union[float, Sequence[float], np.ndarray], kind: NormKind = NormKind.L2) -> float:
    """Norm of a vector under `kind`; zero vector gives exactly 0.0."""
    a = np.atleast_1d(np.asarray(v, dtype=float))
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"non-finite coordinate in {a.tolist()!r}")
    if kind == NormKind.L1:
        return float(np.sum(np.abs(a)))
    if kind == NormKind.LINF:
        return float(np.max(np.abs(a)))
    if kind != NormKind.L2:
        raise InvalidInputError(f"unknown norm kind {kind!r}")
    return float(np.sqrt(np.sum(a * a)))


def dist(x: np.ndarray, y: np.ndarray, kind: NormKind = NormKind.L2) -> float:
    """Distance ||x - y|| under `kind`."""
    return norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), kind)


def pairwise_norm(A: np.ndarray, B: np.ndarray, kind: NormKind = NormKind.L2) -> np.ndarray:
    """Matrix of ||A[i] - B[j]|| values, shape (len(A), len(B)).

    Uses the same elementary operations as `norm` so entries are bitwise
    equal to the corresponding scalar computation.
    """
    diff = A[:, None, :] - B[None, :, :]
    if kind == NormKind.L1:
        return np.sum(np.abs(diff), axis=-1)
    if kind == NormKind.LINF:
        return np.max(np.abs(diff), axis=-1)
    if kind != NormKind.L2:
        raise InvalidInputError(f"unknown norm kind {kind!r}")
    return np.sqrt(np.sum(diff * diff, axis=-1))


@dataclass(frozen=True)
class Domain:
    """A convex, bounded sampling region: an axis-aligned box or a norm ball.

    Coordinates are stored as plain tuples so Domain values hash and compare
    like any other frozen dataclass. Use `lower_array` etc. for numpy work.
    """

    shape: str  # "box" | "ball"
    norm_kind: NormKind = NormKind.L2
    lower: Optional[tuple[float, ...]] = None
    upper: Optional[tuple[float, ...]] = None
    center: Optional[tuple[float, ...]] = None
    radius: Optional[float] = None

    @staticmethod
    def box(lower: Sequence[float], upper: Sequence[float],
            norm_kind: NormKind = NormKind.L2) -> "Domain":
        lo = as_vector(lower)
        up = as_vector(upper)
        if lo.shape != up.shape:
            raise InvalidInputError("box bounds have mismatched dimensions")
        if not np.all(lo <= up):
            raise InvalidInputError(f"box lower bound exceeds upper: {lo.tolist()} vs {up.tolist()}")
        return Domain(shape="box", norm_kind=NormKind(norm_kind),
                      lower=tuple(map(float, lo)), upper=tuple(map(float, up)))

    @staticmethod
    def ball(center: Sequence[float], radius: float,
             norm_kind: NormKind = NormKind.L2) -> "Domain":
        c = as_vector(center)
        r = float(radius)
        if not (math.isfinite(r) and r > 0):
            raise InvalidInputError(f"ball radius must be finite and positive, got {radius}")
        return Domain(shape="ball", norm_kind=NormKind(norm_kind),
                      center=tuple(map(float, c)), radius=r)

    @property
    def dimension(self) -> int:
        return len(self.lower) if self.shape == "box" else len(self.center)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        """(lower, upper) arrays of the tightest axis-aligned enclosing box."""
        if self.shape == "box":
            return np.array(self.lower), np.array(self.upper)
        c = np.array(self.center)
        # For l1/l2/linf balls the coordinate extent is always +-radius.
        return c - self.radius, c + self.radius

    def contains(self, p: np.ndarray, tol: float = MEMBERSHIP_TOL) -> bool:
        """Membership with absolute tolerance `tol` (see MEMBERSHIP_TOL)."""
        q = np.atleast_1d(np.asarray(p, dtype=float))
        if q.shape != (self.dimension,):
            return False
        if not np.all(np.isfinite(q)):
            return False
        if self.shape == "box":
            return bool(np.all(q >= np.array(self.lower) - tol)
                        and np.all(q <= np.array(self.upper) + tol))
        return dist(q, np.array(self.center), self.norm_kind) <= self.radius + tol

    def to_dict(self) -> dict:
        if self.shape == "box":
            return {"shape": "box", "lower": list(self.lower),
                    "upper": list(self.upper), "norm": self.norm_kind.value}
        return {"shape": "ball", "center": list(self.center),
                "radius": self.radius, "norm": self.norm_kind.value}


@dataclass(frozen=True)
class SamplePlan:
    """How to draw points from a domain, plus the slack used by checks.

    Grid mode is a per-axis lattice including box corners; random mode is a
    seeded pseudo-random draw. Either way the produced sequence is a pure
    function of (domain, plan).
    """

    mode: str  # "grid" | "random"
    resolution: Optional[tuple[int, ...]] = None  # grid: per-axis, or 1-tuple for all
    seed: Optional[int] = None
    count: Optional[int] = None
    epsilon: float = 1e-9

    @staticmethod
    def grid(resolution: Union[int, Sequence[int]], epsilon: float = 1e-9) -> "SamplePlan":
        res = (int(resolution),) if isinstance(resolution, (int, np.integer)) \
            else tuple(int(r) for r in resolution)
        if not res or any(r < 2 for r in res):
            raise InvalidInputError(f"grid resolution must be >= 2 per axis, got {res}")
        if not (epsilon > 0):
            raise InvalidInputError(f"plan epsilon must be positive, got {epsilon}")
        return SamplePlan(mode="grid", resolution=res, epsilon=float(epsilon))

    @staticmethod
    def random(seed: int, count: int, epsilon: float = 1e-9) -> "SamplePlan":
        if count < 1:
            raise InvalidInputError(f"random sample count must be >= 1, got {count}")
        if not (epsilon > 0):
            raise InvalidInputError(f"plan epsilon must be positive, got {epsilon}")
        return SamplePlan(mode="random", seed=int(seed), count=int(count),
                          epsilon=float(epsilon))

    def to_dict(self) -> dict:
        if self.mode == "grid":
            res = self.resolution[0] if len(self.resolution) == 1 else list(self.resolution)
            return {"mode": "grid", "resolution": res, "epsilon": self.epsilon}
        return {"mode": "random", "seed": self.seed, "count": self.count,
                "epsilon": self.epsilon}


def _axis_resolutions(plan: SamplePlan, d: int) -> tuple[int, ...]:
    res = plan.resolution
    if len(res) == 1:
        return res * d
    if len(res) != d:
        raise InvalidInputError(
            f"grid resolution has {len(res)} axes but the domain has {d}")
    return res


def sample(domain: Domain, plan: SamplePlan) -> list[Vector]:
    """Deterministic point sample of `domain` according to `plan`.

    Grid order is lexicographic with the first axis slowest; every produced
    point satisfies domain.contains. Grid sampling of a ball keeps the
    lattice points of the bounding box that fall inside the ball and raises
    if none do (increase the resolution).
    """
    d = domain.dimension
    if plan.mode == "grid":
        lo, up = domain.bounding_box()
        res = _axis_resolutions(plan, d)
        axes = [np.linspace(lo[i], up[i], res[i]) for i in range(d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
        if domain.shape == "ball":
            c = np.array(domain.center)
            keep = np.array([dist(p, c, domain.norm_kind) <= domain.radius for p in pts])
            pts = pts[keep]
            if pts.shape[0] == 0:
                raise InvalidInputError(
                    "grid too coarse for ball domain: no lattice point falls "
                    "inside; increase the resolution")
        return [_freeze(p.copy()) for p in pts]

    rng = np.random.default_rng(plan.seed)
    if domain.shape == "box":
        lo, up = domain.bounding_box()
        pts = rng.uniform(lo, up, size=(plan.count, d))
    else:
        c = np.array(domain.center)
        if domain.norm_kind == NormKind.L2:
            raw = rng.standard_normal((plan.count, d))
            norms = np.sqrt(np.sum(raw * raw, axis=-1))
            norms[norms == 0.0] = 1.0
            unit = raw / norms[:, None]
            radii = domain.radius * rng.random(plan.count) ** (1.0 / d)
            pts = c + unit * radii[:, None]
        else:
            # l1/linf balls: rejection-sample from the bounding box.
            lo, up = domain.bounding_box()
            out = []
            while len(out) < plan.count:
                cand = rng.uniform(lo, up, size=(plan.count, d))
                for p in cand:
                    if dist(p, c, domain.norm_kind) <= domain.radius and len(out) < plan.count:
                        out.append(p)
            pts = np.array(out)
    return [_freeze(p.copy()) for p in pts]


def convex_combination(points: Sequence[np.ndarray], weights: Sequence[float]) -> Vector:
    """Weighted average with nonnegative weights summing to 1 (within 1e-12).

    Zero-weight terms are skipped entirely, not multiplied in. That keeps a
    degenerate combination on the same arithmetic path as its reduced form,
    which the iteration engines rely on for bitwise reproducibility.
    """
    if len(points) != len(weights):
        raise ContractViolation(
            f"{len(points)} points but {len(weights)} weights")
    if len(points) == 0:
        raise ContractViolation("convex combination of zero points")
    ws = [float(w) for w in weights]
    for w in ws:
        if not math.isfinite(w) or w < 0.0:
            raise ContractViolation(f"weights must be finite and >= 0, got {w}")
    total = sum(ws)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ContractViolation(
            f"weights sum to {total!r}, off from 1 by more than {WEIGHT_SUM_TOL}")
    d = np.asarray(points[0], dtype=float).shape
    acc = None
    for w, p in zip(ws, points):
        a = np.asarray(p, dtype=float)
        if a.shape != d:
            raise ContractViolation("points of mixed dimension in convex combination")
        if w == 0.0:
            continue
        term = w * a
        acc = term if acc is None else acc + term
    return _freeze(acc.copy())
