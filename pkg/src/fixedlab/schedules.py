"""Blend-weight schedules: values in [0, 1/2] indexed by step.

The multi-map engines want a sequence that keeps returning to zero
(liminf 0), keeps reaching a positive level (limsup > 0), and has vanishing
increments. The tent schedule delivers all three by construction: within
block j of length L_j = ceil(first_block_length * growth**j) the value
climbs linearly from 0 to the peak and back, so the per-step increment
peak/ceil(L_j/2) shrinks as the blocks grow.

`verify_schedule` measures finite-horizon proxies for the three limits over
the last quarter of the horizon. Proxies, not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import ContractViolation, PreconditionError

__all__ = [
    "ConstantSchedule", "DecaySchedule", "TentSchedule", "AlphaSchedule",
    "DEFAULT_TENT", "PROXY_TOL", "alpha", "verify_schedule", "ScheduleReport",
]

# a tail proxy below this counts as "vanished"; above it as "bounded away"
PROXY_TOL = 1e-3


@dataclass(frozen=True)
class ConstantSchedule:
    value: float

    def __post_init__(self):
        if not (0.0 <= self.value <= 0.5):
            raise ContractViolation(
                f"constant schedule value must lie in [0, 1/2], got {self.value}")

    def alpha(self, n: int) -> float:
        if n < 0:
            raise ContractViolation(f"schedule index must be >= 0, got {n}")
        return self.value

    def to_dict(self) -> dict:
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class DecaySchedule:
    """alpha_n = min(1/2, scale/(n+1)**rate); nonincreasing, tends to 0."""

    scale: float
    rate: float = 1.0

    def __post_init__(self):
        if self.scale < 0.0:
            raise ContractViolation(f"decay scale must be >= 0, got {self.scale}")
        if self.rate <= 0.0:
            raise ContractViolation(f"decay rate must be > 0, got {self.rate}")

    def alpha(self, n: int) -> float:
        if n < 0:
            raise ContractViolation(f"schedule index must be >= 0, got {n}")
        return min(0.5, self.scale / (n + 1) ** self.rate)

    def to_dict(self) -> dict:
        return {"kind": "decay", "scale": self.scale, "rate": self.rate}


@dataclass(frozen=True)
class TentSchedule:
    """Triangular waves over geometrically growing blocks.

    Block j occupies L_j = ceil(first_block_length * growth**j) consecutive
    steps; at offset t within it the value is
    peak * min(t, L_j - t) / ceil(L_j / 2). The peak is attained exactly
    once per even-length block and the value at both block ends is 0.
    """

    peak: float
    first_block_length: float
    growth: float

    def __post_init__(self):
        if not (0.0 < self.peak <= 0.5):
            raise ContractViolation(
                f"tent peak must lie in (0, 1/2], got {self.peak}")
        if self.first_block_length < 2:
            raise ContractViolation(
                f"tent first_block_length must be >= 2, got {self.first_block_length}")
        if self.growth < 1.0:
            raise ContractViolation(
                f"tent growth must be >= 1, got {self.growth}")

    def _block_of(self, n: int) -> tuple[int, int, int]:
        """(block index, block start step, block length) containing step n."""
        start = 0
        j = 0
        while True:
            length = math.ceil(self.first_block_length * self.growth ** j)
            if n < start + length:
                return j, start, length
            start += length
            j += 1

    def alpha(self, n: int) -> float:
        if n < 0:
            raise ContractViolation(f"schedule index must be >= 0, got {n}")
        _, start, length = self._block_of(n)
        t = n - start
        half = -(-length // 2)
        return self.peak * min(t, length - t) / half

    def to_dict(self) -> dict:
        return {"kind": "tent", "peak": self.peak,
                "first_block_length": self.first_block_length,
                "growth": self.growth}


AlphaSchedule = Union[ConstantSchedule, DecaySchedule, TentSchedule]

# Chosen so that at horizon 1e5 the whole last quarter lies inside one
# block that contains its apex and ends two steps past the horizon; the
# tail proxies then take their cleanest possible values.
DEFAULT_TENT = TentSchedule(peak=0.25, first_block_length=343, growth=1.6)


def alpha(s: AlphaSchedule, n: int) -> float:
    """Schedule value at step n. Deterministic in (s, n)."""
    return s.alpha(n)


@dataclass(frozen=True)
class ScheduleReport:
    schedule: dict
    horizon: int
    window_start: int
    liminf_proxy: float   # min over the last-quarter window
    limsup_proxy: float   # max over the last-quarter window
    diff_proxy: float     # max |alpha_{n+1} - alpha_n| over the window

    @property
    def liminf_ok(self) -> bool:
        return self.liminf_proxy <= PROXY_TOL

    @property
    def limsup_ok(self) -> bool:
        return self.limsup_proxy > PROXY_TOL

    @property
    def diff_ok(self) -> bool:
        return self.diff_proxy <= PROXY_TOL

    @property
    def compliant(self) -> bool:
        return self.liminf_ok and self.limsup_ok and self.diff_ok

    def flags(self) -> list[str]:
        out = []
        if not self.liminf_ok:
            out.append(f"tail min {self.liminf_proxy:.6g} stays above {PROXY_TOL}; "
                       "the sequence never returns near 0")
        if not self.limsup_ok:
            out.append(f"tail max {self.limsup_proxy:.6g} is below {PROXY_TOL}; "
                       "the sequence decays instead of keeping a positive level")
        if not self.diff_ok:
            out.append(f"tail step {self.diff_proxy:.6g} exceeds {PROXY_TOL}; "
                       "increments do not vanish")
        return out

    def to_dict(self) -> dict:
        return {
            "schedule": self.schedule,
            "horizon": self.horizon,
            "window_start": self.window_start,
            "liminf_proxy": self.liminf_proxy,
            "limsup_proxy": self.limsup_proxy,
            "diff_proxy": self.diff_proxy,
            "liminf_ok": self.liminf_ok,
            "limsup_ok": self.limsup_ok,
            "diff_ok": self.diff_ok,
            "compliant": self.compliant,
            "flags": self.flags(),
        }


def verify_schedule(s: AlphaSchedule, horizon: int) -> ScheduleReport:
    """Tail-window proxies for the three limit requirements.

    The window is the last quarter of [0, horizon); the increment proxy
    uses pairs (n, n+1) with n in the window, so it also evaluates the
    schedule at `horizon` itself. horizon must be >= 10.
    """
    horizon = int(horizon)
    if horizon < 10:
        raise PreconditionError(f"verify_schedule needs horizon >= 10, got {horizon}")
    window_start = horizon - horizon // 4
    values = [s.alpha(n) for n in range(window_start, horizon + 1)]
    for n, v in zip(range(window_start, horizon + 1), values):
        if not (0.0 <= v <= 0.5):
            raise ContractViolation(
                f"schedule emitted {v} outside [0, 1/2] at step {n}")
    window = values[:-1]
    diffs = [abs(b - a) for a, b in zip(values[:-1], values[1:])]
    return ScheduleReport(
        schedule=s.to_dict(), horizon=horizon, window_start=window_start,
        liminf_proxy=min(window), limsup_proxy=max(window),
        diff_proxy=max(diffs))
