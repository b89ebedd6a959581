"""Exception taxonomy shared by all fixedlab modules.

Every raisable condition maps onto one of these so callers (and the CLI,
which turns them into exit codes) can tell configuration mistakes apart
from broken runs.
"""

from __future__ import annotations


class FixedLabError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(FixedLabError, ValueError):
    """Malformed value: non-finite coordinate, empty grid, zero count."""


class ContractViolation(FixedLabError, ValueError):
    """Arguments violate a documented contract (ranges, shared domains)."""


class DomainError(FixedLabError, ValueError):
    """A point lies outside the domain it was used with."""


class PreconditionError(FixedLabError, ValueError):
    """An operation's precondition does not hold (e.g. no fixed points)."""


class InvariantError(FixedLabError, RuntimeError):
    """An internal invariant failed; indicates a bug, not bad input."""


class IterationRuntimeError(FixedLabError, RuntimeError):
    """An iteration engine failed mid-run; carries the step index."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ConfigError(FixedLabError, ValueError):
    """An experiment configuration could not be resolved; names the field."""
