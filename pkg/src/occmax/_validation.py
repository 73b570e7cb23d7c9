"""Input validation helpers and the shared problem type."""

from __future__ import annotations

import numbers
import os
from dataclasses import dataclass
from fractions import Fraction


class ComputationRefused(RuntimeError):
    """An engine declined a job that exceeds its configured cost bound."""


class PrecisionCapExceeded(ComputationRefused):
    """Adaptive precision escalation hit its hard digit cap."""


class DegenerateFitError(ValueError):
    """Least-squares design matrix is singular."""


def check_nonneg_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    value = int(value)
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


def check_pos_int(value, name: str) -> int:
    value = check_nonneg_int(value, name)
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def check_confidence(conf) -> float:
    conf = float(conf)
    if not 0.0 < conf < 1.0:
        raise ValueError(f"confidence must lie strictly between 0 and 1, got {conf}")
    return conf


def as_rational(value, name: str = "R") -> Fraction:
    """Coerce ints, Fractions and decimal strings like ``"8/5"`` or ``"1.6"``."""
    if isinstance(value, float):
        value = Fraction(str(value))
    try:
        out = Fraction(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not a rational number: {value!r}") from exc
    if out < 0:
        raise ValueError(f"{name} must be >= 0, got {out}")
    return out


def default_n_jobs() -> int:
    env = os.environ.get("OCCMAX_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


@dataclass(frozen=True)
class OccupancyProblem:
    """Place ``r`` balls into ``n`` boxes; ask whether every box holds at most ``m``."""

    r: int
    n: int
    m: int

    def __post_init__(self):
        object.__setattr__(self, "r", check_nonneg_int(self.r, "r"))
        object.__setattr__(self, "n", check_pos_int(self.n, "n"))
        object.__setattr__(self, "m", check_nonneg_int(self.m, "m"))

    @property
    def R(self) -> Fraction:
        """Mean load per box, as an exact rational."""
        return Fraction(self.r, self.n)

    def with_m(self, m: int) -> "OccupancyProblem":
        return OccupancyProblem(self.r, self.n, m)

    def to_dict(self) -> dict:
        return {"r": self.r, "n": self.n, "m": self.m}


def as_problem(r, n=None, m=None) -> OccupancyProblem:
    """Accept an ``OccupancyProblem``, an ``(r, n, m)`` tuple, or three integers."""
    if isinstance(r, OccupancyProblem):
        return r
    if isinstance(r, tuple):
        return OccupancyProblem(*r)
    if n is None or m is None:
        raise TypeError("expected an OccupancyProblem or the integers r, n, m")
    return OccupancyProblem(r, n, m)
