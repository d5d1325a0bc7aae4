"""Shared records for evaluated inequality chains."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Literal

__all__ = ["BoundCheck", "InequalityReport", "relative_margin", "check_bound"]


def relative_margin(smaller: float, larger: float) -> float:
    """Slack ``larger - smaller`` divided by ``1 + max(|smaller|, |larger|)``.

    An infinite larger side (an overflowed exponential bound) against a finite
    smaller side counts as margin 1.
    """
    if math.isinf(larger) and larger > 0 and math.isfinite(smaller):
        return 1.0
    if math.isinf(smaller) and smaller < 0 and math.isfinite(larger):
        return 1.0
    return (larger - smaller) / (1.0 + max(abs(smaller), abs(larger)))


@dataclass(frozen=True)
class BoundCheck:
    """One side of a sandwich: ``value <= target`` (lower) or ``target <= value`` (upper)."""

    name: str
    side: Literal["lower", "upper"]
    value: float
    target: float
    margin: float
    relative_margin: float
    holds: bool

    def to_dict(self):
        return asdict(self)


def check_bound(name, side, value, target, rtol=1e-9) -> BoundCheck:
    value, target = float(value), float(target)
    smaller, larger = (value, target) if side == "lower" else (target, value)
    rel = relative_margin(smaller, larger)
    return BoundCheck(name, side, value, target, larger - smaller, rel, rel >= -rtol)


@dataclass(frozen=True)
class InequalityReport:
    name: str
    checks: tuple[BoundCheck, ...]
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)

    @property
    def worst_relative_margin(self) -> float:
        return min(c.relative_margin for c in self.checks)

    def to_dict(self):
        return {
            "name": self.name,
            "holds": self.holds,
            "checks": [c.to_dict() for c in self.checks],
            "details": self.details,
        }
