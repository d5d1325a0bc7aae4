"""Weighted means and the Young / Heinz bounds built on the Kantorovich constant.

Notation: ``nabla = (1-v) a + v b`` and ``sharp = a^(1-v) b^v``.  Every
multiplicative bound sandwiches ``ratio = nabla / sharp``; the additive WZL
bounds sandwich the normalized arithmetic mean ``(1-v) + v t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ValidationError
from .reports import BoundCheck, check_bound

__all__ = [
    "MeanContext", "Bounds", "Means", "HeinzChain", "YoungReport",
    "kantorovich", "means", "young_classical", "young_refined", "young_reverse",
    "dragomir", "wzl", "wzl_normalize", "heinz_chain", "kantorovich_vs_exp",
    "young_report", "heinz_report", "bound_table_row", "heinz_table_row", "compare_bound_families",
    "PUBLISHED_VALUES", "TABLE_BOUNDS",
]


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def kantorovich(h: float) -> float:
    """K(h, 2) = (h + 1)^2 / (4 h)."""
    if not h > 0:
        raise ValidationError(f"Kantorovich constant needs h > 0, got {h!r}")
    return (h + 1.0) ** 2 / (4.0 * h)


@dataclass(frozen=True)
class MeanContext:
    a: float
    b: float
    v: float

    def __post_init__(self):
        a, b, v = float(self.a), float(self.b), float(self.v)
        if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
            raise ValidationError(f"a and b must be positive and finite, got a={a!r}, b={b!r}")
        if not 0.0 <= v <= 1.0:
            raise ValidationError(f"v must lie in [0, 1], got {v!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "v", v)

    @property
    def h(self) -> float:
        return self.b / self.a

    @property
    def d(self) -> float:
        return min(self.a, self.b)

    @property
    def D(self) -> float:
        return max(self.a, self.b)

    @property
    def r(self) -> float:
        return min(self.v, 1.0 - self.v)

    @property
    def R(self) -> float:
        return max(self.v, 1.0 - self.v)

    @property
    def spread(self) -> float:
        """``v (1-v) / 2``, the coefficient shared by every exponential factor."""
        return self.v * (1.0 - self.v) / 2.0


class Bounds(NamedTuple):
    lower: float
    upper: float


class Means(NamedTuple):
    nabla: float
    sharp: float
    heinz: float


def means(ctx: MeanContext) -> Means:
    a, b, v = ctx.a, ctx.b, ctx.v
    sharp = a ** (1.0 - v) * b ** v
    heinz = (sharp + b ** (1.0 - v) * a ** v) / 2.0
    return Means((1.0 - v) * a + v * b, sharp, heinz)


def young_classical(ctx: MeanContext) -> Bounds:
    K = kantorovich(ctx.h)
    return Bounds(K ** ctx.r, K ** ctx.R)


def young_refined(ctx: MeanContext) -> Bounds:
    """Kantorovich powers corrected by exp((v(1-v)/2 - r/4) ((a-b)/D)^2)."""
    K = kantorovich(ctx.h)
    s = ((ctx.a - ctx.b) / ctx.D) ** 2
    return Bounds(
        K ** ctx.r * _exp((ctx.spread - ctx.r / 4.0) * s),
        K ** ctx.R * _exp((ctx.spread - ctx.R / 4.0) * s),
    )


def young_reverse(ctx: MeanContext) -> Bounds:
    """Swapped Kantorovich powers, normalized by d = min(a, b) instead of D.

    The upper bound overflows to ``inf`` for extreme ratios a/b.
    """
    K = kantorovich(ctx.h)
    s = ((ctx.a - ctx.b) / ctx.d) ** 2
    return Bounds(
        K ** ctx.R * _exp((ctx.spread - ctx.R / 4.0) * s),
        K ** ctx.r * _exp((ctx.spread - ctx.r / 4.0) * s),
    )


def dragomir(ctx: MeanContext) -> Bounds:
    return Bounds(
        _exp(ctx.spread * ((ctx.a - ctx.b) / ctx.D) ** 2),
        _exp(ctx.spread * ((ctx.a - ctx.b) / ctx.d) ** 2),
    )


def wzl_normalize(ctx: MeanContext) -> tuple[float, float]:
    """``(t, v)`` with ``t = b/a <= 1``, swapping a, b and v -> 1-v if a < b."""
    if ctx.a >= ctx.b:
        return ctx.b / ctx.a, ctx.v
    return ctx.a / ctx.b, 1.0 - ctx.v


def wzl(ctx: MeanContext) -> Bounds:
    """Additive bounds on ``(1-v) + v t`` after :func:`wzl_normalize`.

    ``K(sqrt t)^{r'} t^v + r (1 - sqrt t)^2`` below and the same with ``R'``
    above, where ``r' = min(2r, 1-2r)`` and ``R' = max(2r, 1-2r)``.
    """
    t, v = wzl_normalize(ctx)
    r = min(v, 1.0 - v)
    r_lo, r_hi = min(2 * r, 1 - 2 * r), max(2 * r, 1 - 2 * r)
    K = kantorovich(math.sqrt(t))
    shift = r * (1.0 - math.sqrt(t)) ** 2
    tv = t ** v
    return Bounds(K ** r_lo * tv + shift, K ** r_hi * tv + shift)


def _wzl_target(ctx):
    t, v = wzl_normalize(ctx)
    return (1.0 - v) + v * t


class HeinzChain(NamedTuple):
    g: float
    refined_heinz: float
    refined_arith: float
    arith: float
    dragomir_gap: float  # (d/8) log(a/b)^2, bounded above by arith - g


def heinz_chain(ctx: MeanContext) -> HeinzChain:
    """sqrt(ab) <= H_v - (d/8)((1-2v) log(a/b))^2 <= (a+b)/2 - (d/8) log(a/b)^2 <= (a+b)/2."""
    a, b, v, d = ctx.a, ctx.b, ctx.v, ctx.d
    L = math.log(a / b)
    heinz = means(ctx).heinz
    arith = (a + b) / 2.0
    return HeinzChain(
        math.sqrt(a * b),
        heinz - d / 8.0 * ((1.0 - 2.0 * v) * L) ** 2,
        arith - d / 8.0 * L ** 2,
        arith,
        d / 8.0 * L ** 2,
    )


def kantorovich_vs_exp(a: float, b: float) -> tuple[float, float, float]:
    """``(K(b/a), exp(((a-b)/D)^2 / 4), difference)``; the difference is never negative."""
    if not (a > 0 and b > 0):
        raise ValidationError(f"a and b must be positive, got a={a!r}, b={b!r}")
    K = kantorovich(b / a)
    e = math.exp(0.25 * ((a - b) / max(a, b)) ** 2)
    return K, e, K - e


# ---------------------------------------------------------------------------
# reports

TABLE_BOUNDS = ("classical", "refined", "reverse", "dragomir", "wzl")


@dataclass(frozen=True)
class YoungReport:
    nabla: float
    sharp: float
    ratio: float
    bounds: tuple[BoundCheck, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.bounds)

    def to_dict(self):
        return {
            "nabla": self.nabla,
            "sharp": self.sharp,
            "ratio": self.ratio,
            "holds": self.holds,
            "bounds": [c.to_dict() for c in self.bounds],
        }


_BOUND_FUNCTIONS = {
    "classical": young_classical,
    "refined": young_refined,
    "reverse": young_reverse,
    "dragomir": dragomir,
    "wzl": wzl,
}


def young_report(ctx: MeanContext, rtol: float = 1e-9) -> YoungReport:
    mu = means(ctx)
    ratio = mu.nabla / mu.sharp
    checks = []
    for name, fn in _BOUND_FUNCTIONS.items():
        lo, hi = fn(ctx)
        target = _wzl_target(ctx) if name == "wzl" else ratio
        checks.append(check_bound(name, "lower", lo, target, rtol))
        checks.append(check_bound(name, "upper", hi, target, rtol))
    return YoungReport(mu.nabla, mu.sharp, ratio, tuple(checks))


def heinz_report(ctx: MeanContext, rtol: float = 1e-9) -> tuple[HeinzChain, list[BoundCheck]]:
    c = heinz_chain(ctx)
    checks = [
        check_bound("geometric<=refined_heinz", "lower", c.g, c.refined_heinz, rtol),
        check_bound("refined_heinz<=refined_arith", "lower", c.refined_heinz, c.refined_arith, rtol),
        check_bound("refined_arith<=arith", "lower", c.refined_arith, c.arith, rtol),
        check_bound("dragomir_gap", "lower", c.dragomir_gap, c.arith - c.g, rtol),
    ]
    return c, checks


def bound_table_row(ctx: MeanContext, rtol: float = 1e-9) -> dict:
    """One CSV row: inputs, means, ten bound values, then ten margins."""
    rep = young_report(ctx, rtol)
    row = {"a": ctx.a, "b": ctx.b, "v": ctx.v,
           "nabla": rep.nabla, "sharp": rep.sharp, "ratio": rep.ratio}
    for c in rep.bounds:
        row[f"{c.name}_{c.side}"] = c.value
    for c in rep.bounds:
        row[f"{c.name}_{c.side}_margin"] = c.margin
    row["holds"] = rep.holds
    return row


def heinz_table_row(ctx: MeanContext, rtol: float = 1e-9) -> dict:
    c, checks = heinz_report(ctx, rtol)
    row = {"a": ctx.a, "b": ctx.b, "v": ctx.v}
    row.update(c._asdict())
    for chk in checks:
        row[f"{chk.name}_margin"] = chk.margin
    row["holds"] = all(chk.holds for chk in checks)
    return row


# ---------------------------------------------------------------------------
# published comparisons showing no ordering between bound families

PUBLISHED_VALUES = {
    "refined_upper_minus_dragomir_upper[a=2,b=1,v=0.1]": 0.0168761,
    "refined_upper_minus_dragomir_upper[a=2,b=1,v=0.3]": -0.0436069,
    "wzl_upper_minus_refined_upper[t=0.1,v=0.45]": 0.0363059,
    "wzl_upper_minus_refined_upper[t=0.1,v=0.9]": -0.0860004,
    "wzl_lower_minus_refined_lower[t=0.1,v=0.45]": -0.0126828,
    "wzl_lower_minus_refined_lower[t=0.1,v=0.9]": 0.037896,
}


def _refined_minus_dragomir_upper(a, b, v):
    ctx = MeanContext(a, b, v)
    return young_refined(ctx).upper - dragomir(ctx).upper


def _wzl_minus_refined(t, v, side):
    # a = 1, b = t: sharp = t^v converts the ratio bound into a bound on (1-v) + v t
    ctx = MeanContext(1.0, t, v)
    w = wzl(ctx)
    y = young_refined(ctx)
    tv = t ** v
    if side == "upper":
        return w.upper - tv * y.upper
    return w.lower - tv * y.lower


def compare_bound_families() -> dict[str, float]:
    """The six signed differences, keyed like :data:`PUBLISHED_VALUES`."""
    names = list(PUBLISHED_VALUES)
    return {
        names[0]: _refined_minus_dragomir_upper(2.0, 1.0, 0.1),
        names[1]: _refined_minus_dragomir_upper(2.0, 1.0, 0.3),
        names[2]: _wzl_minus_refined(0.1, 0.45, "upper"),
        names[3]: _wzl_minus_refined(0.1, 0.9, "upper"),
        names[4]: _wzl_minus_refined(0.1, 0.45, "lower"),
        names[5]: _wzl_minus_refined(0.1, 0.9, "lower"),
    }
