"""Both sides of the Jensen-type inequalities for convexifiable functions.

Every evaluator returns a :class:`JensenReport` holding

* ``lhs``            f(mean),
* ``rhs_classical``  mean of f (the classical Jensen right side),
* ``variance``       second moment minus squared mean,
* ``rhs_refined``    ``rhs_classical - alpha/2 * variance``.

With ``alpha = 0`` the refined side is the classical one.  For a convexifier
``alpha`` the refined inequality ``lhs <= rhs_refined`` holds for every
continuous f, convex or not.  Verdicts use one-sided relative slack
``rtol * (1 + |lhs| + |rhs|)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Sequence

import numpy as np

from . import matops
from .errors import ValidationError
from .scalar_fn import FunctionModel, convexifier

__all__ = [
    "JensenReport", "GapBounds", "SinScanRow", "as_weights",
    "jensen_operator", "jensen_multi", "jensen_weighted", "jensen_scalar",
    "pecaric_mitroi_bounds", "convexified_gap_bounds", "concavified_gap_bounds",
    "sin_example_scan", "DEFAULT_RTOL",
]

DEFAULT_RTOL = 1e-9
WEIGHT_TOL = 1e-12


def _holds(smaller, larger, rtol):
    return smaller <= larger + rtol * (1.0 + abs(smaller) + abs(larger))


@dataclass(frozen=True)
class JensenReport:
    lhs: float
    rhs_classical: float
    variance: float
    alpha: float
    rhs_refined: float
    margin_refined: float
    margin_classical: float
    holds_refined: bool
    holds_classical: bool

    @classmethod
    def build(cls, lhs, rhs_classical, variance, alpha, rtol=DEFAULT_RTOL):
        lhs, rhs_classical, variance, alpha = map(float, (lhs, rhs_classical, variance, alpha))
        rhs_refined = rhs_classical - (alpha / 2.0) * variance
        return cls(
            lhs=lhs,
            rhs_classical=rhs_classical,
            variance=variance,
            alpha=alpha,
            rhs_refined=rhs_refined,
            margin_refined=rhs_refined - lhs,
            margin_classical=rhs_classical - lhs,
            holds_refined=_holds(lhs, rhs_refined, rtol),
            holds_classical=_holds(lhs, rhs_classical, rtol),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def relative_margin_refined(self) -> float:
        return self.margin_refined / (1.0 + max(abs(self.lhs), abs(self.rhs_refined)))


def as_weights(p) -> np.ndarray:
    """Validate strictly positive weights summing to one."""
    p = np.array(p, dtype=float).reshape(-1)
    if p.size == 0:
        raise ValidationError("empty weight vector")
    if not np.all(p > 0):
        raise ValidationError(f"weights must be positive, got {p.tolist()}")
    s = math.fsum(p)
    if abs(s - 1.0) > WEIGHT_TOL:
        raise ValidationError(f"weights must sum to 1, got {s!r}")
    return p


def _mean_value(m: FunctionModel, t: float) -> float:
    # a convex combination of in-domain points can drift an ulp outside
    slack = 1e-9 * (1.0 + m.domain.magnitude)
    if not m.domain.contains(t, slack):
        raise ValidationError(f"mean {t!r} outside domain of {m.name}")
    return m(m.domain.clip(t))


def jensen_operator(m: FunctionModel, alpha: float, A, x, rtol: float = DEFAULT_RTOL) -> JensenReport:
    """f(<Ax,x>) against <f(A)x,x> - alpha/2 (<A^2x,x> - <Ax,x>^2) for unit x."""
    A = matops.as_symmetric(A)
    x = matops.as_state(x)
    fA = matops.apply_function(m, A)
    mean = matops.quadratic_form(A, x)
    second = matops.quadratic_form(A @ A, x)
    return JensenReport.build(
        _mean_value(m, mean), matops.quadratic_form(fA, x), second - mean * mean, alpha, rtol
    )


def jensen_multi(m: FunctionModel, alpha: float, As: Sequence, xs: Sequence,
                 rtol: float = DEFAULT_RTOL) -> JensenReport:
    """Several operators with vectors x_i such that sum |x_i|^2 = 1."""
    if len(As) == 0 or len(As) != len(xs):
        raise ValidationError("need the same positive number of operators and vectors")
    As = [matops.as_symmetric(A) for A in As]
    xs = [matops.as_state(x, unit=False) for x in xs]
    total = math.fsum(float(x @ x) for x in xs)
    if abs(total - 1.0) > matops.UNIT_TOL:
        raise ValidationError(f"sum of |x_i|^2 must be 1, got {total!r}")
    mean = math.fsum(matops.quadratic_form(A, x) for A, x in zip(As, xs))
    second = math.fsum(matops.quadratic_form(A @ A, x) for A, x in zip(As, xs))
    fmean = math.fsum(matops.quadratic_form(matops.apply_function(m, A), x) for A, x in zip(As, xs))
    return JensenReport.build(_mean_value(m, mean), fmean, second - mean * mean, alpha, rtol)


def jensen_weighted(m: FunctionModel, alpha: float, As: Sequence, w, x,
                    rtol: float = DEFAULT_RTOL) -> JensenReport:
    """Weighted operators ``sum p_i A_i`` tested against one unit vector."""
    p = as_weights(w)
    if len(As) != p.size:
        raise ValidationError(f"{len(As)} operators but {p.size} weights")
    As = [matops.as_symmetric(A) for A in As]
    x = matops.as_state(x)
    mean = math.fsum(pi * matops.quadratic_form(A, x) for pi, A in zip(p, As))
    second = math.fsum(pi * matops.quadratic_form(A @ A, x) for pi, A in zip(p, As))
    fmean = math.fsum(pi * matops.quadratic_form(matops.apply_function(m, A), x)
                      for pi, A in zip(p, As))
    return JensenReport.build(_mean_value(m, mean), fmean, second - mean * mean, alpha, rtol)


def _check_points(m, ts):
    ts = [float(t) for t in ts]
    for t in ts:
        if not m.domain.contains(t):
            raise ValidationError(f"point {t!r} outside domain [{m.domain.lo}, {m.domain.hi}]")
    return ts


def jensen_scalar(m: FunctionModel, alpha: float, ts: Sequence[float], w,
                  rtol: float = DEFAULT_RTOL) -> JensenReport:
    """Scalar weighted form: points ``t_i`` in the domain with weights ``p_i``."""
    p = as_weights(w)
    ts = _check_points(m, ts)
    if len(ts) != p.size:
        raise ValidationError(f"{len(ts)} points but {p.size} weights")
    mean = math.fsum(pi * t for pi, t in zip(p, ts))
    second = math.fsum(pi * t * t for pi, t in zip(p, ts))
    fmean = math.fsum(pi * m(t) for pi, t in zip(p, ts))
    return JensenReport.build(_mean_value(m, mean), fmean, second - mean * mean, alpha, rtol)


# ---------------------------------------------------------------------------
# Jensen gap sandwiches

class GapBounds(NamedTuple):
    lower: float
    upper: float
    gap: float


def _gap(fn, ts, p):
    mean = math.fsum(pi * t for pi, t in zip(p, ts))
    return math.fsum(pi * fn(t) for pi, t in zip(p, ts)) - fn(mean)


def _sandwich(fn, ts, p):
    n = len(ts)
    equal = _gap(fn, ts, [1.0 / n] * n)
    return GapBounds(n * min(p) * equal, n * max(p) * equal, _gap(fn, ts, p))


def _variance(ts, p):
    mean = math.fsum(pi * t for pi, t in zip(p, ts))
    return math.fsum(pi * t * t for pi, t in zip(p, ts)) - mean * mean


def pecaric_mitroi_bounds(m: FunctionModel, ts: Sequence[float], w) -> GapBounds:
    """Lower and upper bounds on the Jensen gap of a convex f.

    With ``lam = min p_i`` and ``mu = max p_i``, the gap
    ``sum p_i f(t_i) - f(sum p_i t_i)`` lies between ``n*lam`` and ``n*mu``
    times the equal-weight gap.
    """
    p = as_weights(w)
    ts = _check_points(m, ts)
    if convexifier(m).alpha < -1e-9:
        raise ValidationError(f"{m.name} is not convex on [{m.domain.lo}, {m.domain.hi}]")
    return _sandwich(m, ts, list(p))


def convexified_gap_bounds(m: FunctionModel, alpha: float, ts: Sequence[float], w) -> GapBounds:
    """Gap bounds for f obtained from the sandwich of ``f - alpha/2 x^2``.

    ``alpha`` must be a convexifier of f (caller-certified).
    """
    p = list(as_weights(w))
    ts = _check_points(m, ts)
    g = _sandwich(lambda t: m(t) - 0.5 * alpha * t * t, ts, p)
    shift = 0.5 * alpha * _variance(ts, p)
    return GapBounds(g.lower + shift, g.upper + shift, _gap(m, ts, p))


def concavified_gap_bounds(m: FunctionModel, beta: float, ts: Sequence[float], w) -> GapBounds:
    """Gap bounds for f from the sandwich of ``beta/2 x^2 - f`` (beta >= max f'')."""
    p = list(as_weights(w))
    ts = _check_points(m, ts)
    g = _sandwich(lambda t: 0.5 * beta * t * t - m(t), ts, p)
    shift = 0.5 * beta * _variance(ts, p)
    return GapBounds(shift - g.upper, shift - g.lower, _gap(m, ts, p))


# ---------------------------------------------------------------------------
# sin counterexample

class SinScanRow(NamedTuple):
    p: float
    lhs: float
    bound_classical: float
    bound_refined: float
    holds_classical: bool
    holds_refined: bool


def sin_example_scan(p_grid: Sequence[float], rtol: float = DEFAULT_RTOL) -> list[SinScanRow]:
    """sin(2 pi (1-p)) against the classical bound 0 and the refined 2 pi^2 p (1-p).

    This is the two-operator instance A1 = diag(2pi, 0), A2 = diag(0, 2pi),
    x = (0, 1), weights (p, 1-p) and convexifier -1 of sin on [0, 2pi].
    """
    rows = []
    for p in p_grid:
        p = float(p)
        if not 0.0 <= p <= 1.0:
            raise ValidationError(f"p must lie in [0, 1], got {p!r}")
        lhs = math.sin(2.0 * math.pi * (1.0 - p))
        b44 = 2.0 * math.pi ** 2 * p * (1.0 - p)
        rows.append(SinScanRow(p, lhs, 0.0, b44, _holds(lhs, 0.0, rtol), _holds(lhs, b44, rtol)))
    return rows
