"""Functions with their first two derivatives on a compact interval.

A :class:`FunctionModel` carries ``f``, ``f'`` and ``f''`` as expression
trees.  :func:`convexifier` returns ``alpha = min f''`` so that
``f(x) - alpha/2 * x**2`` is convex; :func:`concavifier` returns
``beta = max f''`` so that ``beta/2 * x**2 - f(x)`` is convex.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Literal

from . import expr
from .errors import DomainError, ValidationError

__all__ = [
    "Interval", "FunctionModel", "Convexifier", "REGISTRY",
    "make_model", "builtin", "resolve_model",
    "convexifier", "concavifier", "lipschitz_convexifier", "user_convexifier",
    "golden_section_minimize", "grid",
]

SEARCH_POINTS = 1001
FD_SAMPLES = 100
FD_STEP = 1e-6
FD_RTOL = 1e-5
GSS_TOL = 1e-10


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValidationError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ValidationError(f"interval needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def magnitude(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= x <= self.hi + slack

    def clip(self, x: float) -> float:
        return min(max(x, self.lo), self.hi)

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))


def grid(domain: Interval, points: int) -> list[float]:
    """``points`` equally spaced nodes including both endpoints."""
    step = domain.width / (points - 1)
    xs = [domain.lo + i * step for i in range(points)]
    xs[-1] = domain.hi
    return xs


@dataclass(frozen=True)
class FunctionModel:
    f: expr.Expression
    f1: expr.Expression
    f2: expr.Expression
    domain: Interval
    name: str = ""

    def __call__(self, x: float) -> float:
        return expr.evaluate(self.f, x)

    def d1(self, x: float) -> float:
        return expr.evaluate(self.f1, x)

    def d2(self, x: float) -> float:
        return expr.evaluate(self.f2, x)


REGISTRY: dict[str, tuple[str, Interval]] = {
    "sin": ("sin(x)", Interval(0.0, 2.0 * math.pi)),
    "exp": ("exp(x)", Interval(0.0, 1.0)),
    "neglog": ("-log(x)", Interval(1.0, 2.0)),
    "pow4": ("x^4", Interval(-1.0, 1.0)),
}


def _central_difference(fn, x, domain):
    h = FD_STEP * max(1.0, abs(x))
    lo, hi = x - h, x + h
    if lo < domain.lo:
        lo = x
    if hi > domain.hi:
        hi = x
    return (fn(hi) - fn(lo)) / (hi - lo)


def _check_derivative(name, fn, dfn, domain, which):
    for i in range(FD_SAMPLES):
        x = domain.lo + (i + 0.5) * domain.width / FD_SAMPLES
        symbolic = dfn(x)
        numeric = _central_difference(fn, x, domain)
        scale = max(1.0, abs(symbolic), abs(numeric))
        if abs(symbolic - numeric) > FD_RTOL * scale:
            raise ValidationError(
                f"{name}: symbolic {which} derivative {symbolic!r} disagrees with "
                f"finite difference {numeric!r} at x={x!r}"
            )


def make_model(f_text: str, domain: Interval, name: str | None = None) -> FunctionModel:
    """Parse ``f_text``, differentiate twice and validate on ``domain``.

    Every node of a 1001-point grid must give finite values for f, f' and f'';
    the symbolic derivatives are cross-checked against central differences at
    100 interior points.
    """
    f = expr.parse(f_text)
    f1 = expr.differentiate(f)
    f2 = expr.differentiate(f1)
    model = FunctionModel(f, f1, f2, domain, name or f_text)
    for x in grid(domain, SEARCH_POINTS):
        for label, fn in (("f", model), ("f'", model.d1), ("f''", model.d2)):
            value = fn(x)
            if not math.isfinite(value):
                raise DomainError(f"{model.name}: {label}({x!r}) = {value!r} is not finite")
    _check_derivative(model.name, model, model.d1, domain, "first")
    _check_derivative(model.name, model.d1, model.d2, domain, "second")
    return model


def builtin(name: str, domain: Interval | None = None) -> FunctionModel:
    try:
        text, default = REGISTRY[name]
    except KeyError:
        raise ValidationError(
            f"unknown builtin function {name!r}; choose from {sorted(REGISTRY)}"
        ) from None
    return make_model(text, domain or default, name=name)


def resolve_model(spec: str, domain: Interval | None = None) -> FunctionModel:
    """A registry name or mini-language text. Text requires a domain."""
    if spec in REGISTRY:
        return builtin(spec, domain)
    if domain is None:
        raise ValidationError(f"function {spec!r} is not a builtin; an interval is required")
    return make_model(spec, domain)


# ---------------------------------------------------------------------------
# convexifiers

@dataclass(frozen=True)
class Convexifier:
    alpha: float
    method: Literal["analytic-grid", "lipschitz-negation", "user-supplied"]


def golden_section_minimize(fn: Callable[[float], float], lo: float, hi: float,
                            tol: float = GSS_TOL) -> float:
    """Golden-section search for a minimiser of a unimodal ``fn`` on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
        if b - a <= 4 * math.ulp(max(abs(a), abs(b), 1.0)):
            break
    return c if fc <= fd else d


def _grid_extremum(values_at, domain):
    """Minimum of ``values_at`` over the domain: grid scan then golden section."""
    xs = grid(domain, SEARCH_POINTS)
    ys = [values_at(x) for x in xs]
    for x, y in zip(xs, ys):
        if not math.isfinite(y):
            raise DomainError(f"f'' is not finite at x={x!r}")
    lo_y, hi_y = min(ys), max(ys)
    if hi_y - lo_y < 1e-14 * (1.0 + max(abs(lo_y), abs(hi_y))):
        return lo_y
    i = ys.index(lo_y)
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    xstar = golden_section_minimize(values_at, left, right)
    return min(lo_y, values_at(xstar))


def _check_convex(g, domain, label):
    xs = grid(domain, SEARCH_POINTS)
    gs = [g(x) for x in xs]
    scale = 1.0 + max(abs(v) for v in gs)
    for i in range(1, len(xs) - 1):
        if gs[i - 1] - 2.0 * gs[i] + gs[i + 1] < -1e-9 * scale:
            raise ValidationError(f"{label} is not midpoint-convex near x={xs[i]!r}")


@functools.lru_cache(maxsize=256)
def convexifier(m: FunctionModel) -> Convexifier:
    """``alpha = min f''`` over the domain, lowered by a 1e-12 relative margin."""
    alpha = _grid_extremum(m.d2, m.domain)
    alpha -= 1e-12 * (1.0 + abs(alpha))
    _check_convex(lambda x: m(x) - 0.5 * alpha * x * x, m.domain,
                  f"f - alpha/2 x^2 for {m.name}")
    return Convexifier(alpha, "analytic-grid")


@functools.lru_cache(maxsize=256)
def concavifier(m: FunctionModel) -> float:
    """``beta = max f''`` over the domain, raised by a 1e-12 relative margin."""
    beta = -_grid_extremum(lambda x: -m.d2(x), m.domain)
    beta += 1e-12 * (1.0 + abs(beta))
    _check_convex(lambda x: 0.5 * beta * x * x - m(x), m.domain,
                  f"beta/2 x^2 - f for {m.name}")
    return beta


def lipschitz_convexifier(L: float) -> Convexifier:
    """``alpha = -L`` for f with an L-Lipschitz derivative."""
    if not L >= 0:
        raise ValidationError(f"Lipschitz constant must be non-negative, got {L!r}")
    return Convexifier(0.0 - float(L), "lipschitz-negation")


def user_convexifier(alpha: float) -> Convexifier:
    return Convexifier(float(alpha), "user-supplied")
