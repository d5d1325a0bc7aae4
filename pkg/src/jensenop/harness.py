"""Seeded random instances and the property suites that exercise the library.

Seed derivation
---------------
Each draw uses its own generator, independent of execution order::

    key = splitmix64(seed mod 2**64)
    key = splitmix64(key ^ (trial mod 2**64))
    key = splitmix64(key ^ stream)
    rng = numpy.random.Generator(numpy.random.PCG64(key))

where ``splitmix64`` is the standard SplitMix64 output function (add
``0x9E3779B97F4A7C15``, then two xor-shift-multiply rounds).  Reference
values of :func:`derive_seed`::

    derive_seed(0, 0, 0)  == 0x238275BC38FCBE91
    derive_seed(1, 0, 0)  == 0xB18A02F46D8D86C3
    derive_seed(42, 7, 3) == 0xF55E4254D4655539

Margins are relative: slack divided by ``1 + max(|smaller|, |larger|)``.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jensen, matops, opyoung, young
from .errors import ValidationError
from .reports import relative_margin
from .scalar_fn import FD_RTOL, REGISTRY, Interval, builtin, convexifier

__all__ = [
    "RandomSpec", "SuiteReport", "SUITES", "splitmix64", "derive_seed", "generator",
    "random_symmetric", "random_unit_vector", "random_weights", "random_orthogonal",
    "random_sandwich", "run_suite", "young_grid",
]

MASK64 = (1 << 64) - 1
COUNTEREXAMPLE_CAP = 10
THEOREM_RTOL = 1e-9
EQUIVALENCE_TOL = 1e-10

STREAM_DIM = 1
STREAM_MATRIX = 2
STREAM_VECTOR = 3
STREAM_WEIGHTS = 4
STREAM_SCALARS = 5
STREAM_BLOCKS = 64  # block k of a multi-operator draw uses STREAM_BLOCKS + k


def splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, trial: int, stream: int = 0) -> int:
    key = splitmix64(seed & MASK64)
    key = splitmix64(key ^ (trial & MASK64))
    return splitmix64(key ^ (stream & MASK64))


def generator(seed: int, trial: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(derive_seed(seed, trial, stream)))


@dataclass(frozen=True)
class RandomSpec:
    seed: int = 0
    trials: int = 100
    dim_range: tuple[int, int] = (1, 20)
    interval: Interval | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError(f"trials must be at least 1, got {self.trials}")
        lo, hi = self.dim_range
        if not 1 <= lo <= hi:
            raise ValidationError(f"need 1 <= dim_min <= dim_max, got {self.dim_range}")


def _interval(spec: RandomSpec, interval: Interval | None) -> Interval:
    chosen = interval or spec.interval
    if chosen is None:
        raise ValidationError("no target spectrum interval given")
    return chosen


def _dimension(spec, trial):
    lo, hi = spec.dim_range
    return int(generator(spec.seed, trial, STREAM_DIM).integers(lo, hi + 1))


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    """Orthonormalize ``n`` standard-normal columns (QR with sign fix)."""
    for _ in range(100):
        Z = rng.standard_normal((n, n))
        Q, R = np.linalg.qr(Z)
        diag = np.diag(R)
        if np.min(np.abs(diag)) > 1e-10 * max(1.0, np.max(np.abs(diag))):
            return Q * np.sign(diag)
    raise ValidationError("100 consecutive rank-deficient draws")


def random_symmetric(spec: RandomSpec, trial: int, *, n: int | None = None,
                     interval: Interval | None = None, stream: int = STREAM_MATRIX) -> np.ndarray:
    """``Q diag(lambda) Q^T`` with eigenvalues uniform in the target interval."""
    iv = _interval(spec, interval)
    n = _dimension(spec, trial) if n is None else n
    rng = generator(spec.seed, trial, stream)
    lam = rng.uniform(iv.lo, iv.hi, n)
    Q = random_orthogonal(rng, n)
    A = (Q * lam) @ Q.T
    return 0.5 * (A + A.T)


def random_unit_vector(spec: RandomSpec, trial: int, n: int, stream: int = STREAM_VECTOR) -> np.ndarray:
    rng = generator(spec.seed, trial, stream)
    while True:
        x = rng.standard_normal(n)
        norm = np.linalg.norm(x)
        if norm > 1e-8:
            return x / norm


def random_weights(spec: RandomSpec, trial: int, n: int, stream: int = STREAM_WEIGHTS) -> np.ndarray:
    """Normalized absolute normals, floored at 1e-6 before renormalizing."""
    rng = generator(spec.seed, trial, stream)
    p = np.abs(rng.standard_normal(n))
    p = p / p.sum()
    p = np.maximum(p, 1e-6)
    return p / math.fsum(p)


def random_sandwich(spec: RandomSpec, trial: int):
    """A conforming operator-Young instance ``(A, B, v, SandwichSpec)``.

    Bounds: m' ~ U(0.2, 2), m = m' U(1, 3), M = m U(1.05, 4), M' = M U(1, 3).
    Odd trials use condition (ii), i.e. A and B exchanged.
    """
    rng = generator(spec.seed, trial, STREAM_SCALARS)
    mp = rng.uniform(0.2, 2.0)
    m = mp * rng.uniform(1.0, 3.0)
    M = m * rng.uniform(1.05, 4.0)
    Mp = M * rng.uniform(1.0, 3.0)
    v = float(rng.uniform(0.0, 1.0))
    n = _dimension(spec, trial)
    low = random_symmetric(spec, trial, n=n, interval=Interval(mp, m), stream=STREAM_BLOCKS)
    high = random_symmetric(spec, trial, n=n, interval=Interval(M, Mp), stream=STREAM_BLOCKS + 1)
    condition = "i" if trial % 2 == 0 else "ii"
    A, B = (low, high) if condition == "i" else (high, low)
    return A, B, v, opyoung.SandwichSpec(mp, m, M, Mp, condition)


# ---------------------------------------------------------------------------
# reports

@dataclass
class SuiteReport:
    suite: str
    trials: int
    failures: int
    worst_margin: float
    counterexamples: list = field(default_factory=list)
    wall_time_ms: float = 0.0

    def to_dict(self, include_time: bool = True) -> dict:
        d = {
            "suite": self.suite,
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": self.worst_margin,
            "counterexamples": self.counterexamples,
        }
        if include_time:
            d["wall_time_ms"] = self.wall_time_ms
        return d

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), sort_keys=True, default=_jsonable)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "_asdict"):
        return obj._asdict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


class _Collector:
    def __init__(self, name):
        self.name = name
        self.trials = 0
        self.failures = 0
        self.worst = math.inf
        self.counterexamples = []

    def trial(self, margins, failed, payload: Callable[[], dict]):
        self.trials += 1
        for m in margins:
            self.worst = min(self.worst, float(m))
        if failed:
            self.failures += 1
            if len(self.counterexamples) < COUNTEREXAMPLE_CAP:
                self.counterexamples.append(json.loads(json.dumps(payload(), default=_jsonable)))

    def report(self, started):
        return SuiteReport(
            self.name, self.trials, self.failures,
            self.worst if math.isfinite(self.worst) else 0.0,
            self.counterexamples, round((time.perf_counter() - started) * 1e3, 3),
        )


def _models(model):
    if model is None:
        return [builtin(name) for name in REGISTRY]
    if isinstance(model, str):
        return [builtin(model)]
    return [model]


def young_grid(values=(0.01, 0.1, 1.0, 10.0, 100.0), v_steps: int = 101):
    for a in values:
        for b in values:
            for i in range(v_steps):
                yield young.MeanContext(a, b, i / (v_steps - 1))


# ---------------------------------------------------------------------------
# suites

def _suite_jensen_operator(col, config, model=None, rtol=THEOREM_RTOL):
    for k, m in enumerate(_models(model)):
        alpha = convexifier(m).alpha
        convex = alpha >= -1e-9
        base = k * 1_000_003
        for trial in range(config.trials):
            t = base + trial
            A = random_symmetric(config, t, interval=m.domain)
            x = random_unit_vector(config, t, A.shape[0])
            rep = jensen.jensen_operator(m, alpha, A, x, rtol)
            margins = [relative_margin(rep.lhs, rep.rhs_refined)]
            if alpha > 0:
                margins.append(relative_margin(rep.rhs_refined, rep.rhs_classical))
            if convex:
                # classical multi-operator Jensen: the alpha = 0 slice of the weighted form
                count = 2 + trial % 3
                As = [random_symmetric(config, t, n=A.shape[0], interval=m.domain,
                                       stream=STREAM_BLOCKS + j) for j in range(count)]
                p = random_weights(config, t, count)
                rw = jensen.jensen_weighted(m, 0.0, As, p, x, rtol)
                margins.append(relative_margin(rw.lhs, rw.rhs_classical))
            col.trial(margins, min(margins) < -rtol,
                      lambda: {"model": m.name, "trial": t, "A": A, "x": x, "report": rep})


def _report_diff(r1, r2):
    return max(abs(getattr(r1, f) - getattr(r2, f))
               for f in ("lhs", "rhs_classical", "variance", "rhs_refined"))


def _suite_jensen_equivalence(col, config, model="sin", tol=EQUIVALENCE_TOL):
    (m,) = _models(model)
    alpha = convexifier(m).alpha
    iv = m.domain
    for trial in range(config.trials):
        rng = generator(config.seed, trial, STREAM_SCALARS)
        count = int(rng.integers(1, 5))
        n = _dimension(config, trial)
        p = random_weights(config, trial, count)
        x = random_unit_vector(config, trial, n)
        # weighted on scalar operators t_i I against the scalar form
        ts = rng.uniform(iv.lo, iv.hi, count)
        diag = [t * np.eye(n) for t in ts]
        d1 = _report_diff(jensen.jensen_weighted(m, alpha, diag, p, x),
                          jensen.jensen_scalar(m, alpha, ts, p))
        # multi-operator against a single operator on the direct sum
        As = [random_symmetric(config, trial, interval=iv, stream=STREAM_BLOCKS + j)
              for j in range(count)]
        big_x = random_unit_vector(config, trial, sum(A.shape[0] for A in As),
                                   stream=STREAM_VECTOR + 32)
        xs = np.split(big_x, np.cumsum([A.shape[0] for A in As])[:-1])
        d2 = _report_diff(jensen.jensen_multi(m, alpha, As, xs),
                          jensen.jensen_operator(m, alpha, matops.direct_sum(As), big_x))
        # weighted against multi with x_i = sqrt(p_i) x
        Bs = [random_symmetric(config, trial, n=n, interval=iv, stream=STREAM_BLOCKS + 16 + j)
              for j in range(count)]
        d3 = _report_diff(jensen.jensen_weighted(m, alpha, Bs, p, x),
                          jensen.jensen_multi(m, alpha, Bs, [math.sqrt(pi) * x for pi in p]))
        worst = max(d1, d2, d3)
        col.trial([-worst], worst > tol,
                  lambda: {"trial": trial, "diffs": [d1, d2, d3], "weights": p})


def _suite_pecaric_mitroi(col, config, model=None):
    models = _models(model) if model is not None else [builtin(n) for n in ("exp", "neglog", "pow4")]
    for k, m in enumerate(models):
        base = k * 1_000_003
        for trial in range(config.trials):
            t = base + trial
            rng = generator(config.seed, t, STREAM_SCALARS)
            count = int(rng.integers(2, 6))
            ts = rng.uniform(m.domain.lo, m.domain.hi, count)
            p = random_weights(config, t, count)
            b = jensen.pecaric_mitroi_bounds(m, ts, p)
            margins = [relative_margin(b.lower, b.gap), relative_margin(b.gap, b.upper)]
            col.trial(margins, min(margins) < -THEOREM_RTOL,
                      lambda: {"model": m.name, "ts": ts, "weights": p, "bounds": b})


def _suite_young_sandwich(col, config, rtol=THEOREM_RTOL):
    for ctx in young_grid():
        rep = young.young_report(ctx, rtol)
        _, hchecks = young.heinz_report(ctx, rtol)
        checks = list(rep.bounds) + hchecks
        margins = [c.relative_margin for c in checks]
        col.trial(margins, not all(c.holds for c in checks),
                  lambda: {"a": ctx.a, "b": ctx.b, "v": ctx.v,
                           "failed": [c.to_dict() for c in checks if not c.holds]})


def _suite_young_nesting(col, config):
    for ctx in young_grid():
        cl = young.young_classical(ctx)
        rf = young.young_refined(ctx)
        dr = young.dragomir(ctx)
        margins = [relative_margin(cl.lower, rf.lower), relative_margin(rf.upper, cl.upper),
                   relative_margin(dr.lower, rf.lower)]
        col.trial(margins, min(margins) < -THEOREM_RTOL,
                  lambda: {"a": ctx.a, "b": ctx.b, "v": ctx.v, "classical": cl,
                           "refined": rf, "dragomir": dr})


def _no_ordering_values(ctx):
    up = young.young_refined(ctx).upper - young.dragomir(ctx).upper
    t, v = young.wzl_normalize(ctx)
    norm = young.MeanContext(1.0, t, v)
    w, rf, tv = young.wzl(norm), young.young_refined(norm), t ** v
    return {"refined_vs_dragomir_upper": up,
            "wzl_vs_refined_upper": w.upper - tv * rf.upper,
            "wzl_vs_refined_lower": w.lower - tv * rf.lower}


def _suite_young_no_ordering(col, config):
    extremes: dict[str, list[float]] = {}
    points = 0
    for ctx in young_grid():
        points += 1
        for name, value in _no_ordering_values(ctx).items():
            lo_hi = extremes.setdefault(name, [math.inf, -math.inf])
            lo_hi[0] = min(lo_hi[0], value)
            lo_hi[1] = max(lo_hi[1], value)
    # one trial per comparison family: both signs must occur somewhere on the grid
    for name, (lo, hi) in extremes.items():
        margin = min(hi, -lo)
        col.trial([margin], not margin > 0,
                  lambda: {"comparison": name, "min": lo, "max": hi})
    col.trials = points


def _suite_heinz_chain(col, config, rtol=THEOREM_RTOL):
    for ctx in young_grid():
        _, checks = young.heinz_report(ctx, rtol)
        col.trial([c.relative_margin for c in checks], not all(c.holds for c in checks),
                  lambda: {"a": ctx.a, "b": ctx.b, "v": ctx.v,
                           "failed": [c.to_dict() for c in checks if not c.holds]})


def _suite_kantorovich_exp(col, config, points=61):
    for i in range(points):
        h = 10.0 ** (-3 + 6 * i / (points - 1))
        K, e, diff = young.kantorovich_vs_exp(1.0, h)
        col.trial([diff], diff < -1e-12, lambda: {"h": h, "K": K, "exp": e, "difference": diff})


def _suite_operator_young(col, config, chains=("forward", "reverse")):
    for trial in range(config.trials):
        A, B, v, spec = random_sandwich(config, trial)
        rep = opyoung.operator_young_check(A, B, v, spec)
        checks = [c for c in rep.checks if c.name in chains]
        col.trial([c.relative_margin for c in checks], not all(c.holds for c in checks),
                  lambda: {"trial": trial, "A": A, "B": B, "v": v, "spec": spec.__dict__,
                           "checks": [c.to_dict() for c in checks]})


def _suite_endpoint_scan(col, config, grid_size=1000):
    for trial in range(config.trials):
        _, _, v, spec = random_sandwich(config, trial)
        if trial % 4 == 0:
            v = 0.5
        scan = opyoung.endpoint_attainment_scan(spec, v, grid_size)
        ok = scan.lower_min_at_h and scan.upper_max_at_h_prime
        if v == 0.5:
            ok = ok and scan.lower_monotone
        # zero when the extremum sits on the endpoint, negative otherwise
        lo_margin = relative_margin(opyoung.lower_coefficient(spec.h, v), scan.lower_min)
        hi_margin = relative_margin(scan.upper_max, opyoung.upper_coefficient(spec.h_prime, v))
        col.trial([lo_margin, hi_margin], not ok, lambda: scan.to_dict())


def _suite_expr_derivative(col, config, model=None):
    for k, m in enumerate(_models(model)):
        base = k * 1_000_003
        for trial in range(config.trials):
            rng = generator(config.seed, base + trial, STREAM_SCALARS)
            iv = m.domain
            x = float(rng.uniform(iv.lo + 1e-4 * iv.width, iv.hi - 1e-4 * iv.width))
            h = 1e-6 * max(1.0, abs(x))
            worst = math.inf
            for fn, dfn in ((m, m.d1), (m.d1, m.d2)):
                sym = dfn(x)
                num = (fn(x + h) - fn(x - h)) / (2 * h)
                scale = max(1.0, abs(sym), abs(num))
                worst = min(worst, FD_RTOL - abs(sym - num) / scale)
            col.trial([worst], worst < 0, lambda: {"model": m.name, "x": x})


SUITES: dict[str, Callable] = {
    "jensen-operator": _suite_jensen_operator,
    "jensen-equivalence": _suite_jensen_equivalence,
    "pecaric-mitroi": _suite_pecaric_mitroi,
    "young-sandwich": _suite_young_sandwich,
    "young-nesting": _suite_young_nesting,
    "young-no-ordering": _suite_young_no_ordering,
    "heinz-chain": _suite_heinz_chain,
    "kantorovich-exp": _suite_kantorovich_exp,
    "operator-young": _suite_operator_young,
    "endpoint-scan": _suite_endpoint_scan,
    "expr-derivative": _suite_expr_derivative,
}


def run_suite(name: str, config: RandomSpec, **options) -> SuiteReport:
    """Run a registered property suite.

    Grid-based suites (the young, heinz and kantorovich families) ignore
    ``config.trials`` and report the number of grid points instead.
    """
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValidationError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    col = _Collector(name)
    started = time.perf_counter()
    suite(col, config, **options)
    return col.report(started)
