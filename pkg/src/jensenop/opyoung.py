"""Matrix-order Young inequalities for positive definite pairs.

For ``m' I <= A <= m I < M I <= B <= M' I`` (condition ``"i"``) or the same
with A and B exchanged (condition ``"ii"``), set ``h = M/m`` and
``h' = M'/m'``.  Then

    c_low  * A #_v B  <=  A nabla_v B  <=  c_high  * A #_v B

with ``c_low = K(h)^r exp((v(1-v)/2 - r/4)((1-h)/h)^2)`` and
``c_high = K(h')^R exp((v(1-v)/2 - R/4)((1-h')/h')^2)``.  The reverse chain
uses ``c'_low = K(h)^R exp((v(1-v)/2 - R/4)((1-h')/h')^2)`` and
``c'_high = K(h')^r exp((v(1-v)/2 - r/4)((1-h)/h)^2)``.

Condition ``"ii"`` puts the spectrum of ``T = A^{-1/2} B A^{-1/2}`` in
``[1/h', 1/h]``; since ``K(x) = K(1/x)`` and
``((1-x)/max(1,x))^2 = ((1-1/x)/max(1,1/x))^2`` the same coefficients apply.

Loewner checks ``X <= Y`` use the smallest eigenvalue of ``Y - X`` with
slack ``1e-9 * (1 + max(|X|, |Y|))`` in spectral norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import matops
from .errors import ValidationError
from .reports import BoundCheck, InequalityReport
from .young import kantorovich

__all__ = [
    "SandwichSpec", "EndpointScan", "check_condition", "operator_geometric_mean",
    "operator_young_check", "endpoint_attainment_scan", "loewner_margin",
    "lower_coefficient", "upper_coefficient", "sandwich_coefficients",
]

LOEWNER_RTOL = 1e-9


@dataclass(frozen=True)
class SandwichSpec:
    m_prime: float
    m: float
    M: float
    M_prime: float
    condition: Literal["i", "ii"] = "i"

    def __post_init__(self):
        mp, m, M, Mp = (float(self.m_prime), float(self.m), float(self.M), float(self.M_prime))
        if not (0 < mp <= m < M <= Mp and math.isfinite(Mp)):
            raise ValidationError(
                f"need 0 < m' <= m < M <= M', got ({mp}, {m}, {M}, {Mp})"
            )
        if self.condition not in ("i", "ii"):
            raise ValidationError(f"condition must be 'i' or 'ii', got {self.condition!r}")
        for name, value in zip(("m_prime", "m", "M", "M_prime"), (mp, m, M, Mp)):
            object.__setattr__(self, name, value)

    @property
    def h(self) -> float:
        return self.M / self.m

    @property
    def h_prime(self) -> float:
        return self.M_prime / self.m_prime


def _norm2(X):
    return float(np.max(np.abs(np.linalg.eigvalsh(X))))


def loewner_margin(X, Y) -> tuple[float, float]:
    """``(lambda_min(Y - X), 1 + max(|X|_2, |Y|_2))`` for the check X <= Y."""
    D = np.asarray(Y) - np.asarray(X)
    D = 0.5 * (D + D.T)
    return float(np.linalg.eigvalsh(D)[0]), 1.0 + max(_norm2(X), _norm2(Y))


def _loewner_ok(X, Y):
    margin, scale = loewner_margin(X, Y)
    return margin >= -LOEWNER_RTOL * scale


def check_condition(A, B, spec: SandwichSpec) -> bool:
    A = matops.as_symmetric(A)
    B = matops.as_symmetric(B)
    if A.shape != B.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {B.shape}")
    low, high = (A, B) if spec.condition == "i" else (B, A)
    eye = np.eye(A.shape[0])
    return (
        _loewner_ok(spec.m_prime * eye, low)
        and _loewner_ok(low, spec.m * eye)
        and _loewner_ok(spec.M * eye, high)
        and _loewner_ok(high, spec.M_prime * eye)
    )


def _powers(A, exponents):
    decomp = matops.eigh(A)
    w = decomp.eigenvalues
    Q = decomp.eigenvectors
    out = []
    for p in exponents:
        M = (Q * w ** p) @ Q.T
        out.append(0.5 * (M + M.T))
    return out


def operator_geometric_mean(A, B, v: float) -> np.ndarray:
    """``A^{1/2} (A^{-1/2} B A^{-1/2})^v A^{1/2}`` for positive definite A."""
    A = matops.as_symmetric(A)
    B = matops.as_symmetric(B)
    if A.shape != B.shape:
        raise ValidationError(f"dimension mismatch: {A.shape} vs {B.shape}")
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"v must lie in [0, 1], got {v!r}")
    lam = matops.eigh(A).eigenvalues
    if lam[0] <= 0:
        raise ValidationError(f"A is not positive definite (smallest eigenvalue {lam[0]!r})")
    root, inv_root = _powers(A, (0.5, -0.5))
    T = inv_root @ B @ inv_root
    Tv = matops.apply_scalar(lambda w: np.clip(w, 0.0, None) ** v, 0.5 * (T + T.T))
    G = root @ Tv @ root
    return 0.5 * (G + G.T)


def _shape(x):
    return ((1.0 - x) / max(1.0, x)) ** 2


def lower_coefficient(x: float, v: float) -> float:
    r = min(v, 1.0 - v)
    return kantorovich(x) ** r * math.exp((v * (1 - v) / 2 - r / 4) * _shape(x))


def upper_coefficient(x: float, v: float) -> float:
    R = max(v, 1.0 - v)
    return kantorovich(x) ** R * math.exp((v * (1 - v) / 2 - R / 4) * _shape(x))


def sandwich_coefficients(spec: SandwichSpec, v: float) -> dict[str, float]:
    h, hp = spec.h, spec.h_prime
    r, R = min(v, 1.0 - v), max(v, 1.0 - v)
    s = v * (1.0 - v) / 2.0
    q, qp = ((1 - h) / h) ** 2, ((1 - hp) / hp) ** 2
    return {
        "c_low": kantorovich(h) ** r * math.exp((s - r / 4) * q),
        "c_high": kantorovich(hp) ** R * math.exp((s - R / 4) * qp),
        "c_rev_low": kantorovich(h) ** R * math.exp((s - R / 4) * qp),
        "c_rev_high": kantorovich(hp) ** r * math.exp((s - r / 4) * q),
    }


def _relative_extremes(S, N):
    """Smallest and largest eigenvalue of ``S^{-1/2} N S^{-1/2}``."""
    (inv_root,) = _powers(S, (-0.5,))
    w = np.linalg.eigvalsh(0.5 * (inv_root @ N @ inv_root + (inv_root @ N @ inv_root).T))
    return float(w[0]), float(w[-1])


def _check(name, side, coeff, sharp, nabla, lo_ratio, hi_ratio):
    if side == "lower":
        margin, scale = loewner_margin(coeff * sharp, nabla)
        target = lo_ratio
    else:
        margin, scale = loewner_margin(nabla, coeff * sharp)
        target = hi_ratio
    rel = margin / scale
    return BoundCheck(name, side, coeff, target, margin, rel, rel >= -LOEWNER_RTOL)


def operator_young_check(A, B, v: float, spec: SandwichSpec) -> InequalityReport:
    """All four Loewner-order checks: the forward chain and the reverse chain.

    Each :class:`BoundCheck` carries the coefficient as ``value`` and, as
    ``target``, the extreme eigenvalue of ``S^{-1/2} N S^{-1/2}`` (the best
    constant the check could use), where ``S = A #_v B`` and
    ``N = A nabla_v B``.
    """
    if not check_condition(A, B, spec):
        raise ValidationError(f"A, B do not satisfy condition ({spec.condition}) for {spec}")
    A = matops.as_symmetric(A)
    B = matops.as_symmetric(B)
    sharp = operator_geometric_mean(A, B, v)
    nabla = (1.0 - v) * A + v * B
    lo_ratio, hi_ratio = _relative_extremes(sharp, nabla)
    c = sandwich_coefficients(spec, v)
    checks = (
        _check("forward", "lower", c["c_low"], sharp, nabla, lo_ratio, hi_ratio),
        _check("forward", "upper", c["c_high"], sharp, nabla, lo_ratio, hi_ratio),
        _check("reverse", "lower", c["c_rev_low"], sharp, nabla, lo_ratio, hi_ratio),
        _check("reverse", "upper", c["c_rev_high"], sharp, nabla, lo_ratio, hi_ratio),
    )
    details = {"v": float(v), "h": spec.h, "h_prime": spec.h_prime,
               "condition": spec.condition, **c}
    return InequalityReport("operator-young", checks, details)


@dataclass(frozen=True)
class EndpointScan:
    h: float
    h_prime: float
    v: float
    lower_argmin: float
    lower_min: float
    upper_argmax: float
    upper_max: float
    lower_min_at_h: bool
    upper_max_at_h_prime: bool
    lower_monotone: bool
    upper_monotone: bool

    def to_dict(self):
        return dict(self.__dict__)


def endpoint_attainment_scan(spec: SandwichSpec, v: float, grid_size: int = 1000) -> EndpointScan:
    """Scan the lower and upper coefficients over ``x in [h, h']``.

    The sandwich coefficients assume the lower one is smallest at ``h`` and the
    upper one largest at ``h'``; this reports whether the grid agrees (ties
    within 1e-14 relative count as attained).
    """
    if grid_size < 1:
        raise ValidationError("grid_size must be positive")
    xs = np.linspace(spec.h, spec.h_prime, grid_size) if grid_size > 1 else np.array([spec.h])
    lows = np.array([lower_coefficient(float(x), v) for x in xs])
    ups = np.array([upper_coefficient(float(x), v) for x in xs])
    i, j = int(np.argmin(lows)), int(np.argmax(ups))
    tie = 1e-14
    return EndpointScan(
        h=spec.h,
        h_prime=spec.h_prime,
        v=float(v),
        lower_argmin=float(xs[i]),
        lower_min=float(lows[i]),
        upper_argmax=float(xs[j]),
        upper_max=float(ups[j]),
        lower_min_at_h=bool(lows[0] <= lows[i] * (1 + tie)),
        upper_max_at_h_prime=bool(ups[-1] >= ups[j] * (1 - tie)),
        lower_monotone=bool(np.all(np.diff(lows) >= -tie * lows[1:])),
        upper_monotone=bool(np.all(np.diff(ups) >= -tie * ups[1:])),
    )
