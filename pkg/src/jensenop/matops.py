"""Real symmetric matrices as finite-dimensional self-adjoint operators.

Matrices are plain ``numpy`` float arrays; the helpers here validate them,
compute spectra, and apply scalar functions through the eigendecomposition
``f(A) = Q diag(f(lambda)) Q^T``.
"""

from __future__ import annotations

import json
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceError, SpectrumError, ValidationError
from .scalar_fn import FunctionModel, Interval

__all__ = [
    "EigenDecomposition", "as_symmetric", "as_state", "eigh", "apply_function",
    "apply_scalar", "quadratic_form", "spectrum_interval", "direct_sum",
    "lambda_min", "load_matrix", "load_vector", "SYMMETRY_RTOL", "UNIT_TOL",
]

SYMMETRY_RTOL = 1e-12
UNIT_TOL = 1e-12
RESIDUAL_RTOL = 1e-10
SPECTRUM_SLACK = 1e-9
DEGENERATE_WIDEN = 1e-9


class EigenDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # orthonormal columns


def as_symmetric(A) -> np.ndarray:
    """Validate a square, symmetric, finite matrix and return it as float64."""
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    tol = SYMMETRY_RTOL * (1.0 + np.max(np.abs(A)))
    asym = np.max(np.abs(A - A.T))
    if asym > tol:
        raise ValidationError(f"matrix is not symmetric: max |A - A^T| = {asym:.3g} > {tol:.3g}")
    return A


def as_state(x, unit: bool = True) -> np.ndarray:
    x = np.array(x, dtype=float).reshape(-1)
    if x.size == 0 or not np.all(np.isfinite(x)):
        raise ValidationError("state vector must be non-empty and finite")
    if unit:
        norm = float(np.linalg.norm(x))
        if abs(norm - 1.0) > UNIT_TOL:
            raise ValidationError(f"expected a unit vector, |x| = {norm!r}")
    return x


def eigh(A) -> EigenDecomposition:
    """Symmetric eigendecomposition via LAPACK, with a residual self-check."""
    A = as_symmetric(A)
    try:
        w, Q = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigendecomposition did not converge: {exc}") from exc
    scale = 1.0 + np.linalg.norm(A)
    residual = np.linalg.norm(A - (Q * w) @ Q.T)
    if residual > RESIDUAL_RTOL * scale:
        raise ConvergenceError(f"eigendecomposition residual {residual:.3g} too large", residual)
    return EigenDecomposition(w, Q)


def _spectral(decomp: EigenDecomposition, values: np.ndarray) -> np.ndarray:
    Q = decomp.eigenvectors
    M = (Q * values) @ Q.T
    return 0.5 * (M + M.T)


def apply_function(m: FunctionModel, A) -> np.ndarray:
    """Functional calculus f(A) for a model whose domain contains Sp(A).

    Eigenvalues within 1e-9*(1 + |domain|) of the domain are clipped onto it
    before f is evaluated.
    """
    decomp = eigh(A)
    slack = SPECTRUM_SLACK * (1.0 + m.domain.magnitude)
    bad = [float(lam) for lam in decomp.eigenvalues if not m.domain.contains(lam, slack)]
    if bad:
        raise SpectrumError(
            f"spectrum outside [{m.domain.lo}, {m.domain.hi}] for {m.name}: {bad}", bad
        )
    values = np.array([m(m.domain.clip(float(lam))) for lam in decomp.eigenvalues])
    return _spectral(decomp, values)


def apply_scalar(fn, A) -> np.ndarray:
    """f(A) for a plain vectorised callable (no domain bookkeeping)."""
    decomp = eigh(A)
    return _spectral(decomp, np.asarray(fn(decomp.eigenvalues), dtype=float))


def quadratic_form(A, x) -> float:
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float).reshape(-1)
    if A.shape != (x.size, x.size):
        raise ValidationError(f"dimension mismatch: matrix {A.shape}, vector {x.size}")
    return float(x @ A @ x)


def spectrum_interval(A) -> Interval:
    w = eigh(A).eigenvalues
    lo, hi = float(w[0]), float(w[-1])
    if lo == hi:
        pad = DEGENERATE_WIDEN * max(1.0, abs(lo))
        return Interval(lo - pad, hi + pad)
    return Interval(lo, hi)


def lambda_min(A) -> float:
    return float(eigh(A).eigenvalues[0])


def direct_sum(As: Sequence) -> np.ndarray:
    """Block-diagonal matrix with the given symmetric blocks."""
    if len(As) == 0:
        raise ValidationError("direct_sum needs at least one block")
    blocks = [as_symmetric(A) for A in As]
    n = sum(B.shape[0] for B in blocks)
    out = np.zeros((n, n))
    k = 0
    for B in blocks:
        d = B.shape[0]
        out[k:k + d, k:k + d] = B
        k += d
    return out


def load_matrix(path) -> np.ndarray:
    """Read a JSON array of rows and validate symmetry."""
    with open(path) as fh:
        data = json.load(fh)
    return as_symmetric(data)


def load_vector(path) -> np.ndarray:
    with open(path) as fh:
        data = json.load(fh)
    return np.array(data, dtype=float).reshape(-1)
