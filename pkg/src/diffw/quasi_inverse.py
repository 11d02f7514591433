"""Quasi-inversion by Neumann series.

The monoid operation is x <> y = x + y - x*y with unit 0; the quasi-inverse
of x solves x <> y = y <> x = 0.  Inside the unit ball it is the limit of
-(x + x^2 + x^3 + ...).  Supported carriers: scalars, square matrices of
size at most 8, and pointwise matrix-valued maps.  The unital-algebra
identity (x - e)^{-1} + e serves as an oracle elsewhere and is never used
here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError, NotQuasiInvertibleError
from .jets import SmoothMap
from .weights import SampleDomain, default_domain

__all__ = [
    "AlgebraElement",
    "QuasiInverseMap",
    "quasi_invert",
    "check_quasi_identity",
    "RESIDUAL_TOL",
    "SERIES_TOL",
]

RESIDUAL_TOL = 1e-10
SERIES_TOL = 1e-12
MAX_MATRIX_DIM = 8
_MAX_TERMS = 50_000


def _spectral(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


@dataclass
class AlgebraElement:
    """Scalar, matrix, or matrix-valued-map member of the quasi-inversion
    algebra, with a cached norm bound (sup of spectral norms on the grid for
    the map variant)."""

    value: object
    domain: SampleDomain | None = None

    def __post_init__(self):
        v = self.value
        if isinstance(v, SmoothMap):
            shape = v.output_shape
            if len(shape) != 2 or shape[0] != shape[1]:
                raise DimensionMismatchError("map variant must produce square matrices")
            if self.domain is None:
                self.domain = default_domain(v.dim_in)
        elif np.isscalar(v) or np.asarray(v).ndim == 0:
            self.value = float(v)
        else:
            a = np.asarray(v, dtype=float)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise DimensionMismatchError("matrix variant must be square")
            if a.shape[0] > MAX_MATRIX_DIM:
                raise DimensionMismatchError(
                    f"matrix dimension capped at {MAX_MATRIX_DIM}"
                )
            self.value = a
        self._norm = None

    @property
    def variant(self) -> str:
        if isinstance(self.value, SmoothMap):
            return "map"
        return "scalar" if isinstance(self.value, float) else "matrix"

    @property
    def norm_bound(self) -> float:
        if self._norm is None:
            if self.variant == "scalar":
                self._norm = abs(self.value)
            elif self.variant == "matrix":
                self._norm = _spectral(self.value)
            else:
                vals = self.value.value_batch(self.domain.grid)
                self._norm = float(np.max(np.linalg.svd(vals, compute_uv=False)[..., 0]))
        return self._norm


def _series(x: np.ndarray, q: float, series_tol: float) -> np.ndarray:
    """-(x + x^2 + ...), truncated once the geometric tail drops below tol."""
    term = x.copy()
    total = x.copy()
    n = 1
    while q ** (n + 1) / (1.0 - q) >= series_tol:
        term = term @ x
        total += term
        n += 1
        if n > _MAX_TERMS:
            raise ConvergenceError("Neumann series did not meet its tail bound")
    return -total


class QuasiInverseMap(SmoothMap):
    """Pointwise quasi-inverse of a matrix-valued map (values only)."""

    supported_order = 0

    def __init__(self, inner: SmoothMap, series_tol: float = SERIES_TOL):
        self.inner = inner
        self.series_tol = series_tol
        self.dim_in = inner.dim_in
        self.output_shape = inner.output_shape

    def jet_batch(self, X, order):
        self._check_order(order)
        vals = self.inner.value_batch(np.asarray(X, dtype=float))
        out = np.empty_like(vals)
        for i, a in enumerate(vals):
            q = _spectral(a)
            if q >= 1.0:
                raise NotQuasiInvertibleError(
                    f"pointwise norm {q:.3f} >= 1 at sample {i}"
                )
            out[i] = _series(a, q, self.series_tol)
        return [out]


def _wrap(x, domain=None) -> AlgebraElement:
    return x if isinstance(x, AlgebraElement) else AlgebraElement(x, domain)


def quasi_invert(x, domain: SampleDomain | None = None, series_tol: float = SERIES_TOL):
    """Quasi-inverse inside the unit ball; raises outside.

    Returns the same kind of object that went in (scalar, matrix, or map).
    The element may be quasi-invertible beyond the ball; only the series
    criterion is decided here.
    """
    elem = _wrap(x, domain)
    q = elem.norm_bound
    if q >= 1.0:
        raise NotQuasiInvertibleError(
            f"norm bound {q:.6f} >= 1; series criterion fails"
        )
    if elem.variant == "scalar":
        y = _series(np.array([[elem.value]]), q, series_tol)
        return float(y[0, 0])
    if elem.variant == "matrix":
        return _series(elem.value, q, series_tol)
    return QuasiInverseMap(elem.value, series_tol)


def _pair_residual(a, b) -> float:
    r1 = a + b - a @ b
    r2 = b + a - b @ a
    return max(_spectral(r1), _spectral(r2))


def check_quasi_identity(x, y, domain: SampleDomain | None = None) -> float:
    """Max residual of x<>y and y<>x; sup over the grid for map variants."""
    ex, ey = _wrap(x, domain), _wrap(y, domain)
    if ex.variant != ey.variant:
        raise DimensionMismatchError("mixed algebra variants")
    if ex.variant == "scalar":
        a = np.array([[ex.value]])
        b = np.array([[ey.value]])
        return _pair_residual(a, b)
    if ex.variant == "matrix":
        return _pair_residual(ex.value, ey.value)
    grid = ex.domain.grid
    va = ex.value.value_batch(grid)
    vb = ey.value.value_batch(grid)
    r1 = va + vb - va @ vb
    r2 = vb + va - vb @ va
    worst = 0.0
    for r in (r1, r2):
        worst = max(worst, float(np.max(np.linalg.svd(r, compute_uv=False)[..., 0])))
    return worst
