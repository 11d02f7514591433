"""Weighted mapping groups into matrix Lie groups.

Elements are stored as Lie-algebra-valued chart coordinates xi with
gamma = exp o xi; pointwise multiplication is exact exp/log (no truncated
series), inversion is negation of the coordinate, and the evolution of a
time-dependent algebra-valued field is the pointwise left evolution
eta'(x, t) = eta(x, t) . field(t)(x), eta(x, 0) = I.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ChartOverflowError, DimensionMismatchError, SuiteConfigError
from .jets import Scaled, SmoothMap
from .oracles import fd_jet_from_values
from .regularity import TimeField
from .weights import SampleDomain, WeightFamily, default_domain, is_decaying, seminorm

__all__ = [
    "MatrixGroup",
    "MappingElement",
    "CHART_RADIUS",
    "multiply",
    "invert",
    "group_exponential",
    "matrix_flow",
    "evolve_mapping",
    "left_log_residual",
    "is_member",
]

CHART_RADIUS = 0.5


def _so3_hat(v):
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0.0]])


def _so3_exp(K: np.ndarray) -> np.ndarray:
    theta = np.sqrt(K[0, 1] ** 2 + K[0, 2] ** 2 + K[1, 2] ** 2)
    if theta < 1e-8:
        a = 1.0 - theta ** 2 / 6.0
        b = 0.5 - theta ** 2 / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / theta ** 2
    return np.eye(3) + a * K + b * (K @ K)


def _so3_log(R: np.ndarray) -> np.ndarray:
    c = np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)
    theta = np.arccos(c)
    skew = (R - R.T) / 2.0
    if theta < 1e-8:
        return skew * (1.0 + theta ** 2 / 6.0)
    return skew * (theta / np.sin(theta))


def _nilpotent_exp(N: np.ndarray) -> np.ndarray:
    n = N.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in range(1, n):
        term = term @ N / k
        out = out + term
    return out


def _nilpotent_log(g: np.ndarray) -> np.ndarray:
    n = g.shape[0]
    N = g - np.eye(n)
    out = np.zeros_like(N)
    term = np.eye(n)
    for k in range(1, n):
        term = term @ N
        out = out + ((-1) ** (k + 1) / k) * term
    return out


@dataclass(frozen=True)
class MatrixGroup:
    """GL(n), SO(3), or the upper-triangular unipotent group, n <= 4.

    ``exp``/``log`` use closed forms where the group provides one (Rodrigues
    for rotations, finite series for unipotent matrices) and scipy routines
    for GL; the principal log is defined where |g - I| < 1.
    """

    name: str
    n: int

    def __post_init__(self):
        if self.name not in ("GL", "SO3", "unipotent"):
            raise SuiteConfigError(f"unknown matrix group {self.name!r}")
        if self.name == "SO3" and self.n != 3:
            raise DimensionMismatchError("SO3 requires n = 3")
        if not 1 <= self.n <= 4:
            raise DimensionMismatchError("group dimension capped at 4")

    @property
    def chart_radius(self) -> float:
        return CHART_RADIUS

    def in_algebra(self, xi: np.ndarray, tol: float = 1e-10) -> bool:
        xi = np.asarray(xi)
        if xi.shape != (self.n, self.n):
            return False
        if self.name == "SO3":
            return bool(np.max(np.abs(xi + xi.T)) <= tol)
        if self.name == "unipotent":
            return bool(np.max(np.abs(np.tril(xi))) <= tol)
        return True

    def exp(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if self.name == "SO3":
            return _so3_exp(xi)
        if self.name == "unipotent":
            return _nilpotent_exp(xi)
        return scipy.linalg.expm(xi)

    def log(self, g: np.ndarray) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        dist = np.linalg.norm(g - np.eye(self.n), 2)
        if dist >= 1.0:
            raise ChartOverflowError(
                f"|g - I| = {dist:.3f} leaves the principal-log radius"
            )
        if self.name == "SO3":
            return _so3_log(g)
        if self.name == "unipotent":
            return _nilpotent_log(g)
        out = scipy.linalg.logm(g)
        if np.max(np.abs(out.imag)) > 1e-10:
            raise ChartOverflowError("principal log is not real here")
        return out.real

    def exp_batch(self, Xi: np.ndarray) -> np.ndarray:
        return np.stack([self.exp(a) for a in Xi])

    def log_batch(self, G: np.ndarray) -> np.ndarray:
        return np.stack([self.log(a) for a in G])


class ProductChartMap(SmoothMap):
    """Chart coordinate of a pointwise product: log(exp(xi_a) exp(xi_b))."""

    def __init__(self, group: MatrixGroup, left: SmoothMap, right: SmoothMap):
        if left.output_shape != right.output_shape:
            raise DimensionMismatchError("factors have different value shapes")
        self.group = group
        self.left = left
        self.right = right
        self.dim_in = left.dim_in
        self.output_shape = left.output_shape
        self.supported_order = 2

    def value_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        ga = self.group.exp_batch(self.left.value_batch(X))
        gb = self.group.exp_batch(self.right.value_batch(X))
        return self.group.log_batch(ga @ gb)

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if order == 0:
            return [self.value_batch(X)]
        per_point = [
            fd_jet_from_values(lambda z: self.value_batch(z[None])[0], x, order)
            for x in X
        ]
        return [np.stack([p[l] for p in per_point]) for l in range(order + 1)]


@dataclass
class MappingElement:
    """Element of the weighted mapping group, stored as its chart coordinate.

    ``xi`` is an algebra-valued map; the group element is exp o xi.  The
    cached ``sup_norm`` is the grid sup of the spectral norms of xi.
    """

    group: MatrixGroup
    xi: SmoothMap
    family: WeightFamily
    order: int = 2
    domain: SampleDomain = None
    sup_norm: float = field(default=None)

    def __post_init__(self):
        shape = self.xi.output_shape
        if shape != (self.group.n, self.group.n):
            raise DimensionMismatchError("coordinate is not algebra-valued")
        if self.order > 2:
            raise DimensionMismatchError("mapping elements carry orders up to 2")
        if self.domain is None:
            self.domain = default_domain(self.xi.dim_in)
        if self.sup_norm is None:
            vals = self.xi.value_batch(self.domain.grid)
            self.sup_norm = float(np.max(np.linalg.svd(vals, compute_uv=False)[..., 0]))

    @property
    def within_chart(self) -> bool:
        return self.sup_norm < self.group.chart_radius

    @property
    def within_multiplication_ball(self) -> bool:
        return self.sup_norm < self.group.chart_radius / 2.0

    def gamma_at(self, x) -> np.ndarray:
        """The group-valued map at a point: exp(xi(x))."""
        return self.group.exp(self.xi.value(np.atleast_1d(x)))

    def seminorm(self, weight, order) -> float:
        return seminorm(self.xi, weight, order, self.domain)


def multiply(a: MappingElement, b: MappingElement) -> MappingElement:
    """Pointwise group product in chart coordinates, exact exp/log."""
    if a.group != b.group:
        raise DimensionMismatchError("elements of different groups")
    if not (a.within_multiplication_ball and b.within_multiplication_ball):
        raise ChartOverflowError(
            "factors must stay within half the chart radius on the grid"
        )
    xi = ProductChartMap(a.group, a.xi, b.xi)
    return MappingElement(a.group, xi, a.family, a.order, a.domain)


def invert(a: MappingElement) -> MappingElement:
    """exp(xi)^{-1} = exp(-xi): inversion is exact negation."""
    return MappingElement(a.group, Scaled(-1.0, a.xi), a.family, a.order, a.domain)


def group_exponential(
    v: SmoothMap,
    group: MatrixGroup,
    family: WeightFamily,
    order: int = 2,
    domain: SampleDomain | None = None,
) -> MappingElement:
    """The mapping-group exponential.

    In exp-chart coordinates this is the identity on coordinates; it is
    exposed as a named operation so the one-parameter-subgroup law can be
    exercised against pointwise matrix exponentials.
    """
    elem = MappingElement(group, v, family, order, domain)
    if not elem.within_chart:
        raise ChartOverflowError(
            f"coordinate sup {elem.sup_norm:.3f} leaves the chart radius"
        )
    return elem


def matrix_flow(gamma: TimeField, X: np.ndarray, steps: int, group: MatrixGroup) -> np.ndarray:
    """Knot history of the pointwise matrix ODE eta' = eta . gamma(t)(x).

    Returns an array of shape (steps+1, N, n, n) with eta(x, 0) = I.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    N = X.shape[0]
    n = group.n
    h = 1.0 / steps
    eta = np.broadcast_to(np.eye(n), (N, n, n)).copy()
    traj = np.empty((steps + 1, N, n, n))
    traj[0] = eta

    def stage(t):
        return gamma(t).value_batch(X)

    for k in range(steps):
        t = k * h
        A1 = stage(t)
        A2 = stage(t + h / 2)
        A4 = stage(t + h)
        k1 = eta @ A1
        k2 = (eta + h / 2 * k1) @ A2
        k3 = (eta + h / 2 * k2) @ A2
        k4 = (eta + h * k3) @ A4
        eta = eta + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        traj[k + 1] = eta
    return traj


class LoggedFlowMap(SmoothMap):
    """Chart coordinate of the evolution result: x -> log(eta(x, 1))."""

    def __init__(self, gamma: TimeField, steps: int, group: MatrixGroup):
        self.gamma = gamma
        self.steps = steps
        self.group = group
        self.dim_in = gamma.dim
        self.output_shape = (group.n, group.n)
        self.supported_order = 2

    def value_batch(self, X):
        traj = matrix_flow(self.gamma, X, self.steps, self.group)
        return self.group.log_batch(traj[-1])

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if order == 0:
            return [self.value_batch(X)]
        per_point = [
            fd_jet_from_values(lambda z: self.value_batch(z[None])[0], x, order)
            for x in X
        ]
        return [np.stack([p[l] for p in per_point]) for l in range(order + 1)]


def evolve_mapping(
    gamma: TimeField,
    steps: int,
    group: MatrixGroup,
    family: WeightFamily,
    domain: SampleDomain | None = None,
) -> MappingElement:
    """Left evolution of an algebra-valued time field, logged into the chart."""
    xi = LoggedFlowMap(gamma, steps, group)
    return MappingElement(group, xi, family, 2, domain)


def left_log_residual(
    gamma: TimeField, X: np.ndarray, steps: int, group: MatrixGroup
) -> float:
    """Max deviation of the recovered left logarithmic derivative
    eta^{-1} d eta/dt from gamma(t)(x) at interior knots (order-4 stencil)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    traj = matrix_flow(gamma, X, steps, group)
    h = 1.0 / steps
    worst = 0.0
    for k in range(2, steps - 1):
        deta = (-traj[k + 2] + 8 * traj[k + 1] - 8 * traj[k - 1] + traj[k - 2]) / (12 * h)
        delta = np.linalg.solve(traj[k], deta)
        target = gamma(k * h).value_batch(X)
        worst = max(worst, float(np.max(np.abs(delta - target))))
    return worst


def is_member(
    xi: SmoothMap,
    family: WeightFamily,
    k: int,
    decaying: bool = False,
    domain: SampleDomain | None = None,
) -> bool:
    """Seminorm-finiteness (and optionally decay) of a chart coordinate."""
    domain = domain or default_domain(xi.dim_in)
    if decaying:
        return bool(is_decaying(xi, family, k, domain))
    for w in family:
        for l in range(k + 1):
            if not np.isfinite(seminorm(xi, w, l, domain)):
                return False
    return True
