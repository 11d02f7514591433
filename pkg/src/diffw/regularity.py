"""The right-regularity evolution ODE in chart coordinates.

The chart equation Gamma'(t) = p(t) o (Gamma(t) + id), Gamma(0) = 0 is
integrated as a family of point flows y' = p(t)(y), y(0) = x0, with
Gamma(t)(x0) = y(t) - x0.  This identification is legitimate because the
right-hand side acts pointwise through composition with the full map; it is
not assumed but verified by the defect check on the knots.  The integrator
is classical fixed-step RK4 so reports are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, SuiteConfigError
from .jets import Affine, Scaled, SmoothMap, map_from_config, shift_compose
from .weights import ONE, SampleDomain, default_domain, seminorm
from .diff_group import ChartDiffeo

__all__ = [
    "TimeField",
    "constant_field",
    "modulated_field",
    "linear_field",
    "field_from_config",
    "rhs",
    "lipschitz_bound",
    "EvolutionCurve",
    "FlowChartMap",
    "evolve",
    "aux_derivative_check",
    "restrict_field",
    "time_reversed_field",
    "ODE_TOL",
]

ODE_TOL = 1e-6


class TimeField:
    """A smooth-in-time family t in [0,1] -> SmoothMap on R^n."""

    def __init__(self, evaluator, dim: int, label: str = "field"):
        self._evaluator = evaluator
        self.dim = dim
        self.label = label

    def __call__(self, t: float) -> SmoothMap:
        return self._evaluator(float(t))


def constant_field(v: SmoothMap) -> TimeField:
    return TimeField(lambda t: v, v.dim_in, "constant")


def modulated_field(coeffs, v: SmoothMap) -> TimeField:
    """a(t) * v for a polynomial a(t) = c0 + c1 t + ..."""
    poly = np.polynomial.polynomial.Polynomial(np.asarray(coeffs, dtype=float))
    return TimeField(lambda t: Scaled(poly(t), v), v.dim_in, "modulated")


def linear_field(matrix_or_fn, dim: int | None = None) -> TimeField:
    if callable(matrix_or_fn):
        fn = matrix_or_fn
        n = dim if dim is not None else np.asarray(fn(0.0)).shape[0]
        return TimeField(lambda t: Affine(np.asarray(fn(t), dtype=float)), n, "linear")
    A = np.asarray(matrix_or_fn, dtype=float)
    return TimeField(lambda t: Affine(A), A.shape[0], "linear")


def field_from_config(cfg: dict) -> TimeField:
    kind = cfg.get("kind")
    if kind == "constant":
        return constant_field(map_from_config(cfg["map"]))
    if kind == "modulated":
        return modulated_field(cfg["coeffs"], map_from_config(cfg["map"]))
    if kind == "linear":
        return linear_field(cfg["matrix"])
    raise SuiteConfigError(f"unknown time-field kind {kind!r}")


def rhs(t: float, gamma: SmoothMap, p: TimeField) -> SmoothMap:
    """Right-hand side p(t) o (gamma + id) of the chart evolution equation."""
    return shift_compose(p(t), gamma)


def lipschitz_bound(p: TimeField, time_samples=None, domain: SampleDomain | None = None) -> float:
    """sup_t |p(t)|_{1,1}: the global Lipschitz constant of the right-hand
    side in its second argument."""
    domain = domain or default_domain(p.dim)
    ts = np.linspace(0.0, 1.0, 21) if time_samples is None else np.asarray(time_samples)
    return max(seminorm(p(t), ONE, 1, domain) for t in ts)


def _flow_batch(p: TimeField, X: np.ndarray, t_end: float, steps: int,
                with_variation: bool = False):
    """RK4 point flows of y' = p(t)(y) from 0 to t_end, optionally with the
    matrix variation V' = Dp(t)(y) V, V(0) = I, and the full knot history."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    N, n = X.shape
    h = t_end / steps if steps else 0.0
    y = X.copy()
    V = np.broadcast_to(np.eye(n), (N, n, n)).copy() if with_variation else None
    traj = np.empty((steps + 1, N, n))
    traj[0] = y
    vtraj = None
    if with_variation:
        vtraj = np.empty((steps + 1, N, n, n))
        vtraj[0] = V

    def f(t, yy, vv):
        field = p(t)
        if vv is None:
            return field.value_batch(yy), None
        jets = field.jet_batch(yy, 1)
        return jets[0], np.einsum("nij,njk->nik", jets[1], vv)

    for k in range(steps):
        t = k * h
        k1, K1 = f(t, y, V)
        k2, K2 = f(t + h / 2, y + h / 2 * k1, None if V is None else V + h / 2 * K1)
        k3, K3 = f(t + h / 2, y + h / 2 * k2, None if V is None else V + h / 2 * K2)
        k4, K4 = f(t + h, y + h * k3, None if V is None else V + h * K3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        traj[k + 1] = y
        if V is not None:
            V = V + h / 6 * (K1 + 2 * K2 + 2 * K3 + K4)
            vtraj[k + 1] = V
    return traj, vtraj


class FlowChartMap(SmoothMap):
    """Gamma(t) as a map: x -> (flow of p up to t)(x) - x.

    First-order jets integrate the variational equation alongside the flow;
    higher orders are not provided.
    """

    def __init__(self, p: TimeField, t_end: float, steps: int):
        self.p = p
        self.t_end = float(t_end)
        self.steps = int(steps)
        self.dim_in = p.dim
        self.output_shape = (p.dim,)
        self.supported_order = 1

    def value_batch(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        traj, _ = _flow_batch(self.p, X, self.t_end, self.steps)
        return traj[-1] - X

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if order == 0:
            return [self.value_batch(X)]
        traj, vtraj = _flow_batch(self.p, X, self.t_end, self.steps, with_variation=True)
        eye = np.eye(self.dim_in)
        return [traj[-1] - X, vtraj[-1] - eye]


@dataclass
class EvolutionCurve:
    """Solution knots of the chart evolution equation on the sample grid."""

    p: TimeField
    steps: int
    domain: SampleDomain
    knots: np.ndarray        # (M+1,) times
    trajectory: np.ndarray   # (M+1, N, n) point flows of the grid
    defect: float

    def chart_at(self, t: float) -> ChartDiffeo:
        k = self._knot_index(t)
        return ChartDiffeo.from_map(
            FlowChartMap(self.p, self.knots[k], max(1, k)), self.domain
        )

    def value_at_knot(self, k: int) -> np.ndarray:
        """Gamma(t_k) on the grid."""
        return self.trajectory[k] - self.domain.grid

    def _knot_index(self, t: float) -> int:
        k = int(round(t * self.steps))
        if not np.isclose(self.knots[k], t, atol=1e-12):
            raise ValueError(f"{t} is not a knot time")
        return k


def _knot_defect(p: TimeField, knots: np.ndarray, traj: np.ndarray) -> float:
    """Max norm of Gamma'(t_k) - p(t_k)(flow(t_k)) using an order-4 stencil,
    so the defect measures integrator error rather than differencing error."""
    M = len(knots) - 1
    h = knots[1] - knots[0] if M else 1.0
    worst = 0.0
    for k in range(2, M - 1):
        dgamma = (-traj[k + 2] + 8 * traj[k + 1] - 8 * traj[k - 1] + traj[k - 2]) / (12 * h)
        target = p(knots[k]).value_batch(traj[k])
        worst = max(worst, float(np.max(np.linalg.norm(dgamma - target, axis=1))))
    return worst


def evolve(
    p: TimeField,
    steps: int,
    domain: SampleDomain | None = None,
    ode_tol: float = ODE_TOL,
) -> EvolutionCurve:
    """Integrate the chart evolution equation over [0, 1].

    ``steps`` must cover the Lipschitz bound (at least ceil(10 K)); the knot
    defect is checked against ``ode_tol`` and a too-coarse step count raises.
    """
    domain = domain or default_domain(p.dim)
    K = lipschitz_bound(p, domain=domain)
    if not np.isfinite(K):
        raise ConvergenceError("Lipschitz bound of the field is not finite")
    if steps < int(np.ceil(10 * K)):
        raise ConvergenceError(
            f"step count {steps} is below the bound ceil(10*K) = {int(np.ceil(10 * K))}"
        )
    knots = np.linspace(0.0, 1.0, steps + 1)
    traj, _ = _flow_batch(p, domain.grid, 1.0, steps)
    defect = _knot_defect(p, knots, traj)
    if defect > ode_tol:
        raise ConvergenceError(
            f"knot defect {defect:.3e} exceeds {ode_tol:.1e}; refine the step count"
        )
    return EvolutionCurve(p, steps, domain, knots, traj, defect)


def restrict_field(p: TimeField, s: float, label: str = "restricted") -> TimeField:
    """The field generating the flow from time s to 1, reparametrized to
    [0, 1]: q(tau) = (1 - s) p(s + tau (1 - s))."""
    return TimeField(lambda tau: Scaled(1.0 - s, p(s + tau * (1.0 - s))), p.dim, label)


def time_reversed_field(p: TimeField) -> TimeField:
    """q(t) = -p(1 - t); its evolution is the inverse of the one of p."""
    return TimeField(lambda t: Scaled(-1.0, p(1.0 - t)), p.dim, "reversed")


def aux_derivative_check(
    p: TimeField,
    curve: EvolutionCurve,
    sample_points: np.ndarray,
    check_knots=None,
    fd_step: float = 1e-5,
) -> dict:
    """Integrate the auxiliary linear matrix ODE
    Phi'(t) = (Dp(t) o (Gamma(t) + id)) . (Phi(t) + Id), Phi(0) = 0
    along the sampled point flows and compare with finite differences of
    Gamma in x at selected knots."""
    X = np.atleast_2d(np.asarray(sample_points, dtype=float))
    N, n = X.shape
    M = curve.steps
    ks = check_knots or [M // 4, M // 2, (3 * M) // 4, M]
    ks = sorted(set(max(1, min(M, k)) for k in ks))
    # variational run: Phi + I equals the variation matrix V
    traj, vtraj = _flow_batch(p, X, 1.0, M, with_variation=True)
    # finite differences of the flow in its initial condition
    offsets = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = fd_step
        offsets.extend([X + e, X - e])
    otraj, _ = _flow_batch(p, np.concatenate(offsets, axis=0), 1.0, M)
    worst = 0.0
    rows = []
    eye = np.eye(n)
    for k in ks:
        cols = []
        for j in range(n):
            plus = otraj[k, 2 * j * N: (2 * j + 1) * N]
            minus = otraj[k, (2 * j + 1) * N: (2 * j + 2) * N]
            cols.append((plus - minus) / (2 * fd_step))
        dgamma_fd = np.stack(cols, axis=-1) - eye
        phi_aux = vtraj[k] - eye
        dev = float(np.max(np.abs(phi_aux - dgamma_fd)))
        rows.append({"knot": int(k), "t": float(curve.knots[k]), "deviation": dev})
        worst = max(worst, dev)
    return {"max_deviation": worst, "rows": rows}
