"""The weighted endomorphism monoid and diffeomorphism group in the global
chart phi = (full map) - id.

Composition in coordinates is ``gamma o (eta + id) + eta``; inversion solves
the fixed point ``psi = -phi o (psi + id)`` per query point.  All derivative
formulas of the group operations are assembled symbolically from the jets
module so they can be cross-checked against finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DimensionMismatchError, NotInContractionRegionError
from .jets import (
    DerivativeMap,
    Scaled,
    SmoothMap,
    Sum,
    compose,
    full_map,
    matvec,
    opnorm_batch,
    shift_compose,
    zero_map,
)
from .quasi_inverse import quasi_invert
from .weights import ONE, SampleDomain, Weight, WeightFamily, default_domain, is_decaying, seminorm

__all__ = [
    "ChartDiffeo",
    "TangentElement",
    "InverseMap",
    "compose_chart",
    "invert_chart",
    "conjugate",
    "d_inverse_at",
    "d_compose",
    "d_invert",
    "tangent_multiply",
    "verify_group_axioms",
    "is_decaying_diffeo",
    "composition_lipschitz_check",
    "weighted_inversion_check",
    "FP_TOL",
    "MAX_FP_ITER",
    "UW_MARGIN",
]

FP_TOL = 1e-12
MAX_FP_ITER = 200
UW_MARGIN = 0.02


def _sym3(T: np.ndarray) -> np.ndarray:
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    base = T.ndim - 3
    lead = tuple(range(base))
    return sum(np.transpose(T, lead + tuple(base + i for i in p)) for p in perms) / 6.0


class InverseMap(SmoothMap):
    """Chart coordinate of the inverse map, solved lazily per query point.

    Values come from the contraction psi_{k+1}(y) = -phi(psi_k(y) + y); jets
    from the inverse-function theorem at the preimage x = y + psi(y), which
    keeps derivative noise at fixed-point accuracy.  Solved batches are
    cached; concurrent queries at distinct points do not interfere.
    """

    def __init__(self, phi: SmoothMap, fp_tol: float = FP_TOL, max_iter: int = MAX_FP_ITER):
        self.phi = phi
        self.fp_tol = fp_tol
        self.max_iter = max_iter
        self.dim_in = phi.dim_in
        self.output_shape = (phi.dim_in,)
        self.supported_order = min(3, phi.supported_order)
        self._solved: dict = {}

    def value_batch(self, Y):
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        key = Y.tobytes()
        hit = self._solved.get(key)
        if hit is not None:
            return hit
        z = np.zeros_like(Y)
        for _ in range(self.max_iter):
            z_new = -self.phi.value_batch(z + Y)
            step = float(np.max(np.linalg.norm(z_new - z, axis=1)))
            z = z_new
            if step < self.fp_tol:
                self._solved[key] = z
                return z
        raise ConvergenceError(
            f"inversion fixed point did not reach {self.fp_tol} in "
            f"{self.max_iter} iterations (margin too small)"
        )

    def jet_batch(self, Y, order):
        self._check_order(order)
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        psi = self.value_batch(Y)
        out = [psi]
        if order == 0:
            return out
        xstar = Y + psi
        jets = self.phi.jet_batch(xstar, min(order, self.phi.supported_order))
        n = self.dim_in
        eye = np.eye(n)
        B = np.linalg.inv(eye + jets[1])
        out.append(B - eye)
        if order >= 2:
            H = jets[2]
            G2 = -np.einsum("nab,nbcd,nci,ndj->naij", B, H, B, B)
            out.append(G2)
        if order >= 3:
            T3 = jets[3]
            q = np.einsum("nbcd,nci,ndj->nbij", H, B, B)
            t1 = -np.einsum("nakb,nbij->naijk", G2, q)
            t2 = -np.einsum("nab,nbcde,nck,ndi,nej->naijk", B, T3, B, B, B)
            t3 = -np.einsum("nab,nbcd,ncki,ndj->naijk", B, H, G2, B)
            t4 = -np.einsum("nab,nbcd,nci,ndkj->naijk", B, H, B, G2)
            out.append(_sym3(t1 + t2 + t3 + t4))
        return out


@dataclass
class ChartDiffeo:
    """An element of the weighted endomorphism monoid, stored as its chart
    coordinate.  ``norm10`` and ``norm11`` cache the 1-weighted seminorms of
    orders 0 and 1 on the attached sample domain."""

    phi: SmoothMap
    domain: SampleDomain
    norm10: float
    norm11: float
    margin: float = UW_MARGIN

    @classmethod
    def from_map(
        cls,
        phi: SmoothMap,
        domain: SampleDomain | None = None,
        margin: float = UW_MARGIN,
    ) -> "ChartDiffeo":
        domain = domain or default_domain(phi.dim_in)
        n10 = seminorm(phi, ONE, 0, domain)
        n11 = seminorm(phi, ONE, 1, domain)
        return cls(phi, domain, n10, n11, margin)

    @property
    def dim(self) -> int:
        return self.phi.dim_in

    @property
    def in_contraction_region(self) -> bool:
        """Inside the open set |phi|_{1,1} < 1 - margin where the full map is
        certified to be a diffeomorphism."""
        return self.norm11 < 1.0 - self.margin

    def full_value_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return X + self.phi.value_batch(X)

    def spot_check_injective(self, pairs: int = 200, seed: int = 7) -> bool:
        """Random-pair expansion bound |F(x)-F(y)| >= (1-q)|x-y|."""
        if not self.in_contraction_region:
            return False
        rng = np.random.default_rng(seed)
        R = self.domain.box_halfwidth
        X = rng.uniform(-R, R, size=(pairs, self.dim))
        Y = rng.uniform(-R, R, size=(pairs, self.dim))
        lhs = np.linalg.norm(self.full_value_batch(X) - self.full_value_batch(Y), axis=1)
        rhs = (1.0 - self.norm11) * np.linalg.norm(X - Y, axis=1)
        return bool(np.all(lhs >= rhs - 1e-12))


@dataclass
class TangentElement:
    base: ChartDiffeo
    vector: SmoothMap

    def __post_init__(self):
        if self.vector.dim_in != self.base.dim or self.vector.output_shape != (self.base.dim,):
            raise DimensionMismatchError("tangent vector dimensions disagree")


def _coordinate(x) -> SmoothMap:
    return x.phi if isinstance(x, ChartDiffeo) else x


def compose_chart(gamma: ChartDiffeo, eta: ChartDiffeo) -> ChartDiffeo:
    """Chart coordinate of the composed full maps: gamma o (eta + id) + eta."""
    g, e = _coordinate(gamma), _coordinate(eta)
    if g.dim_in != e.dim_in:
        raise DimensionMismatchError("composition needs equal dimensions")
    domain = gamma.domain if isinstance(gamma, ChartDiffeo) else default_domain(g.dim_in)
    return ChartDiffeo.from_map(Sum([shift_compose(g, e), e]), domain)


def invert_chart(c: ChartDiffeo) -> ChartDiffeo:
    if not c.in_contraction_region:
        raise NotInContractionRegionError(
            f"|phi|_(1,1) = {c.norm11:.4f} is not below 1 - {c.margin}"
        )
    return ChartDiffeo.from_map(
        InverseMap(c.phi), c.domain, c.margin
    )


def conjugate(psi: ChartDiffeo, phi: ChartDiffeo) -> ChartDiffeo:
    """Chart coordinate of (psi+id) o (phi+id) o (psi+id)^{-1}."""
    return compose_chart(compose_chart(psi, phi), invert_chart(psi))


def d_inverse_at(c: ChartDiffeo, x) -> np.ndarray:
    """Derivative of the inverse chart coordinate at the image point of x,
    via D phi(x) . QI(-D phi(x)) - D phi(x)."""
    phi = _coordinate(c)
    M = phi.jet(np.asarray(x, dtype=float), 1)[1]
    if np.linalg.norm(M, 2) >= 1.0:
        raise NotInContractionRegionError("local derivative norm is not below 1")
    return M @ quasi_invert(-M) - M


def d_compose(gamma, eta, gamma1: SmoothMap, eta1: SmoothMap) -> SmoothMap:
    """Directional derivative of (gamma, eta) -> gamma o (eta + id):
    (D gamma o (eta+id)) . eta1 + gamma1 o (eta+id)."""
    g, e = _coordinate(gamma), _coordinate(eta)
    lifted = compose(DerivativeMap(g), full_map(e))
    return Sum([matvec(lifted, eta1), compose(gamma1, full_map(e))])


def d_invert(c: ChartDiffeo, phi1: SmoothMap) -> SmoothMap:
    """Directional derivative of inversion:
    -g(phi1 + g(D(I(phi)), phi) . phi1, I(phi))."""
    phi = _coordinate(c)
    psi = InverseMap(phi)
    dpsi_at_full = compose(DerivativeMap(psi), full_map(phi))
    inner = Sum([phi1, matvec(dpsi_at_full, phi1)])
    return Scaled(-1.0, compose(inner, full_map(psi)))


def tangent_multiply(a: TangentElement, b: TangentElement) -> TangentElement:
    """Tangent-group multiplication in chart coordinates."""
    base = compose_chart(a.base, b.base)
    vec = Sum([d_compose(a.base, b.base, a.vector, b.vector), b.vector])
    return TangentElement(base, vec)


def _map_residual(m1: SmoothMap, m2: SmoothMap, domain: SampleDomain):
    X = domain.grid
    diff = np.linalg.norm(m1.value_batch(X) - m2.value_batch(X), axis=1)
    i = int(np.argmax(diff))
    return float(diff[i]), X[i]


def verify_group_axioms(samples, domain: SampleDomain | None = None, tol: float = 1e-8):
    """Numerical residuals of the group laws on a list of chart elements.

    Failures are reported, not raised.  Emits one record per axiom with the
    worst residual and the grid point where it occurred.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    domain = domain or samples[0].domain
    n = samples[0].dim
    zero = ChartDiffeo.from_map(zero_map(n, n), domain)
    records = []

    def add(axiom, residual, point):
        records.append(
            {
                "axiom": axiom,
                "residual": float(residual),
                "worst_point": [float(v) for v in np.atleast_1d(point)],
                "tolerance": tol,
                "pass": bool(residual <= tol),
            }
        )

    worst = (0.0, np.zeros(n))
    for s in samples:
        r, p = _map_residual(compose_chart(zero, s).phi, s.phi, domain)
        if r >= worst[0]:
            worst = (r, p)
    add("identity_left", *worst)

    worst = (0.0, np.zeros(n))
    for s in samples:
        r, p = _map_residual(compose_chart(s, zero).phi, s.phi, domain)
        if r >= worst[0]:
            worst = (r, p)
    add("identity_right", *worst)

    worst = (0.0, np.zeros(n))
    for i in range(len(samples)):
        a = samples[i]
        b = samples[(i + 1) % len(samples)]
        c = samples[(i + 2) % len(samples)]
        left = compose_chart(compose_chart(a, b), c).phi
        right = compose_chart(a, compose_chart(b, c)).phi
        r, p = _map_residual(left, right, domain)
        if r >= worst[0]:
            worst = (r, p)
    add("associativity", *worst)

    worst_l = (0.0, np.zeros(n))
    worst_r = (0.0, np.zeros(n))
    for s in samples:
        if not s.in_contraction_region:
            continue
        inv = invert_chart(s)
        r, p = _map_residual(compose_chart(s, inv).phi, zero.phi, domain)
        if r >= worst_l[0]:
            worst_l = (r, p)
        r, p = _map_residual(compose_chart(inv, s).phi, zero.phi, domain)
        if r >= worst_r[0]:
            worst_r = (r, p)
    add("inverse_left", *worst_l)
    add("inverse_right", *worst_r)
    return records


def is_decaying_diffeo(
    c: ChartDiffeo,
    family: WeightFamily,
    domain: SampleDomain | None = None,
    decay_tol: float = 1e-6,
) -> bool:
    """Membership in the decaying subgroup: the chart coordinate and the one
    of the inverse must both pass the order-2 decay test."""
    domain = domain or c.domain
    if not c.in_contraction_region:
        raise NotInContractionRegionError("decay test needs an invertible element")
    if not is_decaying(c.phi, family, 2, domain, decay_tol):
        return False
    inv = invert_chart(c)
    return bool(is_decaying(inv.phi, family, 2, domain, decay_tol))


def composition_lipschitz_check(
    gamma: SmoothMap,
    eta: SmoothMap,
    gamma0: SmoothMap,
    eta0: SmoothMap,
    weight: Weight,
    domain: SampleDomain,
    refine: int = 4,
) -> dict:
    """Check |g(gamma,eta) - g(gamma0,eta0)|_{f,0} against its three-term
    bound.  The two 1-weighted first-order norms on the right-hand side are
    taken on a refined grid because a grid max underestimates the sup that
    the mean-value argument actually needs."""
    lhs_map = Sum([shift_compose(gamma, eta), Scaled(-1.0, shift_compose(gamma0, eta0))])
    lhs = seminorm(lhs_map, weight, 0, domain)
    fine = domain.refined(refine)
    diff_g = Sum([gamma, Scaled(-1.0, gamma0)])
    diff_e = Sum([eta, Scaled(-1.0, eta0)])
    rhs = (
        seminorm(gamma, ONE, 1, fine) * seminorm(diff_e, weight, 0, domain)
        + seminorm(diff_g, ONE, 1, fine) * seminorm(eta0, weight, 0, domain)
        + seminorm(diff_g, weight, 0, domain)
    )
    return {
        "lhs": lhs,
        "rhs": rhs,
        "violation": max(0.0, lhs - rhs),
        "pass": bool(lhs <= rhs + 1e-9),
    }


def weighted_inversion_check(
    c: ChartDiffeo,
    weight: Weight,
    r: float,
    domain: SampleDomain | None = None,
    tail_cushion: float = 1e-4,
) -> dict:
    """Pointwise check of |f| |I(phi)| <= |f| |phi| / (1 - t) outside the
    radius R = r + |I(phi)|_{1,0}, with t the tail sup of |D phi| beyond r.

    ``t`` is estimated on a refined grid and padded by ``tail_cushion`` since
    the true bound quantifies over off-grid segment points.
    """
    domain = domain or c.domain
    inv = invert_chart(c)
    fine = domain.refined(2)
    Xf = fine.grid
    tail_mask = np.linalg.norm(Xf, axis=1) >= r
    dnorms = opnorm_batch(c.phi.jet_batch(Xf[tail_mask], 1)[1])
    t = float(np.max(dnorms)) + tail_cushion
    if t >= 1.0:
        raise NotInContractionRegionError("tail derivative norm reaches 1")
    R = r + inv.norm10
    X = domain.grid
    mask = np.linalg.norm(X, axis=1) > R
    if not mask.any():
        raise ValueError("no grid points beyond the exclusion radius")
    pts = X[mask]
    f = weight(pts)
    lhs = f * np.linalg.norm(inv.phi.value_batch(pts), axis=1)
    rhs = f * np.linalg.norm(c.phi.value_batch(pts), axis=1) / (1.0 - t)
    violation = float(np.max(lhs - rhs))
    return {
        "tail_norm": t,
        "radius": R,
        "points": int(mask.sum()),
        "violation": max(0.0, violation),
        "pass": bool(violation <= 1e-9),
    }
