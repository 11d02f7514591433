"""Conjugation actions, the GL(n) example with its weight estimate, the
bounded-weight discontinuity counterexample, multiplier checks, and the
semidirect product of mapping and diffeomorphism groups."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diff_group import ChartDiffeo, compose_chart, invert_chart
from .errors import DimensionMismatchError
from .jets import (
    Affine,
    Composed,
    Scaled,
    SineProfile,
    SmoothMap,
    Sum,
    opnorm_batch,
    shift_compose,
)
from .mapping_group import MappingElement, invert as mapping_invert, multiply as mapping_multiply
from .weights import SampleDomain, WeightFamily, default_domain

__all__ = [
    "LinearAction",
    "SemidirectElement",
    "gl_conjugate",
    "schwartz_action_bound_check",
    "bc_counterexample",
    "multiplier_check",
    "act_on_mapping",
    "semidirect_multiply",
    "semidirect_invert",
    "semidirect_identity",
]


@dataclass
class LinearAction:
    """An invertible matrix acting on the base space by x -> T x."""

    matrix: np.ndarray

    def __post_init__(self):
        T = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        self.matrix = T
        self.inverse = np.linalg.inv(T)
        if np.linalg.norm(T @ self.inverse - np.eye(T.shape[0]), 2) >= 1e-12:
            raise ValueError("matrix is too ill-conditioned to act reliably")
        self.norm = float(np.linalg.norm(T, 2))
        self.inv_norm = float(np.linalg.norm(self.inverse, 2))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def gl_conjugate(action: LinearAction, c: ChartDiffeo) -> ChartDiffeo:
    """Chart coordinate of T o (phi + id) o T^{-1}: the map x -> T phi(T^{-1} x)."""
    if action.dim != c.dim:
        raise DimensionMismatchError("action and diffeomorphism dimensions differ")
    phi = Composed(Affine(action.matrix), Composed(c.phi, Affine(action.inverse)))
    return ChartDiffeo.from_map(phi, c.domain, c.margin)


def schwartz_action_bound_check(
    action: LinearAction,
    degree: int,
    samples: int = 1000,
    eps: float = 0.1,
    seed: int = 0,
    violation_factor: float = 1.0,
    adversarial: bool = False,
) -> dict:
    """Sample the weight estimate behind the smooth GL action.

    For S near T (|S - T| < eps, |S^{-1}| < 2|T^{-1}|, |S| < 2|T|) and
    |A| <= 2 |T| eps, the quantity |x|^deg |S A x| must stay below
    eps 2^(deg+3) |T|^2 |T^{-1}|^(deg+1) |S x|^(deg+1).  ``violation_factor``
    scales the admissible A-ball to probe how the bound fails; with the
    ``adversarial`` flag the sample set includes the aligned worst case
    instead of relying on random draws to find it.
    """
    rng = np.random.default_rng(seed)
    d = action.dim
    T = action.matrix
    cap = 2.0 * action.norm * eps * violation_factor
    const = eps * 2.0 ** (degree + 3) * action.norm ** 2 * action.inv_norm ** (degree + 1)
    worst = 0.0
    produced = 0
    attempts = 0
    while produced < samples:
        attempts += 1
        if attempts > 50 * samples:
            raise ValueError("sampling constraints unsatisfiable (eps too large for T)")
        E = rng.standard_normal((d, d))
        # S explores the shell |S - T| in [eps/2, eps) so the check really
        # probes the eps-scale; degenerate draws are rejected below
        S = T + (eps * rng.uniform(0.5, 0.999) / np.linalg.norm(E, 2)) * E
        if np.linalg.norm(S, 2) >= 2 * action.norm:
            continue
        try:
            s_inv_norm = np.linalg.norm(np.linalg.inv(S), 2)
        except np.linalg.LinAlgError:
            continue
        if s_inv_norm >= 2 * action.inv_norm:
            continue
        A = rng.standard_normal((d, d))
        A *= cap * rng.uniform(0.0, 1.0) / np.linalg.norm(A, 2)
        x = rng.standard_normal(d)
        x *= rng.uniform(0.1, 3.0) / np.linalg.norm(x)
        lhs = np.linalg.norm(x) ** degree * np.linalg.norm(S @ A @ x)
        rhs = const * np.linalg.norm(S @ x) ** (degree + 1)
        worst = max(worst, lhs / rhs)
        produced += 1
    if adversarial:
        # S = T, A of full admissible norm mapping x straight to a unit
        # direction: makes the chain of estimates tight up to its 2^(deg+2)
        # worst-case factor for |S^{-1}|.
        x = np.zeros(d)
        x[0] = 1.0
        u = np.zeros(d)
        u[-1] = 1.0
        A = cap * np.outer(u, x)
        lhs = np.linalg.norm(x) ** degree * np.linalg.norm(T @ A @ x)
        rhs = const * np.linalg.norm(T @ x) ** (degree + 1)
        worst = max(worst, lhs / rhs)
    return {
        "max_ratio": float(worst),
        "samples": samples,
        "pass": bool(worst <= 1.0 + 1e-9),
    }


def bc_counterexample(n: int, domain: SampleDomain | None = None) -> float:
    """Sup distance between sin((1 + 1/(2n)) x) and sin(x).

    The grid is extended to reach n*pi and the exact multiples of pi are
    inserted, where the two maps disagree by one.  A scaling factor of one
    (n = 0 is rejected) would give zero.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    domain = domain or default_domain(1)
    reach = max(domain.box_halfwidth, n * np.pi + 1.0)
    density = (domain.points_per_axis - 1) / (2 * domain.box_halfwidth)
    pts = int(np.ceil(2 * reach * density)) + 1
    x = np.linspace(-reach, reach, pts)
    multiples = np.arange(1, n + 1) * np.pi
    x = np.concatenate([x, multiples, -multiples])
    diff = Sum([SineProfile(1.0, 1.0 + 1.0 / (2 * n)), Scaled(-1.0, SineProfile(1.0, 1.0))])
    vals = np.abs(diff.value_batch(x[:, None])[:, 0])
    return float(np.max(vals))


def multiplier_check(
    M: SmoothMap,
    family: WeightFamily,
    k: int,
    domain: SampleDomain | None = None,
    dominance_cap: float = 1e6,
) -> dict:
    """Heuristic multiplier test: for each weight f and order l <= k the grid
    function |f| |D^l M| must be dominated by C |g| for some family member g
    with C below the cap.

    This realizes membership in the enlarged weight system only as a
    sufficient criterion; the report is flagged accordingly.
    """
    if k > 2:
        raise DimensionMismatchError("multiplier checks run up to order 2")
    domain = domain or default_domain(M.dim_in)
    X = domain.grid
    rows = []
    ok = True
    for w in family:
        fvals = w(X)
        for l in range(k + 1):
            tensor = M.jet_batch(X, l)[l]
            G = fvals * opnorm_batch(tensor, out_ndim=len(M.output_shape))
            best = (None, np.inf)
            for g in family:
                gvals = g(X)
                mask = gvals > 0
                if np.any(G[~mask] > 1e-300):
                    continue
                C = float(np.max(G[mask] / gvals[mask])) if mask.any() else 0.0
                if C < best[1]:
                    best = (g.name, C)
            passed = best[0] is not None and best[1] <= dominance_cap
            ok = ok and passed
            rows.append(
                {
                    "weight": w.name,
                    "order": l,
                    "witness": best[0],
                    "constant": None if best[1] == np.inf else best[1],
                    "pass": bool(passed),
                }
            )
    return {"is_multiplier": ok, "heuristic": True, "rows": rows}


@dataclass
class SemidirectElement:
    """Pair of a mapping-group element and a diffeomorphism chart element."""

    map_part: MappingElement
    diff_part: ChartDiffeo

    def __post_init__(self):
        if self.map_part.xi.dim_in != self.diff_part.dim:
            raise DimensionMismatchError("semidirect components live on different spaces")


def act_on_mapping(diff: ChartDiffeo, m: MappingElement) -> MappingElement:
    """The twisting action: gamma -> gamma o (full map of diff)^{-1}."""
    from .diff_group import InverseMap
    from .errors import NotInContractionRegionError

    if not diff.in_contraction_region:
        raise NotInContractionRegionError("the acting diffeomorphism must be invertible")
    xi = shift_compose(m.xi, InverseMap(diff.phi))
    return MappingElement(m.group, xi, m.family, m.order, m.domain)


def _act_with_coordinate(coordinate: SmoothMap, m: MappingElement) -> MappingElement:
    xi = shift_compose(m.xi, coordinate)
    return MappingElement(m.group, xi, m.family, m.order, m.domain)


def semidirect_multiply(a: SemidirectElement, b: SemidirectElement) -> SemidirectElement:
    """(h1, g1) (h2, g2) = (h1 . (h2 o g1^{-1}), g1 o g2)."""
    twisted = act_on_mapping(a.diff_part, b.map_part)
    return SemidirectElement(
        mapping_multiply(a.map_part, twisted),
        compose_chart(a.diff_part, b.diff_part),
    )


def semidirect_invert(a: SemidirectElement) -> SemidirectElement:
    """(h, g)^{-1} = (h^{-1} o g, g^{-1}); the inner inverse of g^{-1} is g
    itself, so no second fixed point is solved."""
    dinv = invert_chart(a.diff_part)
    minv = mapping_invert(a.map_part)
    return SemidirectElement(_act_with_coordinate(a.diff_part.phi, minv), dinv)


def semidirect_identity(
    group, family: WeightFamily, domain: SampleDomain
) -> SemidirectElement:
    from .jets import zero_map
    from .jets import TensorProfile, constant

    n = domain.dimension
    zero_xi = TensorProfile(constant([0.0], n), np.zeros((group.n, group.n)))
    ident_map = MappingElement(group, zero_xi, family, 2, domain)
    ident_diff = ChartDiffeo.from_map(zero_map(n, n), domain)
    return SemidirectElement(ident_map, ident_diff)
