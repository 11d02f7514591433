"""Named verification suites.

Each suite builds a deterministic catalog from the configured seed, runs its
checks, and returns records ``{name, property, residual, tolerance, pass}``
(some carry extra fields such as the raw value).  Records are sorted by name
before emission so the report bytes depend only on the configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import actions, diff_group, jets, mapping_group, oracles, quasi_inverse, regularity
from .errors import SuiteConfigError
from .jets import (
    Affine,
    GaussianBump,
    Scaled,
    SineProfile,
    Sum,
    TensorProfile,
    constant,
    identity,
    zero_map,
)
from .mapping_group import MatrixGroup
from .samples import (
    random_chart,
    random_matrix_with_norm,
    random_so3_element,
    so3_direction,
)
from .weights import ONE, SampleDomain, Weight, WeightFamily, bcr_check, is_decaying, seminorm

SUITE_NAMES = (
    "seminorms",
    "group-axioms",
    "inversion",
    "regularity",
    "mapping",
    "actions",
    "counterexample",
    "all",
)


@dataclass
class SuiteConfig:
    suite: str = "all"
    dim: int = 1
    seed: int = 42
    tol: float | None = None
    box_halfwidth: float = 8.0
    points_per_axis: int = 0
    report: str | None = None
    csv: bool = False
    figures: str | None = None

    def __post_init__(self):
        if self.suite not in SUITE_NAMES:
            raise SuiteConfigError(
                f"unknown suite {self.suite!r}; choose one of {', '.join(SUITE_NAMES)}"
            )
        if not 1 <= int(self.dim) <= 3:
            raise SuiteConfigError("dim must be 1, 2 or 3")
        self.dim = int(self.dim)
        self.seed = int(self.seed)

    def domain(self, dim: int | None = None) -> SampleDomain:
        return SampleDomain(dim or self.dim, self.box_halfwidth, self.points_per_axis)


def _check(name, prop, residual, tolerance, **extra):
    rec = {
        "name": name,
        "property": prop,
        "residual": float(residual),
        "tolerance": float(tolerance),
        "pass": bool(residual <= tolerance),
    }
    rec.update(extra)
    return rec


def _flag(name, prop, ok, **extra):
    return _check(name, prop, 0.0 if ok else 1.0, 0.5, **extra)


def _sup_diff(m1, m2, X):
    return float(np.max(np.linalg.norm(m1.value_batch(X) - m2.value_batch(X), axis=1)))


# ---------------------------------------------------------------------------
# seminorms
# ---------------------------------------------------------------------------

def suite_seminorms(cfg: SuiteConfig):
    rng = np.random.default_rng(cfg.seed)
    dom = cfg.domain()
    n = cfg.dim
    checks = []

    checks.append(
        _check(
            "seminorm-zero-map",
            "seminorm of the zero map vanishes at every order",
            max(seminorm(zero_map(n, n), ONE, l, dom) for l in range(3)),
            0.0,
        )
    )
    checks.append(
        _check(
            "seminorm-identity-order1",
            "first-order 1-weighted seminorm of the identity is one",
            abs(seminorm(identity(n), ONE, 1, dom) - 1.0),
            1e-12,
        )
    )
    dense = SampleDomain(1, 8.0, 20001)
    val = seminorm(GaussianBump([0.0], 1.0 / np.sqrt(2.0), [1.0]), ONE, 1, dense)
    checks.append(
        _check(
            "seminorm-gaussian-dense-sup",
            "first-order sup of exp(-x^2) equals sqrt(2/e) on a dense grid",
            abs(val - np.sqrt(2.0 / np.e)),
            1e-4,
            value=val,
        )
    )

    worst = 0.0
    for _ in range(5):
        gamma = random_chart(rng, n, 0.5, dom).phi
        for d in (1, 2):
            s_small = seminorm(gamma, Weight("norm_power", d), 0, dom)
            s_big = seminorm(gamma, Weight("poly_shifted", d), 0, dom)
            worst = max(worst, s_small - s_big)
    checks.append(
        _check(
            "seminorm-weight-monotone",
            "pointwise-dominated weights give dominated seminorms",
            max(0.0, worst),
            1e-12,
        )
    )

    worst_tri = 0.0
    worst_hom = 0.0
    for _ in range(5):
        g1 = random_chart(rng, n, 0.4, dom).phi
        g2 = random_chart(rng, n, 0.6, dom).phi
        c = float(rng.uniform(-3.0, 3.0))
        for l in (0, 1):
            s_sum = seminorm(Sum([g1, g2]), ONE, l, dom)
            worst_tri = max(worst_tri, s_sum - seminorm(g1, ONE, l, dom) - seminorm(g2, ONE, l, dom))
            worst_hom = max(
                worst_hom,
                abs(seminorm(Scaled(c, g1), ONE, l, dom) - abs(c) * seminorm(g1, ONE, l, dom)),
            )
    checks.append(
        _check("seminorm-triangle", "subadditivity on random pairs", max(0.0, worst_tri), 1e-12)
    )
    checks.append(
        _check("seminorm-homogeneity", "absolute homogeneity on random pairs", worst_hom, 1e-10)
    )

    gam = random_chart(rng, n, 0.7, dom).phi
    coarse = seminorm(gam, Weight("poly_shifted", 1), 1, dom)
    fine = seminorm(gam, Weight("poly_shifted", 1), 1, dom.refined(2))
    checks.append(
        _check(
            "seminorm-grid-refinement",
            "doubling the grid density never lowers the sup estimate",
            max(0.0, coarse - fine),
            0.0,
        )
    )

    fam = WeightFamily([ONE, Weight("norm_power", 2), Weight("norm_power", 4)])
    checks.append(
        _flag(
            "decay-gaussian",
            "a Gaussian bump decays against polynomial weights",
            bool(is_decaying(GaussianBump([0.0] * n, 1.0, [1.0] + [0.0] * (n - 1)), fam, 2, dom)),
        )
    )
    checks.append(
        _flag(
            "decay-constant-rejected",
            "a nonzero constant is not decaying",
            not bool(is_decaying(constant([0.5] + [0.0] * (n - 1), n), WeightFamily([ONE]), 0, dom)),
        )
    )
    dom1 = cfg.domain(1)
    checks.append(
        _flag(
            "decay-sine-rejected",
            "a bounded oscillation is not decaying",
            not bool(is_decaying(SineProfile(1.0, 1.0), WeightFamily([ONE]), 0, dom1)),
        )
    )

    # sigma <= 0.8 and centers near the origin keep the tails far below the
    # relative decay threshold at the outermost radius
    sum_decay = Sum(
        [
            GaussianBump([0.0] * n, 0.8, [0.5] + [0.0] * (n - 1)),
            GaussianBump([0.3] * n, 0.7, [0.0] * (n - 1) + [0.4]),
        ]
    )
    checks.append(
        _flag(
            "decay-vector-space",
            "sums of decaying maps remain decaying",
            bool(is_decaying(sum_decay, fam, 2, dom)),
        )
    )

    f = Weight("poly_shifted", 1)
    g = Weight("poly_shifted", 2)
    fg = Weight("custom", evaluator=lambda X: f(X) * g(X), label="(1+|x|)^1*(1+|x|)^2")
    g1 = random_chart(rng, n, 0.5, dom).phi
    g2 = random_chart(rng, n, 0.5, dom).phi
    prod = jets.multilinear_superpose(np.eye(n)[None], g1, g2)
    lhs = seminorm(prod, fg, 0, dom)
    rhs = seminorm(g1, f, 0, dom) * seminorm(g2, g, 0, dom)  # |<.,.>| = 1
    checks.append(
        _check(
            "superpose-weighted-product",
            "bilinear superposition obeys the product-of-seminorms bound",
            max(0.0, lhs - rhs),
            1e-9,
        )
    )

    gamma = random_chart(rng, n, 0.6, dom).phi
    worst = 0.0
    for l in (0, 1):
        direct = seminorm(gamma, f, l + 1, dom)
        reduced = seminorm(jets.DerivativeMap(gamma), f, l, dom)
        worst = max(worst, abs(direct - reduced))
    checks.append(
        _check(
            "seminorm-reduction-to-lower-order",
            "order l+1 of a map equals order l of its derivative map",
            worst,
            1e-9,
        )
    )

    rep = bcr_check(WeightFamily([ONE]), dom)
    checks.append(
        _flag(
            "bcr-singleton-family",
            "the family {1} fails the tail-domination condition",
            rep.w1 and rep.w2 and not rep.w3,
        )
    )
    fam_poly = WeightFamily.polynomial(3)
    rep = bcr_check(fam_poly, dom)
    wit_ok = all(
        rep.witnesses.get(w.name) == f"(1+|x|)^{d + 1}"
        for d, w in [(0, ONE)] + [(d, Weight("poly_shifted", d)) for d in (1, 2)]
    )
    checks.append(
        _flag(
            "bcr-polynomial-witnesses",
            "each non-top polynomial weight is dominated by the next degree",
            rep.w1 and rep.w2 and wit_ok and rep.witnesses["(1+|x|)^3"] is None,
        )
    )
    rep = bcr_check(WeightFamily([Weight("poly_shifted", 3)], contains_one=False), dom)
    checks.append(
        _flag(
            "bcr-top-degree-alone",
            "a single top-degree weight fails tail domination",
            not rep.w3,
        )
    )
    return checks


# ---------------------------------------------------------------------------
# group axioms
# ---------------------------------------------------------------------------

def suite_group_axioms(cfg: SuiteConfig):
    rng = np.random.default_rng(cfg.seed)
    dom = cfg.domain()
    tol = cfg.tol if cfg.tol is not None else 1e-8
    samples = [random_chart(rng, cfg.dim, t, dom) for t in rng.uniform(0.2, 0.8, size=6)]
    recs = diff_group.verify_group_axioms(samples, dom, tol)
    return [
        _check(
            f"group-axiom-{r['axiom'].replace('_', '-')}",
            "group law residual on the sample grid",
            r["residual"],
            r["tolerance"],
            worst_point=r["worst_point"],
        )
        for r in recs
    ]


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------

def suite_inversion(cfg: SuiteConfig):
    rng = np.random.default_rng(cfg.seed)
    dom = cfg.domain()
    n = cfg.dim
    checks = []

    worst = 0.0
    for i in range(200):
        size = 1 + i % 8
        A = random_matrix_with_norm(rng, size, rng.uniform(0.05, 0.9))
        worst = max(worst, float(np.max(np.abs(quasi_inverse.quasi_invert(A) - oracles.quasi_inverse_bridge(A)))))
    checks.append(
        _check(
            "qi-unital-bridge-oracle",
            "Neumann quasi-inverse matches the unital-algebra inverse",
            worst,
            1e-10,
        )
    )

    worst = 0.0
    for _ in range(40):
        A = random_matrix_with_norm(rng, 4, rng.uniform(0.05, 0.45))
        worst = max(worst, float(np.max(np.abs(quasi_inverse.quasi_invert(quasi_inverse.quasi_invert(A)) - A))))
    checks.append(
        _check("qi-involution", "double quasi-inversion is the identity", worst, 2e-10)
    )

    K = so3_direction(rng) * 0.5
    mat_map = TensorProfile(GaussianBump([0.0] * n, 1.0, [1.0]), K)
    qi_map = quasi_inverse.quasi_invert(mat_map, dom)
    pts = dom.grid[:: max(1, len(dom.grid) // 50)]
    vals = qi_map.value_batch(pts)
    worst = max(
        float(np.max(np.abs(vals[i] - quasi_inverse.quasi_invert(mat_map.value(x)))))
        for i, x in enumerate(pts)
    )
    checks.append(
        _check(
            "qi-pointwise-consistency",
            "the map-level quasi-inverse agrees with pointwise matrix quasi-inverses",
            worst,
            1e-12,
        )
    )

    A = random_matrix_with_norm(rng, 5, 0.85)
    y1 = quasi_inverse.quasi_invert(A)
    y2 = quasi_inverse.quasi_invert(A, series_tol=1e-16)
    checks.append(
        _check(
            "qi-series-tail",
            "running the series past its stopping index moves nothing",
            float(np.max(np.abs(y1 - y2))),
            1e-12,
        )
    )

    A = random_matrix_with_norm(rng, n, 0.6)
    lin = diff_group.ChartDiffeo.from_map(Affine(A), dom)
    inv = diff_group.invert_chart(lin)
    target = np.linalg.inv(np.eye(n) + A) - np.eye(n)
    X = dom.grid
    checks.append(
        _check(
            "invert-linear-oracle",
            "chart inversion of a linear coordinate matches the matrix inverse",
            float(np.max(np.abs(inv.phi.value_batch(X) - X @ target.T))),
            1e-10,
        )
    )

    bump = random_chart(rng, n, 0.7, dom)
    inv = diff_group.invert_chart(bump)
    pts = X[:: max(1, len(X) // 40)]
    worst = 0.0
    for y in pts:
        xn = oracles.newton_point_inverse(
            lambda z: z + bump.phi.value(z),
            lambda z: np.eye(n) + bump.phi.jet(z, 1)[1],
            y,
        )
        worst = max(worst, float(np.max(np.abs(inv.phi.value(y) + y - xn))))
    checks.append(
        _check(
            "invert-newton-oracle",
            "the contraction fixed point agrees with per-point Newton solves",
            worst,
            1e-9,
        )
    )

    r1 = _sup_diff(diff_group.compose_chart(bump, inv).phi, zero_map(n, n), X)
    r2 = _sup_diff(diff_group.compose_chart(inv, bump).phi, zero_map(n, n), X)
    checks.append(
        _check(
            "invert-two-sided-law",
            "composition with the inverse returns the identity coordinate",
            max(r1, r2),
            cfg.tol if cfg.tol is not None else 1e-8,
        )
    )

    # the inverse of a q-contraction has derivative norm up to q/(1-q), so
    # double inversion needs q < 1/2 to stay inside the certified region
    small = random_chart(rng, n, 0.4, dom)
    double = diff_group.invert_chart(diff_group.invert_chart(small))
    checks.append(
        _check(
            "invert-involution",
            "inverting twice reproduces the coordinate at fixed-point accuracy",
            _sup_diff(double.phi, small.phi, X),
            1e-10,
        )
    )

    M = diff_group.d_inverse_at(lin, np.zeros(n))
    checks.append(
        _check(
            "d-inverse-at-linear",
            "the quasi-inversion derivative formula is exact on linear maps",
            float(np.max(np.abs(M - target))),
            1e-10,
        )
    )

    worst = 0.0
    for _ in range(20):
        c = random_chart(rng, n, float(rng.uniform(0.3, 0.7)), dom)
        rep = diff_group.weighted_inversion_check(c, Weight("poly_shifted", 2), 2.0, dom)
        worst = max(worst, rep["violation"])
    checks.append(
        _check(
            "weighted-inversion-bound",
            "the tail estimate for the inverse coordinate holds at every grid point",
            worst,
            1e-9,
        )
    )

    worst = 0.0
    for _ in range(20):
        g = random_chart(rng, n, float(rng.uniform(0.2, 0.8, )), dom).phi
        g0 = random_chart(rng, n, float(rng.uniform(0.2, 0.8)), dom).phi
        e = random_chart(rng, n, float(rng.uniform(0.2, 0.8)), dom).phi
        e0 = random_chart(rng, n, float(rng.uniform(0.2, 0.8)), dom).phi
        rep = diff_group.composition_lipschitz_check(g, e, g0, e0, Weight("poly_shifted", 1), dom)
        worst = max(worst, rep["violation"])
    checks.append(
        _check(
            "composition-lipschitz-estimate",
            "the three-term bound on composition differences holds on the grid",
            worst,
            1e-9,
        )
    )
    return checks


# ---------------------------------------------------------------------------
# regularity
# ---------------------------------------------------------------------------

def suite_regularity(cfg: SuiteConfig):
    rng = np.random.default_rng(cfg.seed)
    n = cfg.dim
    dom = cfg.domain()
    checks = []

    v = constant([0.7] + [0.0] * (n - 1), n)
    p = regularity.constant_field(v)
    curve = regularity.evolve(p, 20, dom)
    checks.append(
        _check(
            "reg-constant-field",
            "a constant field integrates to t times the value",
            float(np.max(np.abs(curve.value_at_knot(20) - v.value(np.zeros(n))))),
            1e-12,
        )
    )

    gam = jets.shift_compose(p(0.0), zero_map(n, n))
    checks.append(
        _check(
            "reg-rhs-at-zero",
            "the right-hand side at the zero coordinate is the field itself",
            _sup_diff(gam, v, dom.grid),
            1e-14,
        )
    )
    A = random_matrix_with_norm(rng, n, 0.45)
    B = random_matrix_with_norm(rng, n, 0.3)
    rhs_lin = regularity.rhs(0.0, Affine(B), regularity.linear_field(A))
    expect = Affine(A @ (B + np.eye(n)))
    checks.append(
        _check(
            "reg-rhs-linear",
            "the right-hand side of linear data is the matrix product",
            _sup_diff(rhs_lin, expect, dom.grid),
            1e-12,
        )
    )

    pl = regularity.linear_field(A)
    curve = regularity.evolve(pl, 200, dom)
    X = dom.grid
    target = X @ (oracles.expm_series(A) - np.eye(n)).T
    err_200 = float(np.max(np.abs(curve.value_at_knot(200) - target)))
    checks.append(
        _check(
            "reg-linear-vs-exponential",
            "a linear field integrates to the matrix exponential flow",
            err_200,
            1e-8,
        )
    )
    checks.append(
        _check("reg-knot-defect", "the knot defect stays below its bound", curve.defect, regularity.ODE_TOL)
    )

    def err_at(M):
        c = regularity.evolve(pl, M, dom)
        return float(np.max(np.abs(c.value_at_knot(M) - target)))

    factor = err_at(25) / err_at(50)
    checks.append(
        _check(
            "reg-step-halving-order",
            "halving the step cuts the error by a fourth-order factor",
            max(0.0, 12.0 - factor, factor - 20.0),
            1e-9,
            value=factor,
        )
    )

    pm = regularity.modulated_field([0.0, 1.0], v)
    curve_q = regularity.evolve(pm, 50, dom)
    checks.append(
        _check(
            "reg-quadrature-field",
            "a linearly ramped field integrates to half its value",
            float(np.max(np.abs(curve_q.value_at_knot(50) - 0.5 * v.value(np.zeros(n))))),
            1e-10,
        )
    )

    K_lin = regularity.lipschitz_bound(pl, domain=dom)
    checks.append(
        _check(
            "reg-lipschitz-linear",
            "the Lipschitz bound of a linear field is its spectral norm",
            abs(K_lin - float(np.linalg.norm(A, 2))),
            1e-10,
        )
    )
    dom1 = cfg.domain(1)
    prof = SineProfile(0.3, 1.7)
    pmod = regularity.modulated_field([1.0, 0.5], prof)
    K_mod = regularity.lipschitz_bound(pmod, domain=dom1)
    oracle = 1.5 * seminorm(prof, ONE, 1, dom1.refined(4))
    checks.append(
        _check(
            "reg-lipschitz-modulated",
            "the Lipschitz bound of a modulated field matches a dense-grid sup",
            abs(K_mod - oracle),
            1e-6,
            value=K_mod,
        )
    )

    bump_amp = [0.35] + [0.0] * (n - 1)
    pg = regularity.modulated_field([1.0, -0.5], GaussianBump([0.0] * n, 1.0, bump_amp))
    M = 200
    curve_g = regularity.evolve(pg, M, dom)
    s = 0.25
    left = curve_g.chart_at(1.0)
    right_map = regularity.FlowChartMap(regularity.restrict_field(pg, s), 1.0, int(M * (1 - s)))
    right = diff_group.compose_chart(
        diff_group.ChartDiffeo.from_map(right_map, dom), curve_g.chart_at(s)
    )
    checks.append(
        _check(
            "reg-flow-property",
            "the flow over [0,1] splits through any intermediate time",
            _sup_diff(left.phi, right.phi, X),
            1e-7,
        )
    )

    inv = diff_group.invert_chart(curve_g.chart_at(1.0))
    rev = regularity.FlowChartMap(regularity.time_reversed_field(pg), 1.0, M)
    checks.append(
        _check(
            "reg-invert-evolve",
            "the inverse of the evolution is the evolution of the reversed field",
            _sup_diff(inv.phi, rev, X),
            1e-6,
        )
    )

    samp = rng.uniform(-2.0, 2.0, size=(8, n))
    rep = regularity.aux_derivative_check(pg, curve_g, samp)
    checks.append(
        _check(
            "reg-auxiliary-linear-ode",
            "the auxiliary matrix ODE reproduces the derivative of the flow",
            rep["max_deviation"],
            1e-5,
        )
    )

    ok = True
    for k in (M // 4, M // 2, M):
        ok = ok and curve_g.chart_at(curve_g.knots[k]).norm11 < 1.0
    checks.append(
        _flag(
            "reg-group-valued-knots",
            "the evolution stays inside the invertibility region for small fields",
            ok,
        )
    )
    return checks


# ---------------------------------------------------------------------------
# mapping groups
# ---------------------------------------------------------------------------

def suite_mapping(cfg: SuiteConfig):
    rng = np.random.default_rng(cfg.seed)
    dom = cfg.domain(1)
    fam = WeightFamily.polynomial(2)
    so3 = MatrixGroup("SO3", 3)
    X = dom.grid
    sparse = X[:: max(1, len(X) // 60)]
    checks = []

    a = random_so3_element(rng, 0.2, fam, dom)
    b = random_so3_element(rng, 0.2, fam, dom)
    ident = mapping_group.MappingElement(
        so3, TensorProfile(constant([0.0], 1), np.zeros((3, 3))), fam, 2, dom
    )

    m = mapping_group.multiply(a, ident)
    checks.append(
        _check(
            "map-multiply-identity",
            "multiplying by the identity element changes nothing",
            float(np.max(np.abs(m.xi.value_batch(sparse) - a.xi.value_batch(sparse)))),
            1e-13,
        )
    )

    K = so3_direction(rng)
    pa = mapping_group.MappingElement(so3, TensorProfile(GaussianBump([0.0], 1.0, [0.12]), K), fam, 2, dom)
    pb = mapping_group.MappingElement(so3, TensorProfile(GaussianBump([0.0], 1.0, [0.1]), K), fam, 2, dom)
    mp = mapping_group.multiply(pa, pb)
    expect = pa.xi.value_batch(sparse) + pb.xi.value_batch(sparse)
    checks.append(
        _check(
            "map-multiply-parallel",
            "commuting directions multiply by adding coordinates",
            float(np.max(np.abs(mp.xi.value_batch(sparse) - expect))),
            1e-12,
        )
    )

    m = mapping_group.multiply(a, b)
    worst = 0.0
    for i, x in enumerate(sparse):
        lhs = so3.exp(m.xi.value(x))
        rhs = so3.exp(a.xi.value(x)) @ so3.exp(b.xi.value(x))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    checks.append(
        _check(
            "map-multiply-product-oracle",
            "the multiplied coordinate exponentiates to the pointwise product",
            worst,
            1e-10,
        )
    )

    mi = mapping_group.multiply(a, mapping_group.invert(a))
    checks.append(
        _check(
            "map-inverse-residual",
            "an element times its inverse is the identity element",
            float(np.max(np.abs(mi.xi.value_batch(sparse)))),
            1e-12,
        )
    )
    checks.append(
        _check(
            "map-invert-involution",
            "inversion is an involution on coordinates",
            float(
                np.max(
                    np.abs(
                        mapping_group.invert(mapping_group.invert(a)).xi.value_batch(sparse)
                        - a.xi.value_batch(sparse)
                    )
                )
            ),
            0.0,
        )
    )

    worst = 0.0
    for _ in range(50):
        t1 = random_so3_element(rng, 0.07, fam, dom)
        t2 = random_so3_element(rng, 0.07, fam, dom)
        t3 = random_so3_element(rng, 0.07, fam, dom)
        left = mapping_group.multiply(mapping_group.multiply(t1, t2), t3)
        right = mapping_group.multiply(t1, mapping_group.multiply(t2, t3))
        worst = max(worst, float(np.max(np.abs(left.xi.value_batch(sparse) - right.xi.value_batch(sparse)))))
    checks.append(
        _check(
            "map-associativity",
            "pointwise products associate on random triples",
            worst,
            1e-10,
        )
    )

    vdir = TensorProfile(GaussianBump([0.2], 0.9, [0.2]), so3_direction(rng))
    e_s = mapping_group.group_exponential(Scaled(0.4, vdir), so3, fam, 2, dom)
    e_t = mapping_group.group_exponential(Scaled(0.35, vdir), so3, fam, 2, dom)
    e_st = mapping_group.group_exponential(Scaled(0.75, vdir), so3, fam, 2, dom)
    law = mapping_group.multiply(e_s, e_t)
    checks.append(
        _check(
            "map-exponential-one-parameter",
            "the exponential turns addition of times into multiplication",
            float(np.max(np.abs(law.xi.value_batch(sparse) - e_st.xi.value_batch(sparse)))),
            1e-10,
        )
    )
    x0 = np.array([0.3])
    checks.append(
        _check(
            "map-exponential-pointwise",
            "the group exponential evaluates to the matrix exponential pointwise",
            float(np.max(np.abs(so3.exp(e_s.xi.value(x0)) - oracles.expm_series(e_s.xi.value(x0))))),
            1e-12,
        )
    )

    A = so3_direction(rng) * 0.3
    const_field = regularity.TimeField(lambda t: TensorProfile(constant([1.0], 1), A), 1)
    traj = mapping_group.matrix_flow(const_field, np.array([[0.5]]), 100, so3)
    checks.append(
        _check(
            "map-evolve-constant",
            "the evolution of a constant field is the matrix exponential",
            float(np.max(np.abs(traj[-1][0] - oracles.expm_series(A)))),
            1e-8,
        )
    )
    ramp_field = regularity.TimeField(lambda t: TensorProfile(constant([t], 1), A), 1)
    traj = mapping_group.matrix_flow(ramp_field, np.array([[0.5]]), 100, so3)
    checks.append(
        _check(
            "map-evolve-commuting",
            "a commuting time-dependent field integrates through its time integral",
            float(np.max(np.abs(traj[-1][0] - oracles.expm_series(0.5 * A)))),
            1e-8,
        )
    )

    gauss_field = regularity.TimeField(
        lambda t: TensorProfile(GaussianBump([0.0], 1.0, [0.25 * (1 + 0.3 * t)]), K), 1
    )
    checks.append(
        _check(
            "map-left-log-recovery",
            "the left logarithmic derivative of the evolution returns the field",
            mapping_group.left_log_residual(gauss_field, np.array([[0.3], [1.0]]), 100, so3),
            1e-5,
        )
    )

    prod = mapping_group.multiply(
        random_so3_element(rng, 0.1, fam, dom), random_so3_element(rng, 0.1, fam, dom)
    )
    checks.append(
        _flag(
            "map-decay-closure",
            "products of decaying elements stay decaying",
            mapping_group.is_member(prod.xi, fam, 1, decaying=True, domain=dom),
        )
    )
    checks.append(
        _flag(
            "map-member-constant-rejected",
            "a nonzero constant coordinate is not decaying",
            not mapping_group.is_member(
                TensorProfile(constant([1.0], 1), K * 0.2), fam, 1, decaying=True, domain=dom
            ),
        )
    )
    checks.append(
        _flag(
            "map-member-zero",
            "the zero coordinate is a member for any family",
            mapping_group.is_member(
                TensorProfile(constant([0.0], 1), np.zeros((3, 3))), fam, 2, decaying=True, domain=dom
            ),
        )
    )
    return checks


# ---------------------------------------------------------------------------
# actions
# ---------------------------------------------------------------------------

def suite_actions(cfg: SuiteConfig):
    rng = np.random.default_rng(cfg.seed)
    dom = cfg.domain(1)
    dom2 = cfg.domain(2)
    fam = WeightFamily.polynomial(2)
    so3 = MatrixGroup("SO3", 3)
    X1 = dom.grid
    checks = []

    phi2 = diff_group.ChartDiffeo.from_map(
        GaussianBump([0.2, -0.1], 1.0, [0.3, 0.2]), dom2
    )
    checks.append(
        _check(
            "action-identity",
            "conjugating by the identity matrix changes nothing",
            _sup_diff(
                actions.gl_conjugate(actions.LinearAction(np.eye(2)), phi2).phi,
                phi2.phi,
                dom2.grid,
            ),
            1e-14,
        )
    )
    cmap = diff_group.ChartDiffeo.from_map(constant([0.3, -0.2], 2), dom2)
    T = actions.LinearAction([[1.1, -0.3], [0.1, 0.8]])
    conj_c = actions.gl_conjugate(T, cmap)
    expect = constant(T.matrix @ np.array([0.3, -0.2]), 2)
    checks.append(
        _check(
            "action-constant",
            "a constant coordinate conjugates to its image under the matrix",
            _sup_diff(conj_c.phi, expect, dom2.grid),
            1e-13,
        )
    )
    S = actions.LinearAction([[0.9, 0.2], [0.0, 1.2]])
    lhs = actions.gl_conjugate(S, actions.gl_conjugate(T, phi2))
    rhs = actions.gl_conjugate(actions.LinearAction(S.matrix @ T.matrix), phi2)
    checks.append(
        _check(
            "action-composition-law",
            "conjugations compose through the matrix product",
            _sup_diff(lhs.phi, rhs.phi, dom2.grid),
            1e-12,
        )
    )

    rep = actions.schwartz_action_bound_check(
        actions.LinearAction(np.eye(2)), 2, samples=1000, eps=0.1, seed=cfg.seed
    )
    checks.append(
        _check(
            "action-weight-bound",
            "the polynomial-weight estimate of the linear action holds on samples",
            max(0.0, rep["max_ratio"] - 1.0),
            1e-9,
            max_ratio=rep["max_ratio"],
        )
    )
    rep = actions.schwartz_action_bound_check(
        actions.LinearAction(np.eye(2)),
        2,
        samples=200,
        eps=0.1,
        seed=cfg.seed,
        violation_factor=20.0,
        adversarial=True,
    )
    checks.append(
        _flag(
            "action-weight-bound-violation-detected",
            "blowing up the admissible ball twentyfold breaks the estimate",
            rep["max_ratio"] > 1.0,
            max_ratio=rep["max_ratio"],
        )
    )

    checks.append(
        _flag(
            "multiplier-linear",
            "linear maps multiply polynomial-weighted spaces",
            actions.multiplier_check(Affine([[0.8]]), fam, 1, dom)["is_multiplier"],
        )
    )
    checks.append(
        _flag(
            "multiplier-zero",
            "the zero map is trivially a multiplier",
            actions.multiplier_check(zero_map(1, 1), fam, 2, dom)["is_multiplier"],
        )
    )
    grow = jets.FDWrapped(lambda x: np.array([np.exp(float(x @ x))]), 1, (1,))
    checks.append(
        _flag(
            "multiplier-exponential-rejected",
            "exponential growth is rejected against polynomial weights",
            not actions.multiplier_check(grow, fam, 0, dom)["is_multiplier"],
        )
    )

    def semi(seed_offset, amp, damp):
        r = np.random.default_rng(cfg.seed + seed_offset)
        return actions.SemidirectElement(
            random_so3_element(r, amp, fam, dom), random_chart(r, 1, damp, dom)
        )

    e = actions.semidirect_identity(so3, fam, dom)
    ee = actions.semidirect_multiply(e, e)
    checks.append(
        _check(
            "semidirect-identity",
            "the identity pair is idempotent",
            max(
                float(np.max(np.abs(ee.map_part.xi.value_batch(X1[::10])))),
                float(np.max(np.abs(ee.diff_part.phi.value_batch(X1[::10])))),
            ),
            1e-15,
        )
    )

    a = semi(1, 0.06, 0.25)
    ainv = actions.semidirect_invert(a)
    prod = actions.semidirect_multiply(a, ainv)
    checks.append(
        _check(
            "semidirect-inverse",
            "a pair times its inverse is the identity pair",
            max(
                float(np.max(np.abs(prod.map_part.xi.value_batch(X1[::10])))),
                float(np.max(np.abs(prod.diff_part.phi.value_batch(X1[::10])))),
            ),
            cfg.tol if cfg.tol is not None else 1e-8,
        )
    )

    worst = 0.0
    for k in range(3):
        x = semi(10 + k, 0.05, 0.2)
        y = semi(20 + k, 0.05, 0.2)
        z = semi(30 + k, 0.05, 0.2)
        l = actions.semidirect_multiply(actions.semidirect_multiply(x, y), z)
        r = actions.semidirect_multiply(x, actions.semidirect_multiply(y, z))
        worst = max(
            worst,
            float(np.max(np.abs(l.map_part.xi.value_batch(X1[::20]) - r.map_part.xi.value_batch(X1[::20])))),
            float(np.max(np.abs(l.diff_part.phi.value_batch(X1[::20]) - r.diff_part.phi.value_batch(X1[::20])))),
        )
    checks.append(
        _check(
            "semidirect-associativity",
            "semidirect products associate on random triples",
            worst,
            cfg.tol if cfg.tol is not None else 1e-8,
        )
    )

    m1 = random_so3_element(rng, 0.06, fam, dom)
    m2 = random_so3_element(rng, 0.06, fam, dom)
    psi = random_chart(rng, 1, 0.3, dom)
    lhsm = actions.act_on_mapping(psi, mapping_group.multiply(m1, m2))
    rhsm = mapping_group.multiply(
        actions.act_on_mapping(psi, m1), actions.act_on_mapping(psi, m2)
    )
    checks.append(
        _check(
            "action-homomorphism",
            "the twisting action is a homomorphism in its mapping argument",
            float(np.max(np.abs(lhsm.xi.value_batch(X1[::10]) - rhsm.xi.value_batch(X1[::10])))),
            1e-10,
        )
    )

    # conjugation rescales the length scale by |T|, so the sample matrices
    # stay moderate enough that the stretched tails remain inside the
    # sampled asymptotic window
    ok = True
    bump = diff_group.ChartDiffeo.from_map(GaussianBump([0.2], 0.6, [0.3]), dom)
    ok = ok and diff_group.is_decaying_diffeo(bump, fam)
    for _ in range(10):
        t = float(rng.uniform(0.6, 1.3)) * float(rng.choice([-1.0, 1.0]))
        ok = ok and diff_group.is_decaying_diffeo(
            actions.gl_conjugate(actions.LinearAction([[t]]), bump), fam
        )
    checks.append(
        _flag(
            "action-preserves-decay",
            "conjugation by invertible matrices preserves decaying diffeomorphisms",
            ok,
        )
    )
    return checks


# ---------------------------------------------------------------------------
# counterexample
# ---------------------------------------------------------------------------

def suite_counterexample(cfg: SuiteConfig):
    dom = cfg.domain(1)
    checks = []
    for n in range(1, 21):
        val = actions.bc_counterexample(n, dom)
        checks.append(
            _check(
                f"counterexample-n{n:02d}",
                "the sup distance of the stretched oscillation stays at least one",
                max(0.0, 1.0 - val),
                1e-9,
                value=val,
            )
        )
    base = SineProfile(1.0, 1.0)
    same = Sum([base, Scaled(-1.0, SineProfile(1.0, 1.0))])
    checks.append(
        _check(
            "counterexample-no-perturbation",
            "an unstretched profile has zero distance to itself",
            float(np.max(np.abs(same.value_batch(dom.grid)))),
            0.0,
        )
    )
    return checks


SUITES = {
    "seminorms": suite_seminorms,
    "group-axioms": suite_group_axioms,
    "inversion": suite_inversion,
    "regularity": suite_regularity,
    "mapping": suite_mapping,
    "actions": suite_actions,
    "counterexample": suite_counterexample,
}


def run_suite(cfg: SuiteConfig):
    """Execute the configured suite(s); returns (records, all_passed)."""
    names = list(SUITES) if cfg.suite == "all" else [cfg.suite]
    records = []
    for name in names:
        for rec in SUITES[name](cfg):
            rec["suite"] = name
            if cfg.tol is not None:
                rec["tolerance"] = float(cfg.tol)
                rec["pass"] = bool(rec["residual"] <= rec["tolerance"])
            records.append(rec)
    records.sort(key=lambda r: (r["suite"], r["name"]))
    return records, all(r["pass"] for r in records)
