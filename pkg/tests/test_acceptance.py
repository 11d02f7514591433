"""Acceptance criteria, one test per criterion.

Each test prints a single pass/fail line with the measured extremes and its
runtime, then asserts every stated tolerance, including the runtime budget.
Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import time

import numpy as np

from diffw import actions, diff_group, jets, mapping_group, oracles, quasi_inverse, regularity
from diffw.jets import GaussianBump, Scaled, Sum, TensorProfile, constant
from diffw.mapping_group import MatrixGroup
from diffw.samples import (
    random_chart,
    random_matrix_with_norm,
    random_so3_element,
    random_tangent_vector,
    so3_direction,
)
from diffw.weights import ONE, Weight, WeightFamily, bcr_check, default_domain

FAM = WeightFamily.polynomial(2)


class Criterion:
    def __init__(self, number, label, budget_s):
        self.number = number
        self.label = label
        self.budget = budget_s
        self.start = time.perf_counter()
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def finish(self, ok):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if ok and elapsed < self.budget else "FAIL"
        detail = "; ".join(self.notes)
        print(f"[{status}] criterion {self.number} ({self.label}): {detail} "
              f"[{elapsed:.1f}s / {self.budget:.0f}s]")
        assert ok, f"criterion {self.number} failed: {detail}"
        assert elapsed < self.budget, f"criterion {self.number} overran its budget"


def test_criterion_1_quasi_inversion_oracle_equivalence():
    crit = Criterion(1, "quasi-inversion oracle equivalence", 5.0)
    rng = np.random.default_rng(101)
    worst = 0.0
    for i in range(200):
        size = 1 + i % 8
        A = random_matrix_with_norm(rng, size, rng.uniform(0.02, 0.9))
        err = np.max(np.abs(quasi_inverse.quasi_invert(A) - oracles.quasi_inverse_bridge(A)))
        worst = max(worst, float(err))
    crit.note(f"200 matrices, max elementwise error {worst:.2e} < 1e-10")
    crit.finish(worst < 1e-10)


def test_criterion_2_group_axiom_suite():
    crit = Criterion(2, "group axioms", 60.0)
    ok = True
    for dim in (1, 2):
        rng = np.random.default_rng(200 + dim)
        dom = default_domain(dim)
        samples = [
            random_chart(rng, dim, float(t), dom) for t in rng.uniform(0.2, 0.8, size=20)
        ]
        records = diff_group.verify_group_axioms(samples, dom, tol=1e-8)
        worst = max(r["residual"] for r in records)
        crit.note(f"dim {dim}: 20 samples, worst residual {worst:.2e}")
        ok = ok and all(r["pass"] for r in records)
    crit.finish(ok)


def _rel(a, b):
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-3))


def test_criterion_3_derivative_formula_suite():
    crit = Criterion(3, "derivative formulas vs finite differences", 60.0)
    rng = np.random.default_rng(300)
    worst = {"composition": 0.0, "inversion": 0.0, "pointwise-inverse": 0.0, "tangent": 0.0}
    for probe in range(100):
        dim = 1 if probe < 60 else 2
        dom = default_domain(dim)
        x = rng.uniform(-2.0, 2.0, dim)
        gamma = random_chart(rng, dim, float(rng.uniform(0.2, 0.7)), dom)
        eta = random_chart(rng, dim, float(rng.uniform(0.2, 0.7)), dom)
        g1 = random_tangent_vector(rng, dim)
        e1 = random_tangent_vector(rng, dim)

        d = diff_group.d_compose(gamma, eta, g1, e1)
        fd = oracles.fd_directional(
            lambda t: jets.shift_compose(
                Sum([gamma.phi, Scaled(t, g1)]), Sum([eta.phi, Scaled(t, e1)])
            ).value(x),
            0.0,
            1e-6,
        )
        worst["composition"] = max(worst["composition"], _rel(d.value(x), fd))

        phi = random_chart(rng, dim, float(rng.uniform(0.2, 0.6)), dom)
        d = diff_group.d_invert(phi, g1)
        fd = oracles.fd_directional(
            lambda t: diff_group.InverseMap(Sum([phi.phi, Scaled(t, g1)])).value(x),
            0.0,
            1e-5,
        )
        worst["inversion"] = max(worst["inversion"], _rel(d.value(x), fd))

        image = x + phi.phi.value(x)
        formula = diff_group.d_inverse_at(phi, x)
        fd = oracles.fd_jet_from_values(diff_group.InverseMap(phi.phi).value, image, 1)[1]
        worst["pointwise-inverse"] = max(worst["pointwise-inverse"], _rel(formula, fd))

        prod = diff_group.tangent_multiply(
            diff_group.TangentElement(gamma, g1), diff_group.TangentElement(eta, e1)
        )
        fd = oracles.fd_directional(
            lambda t: diff_group.compose_chart(
                diff_group.ChartDiffeo.from_map(Sum([gamma.phi, Scaled(t, g1)]), dom),
                diff_group.ChartDiffeo.from_map(Sum([eta.phi, Scaled(t, e1)]), dom),
            ).phi.value(x),
            0.0,
            1e-6,
        )
        worst["tangent"] = max(worst["tangent"], _rel(prod.vector.value(x), fd))
    for key, val in worst.items():
        crit.note(f"{key} {val:.2e}")
    crit.finish(all(v < 1e-4 for v in worst.values()))


def test_criterion_4_regularity_ode():
    crit = Criterion(4, "regularity evolution equation", 30.0)
    dom = default_domain(2)
    A = np.array([[0.1, -0.4], [0.3, 0.2]])
    p = regularity.linear_field(A)
    X = dom.grid
    target = X @ (oracles.expm_series(A) - np.eye(2)).T

    curve = regularity.evolve(p, 200, dom)
    err = float(np.max(np.abs(curve.value_at_knot(200) - target)))
    crit.note(f"linear field error {err:.2e} < 1e-8 at 200 steps")
    ok = err < 1e-8

    def err_at(M):
        c = regularity.evolve(p, M, dom)
        return float(np.max(np.abs(c.value_at_knot(M) - target)))

    factor = err_at(25) / err_at(50)
    crit.note(f"step-halving factor {factor:.1f} in [12, 20]")
    ok = ok and 12.0 <= factor <= 20.0

    dom1 = default_domain(1)
    pg = regularity.modulated_field([1.0, -0.5], GaussianBump([0.0], 1.0, [0.35]))
    curve_g = regularity.evolve(pg, 200, dom1)
    left = curve_g.chart_at(1.0)
    flow_res = 0.0
    for s in (0.25, 0.5):
        tail = regularity.FlowChartMap(regularity.restrict_field(pg, s), 1.0, int(200 * (1 - s)))
        right = diff_group.compose_chart(
            diff_group.ChartDiffeo.from_map(tail, dom1), curve_g.chart_at(s)
        )
        flow_res = max(
            flow_res,
            float(np.max(np.abs(left.phi.value_batch(dom1.grid) - right.phi.value_batch(dom1.grid)))),
        )
    crit.note(f"flow-property residual {flow_res:.2e} < 1e-7")
    ok = ok and flow_res < 1e-7

    rng = np.random.default_rng(400)
    aux = regularity.aux_derivative_check(pg, curve_g, rng.uniform(-2, 2, (8, 1)))
    crit.note(f"auxiliary ODE deviation {aux['max_deviation']:.2e} < 1e-5")
    ok = ok and aux["max_deviation"] < 1e-5
    crit.finish(ok)


def test_criterion_5_weighted_estimates():
    crit = Criterion(5, "weighted composition and inversion estimates", 60.0)
    rng = np.random.default_rng(500)
    dom = default_domain(1)
    weight = Weight("poly_shifted", 1)
    worst_comp = 0.0
    for _ in range(100):
        maps = [random_chart(rng, 1, float(rng.uniform(0.2, 0.8)), dom).phi for _ in range(4)]
        rep = diff_group.composition_lipschitz_check(*maps, weight, dom)
        worst_comp = max(worst_comp, rep["violation"])
    crit.note(f"composition bound: worst violation {worst_comp:.2e} over 100 pairs")

    worst_inv = 0.0
    w2 = Weight("poly_shifted", 2)
    for _ in range(100):
        c = random_chart(rng, 1, float(rng.uniform(0.3, 0.7)), dom)
        rep = diff_group.weighted_inversion_check(c, w2, 2.0, dom)
        worst_inv = max(worst_inv, rep["violation"])
    crit.note(f"inversion bound: worst violation {worst_inv:.2e} over 100 charts")
    crit.finish(worst_comp <= 1e-9 and worst_inv <= 1e-9)


def test_criterion_6_counterexample_and_action_bound():
    crit = Criterion(6, "counterexample values and action estimate", 10.0)
    dom = default_domain(1)
    vals = [actions.bc_counterexample(n, dom) for n in range(1, 21)]
    low = min(vals)
    crit.note(f"20 stretched-oscillation values, min {low:.6f} >= 1 - 1e-9")
    ok = low >= 1.0 - 1e-9

    rep = actions.schwartz_action_bound_check(
        actions.LinearAction(np.eye(2)), 2, samples=1000, eps=0.1, seed=600
    )
    crit.note(f"1000 action samples, max ratio {rep['max_ratio']:.3f} <= 1")
    ok = ok and rep["pass"]
    crit.finish(ok)


def test_criterion_7_mapping_group_suite():
    crit = Criterion(7, "mapping group operations", 30.0)
    rng = np.random.default_rng(700)
    dom = default_domain(1)
    so3 = MatrixGroup("SO3", 3)
    X = dom.grid[::4]

    worst_assoc = 0.0
    worst_inv = 0.0
    for _ in range(50):
        a = random_so3_element(rng, 0.07, FAM, dom)
        b = random_so3_element(rng, 0.07, FAM, dom)
        c = random_so3_element(rng, 0.07, FAM, dom)
        left = mapping_group.multiply(mapping_group.multiply(a, b), c)
        right = mapping_group.multiply(a, mapping_group.multiply(b, c))
        worst_assoc = max(
            worst_assoc,
            float(np.max(np.abs(left.xi.value_batch(X) - right.xi.value_batch(X)))),
        )
        residual = mapping_group.multiply(a, mapping_group.invert(a)).xi.value_batch(X)
        worst_inv = max(worst_inv, float(np.max(np.abs(residual))))
    crit.note(f"associativity {worst_assoc:.2e}, inverses {worst_inv:.2e} (50 triples)")
    ok = worst_assoc < 1e-10 and worst_inv < 1e-10

    A = so3_direction(rng) * 0.3
    field = regularity.TimeField(lambda t: TensorProfile(constant([1.0], 1), A), 1)
    traj = mapping_group.matrix_flow(field, np.array([[0.5]]), 100, so3)
    err = float(np.max(np.abs(traj[-1][0] - oracles.expm_series(A))))
    crit.note(f"constant-field evolution error {err:.2e} < 1e-8")
    ok = ok and err < 1e-8

    K = so3_direction(rng)
    gfield = regularity.TimeField(
        lambda t: TensorProfile(GaussianBump([0.0], 1.0, [0.25 * (1 + 0.3 * t)]), K), 1
    )
    res = mapping_group.left_log_residual(gfield, np.array([[0.3], [1.0]]), 100, so3)
    crit.note(f"left-log recovery {res:.2e} < 1e-5")
    ok = ok and res < 1e-5

    v = TensorProfile(GaussianBump([0.2], 0.9, [0.2]), K)
    law = mapping_group.multiply(
        mapping_group.group_exponential(Scaled(0.4, v), so3, FAM, 2, dom),
        mapping_group.group_exponential(Scaled(0.35, v), so3, FAM, 2, dom),
    )
    e_st = mapping_group.group_exponential(Scaled(0.75, v), so3, FAM, 2, dom)
    one_param = float(np.max(np.abs(law.xi.value_batch(X) - e_st.xi.value_batch(X))))
    crit.note(f"one-parameter law {one_param:.2e} < 1e-10")
    ok = ok and one_param < 1e-10
    crit.finish(ok)


def test_criterion_8_decay_and_structure_suite():
    crit = Criterion(8, "decaying subgroup closure and weight conditions", 60.0)
    rng = np.random.default_rng(800)
    dom = default_domain(1)

    def decaying_sample(r):
        return diff_group.ChartDiffeo.from_map(
            GaussianBump([r.uniform(-0.3, 0.3)], r.uniform(0.5, 0.8), [r.uniform(0.15, 0.3)]),
            dom,
        )

    ok = True
    for _ in range(5):
        a = decaying_sample(rng)
        b = decaying_sample(rng)
        ok = ok and diff_group.is_decaying_diffeo(a, FAM)
        ok = ok and diff_group.is_decaying_diffeo(diff_group.compose_chart(a, b), FAM)
        ok = ok and diff_group.is_decaying_diffeo(diff_group.invert_chart(a), FAM)
    crit.note("composition and inversion closure on 5 Gaussian pairs")

    bump = decaying_sample(rng)
    for _ in range(10):
        t = float(rng.uniform(0.6, 1.3)) * float(rng.choice([-1.0, 1.0]))
        conj = actions.gl_conjugate(actions.LinearAction([[t]]), bump)
        ok = ok and diff_group.is_decaying_diffeo(conj, FAM)
    dom2 = default_domain(2)
    bump2 = diff_group.ChartDiffeo.from_map(
        GaussianBump([0.2, -0.1], 0.6, [0.2, 0.15]), dom2
    )
    T2 = np.eye(2) + 0.2 * random_matrix_with_norm(rng, 2, 1.0)
    conj2 = actions.gl_conjugate(actions.LinearAction(T2), bump2)
    ok = ok and diff_group.is_decaying_diffeo(conj2, FAM, dom2)
    crit.note("conjugation closure for 10 one-dimensional and 1 planar matrix")

    rep1 = bcr_check(WeightFamily([ONE]), dom)
    verdict1 = rep1.w1 and rep1.w2 and not rep1.w3
    rep2 = bcr_check(WeightFamily.polynomial(3), dom)
    verdict2 = (
        rep2.witnesses["1"] == "(1+|x|)^1"
        and rep2.witnesses["(1+|x|)^1"] == "(1+|x|)^2"
        and rep2.witnesses["(1+|x|)^2"] == "(1+|x|)^3"
        and rep2.witnesses["(1+|x|)^3"] is None
    )
    rep3 = bcr_check(WeightFamily([Weight("poly_shifted", 3)], contains_one=False), dom)
    verdict3 = not rep3.w3
    crit.note(f"weight-family verdicts {verdict1}/{verdict2}/{verdict3}")
    ok = ok and verdict1 and verdict2 and verdict3
    crit.finish(ok)
