import numpy as np
import pytest

from diffw.diff_group import (
    ChartDiffeo,
    InverseMap,
    TangentElement,
    compose_chart,
    composition_lipschitz_check,
    conjugate,
    d_compose,
    d_inverse_at,
    d_invert,
    invert_chart,
    is_decaying_diffeo,
    tangent_multiply,
    verify_group_axioms,
    weighted_inversion_check,
)
from diffw.errors import ConvergenceError, NotInContractionRegionError
from diffw.jets import Affine, GaussianBump, Scaled, SineProfile, Sum, constant, zero_map
from diffw.oracles import fd_directional, fd_jet_from_values, newton_point_inverse
from diffw.samples import random_chart, random_tangent_vector
from diffw.weights import ONE, Weight, WeightFamily


def bump_chart(dom, center=0.0, sigma=None, amp=0.5):
    sigma = sigma if sigma is not None else 1.0 / np.sqrt(2.0)
    return ChartDiffeo.from_map(GaussianBump([center], sigma, [amp]), dom)


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def test_compose_with_zero_is_neutral(dom1):
    eta = bump_chart(dom1)
    zero = ChartDiffeo.from_map(zero_map(1, 1), dom1)
    X = dom1.grid
    assert np.allclose(compose_chart(zero, eta).phi.value_batch(X), eta.phi.value_batch(X), atol=0)
    assert np.allclose(compose_chart(eta, zero).phi.value_batch(X), eta.phi.value_batch(X), atol=0)


def test_compose_constants_add(dom2):
    c = ChartDiffeo.from_map(constant([0.3, -0.1], 2), dom2)
    d = ChartDiffeo.from_map(constant([0.2, 0.4], 2), dom2)
    out = compose_chart(c, d).phi.value_batch(dom2.grid[:5])
    assert np.allclose(out, [0.5, 0.3], atol=1e-15)


def test_compose_matches_full_map_composition(dom1, rng):
    # chart composition agrees with composing the full maps pointwise
    for _ in range(5):
        a = random_chart(rng, 1, float(rng.uniform(0.2, 0.8)), dom1)
        b = random_chart(rng, 1, float(rng.uniform(0.2, 0.8)), dom1)
        comp = compose_chart(a, b)
        X = rng.uniform(-5, 5, (100, 1))
        inner = b.full_value_batch(X)
        expect = a.full_value_batch(inner)
        got = comp.full_value_batch(X)
        assert np.max(np.abs(got - expect)) < 1e-12


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------

def test_invert_constant_shift(dom1):
    c = ChartDiffeo.from_map(constant([0.7], 1), dom1)
    inv = invert_chart(c)
    assert np.allclose(inv.phi.value_batch(dom1.grid[:10]), -0.7, atol=1e-14)


def test_invert_linear_matches_matrix_inverse(dom2, rng):
    A = rng.standard_normal((2, 2))
    A *= 0.6 / np.linalg.norm(A, 2)
    lin = ChartDiffeo.from_map(Affine(A), dom2)
    inv = invert_chart(lin)
    target = np.linalg.inv(np.eye(2) + A) - np.eye(2)
    X = dom2.grid
    assert np.max(np.abs(inv.phi.value_batch(X) - X @ target.T)) < 1e-10


def test_invert_bump_composes_to_zero(dom1):
    phi = bump_chart(dom1)  # 0.5 exp(-x^2)
    assert phi.in_contraction_region
    inv = invert_chart(phi)
    residual = compose_chart(phi, inv).phi.value_batch(dom1.grid)
    assert np.max(np.abs(residual)) < 1e-9


def test_invert_matches_newton_oracle(dom1):
    phi = bump_chart(dom1)
    inv = invert_chart(phi)
    for y in dom1.grid[::25]:
        x_newton = newton_point_inverse(
            lambda z: z + phi.phi.value(z),
            lambda z: np.eye(1) + phi.phi.jet(z, 1)[1],
            y,
        )
        assert np.max(np.abs(inv.phi.value(y) + y - x_newton)) < 1e-11


def test_invert_refuses_outside_contraction_region(dom1):
    steep = ChartDiffeo.from_map(Affine([[0.99]]), dom1)
    assert not steep.in_contraction_region
    with pytest.raises(NotInContractionRegionError):
        invert_chart(steep)


def test_invert_reports_slow_convergence(dom1):
    # just inside the margin: the geometric rate 0.979^200 cannot reach 1e-12
    slow = ChartDiffeo.from_map(Affine([[0.979]]), dom1)
    assert slow.in_contraction_region
    with pytest.raises(ConvergenceError):
        invert_chart(slow).phi.value_batch(dom1.grid[:3])


def test_double_inversion_restores_coordinate(dom1, rng):
    from diffw.diff_group import FP_TOL

    phi = random_chart(rng, 1, 0.4, dom1)
    double = invert_chart(invert_chart(phi))
    err = np.max(np.abs(double.phi.value_batch(dom1.grid) - phi.phi.value_batch(dom1.grid)))
    assert err < 2 * FP_TOL


def test_inverse_map_jets_match_finite_differences(dom1):
    phi = bump_chart(dom1)
    imap = InverseMap(phi.phi)
    y = np.array([0.45])
    an = imap.jet(y, 3)
    fd = fd_jet_from_values(imap.value, y, 2)
    assert np.max(np.abs(an[1] - fd[1])) < 1e-7
    assert np.max(np.abs(an[2] - fd[2])) < 1e-6
    # third order against differences of the exact second order
    h = 1e-4
    d3 = (imap.jet(y + h, 2)[2] - imap.jet(y - h, 2)[2]) / (2 * h)
    assert np.max(np.abs(an[3][..., 0] - d3)) < 1e-5


def test_spot_check_injectivity(dom1):
    assert bump_chart(dom1).spot_check_injective()


# ---------------------------------------------------------------------------
# derivative formulas
# ---------------------------------------------------------------------------

def test_d_inverse_at_zero_coordinate(dom1):
    zero = ChartDiffeo.from_map(zero_map(1, 1), dom1)
    assert np.allclose(d_inverse_at(zero, np.array([0.3])), 0.0)


def test_d_inverse_at_linear_exact(dom2, rng):
    A = rng.standard_normal((2, 2))
    A *= 0.5 / np.linalg.norm(A, 2)
    lin = ChartDiffeo.from_map(Affine(A), dom2)
    target = np.linalg.inv(np.eye(2) + A) - np.eye(2)
    M = d_inverse_at(lin, rng.uniform(-1, 1, 2))
    assert np.max(np.abs(M - target)) < 1e-12


def test_d_inverse_at_matches_inverse_derivative(dom1):
    phi = bump_chart(dom1)
    imap = InverseMap(phi.phi)
    x = np.array([0.3])
    image = x + phi.phi.value(x)
    formula = d_inverse_at(phi, x)
    fd = fd_jet_from_values(imap.value, image, 1)[1]
    assert np.max(np.abs(formula - fd)) < 1e-5


def test_d_inverse_at_refuses_steep_points(dom1):
    steep = ChartDiffeo.from_map(Affine([[1.2]]), dom1)
    with pytest.raises(NotInContractionRegionError):
        d_inverse_at(steep, np.array([0.0]))


def test_d_compose_vanishes_on_zero_directions(dom1, rng):
    a = random_chart(rng, 1, 0.5, dom1)
    b = random_chart(rng, 1, 0.5, dom1)
    d = d_compose(a, b, zero_map(1, 1), zero_map(1, 1))
    assert np.max(np.abs(d.value_batch(dom1.grid[::20]))) == 0.0


def test_d_compose_affine_case_is_exact(dom1, rng):
    A = np.array([[0.4]])
    gamma = ChartDiffeo.from_map(Affine(A), dom1)
    eta = ChartDiffeo.from_map(zero_map(1, 1), dom1)
    g1 = random_tangent_vector(rng, 1)
    e1 = random_tangent_vector(rng, 1)
    d = d_compose(gamma, eta, g1, e1)
    X = dom1.grid[::20]
    expect = e1.value_batch(X) @ A.T + g1.value_batch(X)
    assert np.max(np.abs(d.value_batch(X) - expect)) < 1e-14


def test_d_compose_matches_finite_differences(dom1, rng):
    for _ in range(10):
        gamma = random_chart(rng, 1, float(rng.uniform(0.2, 0.7)), dom1)
        eta = random_chart(rng, 1, float(rng.uniform(0.2, 0.7)), dom1)
        g1 = random_tangent_vector(rng, 1)
        e1 = random_tangent_vector(rng, 1)
        d = d_compose(gamma, eta, g1, e1)
        x = rng.uniform(-2, 2, 1)

        def curve(t):
            gt = Sum([gamma.phi, Scaled(t, g1)])
            et = Sum([eta.phi, Scaled(t, e1)])
            from diffw.jets import shift_compose

            return shift_compose(gt, et).value(x)

        fd = fd_directional(curve, 0.0, 1e-6)
        assert np.max(np.abs(d.value(x) - fd)) < 1e-8


def test_d_invert_at_zero_is_negation(dom1, rng):
    zero = ChartDiffeo.from_map(zero_map(1, 1), dom1)
    phi1 = random_tangent_vector(rng, 1)
    d = d_invert(zero, phi1)
    X = dom1.grid[::10]
    assert np.max(np.abs(d.value_batch(X) + phi1.value_batch(X))) < 1e-14


def test_d_invert_linear_matches_finite_differences(dom1, rng):
    A = np.array([[0.5]])
    B = np.array([[0.3]])
    lin = ChartDiffeo.from_map(Affine(A), dom1)
    d = d_invert(lin, Affine(B))
    x = np.array([0.7])

    def curve(t):
        ct = ChartDiffeo.from_map(Affine(A + t * B), dom1)
        return invert_chart(ct).phi.value(x)

    fd = fd_directional(curve, 0.0, 1e-5)
    assert np.max(np.abs(d.value(x) - fd)) < 1e-6


def test_d_invert_bump_matches_finite_differences(dom1, rng):
    phi = random_chart(rng, 1, 0.5, dom1)
    phi1 = random_tangent_vector(rng, 1)
    d = d_invert(phi, phi1)
    for x0 in (np.array([-0.8]), np.array([0.4]), np.array([1.5])):
        def curve(t):
            ct = ChartDiffeo.from_map(Sum([phi.phi, Scaled(t, phi1)]), dom1)
            return invert_chart(ct).phi.value(x0)

        fd = fd_directional(curve, 0.0, 1e-5)
        assert np.max(np.abs(d.value(x0) - fd)) < 1e-5


def test_tangent_multiply_with_zero_vectors(dom1, rng):
    a = TangentElement(random_chart(rng, 1, 0.5, dom1), zero_map(1, 1))
    b = TangentElement(random_chart(rng, 1, 0.5, dom1), zero_map(1, 1))
    prod = tangent_multiply(a, b)
    X = dom1.grid[::10]
    expect = compose_chart(a.base, b.base).phi.value_batch(X)
    assert np.max(np.abs(prod.base.phi.value_batch(X) - expect)) == 0.0
    assert np.max(np.abs(prod.vector.value_batch(X))) == 0.0


def test_tangent_multiply_matches_finite_differences(dom1, rng):
    ga = random_chart(rng, 1, 0.5, dom1)
    et = random_chart(rng, 1, 0.4, dom1)
    g1 = random_tangent_vector(rng, 1)
    e1 = random_tangent_vector(rng, 1)
    prod = tangent_multiply(TangentElement(ga, g1), TangentElement(et, e1))
    x = np.array([0.35])

    def curve(t):
        gt = ChartDiffeo.from_map(Sum([ga.phi, Scaled(t, g1)]), dom1)
        tt = ChartDiffeo.from_map(Sum([et.phi, Scaled(t, e1)]), dom1)
        return compose_chart(gt, tt).phi.value(x)

    fd = fd_directional(curve, 0.0, 1e-6)
    assert np.max(np.abs(prod.vector.value(x) - fd)) < 1e-8


# ---------------------------------------------------------------------------
# axioms, decay, estimates
# ---------------------------------------------------------------------------

def test_axioms_trivial_on_zero(dom1):
    zero = ChartDiffeo.from_map(zero_map(1, 1), dom1)
    records = verify_group_axioms([zero], dom1)
    assert all(r["residual"] == 0.0 for r in records)


def test_axioms_constants_associate_exactly(dom1):
    # integer-valued constants add without rounding
    a = ChartDiffeo.from_map(constant([1.0], 1), dom1)
    b = ChartDiffeo.from_map(constant([2.0], 1), dom1)
    c = ChartDiffeo.from_map(constant([0.5], 1), dom1)
    records = {r["axiom"]: r for r in verify_group_axioms([a, b, c], dom1)}
    assert records["associativity"]["residual"] == 0.0


def test_axioms_random_bumps(dom1, rng):
    samples = [random_chart(rng, 1, float(t), dom1) for t in rng.uniform(0.2, 0.8, 8)]
    records = verify_group_axioms(samples, dom1)
    assert all(r["residual"] < 1e-8 for r in records)
    assert {r["axiom"] for r in records} == {
        "identity_left",
        "identity_right",
        "associativity",
        "inverse_left",
        "inverse_right",
    }


def test_decaying_diffeo_examples(dom1):
    fam = WeightFamily.polynomial(2)
    assert is_decaying_diffeo(bump_chart(dom1, sigma=0.8, amp=0.35), fam)
    zero = ChartDiffeo.from_map(zero_map(1, 1), dom1)
    assert is_decaying_diffeo(zero, fam)
    wobble = ChartDiffeo.from_map(SineProfile(0.5, 1.0), dom1)
    assert wobble.in_contraction_region
    assert not is_decaying_diffeo(wobble, WeightFamily([ONE, Weight("norm_power", 1)]))


def test_decaying_diffeos_closed_under_conjugation(dom1):
    # conjugating by a bounded non-decaying diffeomorphism keeps decay
    fam = WeightFamily.polynomial(2)
    psi = ChartDiffeo.from_map(SineProfile(0.3, 1.0), dom1)
    phi = bump_chart(dom1, center=0.2, sigma=0.7, amp=0.3)
    conj = conjugate(psi, phi)
    assert is_decaying_diffeo(conj, fam)


def test_weighted_inversion_bound(dom1, rng):
    for _ in range(10):
        c = random_chart(rng, 1, float(rng.uniform(0.3, 0.7)), dom1)
        report = weighted_inversion_check(c, Weight("poly_shifted", 2), 2.0, dom1)
        assert report["pass"], report


def test_composition_lipschitz_bound(dom1, rng):
    for _ in range(10):
        maps = [random_chart(rng, 1, float(rng.uniform(0.2, 0.8)), dom1).phi for _ in range(4)]
        report = composition_lipschitz_check(*maps, Weight("poly_shifted", 1), dom1)
        assert report["pass"], report
