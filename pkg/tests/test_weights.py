import numpy as np
import pytest

from diffw.errors import SuiteConfigError, UnsupportedOrderError
from diffw.jets import GaussianBump, Scaled, SineProfile, Sum, constant, identity, zero_map
from diffw.oracles import dense_sup_1d
from diffw.weights import (
    ONE,
    SampleDomain,
    Weight,
    WeightFamily,
    bcr_check,
    is_decaying,
    seminorm,
)

# sup_x |d/dx exp(-x^2)| = sqrt(2/e), frozen from the dense-grid oracle below
GAUSS_DERIVATIVE_SUP = 0.8577638849607068


def test_seminorm_zero_map(dom1):
    for order in range(3):
        assert seminorm(zero_map(1, 1), ONE, order, dom1) == 0.0


def test_seminorm_identity_first_order(dom1):
    assert seminorm(identity(1), ONE, 1, dom1) == pytest.approx(1.0, abs=1e-14)


def test_seminorm_gaussian_dense_sup_oracle():
    gauss = GaussianBump([0.0], 1.0 / np.sqrt(2.0), [1.0])  # exp(-x^2)
    oracle = dense_sup_1d(lambda x: -2.0 * x * np.exp(-x * x), -8.0, 8.0)
    assert oracle == pytest.approx(GAUSS_DERIVATIVE_SUP, abs=1e-9)
    dense = SampleDomain(1, 8.0, 20001)
    assert seminorm(gauss, ONE, 1, dense) == pytest.approx(GAUSS_DERIVATIVE_SUP, abs=1e-4)


def test_seminorm_monotone_in_weight(dom1, rng):
    # |x|^d <= (1+|x|)^d pointwise, so the seminorms must be ordered
    for _ in range(10):
        gamma = GaussianBump([rng.uniform(-1, 1)], rng.uniform(0.5, 1.2), [rng.uniform(0.1, 1.0)])
        for d in (1, 2, 3):
            lo = seminorm(gamma, Weight("norm_power", d), 0, dom1)
            hi = seminorm(gamma, Weight("poly_shifted", d), 0, dom1)
            assert lo <= hi + 1e-12


def test_seminorm_homogeneity_and_triangle(dom1, rng):
    for _ in range(10):
        g1 = GaussianBump([rng.uniform(-1, 1)], rng.uniform(0.5, 1.2), [rng.uniform(0.1, 1.0)])
        g2 = GaussianBump([rng.uniform(-1, 1)], rng.uniform(0.5, 1.2), [rng.uniform(0.1, 1.0)])
        c = rng.uniform(-3.0, 3.0)
        for order in (0, 1):
            s1 = seminorm(g1, ONE, order, dom1)
            s2 = seminorm(g2, ONE, order, dom1)
            assert seminorm(Scaled(c, g1), ONE, order, dom1) == pytest.approx(abs(c) * s1, rel=1e-12)
            assert seminorm(Sum([g1, g2]), ONE, order, dom1) <= s1 + s2 + 1e-12


def test_grid_refinement_never_decreases(dom1, rng):
    gamma = GaussianBump([0.3], 0.9, [0.8])
    for order in (0, 1, 2):
        coarse = seminorm(gamma, Weight("poly_shifted", 1), order, dom1)
        fine = seminorm(gamma, Weight("poly_shifted", 1), order, dom1.refined(2))
        assert fine >= coarse


def test_seminorm_rejects_unsupported_order(dom1):
    with pytest.raises(UnsupportedOrderError):
        seminorm(identity(1), ONE, 4, dom1)


def test_is_decaying_gaussian_beats_polynomials(dom1):
    fam = WeightFamily([ONE, Weight("norm_power", 2), Weight("norm_power", 4)])
    report = is_decaying(GaussianBump([0.0], 1.0, [1.0]), fam, 2, dom1)
    assert report.decaying
    # tail table covers every weight/order pair at every radius
    assert len(report.rows) == 9
    assert all(len(r["tails"]) == len(dom1.tail_radii) for r in report.rows)


def test_is_decaying_rejects_constant(dom1):
    report = is_decaying(constant([0.5], 1), WeightFamily([ONE]), 0, dom1)
    assert not report.decaying
    assert report.rows[0]["tails"][-1] == pytest.approx(0.5)


def test_is_decaying_rejects_sine(dom1):
    assert not is_decaying(SineProfile(1.0, 1.0), WeightFamily([ONE]), 0, dom1)


def test_decaying_set_is_a_vector_space(dom1):
    fam = WeightFamily([ONE, Weight("norm_power", 2)])
    a = GaussianBump([0.0], 0.8, [0.5])
    b = GaussianBump([0.3], 0.7, [0.4])
    assert is_decaying(a, fam, 2, dom1).decaying
    assert is_decaying(b, fam, 2, dom1).decaying
    assert is_decaying(Sum([a, b]), fam, 2, dom1).decaying
    assert is_decaying(Scaled(-2.5, a), fam, 2, dom1).decaying


def test_decay_report_serializes(dom1):
    report = is_decaying(GaussianBump([0.0], 0.8, [0.5]), WeightFamily([ONE]), 1, dom1)
    recs = report.to_records()
    assert {"weight", "order", "value", "radii", "tails"} <= set(recs[0])


def test_bcr_singleton_family_fails_tail_domination(dom1):
    report = bcr_check(WeightFamily([ONE]), dom1)
    assert report.w1 and report.w2
    assert not report.w3
    assert report.witnesses["1"] is None


def test_bcr_polynomial_family_witnesses(dom1):
    report = bcr_check(WeightFamily.polynomial(3), dom1)
    assert report.w1 and report.w2
    # every non-top degree is dominated by the next one; the top has no witness
    assert report.witnesses["1"] == "(1+|x|)^1"
    assert report.witnesses["(1+|x|)^1"] == "(1+|x|)^2"
    assert report.witnesses["(1+|x|)^2"] == "(1+|x|)^3"
    assert report.witnesses["(1+|x|)^3"] is None
    assert not report.w3


def test_bcr_top_degree_alone_fails(dom1):
    report = bcr_check(WeightFamily([Weight("poly_shifted", 3)], contains_one=False), dom1)
    assert not report.w3


def test_weight_family_from_config():
    fam = WeightFamily.from_config(
        [{"kind": "constant_one"}, {"kind": "poly_shifted", "degree": 2}]
    )
    assert fam.contains_one
    assert [w.name for w in fam] == ["1", "(1+|x|)^2"]


def test_weight_family_one_flag_is_checked():
    with pytest.raises(SuiteConfigError):
        WeightFamily([Weight("poly_shifted", 1)], contains_one=True)


def test_custom_weight_must_stay_finite(dom1):
    bad = Weight("custom", evaluator=lambda X: np.full(len(X), np.inf), label="bad")
    with pytest.raises(ValueError):
        bad(dom1.grid)


def test_sample_domain_validation():
    with pytest.raises(Exception):
        SampleDomain(4)
    with pytest.raises(SuiteConfigError):
        SampleDomain(1, tail_radii=(3.0, 2.0))
    with pytest.raises(SuiteConfigError):
        SampleDomain(1, box_halfwidth=4.0, tail_radii=(2.0, 5.0))
    dom = SampleDomain(2)
    assert dom.points_per_axis == 61
    assert dom.grid.shape == (61 * 61, 2)


def test_refined_grid_contains_original_points(dom1):
    fine = dom1.refined(2)
    assert set(map(float, dom1.grid[:, 0])) <= set(map(float, fine.grid[:, 0]))
