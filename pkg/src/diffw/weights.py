"""Weight functions, weight families, weighted seminorms and decay tests.

The seminorm of order ``l`` is the sup over the domain of ``|f(x)|`` times
the operator norm of the order-``l`` derivative tensor.  Sups over the
unbounded domain are estimated as maxima over a uniform grid on a box
``[-R, R]^n`` together with a list of tail radii used for decay questions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, SuiteConfigError, UnsupportedOrderError
from .jets import SmoothMap, opnorm_batch

__all__ = [
    "Weight",
    "WeightFamily",
    "SampleDomain",
    "default_domain",
    "seminorm",
    "weighted_profile",
    "is_decaying",
    "DecayReport",
    "bcr_check",
    "BCRReport",
]

_DEFAULT_POINTS = {1: 201, 2: 61, 3: 25}


@dataclass(frozen=True)
class Weight:
    """A finite real-valued weight function on R^n.

    Kinds: ``constant_one``; ``norm_power`` for |x|^d; ``poly_shifted`` for
    (1+|x|)^d; ``custom`` with a vectorized evaluator.  Extended-real weights
    are excluded by construction.
    """

    kind: str
    degree: int = 0
    evaluator: object = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("constant_one", "norm_power", "poly_shifted", "custom"):
            raise SuiteConfigError(f"unknown weight kind {self.kind!r}")
        if self.kind == "custom" and self.evaluator is None:
            raise SuiteConfigError("custom weights need an evaluator")
        if self.degree < 0:
            raise SuiteConfigError("weight degree must be nonnegative")

    @property
    def name(self) -> str:
        if self.kind == "constant_one":
            return "1"
        if self.kind == "norm_power":
            return f"|x|^{self.degree}"
        if self.kind == "poly_shifted":
            return f"(1+|x|)^{self.degree}"
        return self.label or "custom"

    def __call__(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        r = np.linalg.norm(X, axis=1)
        if self.kind == "constant_one":
            vals = np.ones_like(r)
        elif self.kind == "norm_power":
            vals = r ** self.degree
        elif self.kind == "poly_shifted":
            vals = (1.0 + r) ** self.degree
        else:
            vals = np.asarray(self.evaluator(X), dtype=float).reshape(r.shape)
        if not np.all(np.isfinite(vals)):
            raise ValueError(f"weight {self.name} produced non-finite values")
        return vals


ONE = Weight("constant_one")


@dataclass
class WeightFamily:
    """An ordered family of weights; the constant weight 1 is a member."""

    members: list = field(default_factory=lambda: [ONE])
    contains_one: bool = True

    def __post_init__(self):
        if self.contains_one and not any(
            w.kind == "constant_one" for w in self.members
        ):
            raise SuiteConfigError("family flagged as containing 1 but it does not")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    @classmethod
    def from_config(cls, entries) -> "WeightFamily":
        members = []
        for e in entries:
            members.append(Weight(e["kind"], int(e.get("degree", 0))))
        return cls(members, any(w.kind == "constant_one" for w in members))

    @classmethod
    def polynomial(cls, max_degree: int, shifted: bool = True) -> "WeightFamily":
        kind = "poly_shifted" if shifted else "norm_power"
        members = [ONE] + [Weight(kind, d) for d in range(1, max_degree + 1)]
        return cls(members)


@dataclass(frozen=True)
class SampleDomain:
    """Uniform grid on [-R, R]^n plus tail radii for decay questions."""

    dimension: int
    box_halfwidth: float = 8.0
    points_per_axis: int = 0
    tail_radii: tuple = (2.0, 4.5, 7.0)

    def __post_init__(self):
        if not 1 <= self.dimension <= 3:
            raise DimensionMismatchError("sample domains cover dimensions 1..3")
        if self.points_per_axis == 0:
            object.__setattr__(
                self, "points_per_axis", _DEFAULT_POINTS[self.dimension]
            )
        radii = tuple(float(r) for r in self.tail_radii)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise SuiteConfigError("tail radii must increase")
        if radii and radii[-1] > self.box_halfwidth:
            raise SuiteConfigError("tail radii must stay inside the sample box")
        object.__setattr__(self, "tail_radii", radii)

    @property
    def grid(self) -> np.ndarray:
        cached = getattr(self, "_grid", None)
        if cached is None:
            axes = [
                np.linspace(-self.box_halfwidth, self.box_halfwidth, self.points_per_axis)
            ] * self.dimension
            mesh = np.meshgrid(*axes, indexing="ij")
            cached = np.stack([m.ravel() for m in mesh], axis=1)
            object.__setattr__(self, "_grid", cached)
        return cached

    def refined(self, factor: int = 2) -> "SampleDomain":
        """Same box, (factor x) denser grid; point set contains the original."""
        return SampleDomain(
            self.dimension,
            self.box_halfwidth,
            (self.points_per_axis - 1) * factor + 1,
            self.tail_radii,
        )


def default_domain(dimension: int) -> SampleDomain:
    return SampleDomain(dimension)


def weighted_profile(gamma: SmoothMap, weight: Weight, order: int, domain: SampleDomain):
    """Per-grid-point values |f(x)| * opnorm(D^l gamma(x)); also the grid."""
    if order > 3:
        raise UnsupportedOrderError("seminorms are computed up to order 3")
    if gamma.dim_in != domain.dimension:
        raise DimensionMismatchError("map and domain dimensions differ")
    X = domain.grid
    tensor = gamma.jet_batch(X, order)[order]
    norms = opnorm_batch(tensor, out_ndim=len(gamma.output_shape))
    return weight(X) * norms, X


def seminorm(gamma: SmoothMap, weight: Weight, order: int, domain: SampleDomain) -> float:
    """Grid estimate of the weighted seminorm of the given order."""
    vals, _ = weighted_profile(gamma, weight, order, domain)
    return float(np.max(vals))


@dataclass
class DecayReport:
    decaying: bool
    rows: list  # one entry per (weight, order): full norm and tail sups

    def __bool__(self):
        return self.decaying

    def to_records(self):
        return [
            {
                "weight": r["weight"],
                "order": r["order"],
                "value": r["full"],
                "radii": list(r["radii"]),
                "tails": list(r["tails"]),
            }
            for r in self.rows
        ]


def is_decaying(
    gamma: SmoothMap,
    family: WeightFamily,
    k: int,
    domain: SampleDomain,
    decay_tol: float = 1e-6,
) -> DecayReport:
    """Decide membership in the decaying subspace on the sampled domain.

    For every weight and order the tail sup over |x| >= r must fall below
    ``decay_tol`` relative to the full-domain seminorm along the tail radii.
    """
    if k > 2:
        raise UnsupportedOrderError("decay is tested for orders up to 2")
    rows = []
    ok = True
    for w in family:
        for l in range(k + 1):
            vals, X = weighted_profile(gamma, w, l, domain)
            full = float(np.max(vals))
            radii = domain.tail_radii
            r_norm = np.linalg.norm(X, axis=1)
            tails = []
            for r in radii:
                mask = r_norm >= r
                tails.append(float(np.max(vals[mask])) if mask.any() else 0.0)
            passed = full == 0.0 or (tails and tails[-1] < decay_tol * full)
            ok = ok and passed
            rows.append(
                {
                    "weight": w.name,
                    "order": l,
                    "full": full,
                    "radii": radii,
                    "tails": tails,
                    "pass": bool(passed),
                }
            )
    return DecayReport(ok, rows)


@dataclass
class BCRReport:
    w1: bool
    w2: bool
    w3: bool
    witnesses: dict  # weight name -> witness weight name or None

    def as_dict(self):
        return {"W1": self.w1, "W2": self.w2, "W3": self.w3, "witnesses": self.witnesses}


def bcr_check(
    family: WeightFamily,
    domain: SampleDomain,
    decline_factor: float = 0.8,
    last_cap: float = 0.9,
) -> BCRReport:
    """Check the three weight-family conditions of the rapidly-decreasing
    framework on the sampled domain.

    The first condition is vacuous here since all weights are finite valued.
    The second asks for the constant weight as a pointwise smallest member.
    The third asks, for each member f1, for a witness f2 whose tail ratio
    sup f1/f2 tends to zero; on a finite radius list this is realized as a
    strictly declining ratio sequence that ends below ``last_cap`` and at no
    more than ``decline_factor`` times its start.
    """
    X = domain.grid
    r_norm = np.linalg.norm(X, axis=1)
    w1 = True
    has_one = any(w.kind == "constant_one" for w in family)
    w2 = has_one
    if has_one:
        for w in family:
            if np.min(w(X)) < 1.0 - 1e-12:
                w2 = False
                break
    witnesses = {}
    w3 = True
    for f1 in family:
        found = None
        v1 = f1(X)
        for f2 in family:
            v2 = f2(X)
            ratios = []
            for r in domain.tail_radii:
                mask = (r_norm >= r) & (v2 > 0)
                if not mask.any():
                    ratios = []
                    break
                ratios.append(float(np.max(v1[mask] / v2[mask])))
            if len(ratios) < 2:
                continue
            declining = all(b < a for a, b in zip(ratios, ratios[1:]))
            if declining and ratios[-1] <= decline_factor * ratios[0] and ratios[-1] < last_cap:
                found = f2.name
                break
        witnesses[f1.name] = found
        w3 = w3 and found is not None
    return BCRReport(w1, w2, w3, witnesses)
