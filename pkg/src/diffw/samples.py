"""Deterministic random catalogs shared by the verification suites and the
test suite.  Every builder takes an explicit generator so a fixed seed fixes
the whole report."""

from __future__ import annotations

import numpy as np

from .diff_group import ChartDiffeo
from .jets import GaussianBump, Scaled, SmoothMap, Sum, TensorProfile
from .mapping_group import MappingElement, MatrixGroup
from .weights import ONE, SampleDomain, default_domain, seminorm

__all__ = [
    "random_bump",
    "random_chart",
    "random_tangent_vector",
    "random_matrix_with_norm",
    "so3_direction",
    "random_so3_element",
]


def random_bump(rng: np.random.Generator, dim: int, amp_scale: float = 0.3) -> SmoothMap:
    center = rng.uniform(-1.0, 1.0, size=dim)
    sigma = rng.uniform(0.6, 1.0)
    amp = rng.standard_normal(dim)
    amp *= amp_scale * rng.uniform(0.3, 1.0) / np.linalg.norm(amp)
    return GaussianBump(center, sigma, amp)


def random_chart(
    rng: np.random.Generator,
    dim: int,
    target_norm11: float,
    domain: SampleDomain | None = None,
    bumps: int = 2,
) -> ChartDiffeo:
    """A chart coordinate rescaled to an exact first-order norm.

    Sums a couple of Gaussian bumps and scales the sum so that the cached
    |phi|_{1,1} equals ``target_norm11`` (seminorms are homogeneous)."""
    domain = domain or default_domain(dim)
    raw = Sum([random_bump(rng, dim) for _ in range(bumps)])
    measured = seminorm(raw, ONE, 1, domain)
    return ChartDiffeo.from_map(Scaled(target_norm11 / measured, raw), domain)


def random_tangent_vector(rng: np.random.Generator, dim: int, scale: float = 0.3) -> SmoothMap:
    return random_bump(rng, dim, amp_scale=scale)


def random_matrix_with_norm(rng: np.random.Generator, n: int, norm: float) -> np.ndarray:
    A = rng.standard_normal((n, n))
    return A * (norm / np.linalg.norm(A, 2))


def so3_direction(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0.0]])


def random_so3_element(
    rng: np.random.Generator,
    amplitude: float,
    family,
    domain: SampleDomain,
) -> MappingElement:
    group = MatrixGroup("SO3", 3)
    profile = GaussianBump(
        [rng.uniform(-1.0, 1.0) for _ in range(domain.dimension)],
        rng.uniform(0.7, 1.0),
        [amplitude * rng.uniform(0.5, 1.0)],
    )
    return MappingElement(group, TensorProfile(profile, so3_direction(rng)), family, 2, domain)
