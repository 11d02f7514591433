"""Smooth maps with derivative tensors (jets) and operator-norm estimation.

Shape conventions
-----------------
A map carries ``dim_in = n`` and an ``output_shape`` such as ``(m,)`` for
vector-valued maps or ``(m, k)`` for matrix-valued ones.  The jet of order
``l`` at a point is an ndarray of shape ``output_shape + (n,) * l``; order 0
is the plain value.  Batched variants prepend one sample axis.  Derivative
tensors of analytic catalog maps are symmetric in their input slots; the
matrix-valued case is normed by folding the matrix column axis into an extra
input slot, which realizes the usual isometric identification of
operator-valued multilinear maps with higher-order ones (no separate
reshaping API is exposed).

Returned arrays may be cached; callers must not mutate them.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, SuiteConfigError, UnsupportedOrderError
from .oracles import fd_jet_from_values, fd_tensor_derivative

__all__ = [
    "SmoothMap",
    "Affine",
    "GaussianBump",
    "SineProfile",
    "PolyGauss",
    "Sum",
    "Scaled",
    "Composed",
    "FDWrapped",
    "DerivativeMap",
    "TensorProfile",
    "PointwiseProduct",
    "SuperposedMultilinear",
    "identity",
    "constant",
    "zero_map",
    "full_map",
    "compose",
    "shift_compose",
    "matvec",
    "matmat",
    "multilinear_superpose",
    "opnorm_estimate",
    "opnorm_batch",
    "map_from_config",
]

# Deterministic probe source for norm estimation: fresh generator per call so
# repeated estimates of the same tensor agree bit for bit.
_PROBE_SEED = 0x5EED


def _as_point(x, n):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape != (n,):
        raise DimensionMismatchError(f"expected point in R^{n}, got shape {x.shape}")
    return x


class SmoothMap:
    """A map R^n -> R^(output_shape) with jet evaluation up to order 3.

    Subclasses implement ``jet_batch``; everything else derives from it.
    Instances are immutable after construction and safe to evaluate
    concurrently at distinct points.
    """

    dim_in: int
    output_shape: tuple
    supported_order: int = 3

    @property
    def dim_out(self) -> int:
        return int(np.prod(self.output_shape))

    def jet_batch(self, X: np.ndarray, order: int) -> list[np.ndarray]:
        raise NotImplementedError

    def _check_order(self, order: int) -> None:
        if order < 0 or order > self.supported_order:
            raise UnsupportedOrderError(
                f"{type(self).__name__} supports jets up to order "
                f"{self.supported_order}, got {order}"
            )

    def value_batch(self, X: np.ndarray) -> np.ndarray:
        return self.jet_batch(np.asarray(X, dtype=float), 0)[0]

    def value(self, x) -> np.ndarray:
        x = _as_point(x, self.dim_in)
        return self.value_batch(x[None, :])[0]

    def jet(self, x, order: int) -> list[np.ndarray]:
        x = _as_point(x, self.dim_in)
        return [t[0] for t in self.jet_batch(x[None, :], order)]

    # Small algebra so formulas read like the math they implement.
    def __add__(self, other: "SmoothMap") -> "SmoothMap":
        return Sum([self, other])

    def __neg__(self) -> "SmoothMap":
        return Scaled(-1.0, self)

    def __sub__(self, other: "SmoothMap") -> "SmoothMap":
        return Sum([self, Scaled(-1.0, other)])

    def __mul__(self, c) -> "SmoothMap":
        return Scaled(float(c), self)

    __rmul__ = __mul__


class Affine(SmoothMap):
    """x -> A x + b.  Second and higher derivatives vanish identically."""

    def __init__(self, matrix, offset=None):
        self.matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        m, n = self.matrix.shape
        self.offset = (
            np.zeros(m) if offset is None else np.asarray(offset, dtype=float).reshape(m)
        )
        self.dim_in = n
        self.output_shape = (m,)

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.asarray(X, dtype=float)
        N = X.shape[0]
        m, n = self.matrix.shape
        out = [X @ self.matrix.T + self.offset]
        if order >= 1:
            out.append(np.broadcast_to(self.matrix, (N, m, n)).copy())
        for l in range(2, order + 1):
            out.append(np.zeros((N, m) + (n,) * l))
        return out


def identity(n: int) -> Affine:
    return Affine(np.eye(n))


def constant(vec, dim_in: int) -> Affine:
    vec = np.atleast_1d(np.asarray(vec, dtype=float))
    return Affine(np.zeros((vec.size, dim_in)), vec)


def zero_map(dim_in: int, dim_out: int) -> Affine:
    return Affine(np.zeros((dim_out, dim_in)))


def _gauss_scalar_jets(U, s, order):
    """Jets of exp(-s*|u|^2/2) as a function of u, batched over rows of U."""
    N, n = U.shape
    g = np.exp(-0.5 * s * np.einsum("ni,ni->n", U, U))
    jets = [g]
    if order >= 1:
        jets.append(-s * U * g[:, None])
    if order >= 2:
        eye = np.eye(n)
        quad = s * s * np.einsum("ni,nj->nij", U, U) - s * eye
        jets.append(quad * g[:, None, None])
    if order >= 3:
        uuu = np.einsum("ni,nj,nk->nijk", U, U, U)
        eye = np.eye(n)
        lin = (
            np.einsum("ij,nk->nijk", eye, U)
            + np.einsum("ik,nj->nijk", eye, U)
            + np.einsum("jk,ni->nijk", eye, U)
        )
        jets.append((-(s ** 3) * uuu + s * s * lin) * g[:, None, None, None])
    return jets


class GaussianBump(SmoothMap):
    """amplitude * exp(-|x - center|^2 / (2 sigma^2)) with closed-form jets."""

    def __init__(self, center, sigma: float, amplitude):
        self.center = np.atleast_1d(np.asarray(center, dtype=float))
        self.sigma = float(sigma)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        self.amplitude = np.atleast_1d(np.asarray(amplitude, dtype=float))
        self.dim_in = self.center.size
        self.output_shape = self.amplitude.shape

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.asarray(X, dtype=float)
        U = X - self.center
        scal = _gauss_scalar_jets(U, 1.0 / self.sigma ** 2, order)
        amp = self.amplitude
        out = []
        for l, g in enumerate(scal):
            g_exp = g.reshape((X.shape[0],) + (1,) * amp.ndim + (self.dim_in,) * l)
            out.append(amp.reshape((1,) + amp.shape + (1,) * l) * g_exp)
        return out


class SineProfile(SmoothMap):
    """One-dimensional a*sin(omega*x + phase)."""

    dim_in = 1
    output_shape = (1,)

    def __init__(self, amplitude: float, omega: float, phase: float = 0.0):
        self.amplitude = float(amplitude)
        self.omega = float(omega)
        self.phase = float(phase)

    def jet_batch(self, X, order):
        self._check_order(order)
        t = np.asarray(X, dtype=float)[:, 0] * self.omega + self.phase
        a, w = self.amplitude, self.omega
        cycle = [a * np.sin(t), a * w * np.cos(t),
                 -a * w ** 2 * np.sin(t), -a * w ** 3 * np.cos(t)]
        return [cycle[l].reshape((-1, 1) + (1,) * l) for l in range(order + 1)]


class PolyGauss(SmoothMap):
    """One-dimensional p(x) * exp(-x^2/(2 sigma^2)) for a polynomial p."""

    dim_in = 1
    output_shape = (1,)

    def __init__(self, coefficients, sigma: float):
        # coefficients in increasing order: c0 + c1 x + c2 x^2 + ...
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.sigma = float(sigma)

    def jet_batch(self, X, order):
        self._check_order(order)
        x = np.asarray(X, dtype=float)[:, 0]
        polys = [np.polynomial.polynomial.Polynomial(self.coefficients)]
        for _ in range(order):
            polys.append(polys[-1].deriv())
        p = [q(x) for q in polys]
        g = _gauss_scalar_jets(x[:, None], 1.0 / self.sigma ** 2, order)
        g = [t.reshape(x.shape[0], -1)[:, 0] for t in g]
        binom = {0: [1], 1: [1, 1], 2: [1, 2, 1], 3: [1, 3, 3, 1]}
        out = []
        for l in range(order + 1):
            tot = sum(binom[l][j] * p[l - j] * g[j] for j in range(l + 1))
            out.append(tot.reshape((-1, 1) + (1,) * l))
        return out


class Sum(SmoothMap):
    def __init__(self, terms):
        terms = list(terms)
        base = terms[0]
        for t in terms[1:]:
            if t.dim_in != base.dim_in or t.output_shape != base.output_shape:
                raise DimensionMismatchError("sum terms must share dimensions")
        self.terms = terms
        self.dim_in = base.dim_in
        self.output_shape = base.output_shape
        self.supported_order = min(t.supported_order for t in terms)

    def jet_batch(self, X, order):
        self._check_order(order)
        jets = [t.jet_batch(X, order) for t in self.terms]
        return [sum(j[l] for j in jets) for l in range(order + 1)]

    def value_batch(self, X):
        return sum(t.value_batch(X) for t in self.terms)


class Scaled(SmoothMap):
    def __init__(self, factor: float, inner: SmoothMap):
        self.factor = float(factor)
        self.inner = inner
        self.dim_in = inner.dim_in
        self.output_shape = inner.output_shape
        self.supported_order = inner.supported_order

    def jet_batch(self, X, order):
        return [self.factor * t for t in self.inner.jet_batch(X, order)]

    def value_batch(self, X):
        return self.factor * self.inner.value_batch(X)


class Composed(SmoothMap):
    """outer at inner(x), with chain-rule jets.

    Orders 0-2 follow the chain rule exactly; order 3 falls back to finite
    differences of the analytic order-2 jets.  Single-point jets are cached
    per evaluation point because sup sweeps revisit the same grid.
    """

    def __init__(self, outer: SmoothMap, inner: SmoothMap):
        if inner.output_shape != (outer.dim_in,):
            raise DimensionMismatchError(
                f"cannot compose: inner produces {inner.output_shape}, "
                f"outer consumes R^{outer.dim_in}"
            )
        self.outer = outer
        self.inner = inner
        self.dim_in = inner.dim_in
        self.output_shape = outer.output_shape
        low = min(outer.supported_order, inner.supported_order)
        self.supported_order = 3 if low >= 2 else low
        self._cache: dict = {}

    def value_batch(self, X):
        return self.outer.value_batch(self.inner.value_batch(np.asarray(X, dtype=float)))

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.asarray(X, dtype=float)
        if order >= 3:
            low = self.jet_batch(X, 2)
            third = np.stack(
                [fd_tensor_derivative(lambda z: self.jet(z, 2)[2], x) for x in X]
            )
            return low + [third]
        inner_jets = self.inner.jet_batch(X, order)
        outer_jets = self.outer.jet_batch(inner_jets[0], order)
        out = [outer_jets[0]]
        if order >= 1:
            out.append(np.einsum("n...b,nbi->n...i", outer_jets[1], inner_jets[1]))
        if order >= 2:
            h = np.einsum(
                "n...bc,nbi,ncj->n...ij", outer_jets[2], inner_jets[1], inner_jets[1]
            )
            h += np.einsum("n...b,nbij->n...ij", outer_jets[1], inner_jets[2])
            out.append(h)
        return out

    def jet(self, x, order):
        x = _as_point(x, self.dim_in)
        key = (x.tobytes(), order)
        hit = self._cache.get(key)
        if hit is None:
            hit = [t[0] for t in self.jet_batch(x[None, :], order)]
            self._cache[key] = hit
        return hit


class FDWrapped(SmoothMap):
    """Black-box map given by an evaluator callback (point in, array out).

    Jets up to order 2 come from Richardson-refined central differences.
    """

    def __init__(self, fn, dim_in: int, output_shape: tuple):
        self.fn = fn
        self.dim_in = dim_in
        self.output_shape = tuple(output_shape)
        self.supported_order = 2

    def value_batch(self, X):
        X = np.asarray(X, dtype=float)
        return np.stack(
            [np.asarray(self.fn(x), dtype=float).reshape(self.output_shape) for x in X]
        )

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.asarray(X, dtype=float)
        single = lambda x: np.asarray(self.fn(x), dtype=float).reshape(self.output_shape)
        per_point = [fd_jet_from_values(single, x, order) for x in X]
        return [np.stack([p[l] for p in per_point]) for l in range(order + 1)]


class DerivativeMap(SmoothMap):
    """The derivative of a map, realized as a matrix-valued map.

    The order-l jet of ``D gamma`` is the order-(l+1) jet of ``gamma`` with
    the innermost derivative slot read as the matrix column axis; the arrays
    coincide, only the output shape is reinterpreted.
    """

    def __init__(self, inner: SmoothMap):
        self.inner = inner
        self.dim_in = inner.dim_in
        self.output_shape = inner.output_shape + (inner.dim_in,)
        self.supported_order = inner.supported_order - 1

    def jet_batch(self, X, order):
        self._check_order(order)
        return self.inner.jet_batch(X, order + 1)[1:]


class TensorProfile(SmoothMap):
    """profile(x) * T for a scalar profile map and a constant array T."""

    def __init__(self, profile: SmoothMap, tensor):
        if profile.output_shape != (1,):
            raise DimensionMismatchError("profile must be scalar-valued")
        self.profile = profile
        self.tensor = np.asarray(tensor, dtype=float)
        self.dim_in = profile.dim_in
        self.output_shape = self.tensor.shape
        self.supported_order = profile.supported_order

    def jet_batch(self, X, order):
        jets = self.profile.jet_batch(X, order)
        T = self.tensor
        out = []
        for l, g in enumerate(jets):
            scal = g.reshape((g.shape[0],) + (1,) * T.ndim + (self.dim_in,) * l)
            out.append(T.reshape((1,) + T.shape + (1,) * l) * scal)
        return out


class PointwiseProduct(SmoothMap):
    """Pointwise contraction a(x) @ b(x) for matrix@vector or matrix@matrix.

    Leibniz jets to order 2; order 3 falls back to finite differences.
    """

    def __init__(self, left: SmoothMap, right: SmoothMap):
        if left.dim_in != right.dim_in:
            raise DimensionMismatchError("factors live on different domains")
        if len(left.output_shape) != 2 or left.output_shape[1] != right.output_shape[0]:
            raise DimensionMismatchError(
                f"cannot contract {left.output_shape} with {right.output_shape}"
            )
        self.left = left
        self.right = right
        self.dim_in = left.dim_in
        self.output_shape = left.output_shape[:1] + right.output_shape[1:]
        low = min(left.supported_order, right.supported_order)
        self.supported_order = 3 if low >= 2 else low
        self._vec = len(right.output_shape) == 1

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.asarray(X, dtype=float)
        if order >= 3:
            low = self.jet_batch(X, 2)
            third = np.stack(
                [fd_tensor_derivative(lambda z: self.jet(z, 2)[2], x) for x in X]
            )
            return low + [third]
        A = self.left.jet_batch(X, order)
        B = self.right.jet_batch(X, order)
        r = "" if self._vec else "l"
        out = [np.einsum(f"nmk,nk{r}->nm{r}", A[0], B[0])]
        if order >= 1:
            d = np.einsum(f"nmki,nk{r}->nm{r}i", A[1], B[0])
            d += np.einsum(f"nmk,nk{r}i->nm{r}i", A[0], B[1])
            out.append(d)
        if order >= 2:
            h = np.einsum(f"nmkij,nk{r}->nm{r}ij", A[2], B[0])
            h += np.einsum(f"nmk,nk{r}ij->nm{r}ij", A[0], B[2])
            mixed = np.einsum(f"nmki,nk{r}j->nm{r}ij", A[1], B[1])
            h += mixed + np.swapaxes(mixed, -1, -2)
            out.append(h)
        return out

    def value_batch(self, X):
        va = self.left.value_batch(X)
        vb = self.right.value_batch(X)
        if self._vec:
            return np.einsum("nmk,nk->nm", va, vb)
        return va @ vb


class SuperposedMultilinear(SmoothMap):
    """b(gamma_1(x), ..., gamma_m(x)) for a constant multilinear form b.

    ``form`` has shape (z, d_1, ..., d_m) and pairs with the vector-valued
    factor maps.  The first jet is the sum over factors of b with one slot
    differentiated; the second adds the mixed terms, symmetrized.
    """

    def __init__(self, form, factors):
        factors = list(factors)
        m = len(factors)
        if not 1 <= m <= 3:
            raise DimensionMismatchError("supported arities are 1..3")
        self.form = np.asarray(form, dtype=float)
        if self.form.ndim != m + 1:
            raise DimensionMismatchError(
                f"form of arity {m} needs {m + 1} axes, got {self.form.ndim}"
            )
        for k, g in enumerate(factors):
            if g.output_shape != (self.form.shape[k + 1],):
                raise DimensionMismatchError(f"factor {k} mismatches form axis")
            if g.dim_in != factors[0].dim_in:
                raise DimensionMismatchError("factors live on different domains")
        self.factors = factors
        self.dim_in = factors[0].dim_in
        self.output_shape = (self.form.shape[0],)
        low = min(g.supported_order for g in factors)
        self.supported_order = 3 if low >= 2 else low

    def _contract(self, jets, orders, out_letters):
        m = len(self.factors)
        slots = "abc"[:m]
        args, script = [self.form], f"z{slots}"
        free = iter("ijk")
        for k in range(m):
            extra = "".join(next(free) for _ in range(orders[k]))
            script += f",n{slots[k]}{extra}"
            args.append(jets[k][orders[k]])
        return np.einsum(script + f"->nz{out_letters}", *args)

    def jet_batch(self, X, order):
        self._check_order(order)
        X = np.asarray(X, dtype=float)
        if order >= 3:
            low = self.jet_batch(X, 2)
            third = np.stack(
                [fd_tensor_derivative(lambda z: self.jet(z, 2)[2], x) for x in X]
            )
            return low + [third]
        m = len(self.factors)
        jets = [g.jet_batch(X, order) for g in self.factors]
        zeros = [0] * m
        out = [self._contract(jets, zeros, "")]
        if order >= 1:
            d = 0
            for k in range(m):
                o = list(zeros)
                o[k] = 1
                d = d + self._contract(jets, o, "i")
            out.append(d)
        if order >= 2:
            h = 0
            for k in range(m):
                o = list(zeros)
                o[k] = 2
                h = h + self._contract(jets, o, "ij")
            for k in range(m):
                for kk in range(k + 1, m):
                    o = list(zeros)
                    o[k], o[kk] = 1, 1
                    mixed = self._contract(jets, o, "ij")
                    h = h + mixed + np.swapaxes(mixed, -1, -2)
            out.append(h)
        return out


def compose(outer: SmoothMap, inner: SmoothMap) -> Composed:
    return Composed(outer, inner)


def full_map(phi: SmoothMap) -> SmoothMap:
    """The chart coordinate phi realized as the full map phi + id."""
    return Sum([phi, identity(phi.dim_in)])


def shift_compose(gamma: SmoothMap, eta: SmoothMap) -> Composed:
    """gamma composed with (eta + id), the workhorse of chart arithmetic."""
    return Composed(gamma, full_map(eta))


def matvec(matrix_map: SmoothMap, vector_map: SmoothMap) -> PointwiseProduct:
    return PointwiseProduct(matrix_map, vector_map)


def matmat(left: SmoothMap, right: SmoothMap) -> PointwiseProduct:
    return PointwiseProduct(left, right)


def multilinear_superpose(form, *factors) -> SuperposedMultilinear:
    return SuperposedMultilinear(form, factors)


# ---------------------------------------------------------------------------
# Operator norms
# ---------------------------------------------------------------------------

def _fold_output(T: np.ndarray, out_ndim: int, batched: bool = False) -> np.ndarray:
    """Fold a matrix-output column axis into an extra input slot.

    For matrix-valued maps the operator norm on the target is the spectral
    norm, so sup over unit inputs of |T(u...)|_op equals the vector-valued
    operator norm with one more slot.
    """
    if out_ndim == 1:
        return T
    if out_ndim == 2:
        return np.moveaxis(T, 2 if batched else 1, -1)
    raise UnsupportedOrderError("output tensors beyond matrices are not supported")


def _unit(v: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(v)
    return v / nrm if nrm > 0 else v


def _contract_except(T: np.ndarray, tup, slot: int) -> np.ndarray:
    """Contract every input slot but one, leaving an (m, d_slot) matrix."""
    k = len(tup)
    letters = "ijkl"[:k]
    script = "m" + letters
    args = [T]
    for j in range(k):
        if j != slot:
            script += f",{letters[j]}"
            args.append(tup[j])
    return np.einsum(script + "->m" + letters[slot], *args)


def _alternating_opnorm(T: np.ndarray, probes: int, sweeps: int) -> float:
    """Lower-bound estimate of sup |T(u_1,...,u_k)| over unit vectors.

    Alternates exact top-singular-vector updates slot by slot, restarted from
    deterministic random tuples and from the leading singular vectors of the
    unfoldings.
    """
    k = T.ndim - 1
    dims = T.shape[1:]
    rng = np.random.default_rng(_PROBE_SEED)
    best = 0.0
    if probes:
        letters = "ijkl"[:k]
        script = "m" + letters + "," + ",".join(f"p{c}" for c in letters) + "->pm"
        U = []
        for d in dims:
            block = rng.standard_normal((probes, d))
            U.append(block / np.linalg.norm(block, axis=1, keepdims=True))
        vals = np.einsum(script, T, *U)
        best = float(np.max(np.linalg.norm(vals, axis=1)))
    starts = [[_unit(rng.standard_normal(d)) for d in dims] for _ in range(4)]
    for slot in range(k):
        tup = [_unit(np.ones(d)) for d in dims]
        M = np.moveaxis(T, slot + 1, -1).reshape(-1, dims[slot])
        tup[slot] = np.linalg.svd(M, full_matrices=False)[2][0]
        starts.append(tup)
    for tup in starts:
        for _ in range(sweeps):
            for slot in range(k):
                M = _contract_except(T, tup, slot)
                _, s, vh = np.linalg.svd(M, full_matrices=False)
                tup[slot] = vh[0]
                best = max(best, float(s[0]))
    return best


def opnorm_estimate(T, out_ndim: int = 1, probes: int = 256, sweeps: int = 8) -> float:
    """Operator norm of a derivative tensor.

    Order 0 is the Euclidean (or spectral, for matrix values) norm and order
    1 the exact spectral norm.  For order >= 2 the result is a deterministic
    lower-bound estimate from random probe tuples plus alternating
    power-iteration refinement.
    """
    T = np.asarray(T, dtype=float)
    T = _fold_output(T, out_ndim)
    k = T.ndim - 1
    if k == 0:
        return float(np.linalg.norm(T))
    if k == 1:
        return float(np.linalg.svd(T, compute_uv=False)[0])
    return _alternating_opnorm(T, probes, sweeps)


def _batched_order2_opnorm(T: np.ndarray, sweeps: int = 6, probes: int = 32) -> np.ndarray:
    """sup_{|u|=|v|=1} |T(u, v)| for a batch of (m, d1, d2) tensors."""
    N, m, d1, d2 = T.shape
    unfold = np.moveaxis(T, 2, -1).reshape(N, m * d2, d1)
    u = np.linalg.svd(unfold, full_matrices=False)[2][:, 0, :]
    best = np.zeros(N)
    for _ in range(sweeps):
        Mu = np.einsum("nmij,ni->nmj", T, u)
        _, sv, vv = np.linalg.svd(Mu, full_matrices=False)
        best = np.maximum(best, sv[:, 0])
        v = vv[:, 0, :]
        Mv = np.einsum("nmij,nj->nmi", T, v)
        _, su, vu = np.linalg.svd(Mv, full_matrices=False)
        best = np.maximum(best, su[:, 0])
        u = vu[:, 0, :]
    if probes:
        rng = np.random.default_rng(_PROBE_SEED)
        U = rng.standard_normal((probes, d1))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        V = rng.standard_normal((probes, d2))
        V /= np.linalg.norm(V, axis=1, keepdims=True)
        vals = np.linalg.norm(np.einsum("nmij,pi,pj->npm", T, U, V), axis=2)
        best = np.maximum(best, vals.max(axis=1))
    return best


def opnorm_batch(T: np.ndarray, out_ndim: int = 1) -> np.ndarray:
    """Operator norms for a batch of tensors with leading sample axis."""
    T = np.asarray(T, dtype=float)
    T = _fold_output(T, out_ndim, batched=True)
    k = T.ndim - 2
    if k == 0:
        return np.linalg.norm(T, axis=-1)
    if k == 1:
        return np.linalg.svd(T, compute_uv=False)[..., 0]
    if k == 2:
        return _batched_order2_opnorm(T)
    return np.array([opnorm_estimate(t) for t in T])


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def map_from_config(cfg: dict) -> SmoothMap:
    """Build a catalog map from a structured ``{"kind": ..., params}`` block."""
    kind = cfg.get("kind")
    params = {k: v for k, v in cfg.items() if k != "kind"}
    if kind == "affine":
        return Affine(params["matrix"], params.get("offset"))
    if kind == "gaussian_bump":
        return GaussianBump(params["center"], params["sigma"], params["amplitude"])
    if kind == "sine_profile":
        return SineProfile(params["amplitude"], params["omega"], params.get("phase", 0.0))
    if kind == "poly_gauss":
        return PolyGauss(params["coefficients"], params["sigma"])
    if kind == "sum":
        return Sum([map_from_config(c) for c in params["terms"]])
    if kind == "scaled":
        return Scaled(params["factor"], map_from_config(params["inner"]))
    if kind == "composed":
        return Composed(map_from_config(params["outer"]), map_from_config(params["inner"]))
    if kind == "constant":
        return constant(params["value"], params["dim_in"])
    if kind == "zero":
        return zero_map(params["dim_in"], params["dim_out"])
    raise SuiteConfigError(f"unknown map kind {kind!r}")
