"""Independent numerical oracles: finite differences, Newton inversion,
series matrix exponential, quadrature, dense sup estimation.

Everything here operates on plain callables and arrays so the routines stay
independent of the primary evaluation paths they are used to cross-check.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "fd_directional",
    "fd_jet_from_values",
    "fd_tensor_derivative",
    "newton_point_inverse",
    "quasi_inverse_bridge",
    "expm_series",
    "simpson",
    "dense_sup_1d",
]


def _steps(x: np.ndarray, order: int) -> float:
    # First-order steps balance truncation against round-off at ~1e-5; for
    # second derivatives the noise floor eps/h^2 forces a larger step.
    scale = max(1.0, float(np.linalg.norm(x)))
    return (1e-5 if order == 1 else 2e-4) * scale


def fd_directional(fn, t0: float = 0.0, h: float = 1e-6):
    """Richardson-refined central difference of a curve t -> array at t0."""
    d1 = (np.asarray(fn(t0 + h)) - np.asarray(fn(t0 - h))) / (2 * h)
    d2 = (np.asarray(fn(t0 + 2 * h)) - np.asarray(fn(t0 - 2 * h))) / (4 * h)
    return (4.0 * d1 - d2) / 3.0


def _fd_gradient(fn, x: np.ndarray, h: float) -> np.ndarray:
    n = x.size
    cols = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        a = (np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2 * h)
        b = (np.asarray(fn(x + 2 * e)) - np.asarray(fn(x - 2 * e))) / (4 * h)
        cols.append((4.0 * a - b) / 3.0)
    return np.stack(cols, axis=-1)


def _fd_hessian(fn, x: np.ndarray, h: float) -> np.ndarray:
    n = x.size
    f0 = np.asarray(fn(x), dtype=float)

    def second(step):
        H = np.empty(f0.shape + (n, n))
        for i in range(n):
            ei = np.zeros(n)
            ei[i] = step
            H[..., i, i] = (np.asarray(fn(x + ei)) - 2 * f0 + np.asarray(fn(x - ei))) / step ** 2
            for j in range(i + 1, n):
                ej = np.zeros(n)
                ej[j] = step
                mixed = (
                    np.asarray(fn(x + ei + ej))
                    - np.asarray(fn(x + ei - ej))
                    - np.asarray(fn(x - ei + ej))
                    + np.asarray(fn(x - ei - ej))
                ) / (4 * step ** 2)
                H[..., i, j] = mixed
                H[..., j, i] = mixed
        return H

    return (16.0 * second(h) - second(2 * h)) / 15.0


def fd_jet_from_values(fn, x, order: int, h1: float | None = None, h2: float | None = None):
    """Jets of a black-box map from central differences of its values."""
    x = np.asarray(x, dtype=float)
    out = [np.asarray(fn(x), dtype=float)]
    if order >= 1:
        out.append(_fd_gradient(fn, x, h1 or _steps(x, 1)))
    if order >= 2:
        out.append(_fd_hessian(fn, x, h2 or _steps(x, 2)))
    if order >= 3:
        raise ValueError("finite-difference jets stop at order 2")
    return out


def fd_tensor_derivative(tensor_fn, x, h: float = 1e-4):
    """Derivative of an analytic tensor field, one extra trailing slot.

    Used to extend exact order-2 jets to order 3; the result is symmetrized
    over all slots since a true third derivative tensor is symmetric.
    """
    x = np.asarray(x, dtype=float)
    scale = max(1.0, float(np.linalg.norm(x))) * h
    cols = []
    for i in range(x.size):
        e = np.zeros(x.size)
        e[i] = scale
        cols.append((np.asarray(tensor_fn(x + e)) - np.asarray(tensor_fn(x - e))) / (2 * scale))
    T = np.stack(cols, axis=-1)
    lead = tuple(range(T.ndim - 3))
    base = T.ndim - 3
    perms = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    acc = np.zeros_like(T)
    for p in perms:
        acc += np.transpose(T, lead + tuple(base + i for i in p))
    return acc / 6.0


def newton_point_inverse(fn, jac, y, x0=None, tol: float = 1e-13, max_iter: int = 60):
    """Solve fn(x) = y by Newton's method; independent of any contraction."""
    y = np.asarray(y, dtype=float)
    x = np.array(y if x0 is None else x0, dtype=float)
    for _ in range(max_iter):
        r = np.asarray(fn(x)) - y
        if np.linalg.norm(r) < tol:
            return x
        x = x - np.linalg.solve(np.atleast_2d(jac(x)), r)
    return x


def quasi_inverse_bridge(A) -> np.ndarray:
    """Unital-algebra route to the quasi-inverse: (A - e)^{-1} + e.

    Oracle only; the production path uses the Neumann series.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    eye = np.eye(A.shape[0])
    return np.linalg.inv(A - eye) + eye


def expm_series(A: np.ndarray) -> np.ndarray:
    """Matrix exponential by Taylor series with scaling and squaring."""
    A = np.asarray(A, dtype=float)
    nrm = np.linalg.norm(A, 2)
    s = max(0, int(np.ceil(np.log2(nrm / 0.25))) if nrm > 0.25 else 0)
    B = A / 2 ** s
    term = np.eye(A.shape[0])
    total = term.copy()
    for k in range(1, 40):
        term = term @ B / k
        total += term
        if np.linalg.norm(term, 2) < 1e-20:
            break
    for _ in range(s):
        total = total @ total
    return total


def simpson(fn, a: float = 0.0, b: float = 1.0, panels: int = 256) -> float:
    """Composite Simpson quadrature on [a, b]."""
    t = np.linspace(a, b, 2 * panels + 1)
    vals = np.asarray([fn(ti) for ti in t], dtype=float)
    w = np.ones(t.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float((b - a) / (6 * panels) * np.tensordot(w, vals, axes=(0, 0)))


def dense_sup_1d(fn, lo: float, hi: float, points: int = 1_000_000) -> float:
    """Brute-force sup of |fn| over a dense 1-d grid."""
    x = np.linspace(lo, hi, points)
    return float(np.max(np.abs(fn(x))))
