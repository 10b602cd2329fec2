"""Hermitian d x d matrices in real coordinates, and spectral helpers.

Coordinates of a hermitian ``X`` (dimension ``d*d``): first the diagonal
entries ``X[k,k]``, then for every pair ``j < k`` in lexicographic order the
two numbers ``(Re X[j,k], Im X[j,k])``.  A coefficient vector ``g`` pairs with
``X`` as ``tr(F X)`` where ``F = functional_matrix(g)``.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError


def pairs(d: int):
    return [(j, k) for j in range(d) for k in range(j + 1, d)]


def side(n: int) -> int:
    d = math.isqrt(n)
    if d * d != n:
        raise DimensionError(f"{n} is not a square; matrix coordinates need n = d*d")
    return d


def to_matrix(h, d: int | None = None) -> np.ndarray:
    """Hermitian matrix with the given real coordinates."""
    h = [float(x) for x in h]
    if d is None:
        d = side(len(h))
    if len(h) != d * d:
        raise DimensionError(f"expected {d * d} coordinates, got {len(h)}")
    X = np.zeros((d, d), dtype=complex)
    for k in range(d):
        X[k, k] = h[k]
    pos = d
    for j, k in pairs(d):
        X[j, k] = complex(h[pos], h[pos + 1])
        X[k, j] = complex(h[pos], -h[pos + 1])
        pos += 2
    return X


def from_matrix(X) -> tuple:
    """Real coordinates of the hermitian part ``(X + X^*)/2``."""
    X = np.asarray(X, dtype=complex)
    d = X.shape[0]
    H = (X + X.conj().T) / 2
    out = [float(H[k, k].real) for k in range(d)]
    for j, k in pairs(d):
        out += [float(H[j, k].real), float(H[j, k].imag)]
    return tuple(out)


def split(X) -> tuple[tuple, tuple]:
    """Coordinates ``(x, y)`` with ``X = x + i y`` and ``x, y`` hermitian."""
    X = np.asarray(X, dtype=complex)
    re = (X + X.conj().T) / 2
    im = (X - X.conj().T) / 2j
    return from_matrix(re), from_matrix(im)


def join(x, y, d: int | None = None) -> np.ndarray:
    return to_matrix(x, d) + 1j * to_matrix(y, d)


def functional_matrix(g, d: int | None = None) -> np.ndarray:
    """``F`` hermitian with ``g . h == tr(F X_h)`` for every coordinate vector ``h``."""
    g = [float(x) for x in g]
    if d is None:
        d = side(len(g))
    F = np.zeros((d, d), dtype=complex)
    for k in range(d):
        F[k, k] = g[k]
    pos = d
    for j, k in pairs(d):
        F[j, k] = complex(g[pos], g[pos + 1]) / 2
        F[k, j] = np.conj(F[j, k])
        pos += 2
    return F


def inv_sqrt(E) -> np.ndarray:
    w, U = np.linalg.eigh(E)
    return (U * (1.0 / np.sqrt(w))) @ U.conj().T


def normalize(X, E) -> np.ndarray:
    """Congruence ``E^{-1/2} X E^{-1/2}`` carrying the unit ``E`` to the identity."""
    R = inv_sqrt(E)
    return R @ X @ R


def hermitian_parts(X):
    X = np.asarray(X, dtype=complex)
    return (X + X.conj().T) / 2, (X - X.conj().T) / 2j


def spectral_norm(H) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(H))))


def op_norm(X) -> float:
    return float(np.linalg.norm(np.asarray(X, dtype=complex), 2))


def absolute(H) -> np.ndarray:
    """``|H|`` for hermitian ``H``."""
    w, U = np.linalg.eigh(H)
    return (U * np.abs(w)) @ U.conj().T


def is_normal(X, tol: float) -> bool:
    X = np.asarray(X, dtype=complex)
    C = X @ X.conj().T - X.conj().T @ X
    return float(np.max(np.abs(C))) <= tol


def _stack_norms(A, B, thetas):
    Hs = np.cos(thetas)[:, None, None] * A[None] + np.sin(thetas)[:, None, None] * B[None]
    w = np.linalg.eigvalsh(Hs)
    return np.max(np.abs(w), axis=1)


def numerical_radius(X, tol: float = 1e-9):
    """Bracket ``(lower, upper, theta)`` for ``w(X) = max_theta ||Re(e^{-i theta} X)||``.

    ``lower`` is an attained value; ``upper`` is the grid maximum divided by
    ``cos(delta/2)``, valid because the numerical range lies inside the
    polygon cut out by the sampled support lines.
    """
    A, B = hermitian_parts(X)
    ub0 = spectral_norm(A) + spectral_norm(B)
    if ub0 == 0.0:
        return 0.0, 0.0, 0.0
    # support-line polygon overshoot is about delta^2/8 relative
    delta = math.sqrt(8.0 * max(tol, 1e-15) / (2.0 * ub0))
    m = max(16, int(math.ceil(math.pi / delta)))
    delta = math.pi / m
    thetas = np.arange(m) * delta
    vals = _stack_norms(A, B, thetas)
    j = int(np.argmax(vals))
    upper = float(vals[j]) / math.cos(delta / 2)

    def f(t):
        return float(_stack_norms(A, B, np.array([t]))[0])

    # golden-section refinement of the best grid cell
    a, b = thetas[j] - delta, thetas[j] + delta
    g = (math.sqrt(5) - 1) / 2
    c, dd = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(dd)
    for _ in range(60):
        if fc > fd:
            b, dd, fd = dd, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, dd, fd
            dd = a + g * (b - a)
            fd = f(dd)
    best_t, best = max([(thetas[j], float(vals[j])), (c, fc), (dd, fd)], key=lambda p: p[1])
    return best, max(upper, best), float(best_t)


def theta_grid(m: int) -> np.ndarray:
    return np.arange(m) * (math.pi / m)
