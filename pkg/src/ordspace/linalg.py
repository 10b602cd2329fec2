"""Exact Gaussian elimination over the rationals.

Every routine pivots in a fixed left-to-right, top-to-bottom order so that
bases, complements and projection matrices are reproducible.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError


def _F(x):
    return x if isinstance(x, Fraction) else Fraction(x)


def matrix(rows) -> list[list[Fraction]]:
    return [[_F(x) for x in r] for r in rows]


def transpose(rows, ncols=None):
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def matvec(rows, v) -> tuple:
    return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in rows)


def matmul(A, B):
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in Bt] for r in A]


def rref(rows, ncols: int):
    """Reduced row echelon form. Returns ``(R, pivot_columns)`` with zero rows dropped."""
    M = matrix(rows)
    pivots = []
    r = 0
    nrows = len(M)
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        if p != 1:
            M[r] = [x / p for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M[:r], pivots


def rank(rows, ncols: int) -> int:
    return len(rref(rows, ncols)[1]) if rows else 0


def nullspace(rows, ncols: int) -> list[tuple]:
    """Basis of ``{x : rows @ x = 0}``; one vector per free column, in column order."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    R, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def row_space_basis(vectors, ncols: int) -> list[tuple]:
    R, _ = rref(vectors, ncols)
    return [tuple(r) for r in R]


def solve(A, b, ncols: int):
    """One exact solution of ``A x = b`` (free variables set to zero), or ``None``."""
    if len(A) != len(b):
        raise DimensionError("row count of A and b differ")
    aug = [list(map(_F, r)) + [_F(bi)] for r, bi in zip(A, b)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(R, pivots):
        x[p] = row[ncols]
    return tuple(x)


def span_coefficients(basis: Sequence, v):
    """Coefficients ``c`` with ``sum c_i basis_i = v``, or ``None`` if ``v`` is outside the span."""
    if not basis:
        return () if all(x == 0 for x in v) else None
    A = transpose([list(b) for b in basis])
    return solve(A, v, len(basis))


def in_span(basis, v) -> bool:
    return span_coefficients(basis, v) is not None


def independent_subset(vectors, ncols: int) -> list[int]:
    """Indices of a maximal independent subset, greedily in the given order."""
    chosen, rows = [], []
    r = 0
    for i, v in enumerate(vectors):
        trial = rows + [list(v)]
        if rank(trial, ncols) > r:
            rows = trial
            chosen.append(i)
            r += 1
            if r == ncols:
                break
    return chosen


def complement_basis(basis, n: int) -> list[tuple]:
    """Standard basis vectors completing ``basis`` to a basis of the ambient space."""
    rows = [list(b) for b in basis]
    r = rank(rows, n) if rows else 0
    out = []
    for k in range(n):
        e = [Fraction(int(i == k)) for i in range(n)]
        if rank(rows + [e], n) > r:
            rows.append(e)
            out.append(tuple(e))
            r += 1
    return out


def quotient_maps(sub_basis, n: int):
    """Projection ``P`` (k x n) with kernel ``span(sub_basis)`` and a section ``S`` (n x k).

    The subspace is put in reduced echelon form; quotient coordinates are the
    non-pivot coordinates after eliminating the subspace, so ``P @ S = I``.
    """
    R, pivots = rref(sub_basis, n) if sub_basis else ([], [])
    keep = [j for j in range(n) if j not in pivots]
    P = []
    for j in keep:
        # coordinate j of v - sum_i v[p_i] * R_i
        row = [Fraction(0)] * n
        row[j] = Fraction(1)
        for Ri, p in zip(R, pivots):
            row[p] -= Ri[j]
        P.append(row)
    S = [[Fraction(int(i == j)) for j in keep] for i in range(n)]
    return P, S, [tuple(r) for r in R]


def primitive(v) -> tuple:
    """Positive rescaling of a rational vector to coprime integers (kept as Fractions)."""
    v = [_F(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, abs(x))
    if g == 0:
        return tuple(Fraction(0) for _ in v)
    return tuple(Fraction(x // g) for x in ints)


def orthogonal_complement(basis, n: int) -> list[tuple]:
    return nullspace([list(b) for b in basis], n) if basis else nullspace([], n)


def inverse(A):
    n = len(A)
    aug = [list(map(_F, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R[:n]]
