"""Independent reference implementations used only by the tests.

Nothing here calls into the package's LP, cone or linear-algebra code: rays and
vertices come from brute-force subset enumeration with sympy, norms from dense
phase grids solved with scipy's HiGHS.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import sympy
from scipy.optimize import linprog


def _nullspace(rows, n):
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)]
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    return [tuple(Fraction(int(c.p), int(c.q)) for c in v) for v in M.nullspace()]


def _normalize(v):
    m = max(abs(x) for x in v)
    return tuple(x / m for x in v)


def brute_extreme_rays(rows, n):
    """Extreme rays of the pointed cone ``{x : a.x >= 0}``: one-dimensional solutions of ``n-1`` tight rows."""
    rows = [tuple(Fraction(x) for x in r) for r in rows]
    out = set()
    for sub in itertools.combinations(range(len(rows)), n - 1):
        ns = _nullspace([rows[i] for i in sub], n)
        if len(ns) != 1:
            continue
        for s in (1, -1):
            v = tuple(s * x for x in ns[0])
            if all(sum(a * b for a, b in zip(r, v)) >= 0 for r in rows):
                out.add(_normalize(v))
    if n == 1:
        for s in (1, -1):
            if all(r[0] * s >= 0 for r in rows):
                out.add((Fraction(s),))
    return sorted(out)


def brute_vertices(ineqs, eqs, n):
    """Vertices of ``{x : g.x >= b (ineqs), g.x = b (eqs)}`` by solving every square subsystem."""
    ineqs = [(tuple(Fraction(x) for x in g), Fraction(b)) for g, b in ineqs]
    eqs = [(tuple(Fraction(x) for x in g), Fraction(b)) for g, b in eqs]
    need = n - len(eqs)
    out = set()
    for sub in itertools.combinations(range(len(ineqs)), max(need, 0)):
        system = eqs + [ineqs[i] for i in sub]
        A = sympy.Matrix([[sympy.nsimplify(x) for x in g] for g, _ in system])
        if A.rank() < n:
            continue
        b = sympy.Matrix([sympy.nsimplify(c) for _, c in system])
        sol = A.solve_least_squares(b) if A.rows > n else A.solve(b)
        x = tuple(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in sol)
        if all(sum(a * y for a, y in zip(g, x)) == c for g, c in system) and all(
            sum(a * y for a, y in zip(g, x)) >= c for g, c in ineqs
        ):
            out.add(x)
    return sorted(out)


# ----------------------------------------------------------- float oracles


def _cone_data(space):
    """Return ``("H", rows)`` or ``("V", generators)`` as float arrays."""
    from ordspace.cone import PolyhedralH

    c = space.cone
    if isinstance(c, PolyhedralH):
        return "H", np.array([[float(x) for x in r.a] for r in c.rows])
    return "V", np.array([[float(x) for x in g] for g in c.generators])


def state_vertices(space):
    """Extreme states by brute force: vertices of ``{f : f.g >= 0, f.e = 1}``."""
    kind, data = _cone_data(space)
    if kind == "H":
        # dual generators are the rows; states are normalized irredundant rows
        e = [float(x) for x in space.unit]
        return [r / float(np.dot(r, e)) for r in data]
    gens = [tuple(Fraction(x) for x in g) for g in space.cone.generators]
    verts = brute_vertices([(g, 0) for g in gens], [(space.unit, 1)], space.n)
    return [np.array([float(x) for x in v]) for v in verts]


def minimal_norm_oracle(space, v):
    states = state_vertices(space)
    x = np.array([float(a) for a in v.re])
    y = np.array([float(a) for a in v.im])
    return max(math.hypot(f @ x, f @ y) for f in states)


def maximal_norm_oracle(space, v, K: int = 256) -> float:
    """Upper approximation of ``M``: phases ``e^{i theta_j}``, ``theta_j`` uniform in ``[0, pi)``.

    Variables per phase: ``t_j`` and ``h_j``; constraints ``t_j e +- h_j`` in the
    closed cone and ``sum e^{i theta_j} h_j = v``.
    """
    kind, data = _cone_data(space)
    n = space.n
    e = np.array([float(x) for x in space.unit])
    x = np.array([float(a) for a in v.re])
    y = np.array([float(a) for a in v.im])
    thetas = np.pi * np.arange(K) / K
    g = data.shape[0]
    per = 1 + n + (2 * g if kind == "V" else 0)
    nv = K * per
    c = np.zeros(nv)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for j in range(K):
        c[j * per] = 1.0
    for i in range(n):
        for part, fn in ((x, np.cos), (y, np.sin)):
            row = np.zeros(nv)
            for j, th in enumerate(thetas):
                row[j * per + 1 + i] = fn(th)
            A_eq.append(row)
            b_eq.append(part[i])
    for j in range(K):
        base = j * per
        for s in (1, -1):
            if kind == "H":
                for a in data:
                    row = np.zeros(nv)
                    row[base] = -(a @ e)
                    row[base + 1 : base + 1 + n] = -s * a
                    A_ub.append(row)
                    b_ub.append(0.0)
            else:
                off = base + 1 + n + (0 if s == 1 else g)
                for i in range(n):
                    row = np.zeros(nv)
                    row[base] = e[i]
                    row[base + 1 + i] = s
                    row[off : off + g] = -data[:, i]
                    A_eq.append(row)
                    b_eq.append(0.0)
    bounds = []
    for j in range(K):
        bounds += [(0, None)] + [(None, None)] * n + ([(0, None)] * (2 * g) if kind == "V" else [])
    res = linprog(c, A_ub=np.array(A_ub) if A_ub else None, b_ub=b_ub or None, A_eq=np.array(A_eq), b_eq=b_eq, bounds=bounds, method="highs")
    assert res.status == 0, res.message
    return float(res.fun)


def decomposition_norm_oracle(space, v, K: int = 256) -> float:
    """Upper approximation of ``dec``: ``v = sum u_j p_j`` with phases on a ``K``-grid of the circle."""
    kind, data = _cone_data(space)
    n = space.n
    e = np.array([float(a) for a in space.unit])
    x = np.array([float(a) for a in v.re])
    y = np.array([float(a) for a in v.im])
    thetas = 2 * np.pi * np.arange(K) / K
    g = data.shape[0]
    # variables: s, then per phase either p_j (H) or mu_j (V, p_j = G^T mu_j), then slack mu for s e - sum p (V)
    if kind == "H":
        per, extra = n, 0
    else:
        per, extra = g, g
    nv = 1 + K * per + extra
    c = np.zeros(nv)
    c[0] = 1.0
    A_eq, b_eq, A_ub, b_ub = [], [], [], []

    def p_coeffs(j, i):
        """Coefficient vector (sparse dict) of coordinate ``i`` of ``p_j``."""
        if kind == "H":
            return {1 + j * per + i: 1.0}
        return {1 + j * per + k: data[k, i] for k in range(g)}

    for i in range(n):
        for part, fn in ((x, np.cos), (y, np.sin)):
            row = np.zeros(nv)
            for j, th in enumerate(thetas):
                for idx, val in p_coeffs(j, i).items():
                    row[idx] += fn(th) * val
            A_eq.append(row)
            b_eq.append(part[i])
    if kind == "H":
        for j in range(K):
            for a in data:
                row = np.zeros(nv)
                row[1 + j * per : 1 + j * per + n] = -a
                A_ub.append(row)
                b_ub.append(0.0)
        for a in data:
            row = np.zeros(nv)
            row[0] = -(a @ e)
            for j in range(K):
                row[1 + j * per : 1 + j * per + n] += a
            A_ub.append(row)
            b_ub.append(0.0)
        bounds = [(None, None)] + [(None, None)] * (K * per)
    else:
        off = 1 + K * per
        for i in range(n):
            row = np.zeros(nv)
            row[0] = e[i]
            for j in range(K):
                for idx, val in p_coeffs(j, i).items():
                    row[idx] -= val
            row[off : off + g] = -data[:, i]
            A_eq.append(row)
            b_eq.append(0.0)
        bounds = [(None, None)] + [(0, None)] * (K * per + extra)
    res = linprog(c, A_ub=np.array(A_ub) if A_ub else None, b_ub=b_ub or None, A_eq=np.array(A_eq), b_eq=b_eq, bounds=bounds, method="highs")
    assert res.status == 0, res.message
    return float(res.fun)


def random_decomposition_cost(space, v, rng, terms: int = 3):
    """Cost of one random admissible decomposition for ``M``: an upper bound on ``M``.

    ``v = x + iy`` is split as a random hermitian combination; the seminorm is
    evaluated with the brute-force state vertices.
    """
    states = state_vertices(space)
    n = space.n
    x = np.array([float(a) for a in v.re])
    y = np.array([float(a) for a in v.im])

    def sn(h):
        return max(abs(f @ h) for f in states)

    pieces = [rng.normal(size=n) for _ in range(terms - 1)]
    phases = [rng.uniform(0, np.pi) for _ in range(terms - 1)]
    # remaining real and imaginary residues go to phases 0 and pi/2
    rx = x - sum(np.cos(t) * p for t, p in zip(phases, pieces))
    ry = y - sum(np.sin(t) * p for t, p in zip(phases, pieces))
    return sum(sn(p) for p in pieces) + sn(rx) + sn(ry)
