"""Order-unit checks, states, the state interval and the order seminorm.

Everything here works with the closure of the cone: states cannot tell a
cone from its closure, and linear programs need closed constraints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import cone as cn
from . import matrix as mx
from .core import DEFAULT_APPROX_TOL, RealFunctional, as_fraction_vector, dot, fmt_scalar, fmt_vector
from .errors import CapabilityError, OrderSpaceError, PreconditionError, ValidationError
from .linalg import complement_basis, independent_subset, solve as lsolve, span_coefficients
from .lp import LinearProgram, Status, infimum_by_bisection, solve, vertices

ZERO = Fraction(0)
ONE = Fraction(1)


# ------------------------------------------------------------ LP plumbing


class _Program:
    """Small builder for LPs whose constraints say "an affine expression lies in the closed cone"."""

    def __init__(self, space, nvars: int, nonneg=None):
        self.space = space
        self.n = space.n
        self.nvars = nvars
        self.nonneg = list(nonneg or [False] * nvars)
        self.eq: list = []
        self.ineq: list = []
        self.gens = space.cone.generators if isinstance(space.cone, cn.PolyhedralV) else None
        self.rows = cn.closure_rows(space.cone) if self.gens is None else None
        self._pending = []

    def add_var(self, nonneg=False) -> int:
        self.nvars += 1
        self.nonneg.append(nonneg)
        return self.nvars - 1

    def in_cone(self, cols: dict, const):
        """Require ``sum_j x_j cols[j] + const`` to lie in the closed cone."""
        const = as_fraction_vector(const)
        if self.rows is not None:
            for a in self.rows:
                coeff = {j: dot(a, c) for j, c in cols.items()}
                self._pending.append(("ineq", coeff, -dot(a, const)))
            return
        mus = [self.add_var(nonneg=True) for _ in self.gens]
        for i in range(self.n):
            coeff = {j: c[i] for j, c in cols.items()}
            for m, g in zip(mus, self.gens):
                coeff[m] = coeff.get(m, ZERO) - g[i]
            self._pending.append(("eq", coeff, -const[i]))

    def add_eq(self, coeff: dict, rhs):
        self._pending.append(("eq", dict(coeff), Fraction(rhs)))

    def add_ineq(self, coeff: dict, rhs):
        self._pending.append(("ineq", dict(coeff), Fraction(rhs)))

    def solve(self, objective: dict, maximize=False):
        eq, ineq = [], []
        for kind, coeff, rhs in self._pending:
            row = [ZERO] * self.nvars
            for j, v in coeff.items():
                row[j] += v
            (eq if kind == "eq" else ineq).append((tuple(row), rhs))
        obj = [ZERO] * self.nvars
        for j, v in objective.items():
            obj[j] = Fraction(v)
        lp = LinearProgram(tuple(obj), tuple(eq), tuple(ineq), maximize, tuple(self.nonneg))
        return solve(lp)


def _require_polyhedral(space, what):
    if not space.polyhedral:
        raise CapabilityError(f"{what} needs a polyhedral cone")


def in_closure(space, h) -> bool:
    return cn.member(cn.closure(space.cone), as_fraction_vector(h)) if space.polyhedral else cn.member(
        space.cone, h
    )


# ------------------------------------------------------------- validation


def check_space(space) -> dict:
    """Report on the ordered-space axioms; never raises on a failed check."""
    cone, e = space.cone, space.unit
    report = {"dimension": space.n, "checks": {}}
    checks = report["checks"]
    pointed = cn.is_pointed(cone)
    checks["pointed"] = pointed
    if isinstance(cone, cn.MatrixPSD):
        E = mx.to_matrix(e, cone.d)
        lam = np.linalg.eigvalsh(E)
        checks["unit_in_cone"] = bool(lam[0] >= -DEFAULT_APPROX_TOL)
        ok = bool(lam[0] > DEFAULT_APPROX_TOL)
        witnesses = []
        if ok:
            for k in range(space.n):
                b = [0.0] * space.n
                b[k] = 1.0
                B = mx.normalize(mx.to_matrix(b, cone.d), E)
                witnesses.append(mx.spectral_norm(B) * (1 + 1e-9) + 1e-12)
        checks["order_unit"] = ok
        report["r_witnesses"] = witnesses
    else:
        e = as_fraction_vector(e)
        checks["unit_in_cone"] = cn.member(cone, e)
        rows = cn.closure_rows(cone)
        bad = [a for a in rows if dot(a, e) <= 0]
        checks["order_unit"] = not bad and checks["unit_in_cone"]
        if bad:
            report["violated_row"] = fmt_vector(bad[0])
        witnesses = []
        if checks["order_unit"]:
            for k in range(space.n):
                r = ONE
                for a in rows:
                    r = max(r, abs(a[k]) / dot(a, e))
                r += 1  # strict rows need a strict margin
                witnesses.append(r)
                b = tuple(ONE if i == k else ZERO for i in range(space.n))
                plus = tuple(r * x + y for x, y in zip(e, b))
                minus = tuple(r * x - y for x, y in zip(e, b))
                if not (cn.member(cone, plus) and cn.member(cone, minus)):
                    checks["order_unit"] = False
        report["r_witnesses"] = [fmt_scalar(r) for r in witnesses]
    report["valid"] = all(checks.values())
    return report


def validate_space(space) -> dict:
    """Check pointedness, ``e`` in the cone and the order-unit property; raise on failure."""
    report = check_space(space)
    if not report["valid"]:
        failed = [k for k, v in report["checks"].items() if not v]
        raise ValidationError(f"ordered space axioms violated: {', '.join(failed)}", report)
    report["archimedean"] = is_archimedean(space)
    return report


def is_archimedean(space) -> bool:
    """Closedness of the cone: every strict row must stay positive on the closure minus 0."""
    cone = space.cone
    if cn.is_closed(cone):
        return True
    if cn.lineality(cone):
        return False
    rays, _ = cn.ray_data(cone)
    for r in cone.rows:
        if r.strict and any(dot(r.a, g) == 0 for g in rays):
            return False
    return True


# ------------------------------------------------------- intervals, norms


@dataclass(frozen=True)
class StateInterval:
    alpha: object
    beta: object
    alpha_state: Optional[tuple] = None
    beta_state: Optional[tuple] = None

    def __post_init__(self):
        if self.alpha > self.beta:
            raise OrderSpaceError("state interval with alpha > beta")


def state_interval(space, h) -> StateInterval:
    """``alpha = max{r : h - r e >= 0}``, ``beta = min{s : s e - h >= 0}`` in the closed cone.

    Polyhedral results are exact and come with states attaining both ends.
    """
    if isinstance(space.cone, cn.MatrixPSD):
        E = mx.to_matrix(space.unit, space.cone.d)
        w = np.linalg.eigvalsh(mx.normalize(mx.to_matrix(h, space.cone.d), E))
        return StateInterval(float(w[0]), float(w[-1]))
    h = as_fraction_vector(h)
    e = space.unit
    ends = []
    for sign in (1, -1):
        # sign=1: maximize r with h - r e in C; sign=-1: minimize s with s e - h in C
        p = _Program(space, 1)
        p.in_cone({0: tuple(-sign * x for x in e)}, tuple(sign * x for x in h))
        res = p.solve({0: 1}, maximize=(sign == 1))
        if res.status is not Status.OPTIMAL:
            raise OrderSpaceError(f"state interval LP ended {res.status.value}; is e an order unit?")
        ends.append((res.value, _state_from_duals(space, res, sign)))
    (alpha, fa), (beta, fb) = ends
    return StateInterval(alpha, beta, fa, fb)


def _state_from_duals(space, res, sign):
    """Recover the state certifying an interval endpoint from LP duals."""
    w = res.dual_witness
    if isinstance(space.cone, cn.PolyhedralV):
        return tuple(-x for x in w[: space.n]) if sign == 1 else tuple(w[: space.n])
    rows = cn.closure_rows(space.cone)
    u = [(-x if sign == 1 else x) for x in w]
    return tuple(sum((ui * a[k] for ui, a in zip(u, rows)), ZERO) for k in range(space.n))


def order_seminorm(space, h):
    iv = state_interval(space, h)
    return max(abs(iv.alpha), abs(iv.beta))


def order_seminorm_by_bisection(space, h, tol: float = 1e-9) -> float:
    """``inf{r : r e + h >= 0 and r e - h >= 0}`` by bisection on membership (floating)."""
    if isinstance(space.cone, cn.MatrixPSD):
        def pred(r):
            return cn.member(space.cone, tuple(r * a + b for a, b in zip(space.unit, h)), tol / 10) and cn.member(
                space.cone, tuple(r * a - b for a, b in zip(space.unit, h)), tol / 10
            )
    else:
        hq = as_fraction_vector(h)
        closed = cn.closure(space.cone)

        def pred(r):
            r = Fraction(r)
            return cn.member(closed, tuple(r * a + b for a, b in zip(space.unit, hq))) and cn.member(
                closed, tuple(r * a - b for a, b in zip(space.unit, hq))
            )

    hi = 1.0
    while not pred(hi):
        hi *= 2
        if hi > 1e12:
            raise OrderSpaceError("no finite bracket; is e an order unit?")
    return infimum_by_bisection(pred, 0.0, hi, tol)


# ----------------------------------------------------------------- states


@dataclass(frozen=True)
class StatePolytope:
    constraints: tuple  # rows (g, 0) meaning f.g >= 0, then (e, 1) meaning f.e = 1
    extreme_states: tuple

    def contains(self, f) -> bool:
        *ineq, (e, one) = self.constraints
        return dot(e, f) == one and all(dot(g, f) >= 0 for g, _ in ineq)


def state_polytope(space) -> StatePolytope:
    """Inequality description and vertices of ``{f : f >= 0 on the cone, f(e) = 1}``."""
    _require_polyhedral(space, "state polytope")
    if space.n > cn.MAX_ENUM_DIM:
        raise CapabilityError(f"state enumeration capped at dimension {cn.MAX_ENUM_DIM}")
    gens = cn.generators(space.cone)
    ineq = [(g, ZERO) for g in gens]
    verts = vertices(ineq, [(space.unit, ONE)], n=space.n)
    return StatePolytope(tuple(ineq) + ((space.unit, ONE),), tuple(verts))


def extreme_states(space) -> list[tuple]:
    """Extreme states, found as the irredundant closure rows (H-cones) or by vertex enumeration."""
    _require_polyhedral(space, "extreme states")
    e = space.unit
    if isinstance(space.cone, cn.PolyhedralH) and not cn.lineality(space.cone):
        normed = sorted({tuple(x / dot(a, e) for x in a) for a in cn.closure_rows(space.cone)})
        out = []
        for i, f in enumerate(normed):
            others = [g for j, g in enumerate(normed) if j != i]
            if not others or not _in_conic_hull(others, f):
                out.append(f)
        return out
    return list(state_polytope(space).extreme_states)


def _in_conic_hull(gens, v) -> bool:
    return cn.member(cn.PolyhedralV(tuple(gens), len(v)), v)


def is_positive_functional(space, f) -> bool:
    coeffs = f.coeffs if isinstance(f, RealFunctional) else tuple(f)
    if isinstance(space.cone, cn.MatrixPSD):
        F = mx.functional_matrix(coeffs, space.cone.d)
        return float(np.linalg.eigvalsh(F)[0]) >= -DEFAULT_APPROX_TOL
    coeffs = as_fraction_vector(coeffs)
    if isinstance(space.cone, cn.PolyhedralV):
        return all(dot(coeffs, g) >= 0 for g in space.cone.generators)
    # f >= 0 on {a.h >= 0} iff f is a conic combination of the rows
    rows = cn.closure_rows(space.cone)
    if not rows:
        return not any(coeffs)
    return _in_conic_hull(rows, coeffs)


def unit_ball_vertices(space) -> list[tuple]:
    """Vertices of ``{h : -e <= h <= e}`` intersected with the orthogonal complement of ``N``."""
    _require_polyhedral(space, "unit ball enumeration")
    e = space.unit
    rows = cn.closure_rows(space.cone)
    ineq = []
    for a in rows:
        ae = dot(a, e)
        ineq.append((a, -ae))
        ineq.append((tuple(-x for x in a), -ae))
    eq = [(v, ZERO) for v in cn.lineality(space.cone)]
    return vertices(ineq, eq, n=space.n)


def functional_norm(space, f):
    """``sup{|f(h)| : ||h|| <= 1}``; exact for polyhedral spaces.

    Returns ``inf`` (a float) when ``f`` does not vanish on ``N``.
    """
    coeffs = f.coeffs if isinstance(f, RealFunctional) else tuple(f)
    if isinstance(space.cone, cn.MatrixPSD):
        F = mx.normalize(mx.functional_matrix(coeffs, space.cone.d), np.linalg.inv(mx.to_matrix(space.unit, space.cone.d)))
        return float(np.sum(np.abs(np.linalg.eigvalsh(F))))
    coeffs = as_fraction_vector(coeffs)
    if any(dot(coeffs, v) != 0 for v in cn.lineality(space.cone)):
        return float("inf")
    return max((abs(dot(coeffs, b)) for b in unit_ball_vertices(space)), default=ZERO)


def positive_by_norm(space, f) -> bool:
    """The norm criterion: ``||f|| = f(e)`` exactly when ``f`` is positive."""
    coeffs = f.coeffs if isinstance(f, RealFunctional) else tuple(f)
    if isinstance(space.cone, cn.MatrixPSD):
        val = float(np.dot([float(c) for c in coeffs], [float(x) for x in space.unit]))
        return abs(functional_norm(space, coeffs) - val) <= 1e-9 * max(1.0, abs(val))
    return functional_norm(space, coeffs) == dot(as_fraction_vector(coeffs), space.unit)


# ------------------------------------------------------ functional extension


@dataclass(frozen=True)
class ExtensionStep:
    direction: tuple
    lower: Fraction
    gamma: Fraction
    upper: Fraction


@dataclass
class Extension:
    functional: RealFunctional
    steps: list = field(default_factory=list)


def _positive_on_subspace(space, basis, values) -> bool:
    """``min f(z)`` over ``z in E``, ``0 <= z <= e`` is ``0`` (and not unbounded)."""
    k = len(basis)
    p = _Program(space, k)
    p.in_cone({j: b for j, b in enumerate(basis)}, [ZERO] * space.n)
    p.in_cone({j: tuple(-x for x in b) for j, b in enumerate(basis)}, space.unit)
    res = p.solve({j: v for j, v in enumerate(values)})
    return res.status is Status.OPTIMAL and res.value >= 0


def _bound(space, basis, values, h, upper: bool):
    """``inf{f(z) : z in E, z >= h}`` if ``upper``, else ``sup{f(z) : z in E, z <= h}``."""
    k = len(basis)
    p = _Program(space, k)
    sgn = 1 if upper else -1
    p.in_cone({j: tuple(sgn * x for x in b) for j, b in enumerate(basis)}, tuple(-sgn * x for x in h))
    res = p.solve({j: v for j, v in enumerate(values)}, maximize=not upper)
    if res.status is not Status.OPTIMAL:
        raise OrderSpaceError(f"extension bound LP ended {res.status.value}")
    return res.value


def extend_with_steps(space, subspace_basis, values) -> Extension:
    """Extend a positive functional on ``E`` (with ``e`` in ``E``) to all of ``V``, one direction at a time."""
    _require_polyhedral(space, "exact functional extension")
    n = space.n
    basis = [as_fraction_vector(b) for b in subspace_basis]
    values = [Fraction(v) for v in values]
    if len(basis) != len(values):
        raise PreconditionError("one value per basis vector is required")
    idx = independent_subset(basis, n)
    ind = [basis[i] for i in idx]
    vals = [values[i] for i in idx]
    for b, v in zip(basis, values):
        c = span_coefficients(ind, b)
        if sum((ci * vi for ci, vi in zip(c, vals)), ZERO) != v:
            raise PreconditionError("values are not linear on the given basis")
    if span_coefficients(ind, space.unit) is None:
        raise PreconditionError("the subspace must contain the order unit")
    if not _positive_on_subspace(space, ind, vals):
        raise PreconditionError("the functional is not positive on the subspace")
    steps = []
    for h in complement_basis(ind, n):
        lo = _bound(space, ind, vals, h, upper=False)
        hi = _bound(space, ind, vals, h, upper=True)
        if lo > hi:
            raise OrderSpaceError(f"extension interval is empty: {lo} > {hi}")
        gamma = (lo + hi) / 2
        steps.append(ExtensionStep(h, lo, gamma, hi))
        ind.append(h)
        vals.append(gamma)
    coeffs = lsolve(ind, vals, n)
    return Extension(RealFunctional(coeffs), steps)


def extend_positive_functional(space, subspace_basis, values) -> RealFunctional:
    return extend_with_steps(space, subspace_basis, values).functional


def non_archimedean_witness(space):
    """A vector ``h`` outside the cone with ``r e + h`` inside for every ``r > 0``, or ``None``."""
    if is_archimedean(space):
        return None
    lin = cn.lineality(space.cone)
    if lin:
        return tuple(lin[0])
    rays, _ = cn.ray_data(space.cone)
    for r in space.cone.rows:
        if r.strict:
            for g in rays:
                if dot(r.a, g) == 0:
                    return tuple(g)
    return None
