"""Exact rational linear programming.

:class:`RevisedSimplex` is a two-phase revised simplex over ``Fraction`` for
standard-form programs ``min c.x  s.t.  A x = b, x >= 0``.  It pivots by the
largest reduced cost and falls back to Bland's rule for as long as pivots are
degenerate, which rules out cycling while keeping the pivot path
deterministic.  Columns may be appended between solves (column generation);
the current basis stays primal feasible.

:func:`solve` accepts the general form used everywhere else in the package and
returns an :class:`LPResult` carrying optimality, Farkas or ray certificates.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import BracketError, CapabilityError, DimensionError, UnboundedPolytopeError

ZERO = Fraction(0)
ONE = Fraction(1)


def _F(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class RevisedSimplex:
    """Standard-form LP ``min c.x, A x = b, x >= 0`` held column-wise.

    Rows with negative right-hand side are negated internally; duals are
    reported for the rows as given.
    """

    def __init__(self, columns: Sequence[Sequence], b: Sequence, costs: Sequence):
        self.m = len(b)
        self._sign = [(-ONE if _F(bi) < 0 else ONE) for bi in b]
        self.b = [abs(_F(bi)) for bi in b]
        self.cols: list[list[Fraction]] = []
        self.costs: list[Fraction] = []
        self.add_columns(columns, costs)
        # artificial variables are indices >= ART
        self.basis: Optional[list[int]] = None
        self.Binv = None
        self.xB = None
        self.phase1_value = None
        self.pivots = 0

    ART = 1 << 40

    def add_columns(self, columns, costs):
        for col, c in zip(columns, costs):
            if len(col) != self.m:
                raise DimensionError(f"column of length {len(col)} in a program with {self.m} rows")
            self.cols.append([s * _F(a) for s, a in zip(self._sign, col)])
            self.costs.append(_F(c))

    # -- helpers --------------------------------------------------------------

    def _column(self, j):
        if j >= self.ART:
            i = j - self.ART
            return [ONE if r == i else ZERO for r in range(self.m)]
        return self.cols[j]

    def _ftran(self, col):
        return [sum((bij * a for bij, a in zip(row, col) if a), ZERO) for row in self.Binv]

    def _duals(self, cost):
        cB = [cost(j) for j in self.basis]
        return [sum((cB[i] * self.Binv[i][k] for i in range(self.m) if cB[i]), ZERO) for k in range(self.m)]

    def _pivot(self, r, alpha):
        piv = alpha[r]
        Br = [x / piv for x in self.Binv[r]]
        xr = self.xB[r] / piv
        for i in range(self.m):
            if i == r:
                continue
            a = alpha[i]
            if a:
                Bi = self.Binv[i]
                self.Binv[i] = [x - a * y for x, y in zip(Bi, Br)]
                self.xB[i] -= a * xr
        self.Binv[r] = Br
        self.xB[r] = xr
        self.pivots += 1

    def _iterate(self, cost, allowed, max_pivots):
        """Run simplex pivots for the given cost function. Returns None or ('unbounded', j, alpha)."""
        bland = False
        for _ in range(max_pivots):
            y = self._duals(cost)
            basic = set(self.basis)
            enter, best = None, ZERO
            for j in range(len(self.cols)):
                if j in basic or not allowed(j):
                    continue
                col = self.cols[j]
                d = self.costs_for(cost, j) - sum((yi * a for yi, a in zip(y, col) if a), ZERO)
                if d < 0:
                    if bland:
                        enter = j
                        break
                    if enter is None or d < best:
                        enter, best = j, d
            if enter is None:
                return None
            alpha = self._ftran(self.cols[enter])
            r, ratio = None, None
            for i in range(self.m):
                if alpha[i] > 0:
                    t = self.xB[i] / alpha[i]
                    if ratio is None or t < ratio or (t == ratio and self.basis[i] < self.basis[r]):
                        r, ratio = i, t
            if r is None:
                return ("unbounded", enter, alpha)
            bland = ratio == 0
            self._pivot(r, alpha)
            self.basis[r] = enter
        raise CapabilityError(f"simplex exceeded {max_pivots} pivots")

    @staticmethod
    def costs_for(cost, j):
        return cost(j)

    # -- public ---------------------------------------------------------------

    def solve(self, max_pivots: int = 100000):
        """Optimize; returns a :class:`Status`. Warm-starts from the previous basis."""
        if self.basis is None:
            self.basis = [self.ART + i for i in range(self.m)]
            self.Binv = [[ONE if i == k else ZERO for k in range(self.m)] for i in range(self.m)]
            self.xB = list(self.b)
        if any(j >= self.ART for j in self.basis):
            art_cost = lambda j: ONE if j >= self.ART else ZERO  # noqa: E731
            self._iterate(art_cost, lambda j: True, max_pivots)
            self.phase1_value = sum((x for j, x in zip(self.basis, self.xB) if j >= self.ART), ZERO)
            if self.phase1_value > 0:
                self.farkas = self._duals(art_cost)
                return Status.INFEASIBLE
            self._drive_out_artificials()
        cost = lambda j: ZERO if j >= self.ART else self.costs[j]  # noqa: E731
        out = self._iterate(cost, lambda j: True, max_pivots)
        if out is not None:
            _, enter, alpha = out
            self.ray = (enter, alpha)
            return Status.UNBOUNDED
        return Status.OPTIMAL

    def _drive_out_artificials(self):
        for r in range(self.m):
            if self.basis[r] < self.ART:
                continue
            basic = set(self.basis)
            for j in range(len(self.cols)):
                if j in basic:
                    continue
                a = self._ftran(self.cols[j])
                if a[r] != 0:
                    self._pivot(r, a)
                    self.basis[r] = j
                    break
            # otherwise the row is redundant; the artificial stays basic at zero

    def primal(self) -> list[Fraction]:
        x = [ZERO] * len(self.cols)
        for j, v in zip(self.basis, self.xB):
            if j < self.ART:
                x[j] = v
        return x

    def objective(self) -> Fraction:
        return sum((self.costs[j] * v for j, v in zip(self.basis, self.xB) if j < self.ART), ZERO)

    def duals(self) -> list[Fraction]:
        """Simplex multipliers for the rows in their original orientation."""
        y = self._duals(lambda j: ZERO if j >= self.ART else self.costs[j])
        return [s * v for s, v in zip(self._sign, y)]

    def farkas_duals(self) -> list[Fraction]:
        return [s * v for s, v in zip(self._sign, self.farkas)]

    def ray_direction(self) -> list[Fraction]:
        enter, alpha = self.ray
        d = [ZERO] * len(self.cols)
        d[enter] = ONE
        for j, a in zip(self.basis, alpha):
            if j < self.ART:
                d[j] = -a
        return d


# ------------------------------------------------------------------ general LPs


@dataclass(frozen=True)
class LinearProgram:
    """``min``/``max`` ``objective . x`` subject to ``a.x = b`` rows and ``a.x >= b`` rows.

    Variables are free unless flagged in ``nonneg``.
    """

    objective: tuple
    eq_rows: tuple = ()
    ineq_rows: tuple = ()
    maximize: bool = False
    nonneg: Optional[tuple] = None

    @property
    def n(self) -> int:
        return len(self.objective)


@dataclass
class LPResult:
    status: Status
    value: Optional[Fraction] = None
    witness: Optional[tuple] = None
    dual_witness: Optional[tuple] = None
    ray: Optional[tuple] = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def _prepare(lp: LinearProgram):
    n = lp.n
    for a, _ in (*lp.eq_rows, *lp.ineq_rows):
        if len(a) != n:
            raise DimensionError(f"constraint row of length {len(a)} for {n} variables")
    nonneg = lp.nonneg or (False,) * n
    # standard-form columns: per variable one (nonneg) or two (free) columns, then slacks
    varcols = []  # (original index, sign)
    for j in range(n):
        varcols.append((j, 1))
        if not nonneg[j]:
            varcols.append((j, -1))
    rows = [(tuple(map(_F, a)), _F(b)) for a, b in lp.eq_rows] + [
        (tuple(map(_F, a)), _F(b)) for a, b in lp.ineq_rows
    ]
    neq, nin = len(lp.eq_rows), len(lp.ineq_rows)
    m = neq + nin
    cols, costs = [], []
    c = [(-_F(x) if lp.maximize else _F(x)) for x in lp.objective]
    for j, s in varcols:
        cols.append([s * rows[i][0][j] for i in range(m)])
        costs.append(s * c[j])
    for k in range(nin):
        cols.append([(-ONE if i == neq + k else ZERO) for i in range(m)])
        costs.append(ZERO)
    b = [r[1] for r in rows]
    return varcols, cols, costs, b, nonneg


def solve(lp: LinearProgram, max_pivots: int = 100000) -> LPResult:
    """Solve exactly. Optimal results carry a dual witness with equal objective."""
    varcols, cols, costs, b, nonneg = _prepare(lp)
    n = lp.n
    m = len(b)
    if m == 0:
        # no constraints: bounded only if the objective vanishes on free and is >= 0 on nonneg vars
        c = [(-_F(x) if lp.maximize else _F(x)) for x in lp.objective]
        for j in range(n):
            if c[j] < 0 or (c[j] != 0 and not nonneg[j]):
                d = [ZERO] * n
                d[j] = ONE if c[j] < 0 else -ONE
                return LPResult(Status.UNBOUNDED, witness=tuple([ZERO] * n), ray=tuple(d))
        return LPResult(Status.OPTIMAL, value=ZERO, witness=tuple([ZERO] * n), dual_witness=())
    sx = RevisedSimplex(cols, b, costs)
    status = sx.solve(max_pivots)

    def to_original(xs):
        x = [ZERO] * n
        for (j, s), v in zip(varcols, xs):
            x[j] += s * v
        return tuple(x)

    if status is Status.INFEASIBLE:
        return LPResult(status, dual_witness=tuple(sx.farkas_duals()), pivots=sx.pivots)
    x = to_original(sx.primal())
    if status is Status.UNBOUNDED:
        return LPResult(status, witness=x, ray=to_original(sx.ray_direction()), pivots=sx.pivots)
    y = sx.duals()
    if lp.maximize:
        y = [-v for v in y]
    value = sum((_F(cj) * xj for cj, xj in zip(lp.objective, x)), ZERO)
    return LPResult(status, value=value, witness=x, dual_witness=tuple(y), pivots=sx.pivots)


def check_certificate(lp: LinearProgram, res: LPResult) -> bool:
    """Independently re-verify an :class:`LPResult` against its program, exactly."""
    n = lp.n
    nonneg = lp.nonneg or (False,) * n
    rows_eq = [(tuple(map(_F, a)), _F(b)) for a, b in lp.eq_rows]
    rows_in = [(tuple(map(_F, a)), _F(b)) for a, b in lp.ineq_rows]
    rows = rows_eq + rows_in
    neq = len(rows_eq)
    c = tuple(map(_F, lp.objective))

    def feasible(x):
        if any(sum(a * v for a, v in zip(r, x)) != b for r, b in rows_eq):
            return False
        if any(sum(a * v for a, v in zip(r, x)) < b for r, b in rows_in):
            return False
        return all(x[j] >= 0 for j in range(n) if nonneg[j])

    if res.status is Status.OPTIMAL:
        x, w = res.witness, res.dual_witness
        if not feasible(x):
            return False
        if sum(a * v for a, v in zip(c, x)) != res.value:
            return False
        sgn = -1 if lp.maximize else 1
        for k in range(len(rows_in)):
            if sgn * w[neq + k] < 0:
                return False
        for j in range(n):
            red = c[j] - sum(w[i] * rows[i][0][j] for i in range(len(rows)))
            if nonneg[j]:
                if sgn * red < 0 or (red != 0 and x[j] != 0):
                    return False
            elif red != 0:
                return False
        for k, (r, b) in enumerate(rows_in):
            if w[neq + k] != 0 and sum(a * v for a, v in zip(r, x)) != b:
                return False
        return sum(w[i] * rows[i][1] for i in range(len(rows))) == res.value
    if res.status is Status.INFEASIBLE:
        w = res.dual_witness
        if any(w[neq + k] < 0 for k in range(len(rows_in))):
            return False
        for j in range(n):
            s = sum(w[i] * rows[i][0][j] for i in range(len(rows)))
            if (nonneg[j] and s > 0) or (not nonneg[j] and s != 0):
                return False
        return sum(w[i] * rows[i][1] for i in range(len(rows))) > 0
    # unbounded
    x, d = res.witness, res.ray
    if not feasible(x):
        return False
    if any(sum(a * v for a, v in zip(r, d)) != 0 for r, _ in rows_eq):
        return False
    if any(sum(a * v for a, v in zip(r, d)) < 0 for r, _ in rows_in):
        return False
    if any(d[j] < 0 for j in range(n) if nonneg[j]):
        return False
    cd = sum(a * v for a, v in zip(c, d))
    return cd > 0 if lp.maximize else cd < 0


def feasible_point(eq_rows=(), ineq_rows=(), n=None, nonneg=None):
    """A feasible point of the constraint system, or ``None``."""
    if n is None:
        n = len((list(eq_rows) + list(ineq_rows))[0][0])
    res = solve(LinearProgram(tuple([ZERO] * n), tuple(eq_rows), tuple(ineq_rows), nonneg=nonneg))
    return res.witness if res.optimal else None


# --------------------------------------------------------- vertex enumeration


def vertices(ineq_rows=(), eq_rows=(), n=None) -> list[tuple]:
    """All vertices of the bounded polytope ``{a.x >= b} & {a.x = b}``, exactly.

    Uses the double-description method on the homogenized cone.  Raises
    :class:`UnboundedPolytopeError` with a recession direction if the set is
    unbounded; returns ``[]`` for an empty set.
    """
    from .cone import extreme_rays, MAX_ENUM_DIM

    if n is None:
        n = len((list(eq_rows) + list(ineq_rows))[0][0])
    if n > MAX_ENUM_DIM:
        raise CapabilityError(f"vertex enumeration is capped at dimension {MAX_ENUM_DIM}, got {n}")
    rows = []
    for a, b in ineq_rows:
        rows.append([_F(x) for x in a] + [-_F(b)])
    for a, b in eq_rows:
        rows.append([_F(x) for x in a] + [-_F(b)])
        rows.append([-_F(x) for x in a] + [_F(b)])
    rows.append([ZERO] * n + [ONE])
    rays, lineality = extreme_rays(rows, n + 1)
    if lineality:
        raise UnboundedPolytopeError("polytope contains a line", ray=tuple(lineality[0][:n]))
    verts = [tuple(r[j] / r[n] for j in range(n)) for r in rays if r[n] > 0]
    rec = [tuple(r[:n]) for r in rays if r[n] == 0]
    if verts and rec:
        raise UnboundedPolytopeError("polytope is unbounded", ray=rec[0])
    return sorted(set(verts))


def infimum_by_bisection(pred: Callable[[float], bool], lo: float, hi: float, tol: float) -> float:
    """Threshold of a monotone predicate (false below, true above) to within ``tol``."""
    if not pred(hi):
        raise BracketError(f"predicate is false at the upper bracket {hi}")
    if pred(lo):
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
