"""Cone representations and primitive cone queries.

Three kinds of cone are supported:

* :class:`PolyhedralH` -- rows ``a`` meaning ``a.h >= 0`` (or ``> 0`` when the
  row is strict), optionally with the origin adjoined;
* :class:`PolyhedralV` -- the conic hull of finitely many generators;
* :class:`MatrixPSD` -- positive semidefinite ``d x d`` matrices in the
  coordinates of :mod:`ordspace.matrix`.

Conversions between the two polyhedral forms go through the double
description method in :func:`extreme_rays`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import matrix as mx
from .core import DEFAULT_APPROX_TOL, Mode, as_fraction_vector, to_scalar
from .errors import CapabilityError, DimensionError
from .linalg import independent_subset, inverse, nullspace, primitive, row_space_basis

MAX_ENUM_DIM = 8
MAX_ENUM_ROWS = 24

ZERO = Fraction(0)


@dataclass(frozen=True)
class HalfspaceRow:
    a: tuple
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction_vector(self.a))


@dataclass(frozen=True)
class PolyhedralH:
    rows: tuple
    dim: int
    include_origin: bool = True

    def __post_init__(self):
        rows = tuple(r if isinstance(r, HalfspaceRow) else HalfspaceRow(*r) for r in self.rows)
        for r in rows:
            if len(r.a) != self.dim:
                raise DimensionError(f"row of length {len(r.a)} in a cone of dimension {self.dim}")
        object.__setattr__(self, "rows", rows)

    @property
    def has_strict(self) -> bool:
        return any(r.strict for r in self.rows)


@dataclass(frozen=True)
class PolyhedralV:
    generators: tuple
    dim: int

    def __post_init__(self):
        gens = tuple(as_fraction_vector(g) for g in self.generators)
        for g in gens:
            if len(g) != self.dim:
                raise DimensionError(f"generator of length {len(g)} in a cone of dimension {self.dim}")
        object.__setattr__(self, "generators", gens)


@dataclass(frozen=True)
class MatrixPSD:
    d: int

    @property
    def dim(self) -> int:
        return self.d * self.d


ConeSpec = Union[PolyhedralH, PolyhedralV, MatrixPSD]


def orthant(n: int) -> PolyhedralH:
    return PolyhedralH(tuple(HalfspaceRow(tuple(int(i == k) for i in range(n))) for k in range(n)), n)


def open_orthant(n: int) -> PolyhedralH:
    """``{h : h_k > 0 for all k} U {0}``."""
    return PolyhedralH(
        tuple(HalfspaceRow(tuple(int(i == k) for i in range(n)), True) for k in range(n)), n
    )


def h_cone(rows, strict=None, include_origin=True) -> PolyhedralH:
    rows = [tuple(r) for r in rows]
    strict = strict or [False] * len(rows)
    return PolyhedralH(tuple(HalfspaceRow(r, s) for r, s in zip(rows, strict)), len(rows[0]), include_origin)


def v_cone(generators) -> PolyhedralV:
    gens = [tuple(g) for g in generators]
    return PolyhedralV(tuple(gens), len(gens[0]))


def is_polyhedral(cone) -> bool:
    return isinstance(cone, (PolyhedralH, PolyhedralV))


# ------------------------------------------------------ double description


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b) if x and y), ZERO)


def extreme_rays(rows, n: int):
    """Extreme rays and lineality of ``{x : a.x >= 0 for a in rows}``.

    Returns ``(rays, lineality_basis)``; rays are primitive integer vectors
    (as Fractions) spanning the cone modulo the lineality space.
    """
    A = [as_fraction_vector(r) for r in rows]
    A = [a for a in A if any(a)]
    lineality = [primitive(v) for v in nullspace(A, n)] if A else nullspace([], n)
    if not A:
        return [], lineality
    W = row_space_basis(A, n)
    k = len(W)
    Ar = [tuple(_dot(a, w) for w in W) for a in A]
    base = independent_subset(Ar, k)
    Binv = inverse([Ar[i] for i in base])
    rays = [primitive(tuple(Binv[r][c] for r in range(k))) for c in range(k)]
    zs = []
    for c in range(k):
        mask = 0
        for pos, i in enumerate(base):
            if pos != c:
                mask |= 1 << i
        zs.append(mask)
    in_base = set(base)
    for i in range(len(Ar)):
        if i in in_base:
            continue
        a = Ar[i]
        vals = [_dot(a, r) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zer = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos] + [rays[j] for j in zer]
        new_zs = [zs[j] for j in pos] + [zs[j] | (1 << i) for j in zer]
        for p in pos:
            for q in neg:
                common = zs[p] & zs[q]
                if bin(common).count("1") < k - 2:
                    continue
                if any(
                    (zs[r] & common) == common for r in range(len(rays)) if r != p and r != q
                ):
                    continue
                vp, vq = vals[p], vals[q]
                r = primitive(tuple(vp * y - vq * x for x, y in zip(rays[p], rays[q])))
                new_rays.append(r)
                new_zs.append(common | (1 << i))
        rays, zs = new_rays, new_zs
    out = sorted({primitive(tuple(sum((z[j] * W[j][c] for j in range(k)), ZERO) for c in range(n))) for z in rays})
    return out, lineality


def _check_caps(n, m, what):
    if n > MAX_ENUM_DIM:
        raise CapabilityError(f"{what}: dimension {n} exceeds the enumeration cap {MAX_ENUM_DIM}")
    if m > MAX_ENUM_ROWS:
        raise CapabilityError(f"{what}: {m} rows/generators exceed the enumeration cap {MAX_ENUM_ROWS}")


@lru_cache(maxsize=512)
def closure_rows(cone) -> tuple:
    """Rows ``a`` with ``closure(cone) = {h : a.h >= 0}`` (polyhedral only)."""
    if isinstance(cone, PolyhedralH):
        return tuple(r.a for r in cone.rows if any(r.a))
    if isinstance(cone, PolyhedralV):
        _check_caps(cone.dim, len(cone.generators), "facet enumeration")
        gens = [g for g in cone.generators if any(g)]
        if not gens:
            # the zero cone
            out = []
            for k in range(cone.dim):
                e = tuple(Fraction(int(i == k)) for i in range(cone.dim))
                out += [e, tuple(-x for x in e)]
            return tuple(out)
        rays, lin = extreme_rays(gens, cone.dim)
        return tuple(rays) + tuple(lin) + tuple(tuple(-x for x in v) for v in lin)
    raise CapabilityError("the PSD cone has no finite inequality description")


@lru_cache(maxsize=512)
def ray_data(cone) -> tuple:
    """``(rays, lineality_basis)`` of the closure of a polyhedral cone."""
    if isinstance(cone, PolyhedralH):
        _check_caps(cone.dim, len(cone.rows), "ray enumeration")
        rays, lin = extreme_rays(closure_rows(cone), cone.dim)
        return tuple(rays), tuple(lin)
    if isinstance(cone, PolyhedralV):
        rays, lin = extreme_rays(closure_rows(cone), cone.dim)
        return tuple(rays), tuple(lin)
    raise CapabilityError("the PSD cone has infinitely many extreme rays")


# ------------------------------------------------------------------ queries


def member(cone, h, tol: Optional[float] = None) -> bool:
    """Membership of ``h``; ``tol`` only matters for floating input or the PSD cone."""
    if len(h) != cone.dim:
        raise DimensionError(f"vector of length {len(h)} for a cone of dimension {cone.dim}")
    if isinstance(cone, MatrixPSD):
        t = DEFAULT_APPROX_TOL if tol is None else tol
        return float(np.min(np.linalg.eigvalsh(mx.to_matrix(h, cone.d)))) >= -t
    exact = tol is None or all(isinstance(x, (int, Fraction)) for x in h)
    if isinstance(cone, PolyhedralH):
        if exact:
            h = as_fraction_vector(h)
            if cone.include_origin and not any(h):
                return True
            for r in cone.rows:
                v = _dot(r.a, h)
                if v < 0 or (r.strict and v == 0):
                    return False
            return True
        if cone.include_origin and all(abs(x) <= tol for x in h):
            return True
        for r in cone.rows:
            v = sum(float(a) * x for a, x in zip(r.a, h))
            if v < -tol or (r.strict and v <= tol):
                return False
        return True
    from .lp import LinearProgram, solve

    gens = cone.generators
    # floats are read as the binary rationals they denote
    target = as_fraction_vector(h)
    if not gens:
        return not any(target)
    rows = tuple((tuple(g[i] for g in gens), target[i]) for i in range(cone.dim))
    res = solve(LinearProgram(tuple([ZERO] * len(gens)), rows, (), nonneg=(True,) * len(gens)))
    return res.optimal


def conic_coefficients(cone: PolyhedralV, h):
    """Nonnegative ``mu`` with ``sum mu_g g = h``, or ``None``."""
    from .lp import LinearProgram, solve

    gens = cone.generators
    h = as_fraction_vector(h)
    if not gens:
        return () if not any(h) else None
    rows = tuple((tuple(g[i] for g in gens), h[i]) for i in range(cone.dim))
    res = solve(LinearProgram(tuple([ZERO] * len(gens)), rows, (), nonneg=(True,) * len(gens)))
    return res.witness if res.optimal else None


def closure(cone):
    if isinstance(cone, PolyhedralH):
        return PolyhedralH(tuple(HalfspaceRow(r.a, False) for r in cone.rows), cone.dim, True)
    return cone


def is_closed(cone) -> bool:
    """Whether the representation is already closed.

    A strict H-cone can still be closed as a set; see ``order.is_archimedean``.
    """
    return not (isinstance(cone, PolyhedralH) and cone.has_strict)


def dual_cone(cone):
    """Dual of the closure: ``{f : f.h >= 0 for h in closure(cone)}``."""
    if isinstance(cone, MatrixPSD):
        raise CapabilityError("the PSD cone is self-dual under the trace pairing; no polyhedral dual")
    if isinstance(cone, PolyhedralV):
        return PolyhedralH(tuple(HalfspaceRow(g) for g in cone.generators if any(g)), cone.dim)
    return PolyhedralV(tuple(r.a for r in cone.rows if any(r.a)), cone.dim)


def generators(cone) -> list:
    """Extreme rays of the closure, plus +/- a lineality basis when the closure has lines.

    The conic hull of the result is the closure of the cone.
    """
    if isinstance(cone, MatrixPSD):
        raise CapabilityError("the PSD cone is not finitely generated")
    _check_caps(cone.dim, len(cone.rows) if isinstance(cone, PolyhedralH) else len(cone.generators), "generators")
    rays, lin = ray_data(cone)
    return list(rays) + list(lin) + [tuple(-x for x in v) for v in lin]


def lineality(cone) -> list:
    """Basis of the lineality space of the closure (exact, no enumeration)."""
    if isinstance(cone, MatrixPSD):
        return []
    if isinstance(cone, PolyhedralH):
        return nullspace(list(closure_rows(cone)), cone.dim)
    two_sided = [g for g in cone.generators if any(g) and member(cone, tuple(-x for x in g))]
    return row_space_basis(two_sided, cone.dim) if two_sided else []


def is_pointed(cone) -> bool:
    """``C cap -C = {0}``.

    A strict row already excludes every nonzero ``h`` with ``-h`` also in the
    cone, so only the closed part needs a lineality test.
    """
    if isinstance(cone, MatrixPSD):
        return True
    if isinstance(cone, PolyhedralH):
        if cone.has_strict:
            return True
        return not lineality(cone)
    return not lineality(cone)


@dataclass(frozen=True)
class OrderedSpace:
    """Hermitian part ``R^n`` with a cone and a distinguished unit ``e``."""

    cone: ConeSpec
    unit: tuple
    mode: Mode = Mode.EXACT
    labels: Optional[tuple] = None

    def __post_init__(self):
        if len(self.unit) != self.cone.dim:
            raise DimensionError(f"unit of length {len(self.unit)} for a cone of dimension {self.cone.dim}")
        unit = tuple(to_scalar(x, self.mode) for x in self.unit)
        if self.mode is Mode.APPROX and is_polyhedral(self.cone):
            # polyhedral computations are exact; floats are read as binary rationals
            unit = as_fraction_vector(unit)
        object.__setattr__(self, "unit", unit)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != self.cone.dim:
                raise DimensionError("one label per coordinate is required")

    @property
    def n(self) -> int:
        return self.cone.dim

    @property
    def polyhedral(self) -> bool:
        return is_polyhedral(self.cone)

    def with_cone(self, cone) -> "OrderedSpace":
        return OrderedSpace(cone, self.unit, self.mode, self.labels)


def orthant_space(n: int) -> OrderedSpace:
    return OrderedSpace(orthant(n), tuple(Fraction(1) for _ in range(n)))


def psd_space(d: int, unit=None) -> OrderedSpace:
    if unit is None:
        unit = mx.from_matrix(np.eye(d))
    return OrderedSpace(MatrixPSD(d), tuple(unit), Mode.APPROX)
