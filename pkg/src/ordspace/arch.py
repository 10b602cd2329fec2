"""Archimedeanization, order ideals, quotients and induced maps.

Quotient coordinates come from :func:`ordspace.linalg.quotient_maps`: a fixed
pivot order gives a projection ``P`` and a section ``S`` with ``P S = I``.
Complex elements are mapped componentwise, ``q(x + iy) = Px + iPy``, so the
kernel of the complex quotient is ``N + iN``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import cone as cn
from .core import ComplexElement, as_fraction_vector, dot, fmt_vector
from .errors import CapabilityError, PreconditionError
from .linalg import in_span, primitive, matmul, matvec, nullspace, quotient_maps, rank, row_space_basis
from .lp import Status
from .order import _Program, is_archimedean

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class QuotientResult:
    projection: list  # k x n
    space: cn.OrderedSpace
    section: list  # n x k
    kernel: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def project(self, h) -> tuple:
        return matvec(self.projection, as_fraction_vector(h))

    def project_element(self, v: ComplexElement) -> ComplexElement:
        return ComplexElement(self.project(v.re), self.project(v.im))

    def lift(self, y) -> tuple:
        return matvec(self.section, as_fraction_vector(y))

    @property
    def is_identity(self) -> bool:
        k = len(self.projection)
        n = len(self.section)
        return k == n and all(
            self.projection[i][j] == (i == j) for i in range(k) for j in range(n)
        )


def _identity(space, notes=()) -> QuotientResult:
    n = space.n
    eye = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return QuotientResult(eye, space, [row[:] for row in eye], [], list(notes))


def _require_polyhedral(space, what):
    if not space.polyhedral:
        raise CapabilityError(f"{what} is only available for polyhedral cones")


def compute_D_and_N(space):
    """``D`` (the closure of the cone) and a basis of ``N = D cap -D``."""
    return cn.closure(space.cone), [tuple(v) for v in cn.lineality(space.cone)]


def _project_cone(cone, P, S, kernel):
    """Image of a closed polyhedral cone under ``P`` whose kernel lies in the cone's lineality."""
    k = len(P)
    if isinstance(cone, cn.PolyhedralH):
        rows = [tuple(dot(a, [S[i][j] for i in range(len(S))]) for j in range(k)) for a in cn.closure_rows(cone)]
        return cn.PolyhedralH(tuple(cn.HalfspaceRow(r) for r in rows if any(r)), k)
    gens = [matvec(P, g) for g in cone.generators]
    return cn.PolyhedralV(tuple(g for g in gens if any(g)), k)


def archimedeanize(space) -> QuotientResult:
    """Quotient by ``N`` with the image of the closed cone; identity when already Archimedean."""
    if isinstance(space.cone, cn.MatrixPSD):
        return _identity(space, ["PSD cone is closed and pointed"])
    D, N = compute_D_and_N(space)
    if not N:
        if cn.is_closed(space.cone):
            return _identity(space, ["cone closed, N = {0}"])
        return _identity(space.with_cone(D), ["N = {0}; cone replaced by its closure"])
    P, S, _ = quotient_maps(N, space.n)
    cone = _project_cone(D, P, S, N)
    q = cn.OrderedSpace(cone, matvec(P, space.unit), space.mode)
    return QuotientResult(P, q, S, N, [f"N has dimension {len(N)}"])


# ------------------------------------------------------------ order ideals


def order_ideal_witness(space, J):
    """``None`` if ``J`` is an order ideal, else ``(p, q)`` with ``0 <= q <= p``, ``p`` in ``J``, ``q`` not.

    Decided exactly: for each normal ``w`` of ``J``, optimize ``w.q`` over
    ``{(p, q) : p in J, 0 <= q <= p, p <= e}``.
    """
    _require_polyhedral(space, "order ideal test")
    n = space.n
    J = [as_fraction_vector(v) for v in J]
    normals = nullspace(J, n) if J else [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]
    if not normals:
        return None
    k = len(J)
    for w in normals:
        for sense in (True, False):
            # variables: c (k) for p = sum c_j J_j, then q (n)
            p = _Program(space, k + n)
            qcols = {k + i: tuple(ONE if t == i else ZERO for t in range(n)) for i in range(n)}
            pcols = {j: J[j] for j in range(k)}
            p.in_cone(qcols, [ZERO] * n)
            diff = dict(pcols)
            for j, c in qcols.items():
                diff[j] = tuple(-x for x in c)
            p.in_cone(diff, [ZERO] * n)
            p.in_cone({j: tuple(-x for x in v) for j, v in pcols.items()}, space.unit)
            res = p.solve({k + i: w[i] for i in range(n)}, maximize=sense)
            if res.status is Status.UNBOUNDED or (res.optimal and res.value != 0):
                x = res.witness
                pv = tuple(sum((x[j] * J[j][i] for j in range(k)), ZERO) for i in range(n))
                qv = tuple(x[k + i] for i in range(n))
                return pv, qv
    return None


def is_order_ideal(space, J) -> bool:
    return order_ideal_witness(space, J) is None


def _check_ideal(space, J):
    if not cn.is_closed(space.cone):
        raise CapabilityError("quotients by order ideals need a closed cone; archimedeanize first")
    bad = order_ideal_witness(space, J)
    if bad is not None:
        p, q = bad
        raise PreconditionError(
            f"not an order ideal: q = {fmt_vector(q)} satisfies 0 <= q <= p = {fmt_vector(p)} but q is outside J"
        )
    if J and in_span([as_fraction_vector(v) for v in J], space.unit):
        raise PreconditionError("the order unit lies in J")


def _quotient_by(space, K, notes):
    """Quotient by a subspace ``K`` contained in the lineality of ``C + K``; cone given by generators."""
    n = space.n
    P, S, _ = quotient_maps(K, n)
    gens = []
    for g in cn.generators(space.cone):
        g = primitive(matvec(P, g))
        if any(g) and g not in gens:
            gens.append(g)
    cone = cn.PolyhedralV(tuple(gens), len(P))
    q = cn.OrderedSpace(cone, matvec(P, space.unit), space.mode)
    if not cn.is_pointed(cone):
        raise PreconditionError("image cone is not pointed")
    return QuotientResult(P, q, S, list(K), list(notes))


def quotient(space, J) -> QuotientResult:
    """``V/J`` with cone ``C + J`` and unit ``e + J``."""
    _require_polyhedral(space, "quotient")
    J = row_space_basis([as_fraction_vector(v) for v in J], space.n) if J else []
    if not J:
        return _identity(space, ["J = {0}"])
    _check_ideal(space, J)
    return _quotient_by(space, J, ["image cone generated by projected extreme rays; pointed"])


def arch_quotient(space, J, r_grid: int = 12) -> QuotientResult:
    """``V/N_J`` where ``N_J`` is the lineality of ``closure(C) + J``."""
    _require_polyhedral(space, "Archimedean quotient")
    J = row_space_basis([as_fraction_vector(v) for v in J], space.n) if J else []
    if not J:
        return archimedeanize(space)
    _check_ideal(space, J)
    gens = list(cn.generators(space.cone)) + list(J) + [tuple(-x for x in v) for v in J]
    sumcone = cn.PolyhedralV(tuple(gens), space.n)
    NJ = [tuple(v) for v in cn.lineality(sumcone)]
    notes = [
        "closure(C) + J is finitely generated, hence closed: the r > 0 condition reduces to membership",
    ]
    # spot check of the reduction on r = 1, 1/2, 1/4, ...
    ok = True
    for v in NJ:
        for t in range(r_grid):
            r = Fraction(1, 2**t)
            for s in (1, -1):
                if not cn.member(sumcone, tuple(r * a + s * b for a, b in zip(space.unit, v))):
                    ok = False
    notes.append(f"r-grid spot check over {r_grid} dyadic values: {'passed' if ok else 'FAILED'}")
    res = _quotient_by(space, NJ, notes)
    if not is_archimedean(res.space):
        raise PreconditionError("Archimedean quotient failed the closedness check")
    return res


# ------------------------------------------------------------ induced maps


def _as_matrix(phi):
    return [as_fraction_vector(r) for r in phi]


def is_positive_map(space, phi, target) -> bool:
    phi = _as_matrix(phi)
    if isinstance(space.cone, cn.MatrixPSD) or isinstance(target.cone, cn.MatrixPSD):
        raise CapabilityError("map positivity is checked on polyhedral cones only")
    closed = cn.closure(target.cone)
    return all(cn.member(closed, matvec(phi, g)) for g in cn.generators(space.cone))


def is_unital_map(space, phi, target) -> bool:
    return matvec(_as_matrix(phi), space.unit) == tuple(as_fraction_vector(target.unit))


def factor_through(space, phi, target):
    """``phi~`` with ``phi = phi~ o q`` for the Archimedeanization ``q`` of ``space``."""
    phi = _as_matrix(phi)
    if len(phi) != target.n or any(len(r) != space.n for r in phi):
        raise PreconditionError("map has the wrong shape")
    if not is_archimedean(target):
        raise PreconditionError("target space must be Archimedean")
    if not is_unital_map(space, phi, target):
        raise PreconditionError("map is not unital")
    if not is_positive_map(space, phi, target):
        raise PreconditionError("map is not positive")
    arch = archimedeanize(space)
    tilde = matmul(phi, arch.section)
    recon = matmul(tilde, arch.projection)
    diag = {
        "kernel_contains_N": all(not any(matvec(phi, v)) for v in arch.kernel),
        "identity_exact": recon == [list(r) for r in phi],
        "quotient_dimension": len(arch.projection),
    }
    if not diag["identity_exact"]:
        raise PreconditionError("map does not vanish on N")
    return tilde, diag


def first_isomorphism(space, phi, target) -> dict:
    """Quotient by ``ker phi`` and test whether the induced map is an order isomorphism onto its range."""
    phi = _as_matrix(phi)
    if not (is_archimedean(space) and is_archimedean(target)):
        raise PreconditionError("both spaces must be Archimedean")
    if not is_unital_map(space, phi, target):
        raise PreconditionError("map is not unital")
    if not is_positive_map(space, phi, target):
        raise PreconditionError("map is not positive")
    K = nullspace(phi, space.n)
    ideal = is_order_ideal(space, K)
    if not ideal:
        raise PreconditionError("kernel of a positive unital map failed the order ideal test")
    quo = arch_quotient(space, K)
    tilde = matmul(phi, quo.section)
    injective = rank(tilde, len(quo.projection)) == len(quo.projection)
    # pull the target cone back to quotient coordinates: {y : phi~ y in W+}
    k = len(quo.projection)
    tcone = cn.closure(target.cone)
    pulled = [tuple(dot(a, [tilde[i][j] for i in range(len(tilde))]) for j in range(k)) for a in cn.closure_rows(tcone)]
    rays, lin = cn.extreme_rays(pulled, k)
    missing = None
    qcone = quo.space.cone
    for g in list(rays) + list(lin) + [tuple(-x for x in v) for v in lin]:
        if not cn.member(qcone, g):
            missing = matvec(tilde, g)
            break
    iso = injective and missing is None
    return {
        "kernel": [fmt_vector(v) for v in K],
        "kernel_is_order_ideal": ideal,
        "quotient_dimension": k,
        "induced_map": [fmt_vector(r) for r in tilde],
        "induced_injective": injective,
        "image_condition": missing is None,
        "witness_not_in_image": fmt_vector(missing) if missing is not None else None,
        "order_isomorphism": iso,
        "quotient": quo,
    }
