"""Minimal, maximal and decomposition order norms on complex elements.

Polyhedral spaces
    ``||v||_m`` is exact: the largest ``|f(x) + i f(y)|`` over extreme states,
    with the square returned as a rational.

    ``||v||_M`` and ``||v||_dec`` are linear programs over a continuum of
    phases.  They are solved by column generation with rational unit phases
    ``u = ((1 - t^2)/(1 + t^2), 2t/(1 + t^2))``.  Every primal iterate is an
    exact decomposition of ``v`` (upper bound); every dual iterate, rescaled
    until it is feasible for all phases, gives a lower bound.

PSD matrix spaces
    Normal elements are diagonalized and handled in ``C^d``.  Otherwise the
    numerical radius, the operator norm and explicit hermitian splittings
    give two-sided bounds.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import cone as cn
from . import matrix as mx
from .arch import archimedeanize
from .core import ComplexElement, as_fraction_vector, dot, fmt_scalar, fmt_vector, sqrt_bounds
from .errors import DimensionError, PreconditionError
from .lp import RevisedSimplex, Status
from .order import extreme_states, order_seminorm, state_interval, unit_ball_vertices

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class CertifiedInterval:
    lower: object
    upper: object
    tol: float
    method_notes: str = ""
    certificates: dict = field(default_factory=dict)
    status: str = "ok"

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"interval with lower {self.lower} > upper {self.upper}")

    @property
    def width(self):
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def midpoint(self) -> float:
        return (float(self.lower) + float(self.upper)) / 2

    def contains(self, x, slack=0.0) -> bool:
        return float(self.lower) - slack <= x <= float(self.upper) + slack


@dataclass
class MinimalNorm:
    value: float
    squared: Optional[Fraction]
    lower: object
    upper: object
    witness: object = None

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class Decomposition:
    """``v = sum lambda_i element_i`` with each element hermitian or positive."""

    terms: tuple  # (lambda (re, im), element, kind)

    def reconstruct(self) -> ComplexElement:
        n = len(self.terms[0][1])
        re, im = [ZERO] * n, [ZERO] * n
        for (a, b), h, _ in self.terms:
            for i, x in enumerate(h):
                re[i] += a * x
                im[i] += b * x
        return ComplexElement(tuple(re), tuple(im))


def _elem(v) -> ComplexElement:
    if isinstance(v, ComplexElement):
        return v
    x, y = v
    return ComplexElement(tuple(x), tuple(y))


def rational_phase(theta: float, den: int = 10**6) -> tuple[Fraction, Fraction]:
    """A rational point of the unit circle within about ``1/den^2`` of angle ``theta``."""
    theta = math.remainder(theta, 2 * math.pi)
    flip = abs(theta) > math.pi / 2
    if flip:
        theta = theta - math.copysign(math.pi, theta)
    t = Fraction(math.tan(theta / 2)).limit_denominator(den)
    d = 1 + t * t
    c, s = (1 - t * t) / d, 2 * t / d
    return (-c, -s) if flip else (c, s)


def phase_grid(K: int, den: int = 10**6) -> list[tuple[Fraction, Fraction]]:
    """``K`` rational phases (``K`` a multiple of 4) closed under multiplication by ``i``."""
    if K % 4:
        raise ValueError("K must be a multiple of 4")
    quarter = [rational_phase(2 * math.pi * j / K, den) for j in range(K // 4)]
    out = []
    for c, s in quarter:
        out += [(c, s), (-s, c), (-c, -s), (s, -c)]
    return out


# ------------------------------------------------------------ preparation


@dataclass(frozen=True)
class _Data:
    space: cn.OrderedSpace
    arch: object


@lru_cache(maxsize=128)
def _prepare(space) -> _Data:
    arch = archimedeanize(space)
    return _Data(arch.space, arch)


@lru_cache(maxsize=128)
def _states(space):
    return tuple(extreme_states(space))


@lru_cache(maxsize=128)
def _ball(space):
    return tuple(unit_ball_vertices(space))


def _reduce(space, v):
    v = _elem(v)
    if v.n != space.n:
        raise DimensionError(f"element of length {v.n} in a space of dimension {space.n}")
    data = _prepare(space)
    w = ComplexElement(as_fraction_vector(v.re), as_fraction_vector(v.im))
    if not data.arch.is_identity:
        w = data.arch.project_element(w)
    return data.space, w


def _den(tol):
    return max(1000, int(10 / math.sqrt(max(tol, 1e-14))))


# ------------------------------------------------------------------ norms


def minimal_norm(space, v, tol: float = 1e-9) -> MinimalNorm:
    """``sup |f~(v)|`` over states; exact on squares for polyhedral spaces."""
    if isinstance(space.cone, cn.MatrixPSD):
        return _psd_minimal(space, _elem(v), tol)
    sp, w = _reduce(space, v)
    best, arg = ZERO, None
    for f in _states(sp):
        a, b = dot(f, w.re), dot(f, w.im)
        s = a * a + b * b
        if arg is None or s > best:
            best, arg = s, f
    lo, hi = sqrt_bounds(best)
    return MinimalNorm(math.sqrt(best), best, lo, hi, arg)


def _hermitian_interval(sp, x, kind, tol):
    s = order_seminorm(sp, x)
    iv = state_interval(sp, x)
    state = iv.beta_state if abs(iv.beta) >= abs(iv.alpha) else iv.alpha_state
    if kind == "M":
        if s == 0:
            terms = ()
        else:
            terms = (((s, ZERO), tuple(c / s for c in x), "hermitian"),)
    else:
        p = tuple((s * a + b) / 2 for a, b in zip(sp.unit, x))
        q = tuple((s * a - b) / 2 for a, b in zip(sp.unit, x))
        terms = (((ONE, ZERO), p, "positive"), ((-ONE, ZERO), q, "positive"))
    certs = {
        "upper": {"decomposition": terms, "bound": s},
        "lower": {"state": state, "value": s},
    }
    return CertifiedInterval(s, s, tol, "hermitian element: one-term decomposition and an extremal state", certs, "ok")


def maximal_norm(space, v, tol: float = 1e-6, max_rounds: int = 40, K: int = 16) -> CertifiedInterval:
    """``inf{sum |lambda_i| ||h_i|| : v = sum lambda_i h_i}`` as a certified interval."""
    if isinstance(space.cone, cn.MatrixPSD):
        return _psd_norms(space, _elem(v), tol)["M"]
    sp, w = _reduce(space, v)
    if not any(w.im):
        return _hermitian_interval(sp, w.re, "M", tol)
    n = sp.n
    m = minimal_norm(sp, w)
    ball = _ball(sp)
    den = _den(tol)
    seen = set()
    cols, keys = [], []

    def add(u, b):
        key = (u, b)
        if key in seen:
            return False
        seen.add(key)
        c, s = u
        cols.append([c * x for x in b] + [s * x for x in b])
        keys.append(key)
        return True

    for u in phase_grid(K, den):
        for b in ball:
            add(u, b)
    rhs = list(w.re) + list(w.im)
    sx = RevisedSimplex(cols, rhs, [ONE] * len(cols))
    lower, upper, status = m.lower, None, "tolerance_unmet"
    dual_cert = None
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        st = sx.solve()
        if st is not Status.OPTIMAL:
            raise PreconditionError(f"maximal-norm master LP ended {st.value}")
        upper = sx.objective()
        y = sx.duals()
        y1, y2 = y[:n], y[n:]
        obj = dot(y, rhs)
        vals = []
        smax2 = ZERO
        for b in ball:
            p, q = dot(y1, b), dot(y2, b)
            s2 = p * p + q * q
            vals.append((s2, p, q, b))
            smax2 = max(smax2, s2)
        if smax2 > 0 and obj > 0:
            _, s_hi = sqrt_bounds(smax2)
            lb = obj / s_hi
            if lb > lower:
                lower = lb
                dual_cert = (tuple(a / s_hi for a in y1), tuple(a / s_hi for a in y2))
        if upper - lower <= Fraction(tol) or smax2 <= 1:
            status = "ok" if upper - lower <= Fraction(tol) else "tolerance_unmet"
            if smax2 <= 1:
                lower = max(lower, obj)
                dual_cert = (tuple(y1), tuple(y2))
                status = "ok"
            break
        new = sorted((t for t in vals if t[0] > 1), key=lambda t: -t[0])[: 2 * n]
        fresh = []
        for _, p, q, b in new:
            u = rational_phase(math.atan2(float(q), float(p)), den)
            if add(u, b):
                fresh.append(cols[-1])
        if not fresh:
            break
        sx.add_columns(fresh, [ONE] * len(fresh))
    lower = min(lower, upper)
    x = sx.primal()
    terms = tuple(
        ((mu * keys[j][0][0], mu * keys[j][0][1]), keys[j][1], "hermitian") for j, mu in enumerate(x) if mu
    )
    certs = {
        "upper": {"decomposition": terms, "bound": upper},
        "lower": {"functional": dual_cert, "minimal_norm_lower": m.lower},
    }
    notes = f"column generation, {rounds} rounds, {len(cols)} phase columns"
    return CertifiedInterval(lower, upper, tol, notes, certs, status)


def decomposition_norm(space, v, tol: float = 1e-6, max_rounds: int = 40, K: int = 16) -> CertifiedInterval:
    """``inf{||sum |lambda_i| p_i|| : v = sum lambda_i p_i, p_i >= 0}`` as a certified interval."""
    if isinstance(space.cone, cn.MatrixPSD):
        return _psd_norms(space, _elem(v), tol)["dec"]
    sp, w = _reduce(space, v)
    if not any(w.im):
        return _hermitian_interval(sp, w.re, "dec", tol)
    n = sp.n
    m = minimal_norm(sp, w)
    rays = [g for g in cn.generators(sp.cone)]
    A = cn.closure_rows(sp.cone)
    e = sp.unit
    states = _states(sp)
    psi0 = tuple(sum((f[i] for f in states), ZERO) / len(states) for i in range(n))
    den = _den(tol)
    nA = len(A)
    Ag = {g: [dot(a, g) for a in A] for g in rays}
    cols = [[ZERO] * (2 * n) + [dot(a, e) for a in A]]
    costs = [ONE]
    keys = [None]
    for i in range(nA):
        cols.append([ZERO] * (2 * n) + [(-ONE if k == i else ZERO) for k in range(nA)])
        costs.append(ZERO)
        keys.append(None)
    seen = set()

    def column(u, g):
        c, s = u
        return [c * x for x in g] + [s * x for x in g] + [-t for t in Ag[g]]

    for u in phase_grid(K, den):
        for g in rays:
            seen.add((u, g))
            cols.append(column(u, g))
            costs.append(ZERO)
            keys.append((u, g))
    rhs = list(w.re) + list(w.im) + [ZERO] * nA
    sx = RevisedSimplex(cols, rhs, costs)
    lower, upper, status = m.lower, None, "tolerance_unmet"
    dual_cert = None
    rounds = 0
    eps_grid = [ZERO, Fraction(1, 10**6), Fraction(1, 10**4), Fraction(1, 100), Fraction(1, 10)]
    for rounds in range(1, max_rounds + 1):
        st = sx.solve()
        if st is not Status.OPTIMAL:
            raise PreconditionError(f"decomposition-norm master LP ended {st.value}")
        upper = sx.objective()
        y = sx.duals()
        w1, w2, z = y[:n], y[n : 2 * n], y[2 * n :]
        psi = tuple(sum((zi * a[k] for zi, a in zip(z, A)), ZERO) for k in range(n))
        obj = dot(y[: 2 * n], rhs[: 2 * n])
        wg = {g: (dot(w1, g), dot(w2, g)) for g in rays}
        if obj > 0:
            for eps in eps_grid:
                pe = tuple(a + eps * b for a, b in zip(psi, psi0))
                tau2, ok = ZERO, True
                for g in rays:
                    p, q = wg[g]
                    num = p * p + q * q
                    dg = dot(pe, g)
                    if dg <= 0:
                        if num:
                            ok = False
                            break
                        continue
                    tau2 = max(tau2, num / (dg * dg))
                pe_e = dot(pe, e)
                if not ok or tau2 == 0 or pe_e <= 0:
                    continue
                _, tau_hi = sqrt_bounds(tau2)
                lb = obj / (tau_hi * pe_e)
                if lb > lower:
                    lower = lb
                    scale = tau_hi * pe_e
                    dual_cert = (tuple(a / scale for a in w1), tuple(a / scale for a in w2), tuple(a / pe_e for a in pe))
        viol = []
        for g in rays:
            p, q = wg[g]
            pg = dot(psi, g)
            num = p * p + q * q
            if num > pg * pg or (pg < 0 and num > 0):
                viol.append((num - pg * abs(pg), p, q, g))
        if not viol:
            lower = max(lower, obj)
            dual_cert = (tuple(w1), tuple(w2), psi)
            status = "ok"
            break
        if upper - lower <= Fraction(tol):
            status = "ok"
            break
        viol.sort(key=lambda t: -t[0])
        fresh = []
        for _, p, q, g in viol[: 2 * n]:
            u = rational_phase(math.atan2(float(q), float(p)), den)
            if (u, g) in seen:
                continue
            seen.add((u, g))
            fresh.append(column(u, g))
            keys.append((u, g))
        if not fresh:
            break
        sx.add_columns(fresh, [ZERO] * len(fresh))
    lower = min(lower, upper)
    x = sx.primal()
    terms = tuple(
        (keys[j][0], tuple(mu * t for t in keys[j][1]), "positive") for j, mu in enumerate(x) if mu and keys[j]
    )
    certs = {
        "upper": {"decomposition": terms, "bound": upper},
        "lower": {"functional": dual_cert, "minimal_norm_lower": m.lower},
    }
    notes = f"column generation, {rounds} rounds, {len(cols)} columns"
    return CertifiedInterval(lower, upper, tol, notes, certs, status)


def convex_combination_norm(space, v, t, tol: float = 1e-6, **kw) -> CertifiedInterval:
    """``t ||v||_m + (1 - t) ||v||_M``."""
    t = Fraction(t) if not isinstance(t, float) else t
    if not 0 <= t <= 1:
        raise PreconditionError("t must lie in [0, 1]")
    m = minimal_norm(space, v, tol)
    M = maximal_norm(space, v, tol, **kw)
    lo = t * m.lower + (1 - t) * M.lower
    hi = t * m.upper + (1 - t) * M.upper
    status = "ok" if hi - lo <= tol else "tolerance_unmet"
    certs = {"minimal": {"lower": m.lower, "upper": m.upper, "state": m.witness}, "maximal": M.certificates}
    return CertifiedInterval(lo, hi, tol, f"convex combination with t = {t}", certs, status)


# ------------------------------------------------------- certificate checks


def check_interval(space, v, iv: CertifiedInterval, kind: str) -> bool:
    """Re-verify the certificates of a polyhedral ``M`` or ``dec`` interval exactly."""
    sp, w = _reduce(space, v)
    up = iv.certificates["upper"]
    terms = up["decomposition"]
    n = sp.n
    if terms:
        rec = Decomposition(tuple(terms)).reconstruct()
        if rec.re != w.re or rec.im != w.im:
            return False
    elif any(w.re) or any(w.im):
        return False
    closed = cn.closure(sp.cone)
    if kind == "M":
        cost = ZERO
        for (a, b), h, _ in terms:
            cost2 = a * a + b * b
            s = order_seminorm(sp, h)
            lo, hi = sqrt_bounds(cost2)
            cost += hi * s
            if lo != hi:
                return False  # phases are exact unit multiples
        if cost > up["bound"]:
            return False
    else:
        total = [ZERO] * n
        for (a, b), p, _ in terms:
            if a * a + b * b != 1 or not cn.member(closed, p):
                return False
            total = [t + x for t, x in zip(total, p)]
        if state_interval(sp, tuple(total)).beta > up["bound"]:
            return False
    lo = iv.certificates["lower"]
    if lo.get("state") is not None:
        f = lo["state"]
        if dot(f, sp.unit) != 1 or any(dot(f, g) < 0 for g in cn.generators(sp.cone)):
            return False
        return iv.lower <= abs(dot(f, w.re))
    if lo.get("functional") is None:
        return iv.lower <= lo["minimal_norm_lower"]
    f = lo["functional"]
    value = dot(f[0], w.re) + dot(f[1], w.im)
    if kind == "M":
        if any(dot(f[0], b) ** 2 + dot(f[1], b) ** 2 > 1 for b in _ball(sp)):
            return False
    else:
        psi = f[2]
        if dot(psi, sp.unit) > 1 or any(dot(psi, g) < 0 for g in cn.generators(sp.cone)):
            return False
        for g in cn.generators(sp.cone):
            if dot(f[0], g) ** 2 + dot(f[1], g) ** 2 > dot(psi, g) ** 2:
                return False
    return iv.lower <= max(value, lo["minimal_norm_lower"])


# ---------------------------------------------------------------- PSD path


def _psd_matrix(space, v):
    d = space.cone.d
    X = mx.join([float(a) for a in v.re], [float(a) for a in v.im], d)
    E = mx.to_matrix(space.unit, d)
    return mx.normalize(X, E)


def _psd_minimal(space, v, tol):
    X = _psd_matrix(space, v)
    lo, hi, theta = mx.numerical_radius(X, tol)
    return MinimalNorm((lo + hi) / 2, None, lo, hi, theta)


def _psd_norms(space, v, tol, grid: int = 256) -> dict:
    X = _psd_matrix(space, v)
    scale = max(1.0, mx.op_norm(X))
    if mx.is_normal(X, 1e-12 * scale):
        return _psd_normal(X, tol)
    lo_w, hi_w, theta = mx.numerical_radius(X, min(tol, 1e-9))
    op = mx.op_norm(X)
    dec_lo = max(lo_w, op)
    best_M, best_Mt = math.inf, 0.0
    best_d, best_dt = math.inf, 0.0
    for t in mx.theta_grid(grid) / 2:  # period pi/2
        H1, H2 = mx.hermitian_parts(np.exp(-1j * t) * X)
        vm = mx.spectral_norm(H1) + mx.spectral_norm(H2)
        if vm < best_M:
            best_M, best_Mt = vm, float(t)
        vd = mx.spectral_norm(mx.absolute(H1) + mx.absolute(H2))
        if vd < best_d:
            best_d, best_dt = vd, float(t)
    dec_hi = min(best_d, best_M)
    M_lo, M_hi = dec_lo, best_M
    notes_d = "lower: max(numerical radius, operator norm); upper: |Re| + |Im| splitting of a phase rotation"
    notes_M = "lower: decomposition-norm lower bound; upper: ||Re|| + ||Im|| of a phase rotation"
    out = {}
    for key, lo, hi, note, cert in (
        ("dec", dec_lo, max(dec_hi, dec_lo), notes_d, {"theta": best_dt}),
        ("M", M_lo, max(M_hi, M_lo), notes_M, {"theta": best_Mt}),
    ):
        status = "ok" if hi - lo <= tol else "tolerance_unmet"
        certs = {"upper": {"bound": hi, **cert}, "lower": {"numerical_radius": lo_w, "operator_norm": op}}
        out[key] = CertifiedInterval(lo, hi, tol, note, certs, status)
    out["m"] = CertifiedInterval(lo_w, hi_w, tol, "numerical radius sweep", {"theta": theta})
    return out


def _psd_normal(X, tol) -> dict:
    """Normal ``X``: unitary diagonalization reduces every norm to ``C^d``."""
    lam = np.linalg.eigvals(X)
    d = len(lam)
    sp = cn.orthant_space(d)
    x = tuple(Fraction(float(z.real)) for z in lam)
    y = tuple(Fraction(float(z.imag)) for z in lam)
    v = ComplexElement(x, y)
    # eigenvalue perturbation; every order norm is 2-Lipschitz for the operator norm
    eta = 2 * 64 * d * np.finfo(float).eps * max(1.0, float(np.max(np.abs(lam))))
    out = {}
    m = minimal_norm(sp, v)
    out["m"] = CertifiedInterval(max(0.0, float(m.lower) - eta), float(m.upper) + eta, tol, "normal: max |eigenvalue|")
    for key, fn in (("M", maximal_norm), ("dec", decomposition_norm)):
        iv = fn(sp, v, tol / 2)
        lo, hi = max(0.0, float(iv.lower) - eta), float(iv.upper) + eta
        status = "ok" if hi - lo <= tol else "tolerance_unmet"
        certs = dict(iv.certificates)
        certs["eigenvalues"] = [(fmt_scalar(a), fmt_scalar(b)) for a, b in zip(x, y)]
        out[key] = CertifiedInterval(lo, hi, tol, "normal element: diagonalized, computed in C^d; " + iv.method_notes, certs, status)
    return out


# -------------------------------------------------------- positivity of maps


def map_positivity_test(space_v, space_w, phi, tol: float = 1e-9, samples: int = 200, seed: int = 0) -> dict:
    """Direct positivity of a unital map, cross-checked against a sampled ``||phi||_m``."""
    from .arch import is_positive_map, is_unital_map

    phi = [as_fraction_vector(r) for r in phi]
    if len(phi) != space_w.n or any(len(r) != space_v.n for r in phi):
        raise DimensionError("map has the wrong shape")
    if not is_unital_map(space_v, phi, space_w):
        raise PreconditionError("map is not unital")
    positive = is_positive_map(space_v, phi, space_w)
    rng = random.Random(seed)
    sp, _ = _reduce(space_v, ComplexElement(space_v.unit, space_v.unit))
    ball = list(_ball(sp))
    grid = phase_grid(16, 1000)
    cands = []
    for b in ball:
        cands.append(ComplexElement(b, tuple(ZERO for _ in b)))
    for _ in range(samples):
        b1, b2 = rng.choice(ball), rng.choice(ball)
        c, s = rng.choice(grid)
        # b1 + u b2 with u a unit phase
        cands.append(ComplexElement(tuple(x + c * y for x, y in zip(b1, b2)), tuple(s * y for y in b2)))
    # ball vertices live in the reduced space; lift through the section when N != 0
    arch = _prepare(space_v).arch
    best, arg = ZERO, None
    for v in cands:
        if not arch.is_identity:
            v = ComplexElement(arch.lift(v.re), arch.lift(v.im))
        den = minimal_norm(space_v, v).squared
        if not den:
            continue
        img = ComplexElement(
            tuple(dot(r, v.re) for r in phi), tuple(dot(r, v.im) for r in phi)
        )
        ratio = minimal_norm(space_w, img).squared / den
        if arg is None or ratio > best:
            best, arg = ratio, v
    norm_est = math.sqrt(best)
    return {
        "unital": True,
        "positive": positive,
        "sampled_m_norm": norm_est,
        "sampled_m_norm_squared": fmt_scalar(best),
        "witness": {"re": fmt_vector(arg.re), "im": fmt_vector(arg.im)} if arg is not None else None,
        "norm_criterion_agrees": positive == (best <= 1),
        "samples": len(cands),
    }
