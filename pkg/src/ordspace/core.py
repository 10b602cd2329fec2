"""Scalars, real coordinate vectors and complex elements stored as real pairs.

A complex element ``v = x + iy`` of ``V = V_h + iV_h`` is never held as complex
numbers; it is the pair of real coordinate tuples ``(x, y)``.  Exact mode uses
:class:`fractions.Fraction` throughout, approximate mode uses ``float``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import DimensionError, MalformedElementError, ParseError

Scalar = Union[Fraction, float]
RealVector = tuple


class Mode(str, enum.Enum):
    EXACT = "exact"
    APPROX = "approx"


DEFAULT_APPROX_TOL = 1e-9

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_scalar(text, mode=Mode.EXACT) -> Scalar:
    """Parse ``"p/q"``, an integer, or (approx mode only) a decimal string."""
    if isinstance(text, bool):
        raise ParseError(f"boolean is not a scalar: {text!r}")
    if not isinstance(text, str):
        return to_scalar(text, mode)
    m = _RATIONAL_RE.match(text)
    if m:
        if m.group(2) is not None and int(m.group(2)) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        q = Fraction(int(m.group(1)), int(m.group(2) or 1))
        return q if mode is Mode.EXACT else float(q)
    if mode is Mode.EXACT:
        raise ParseError(f"{text!r} is not a rational literal; exact mode needs 'p/q' strings")
    try:
        return float(text)
    except ValueError as exc:
        raise ParseError(f"cannot parse scalar {text!r}") from exc


def to_scalar(x, mode=Mode.EXACT) -> Scalar:
    if isinstance(x, bool):
        raise ParseError(f"boolean is not a scalar: {x!r}")
    if mode is Mode.EXACT:
        if isinstance(x, (int, Rational)):
            return Fraction(x)
        if isinstance(x, str):
            return parse_scalar(x, mode)
        # no silent promotion of binary floats into the exact world
        raise TypeError(f"exact mode refuses non-rational value {x!r}")
    if isinstance(x, str):
        return parse_scalar(x, mode)
    return float(x)


def vec(values: Iterable, mode=Mode.EXACT) -> RealVector:
    return tuple(to_scalar(v, mode) for v in values)


def zeros(n: int, mode=Mode.EXACT) -> RealVector:
    return tuple(Fraction(0) if mode is Mode.EXACT else 0.0 for _ in range(n))


def unit_vector(n: int, k: int, mode=Mode.EXACT) -> RealVector:
    one, zero = (Fraction(1), Fraction(0)) if mode is Mode.EXACT else (1.0, 0.0)
    return tuple(one if i == k else zero for i in range(n))


def _check_len(a, b):
    if len(a) != len(b):
        raise DimensionError(f"length mismatch: {len(a)} vs {len(b)}")


def dot(a: Sequence, b: Sequence):
    _check_len(a, b)
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a, b) -> RealVector:
    _check_len(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a, b) -> RealVector:
    _check_len(a, b)
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a) -> RealVector:
    return tuple(c * x for x in a)


def neg(a) -> RealVector:
    return tuple(-x for x in a)


def lincomb(coeffs, vectors, n=None) -> RealVector:
    if n is None:
        n = len(vectors[0])
    out = [Fraction(0)] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                out[i] += c * x
    return tuple(out)


def is_zero(v, tol=None) -> bool:
    if tol is None:
        return all(x == 0 for x in v)
    return all(abs(x) <= tol for x in v)


def approx_equal(a, b, tol: float) -> bool:
    return abs(a - b) <= tol


def as_fraction_vector(v) -> RealVector:
    """Exact image of a vector; floats convert to their binary-rational value."""
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in v)


def sqrt_bounds(q, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(q) <= hi`` with ``hi - lo <= 2**-bits`` relative to the denominator.

    Perfect rational squares come back with ``lo == hi``.
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative square")
    p, r = q.numerator, q.denominator
    sp, sr = math.isqrt(p), math.isqrt(r)
    if sp * sp == p and sr * sr == r:
        exact = Fraction(sp, sr)
        return exact, exact
    scale_ = 1 << bits
    a = math.isqrt(p * r * scale_ * scale_)
    lo = Fraction(a, r * scale_)
    hi = Fraction(a + 1, r * scale_)
    return lo, hi


# ---------------------------------------------------------------- complex layer

ComplexScalar = tuple  # (re, im)


def cmul(a: ComplexScalar, b: ComplexScalar) -> ComplexScalar:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def cabs2(a: ComplexScalar):
    return a[0] * a[0] + a[1] * a[1]


def cconj(a: ComplexScalar) -> ComplexScalar:
    return (a[0], -a[1])


@dataclass(frozen=True)
class ComplexElement:
    """``re + i*im`` with both parts hermitian coordinate vectors."""

    re: RealVector
    im: RealVector

    def __post_init__(self):
        if len(self.re) != len(self.im):
            raise MalformedElementError(
                f"real part has length {len(self.re)} but imaginary part has {len(self.im)}"
            )
        object.__setattr__(self, "re", tuple(self.re))
        object.__setattr__(self, "im", tuple(self.im))

    @classmethod
    def hermitian(cls, h) -> "ComplexElement":
        h = tuple(h)
        zero = Fraction(0) if not h or not isinstance(h[0], float) else 0.0
        return cls(h, tuple(zero for _ in h))

    @property
    def n(self) -> int:
        return len(self.re)

    @property
    def is_hermitian(self) -> bool:
        return is_zero(self.im)

    def __add__(self, other):
        return ComplexElement(add(self.re, other.re), add(self.im, other.im))

    def __sub__(self, other):
        return ComplexElement(sub(self.re, other.re), sub(self.im, other.im))

    def __neg__(self):
        return ComplexElement(neg(self.re), neg(self.im))

    def cscale(self, lam: ComplexScalar) -> "ComplexElement":
        a, b = lam
        return ComplexElement(
            tuple(a * x - b * y for x, y in zip(self.re, self.im)),
            tuple(a * y + b * x for x, y in zip(self.re, self.im)),
        )

    def star(self) -> "ComplexElement":
        return star(self)


def star(v: ComplexElement) -> ComplexElement:
    """The involution ``(x + iy)* = x - iy``."""
    return ComplexElement(v.re, neg(v.im))


def re_part(v: ComplexElement) -> RealVector:
    return v.re


def im_part(v: ComplexElement) -> RealVector:
    return v.im


@dataclass(frozen=True)
class RealFunctional:
    """A real-linear functional on ``V_h`` acting by the standard pairing."""

    coeffs: RealVector

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def __call__(self, h):
        return dot(self.coeffs, h)

    def complexify(self) -> "ComplexFunctional":
        return ComplexFunctional(self)


@dataclass(frozen=True)
class ComplexFunctional:
    """Complexification ``f~(x + iy) = f(x) + i f(y)`` of a real functional."""

    base: RealFunctional

    def __call__(self, v: ComplexElement) -> ComplexScalar:
        return complexify(self.base, v)


def complexify(f: RealFunctional, v: ComplexElement) -> ComplexScalar:
    if len(f.coeffs) != v.n:
        raise DimensionError(f"functional of length {len(f.coeffs)} applied to element of length {v.n}")
    return (f(v.re), f(v.im))


def fmt_scalar(x) -> str:
    """Serialize a scalar: rationals as ``"p/q"`` (or integer), floats via ``repr``."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int) and not isinstance(x, bool):
        return str(x)
    return repr(float(x))


def fmt_vector(v) -> list[str]:
    return [fmt_scalar(x) for x in v]
