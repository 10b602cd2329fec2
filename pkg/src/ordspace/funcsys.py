"""Evaluation at extreme states: ``V -> C(X)`` for the finite set ``X`` of extreme states."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import cone as cn
from .core import ComplexElement, dot, fmt_vector, star
from .errors import CapabilityError, NotArchimedeanError
from .linalg import rank
from .lp import vertices
from .order import extreme_states, is_archimedean

ZERO = Fraction(0)


@dataclass(frozen=True)
class Embedding:
    extreme_states: tuple
    matrix: tuple  # rows = states, columns = coordinates

    def __call__(self, h) -> tuple:
        return tuple(dot(row, h) for row in self.matrix)

    def apply(self, v: ComplexElement) -> tuple:
        """``(f_k(x) + i f_k(y))_k`` as pairs."""
        return tuple((dot(row, v.re), dot(row, v.im)) for row in self.matrix)


def kadison_embed(space) -> Embedding:
    if not space.polyhedral:
        raise CapabilityError("the embedding needs finitely many extreme states (polyhedral cone)")
    if not is_archimedean(space) or cn.lineality(space.cone):
        raise NotArchimedeanError("the space is not Archimedean; archimedeanize it first")
    states = tuple(tuple(f) for f in extreme_states(space))
    if rank([list(f) for f in states], space.n) != space.n:
        raise NotArchimedeanError("extreme states do not separate points")
    return Embedding(states, states)


def _random_vector(rng, n, lo=-5, hi=5):
    return tuple(Fraction(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(n))


def verify_embedding(space, emb: Embedding, samples: int = 100, seed: int = 0) -> dict:
    """Isometry for the minimal norm, order embedding, unit and *-compatibility on random samples.

    The reference minimal norm comes from enumerating the vertices of the state
    polytope directly, not from the states stored in the embedding.
    """
    rng = random.Random(seed)
    n = space.n
    closed = cn.closure(space.cone)
    gens = cn.generators(space.cone)
    poly = vertices([(g, ZERO) for g in gens], [(space.unit, Fraction(1))], n=n)
    failures = {}

    def m2(v):
        return max(dot(f, v.re) ** 2 + dot(f, v.im) ** 2 for f in poly)

    iso = True
    order = True
    for _ in range(samples):
        v = ComplexElement(_random_vector(rng, n), _random_vector(rng, n))
        img = emb.apply(v)
        if max(a * a + b * b for a, b in img) != m2(v):
            iso = False
            failures.setdefault("isometry", {"re": fmt_vector(v.re), "im": fmt_vector(v.im)})
        conj = emb.apply(star(v))
        if any(c != (a, -b) for c, (a, b) in zip(conj, img)):
            failures.setdefault("star", {"re": fmt_vector(v.re), "im": fmt_vector(v.im)})
    # order: random points, generators and points pushed onto the boundary
    tests = [_random_vector(rng, n) for _ in range(samples)] + [tuple(g) for g in gens]
    for g in gens[:]:
        tests.append(tuple(a - b / 7 for a, b in zip(g, space.unit)))
    for h in tests:
        inside = cn.member(closed, h)
        nonneg = all(x >= 0 for x in emb(h))
        if inside != nonneg:
            order = False
            failures.setdefault("order", fmt_vector(h))
    unit_ok = all(x == 1 for x in emb(space.unit))
    if not unit_ok:
        failures["unit"] = fmt_vector(emb(space.unit))
    report = {
        "isometry": iso,
        "order_embedding": order,
        "unit": unit_ok,
        "star": "star" not in failures,
        "injective": rank([list(r) for r in emb.matrix], n) == n,
        "samples": samples,
        "failures": failures,
    }
    report["passed"] = iso and order and unit_ok and report["star"] and report["injective"]
    return report
