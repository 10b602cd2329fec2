import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import minimal_norm_oracle
from ordspace import norms
from ordspace.cone import OrderedSpace, h_cone, orthant_space, psd_space
from ordspace.core import ComplexElement, star
from ordspace.errors import DimensionError, PreconditionError
from ordspace.matrix import numerical_radius, split
from strategies import space_and_element, seeds

TOL = 1e-4


def psd_element(X):
    x, y = split(np.asarray(X, dtype=complex))
    return ComplexElement(x, y)


def test_c2_example():
    sp = orthant_space(2)
    v = ComplexElement((1, 0), (0, 1))
    m = norms.minimal_norm(sp, v)
    assert m.squared == 1 and m.lower == m.upper == 1
    d = norms.decomposition_norm(sp, v, TOL)
    assert d.lower <= 1 <= d.upper and d.width <= TOL
    M = norms.maximal_norm(sp, v, TOL)
    assert M.contains(math.sqrt(2)) and M.status == "ok"
    assert norms.check_interval(sp, v, d, "dec")
    assert norms.check_interval(sp, v, M, "M")


def test_rational_phases_are_exactly_unimodular():
    for th in np.linspace(-7, 7, 57):
        c, s = norms.rational_phase(float(th), 1000)
        assert c * c + s * s == 1
        assert abs(math.atan2(float(s), float(c)) - math.remainder(th, 2 * math.pi)) < 1e-5 or abs(abs(th) - math.pi) < 1e-3
    grid = norms.phase_grid(16, 1000)
    assert set(grid) == {(-s, c) for c, s in grid}
    with pytest.raises(ValueError):
        norms.phase_grid(6)


@given(space_and_element())
def test_minimal_norm_exact_against_oracle(data):
    sp, v = data
    m = norms.minimal_norm(sp, v)
    assert m.lower ** 2 <= m.squared <= m.upper ** 2
    assert abs(m.value - minimal_norm_oracle(sp, v)) <= 1e-9 * max(1, m.value)


@given(space_and_element(max_dim=3))
def test_sandwich_and_certificates(data):
    sp, v = data
    m = norms.minimal_norm(sp, v)
    d = norms.decomposition_norm(sp, v, TOL)
    M = norms.maximal_norm(sp, v, TOL)
    assert m.lower <= d.upper and d.lower <= M.upper
    assert float(M.lower) <= 2 * m.value + TOL
    assert norms.check_interval(sp, v, d, "dec")
    assert norms.check_interval(sp, v, M, "M")


@given(space_and_element(max_dim=3))
def test_star_invariance(data):
    sp, v = data
    w = star(v)
    assert norms.minimal_norm(sp, v).squared == norms.minimal_norm(sp, w).squared
    for fn in (norms.maximal_norm, norms.decomposition_norm):
        a, b = fn(sp, v, TOL), fn(sp, w, TOL)
        assert a.lower <= b.upper and b.lower <= a.upper


@given(space_and_element(max_dim=3))
def test_hermitian_restriction_is_exact(data):
    sp, v = data
    h = ComplexElement(v.re, tuple(Fraction(0) for _ in v.re))
    from ordspace.order import order_seminorm

    s = order_seminorm(sp, h.re)
    assert norms.minimal_norm(sp, h).squared == s * s
    for fn, kind in ((norms.maximal_norm, "M"), (norms.decomposition_norm, "dec")):
        iv = fn(sp, h, TOL)
        assert iv.lower == iv.upper == s
        assert norms.check_interval(sp, h, iv, kind)


@given(space_and_element(max_dim=3), st.integers(-3, 3), st.integers(-3, 3))
def test_min_equals_dec_on_unit_plus_hermitian(data, a, b):
    sp, v = data
    w = ComplexElement(tuple(a * e + x for e, x in zip(sp.unit, v.re)), tuple(b * e for e in sp.unit))
    m = norms.minimal_norm(sp, w)
    d = norms.decomposition_norm(sp, w, TOL)
    assert abs(float(d.upper) - m.value) <= TOL
    assert float(d.lower) <= m.value + 1e-12


@given(space_and_element(max_dim=3), seeds)
def test_phase_invariance(data, seed):
    sp, v = data
    u = norms.rational_phase(random.Random(seed).uniform(-3, 3), 100)
    w = v.cscale(u)
    assert norms.minimal_norm(sp, v).squared == norms.minimal_norm(sp, w).squared
    a, b = norms.maximal_norm(sp, v, TOL), norms.maximal_norm(sp, w, TOL)
    assert a.lower <= b.upper and b.lower <= a.upper


def test_unit_has_norm_one():
    sp = OrderedSpace(h_cone([(2, 1), (-1, 3)]), (1, 1))
    e = ComplexElement(sp.unit, (0, 0))
    assert norms.minimal_norm(sp, e).squared == 1
    assert norms.maximal_norm(sp, e).lower == norms.maximal_norm(sp, e).upper == 1
    assert norms.decomposition_norm(sp, e).upper == 1


def test_tampered_certificates_are_rejected():
    sp = orthant_space(2)
    v = ComplexElement((1, 0), (0, 1))
    M = norms.maximal_norm(sp, v, TOL)
    forged = norms.CertifiedInterval(M.lower + Fraction(1, 10), M.upper + Fraction(1, 10), M.tol, "", M.certificates)
    assert not norms.check_interval(sp, v, forged, "M")
    other = ComplexElement((1, 0), (0, 2))
    assert not norms.check_interval(sp, other, M, "M")


def test_non_archimedean_space_uses_the_quotient():
    sp = OrderedSpace(h_cone([(1, 0)], strict=[True]), (1, 0))
    v = ComplexElement((1, 2), (0, 1))
    M = norms.maximal_norm(sp, v)
    assert M.lower == M.upper == 1
    assert norms.minimal_norm(sp, v).squared == 1
    assert norms.minimal_norm(sp, ComplexElement((0, 5), (0, 1))).squared == 0


def test_convex_combination():
    sp = orthant_space(2)
    v = ComplexElement((1, 0), (0, 1))
    iv = norms.convex_combination_norm(sp, v, Fraction(1, 2), TOL)
    assert iv.contains((1 + math.sqrt(2)) / 2, 1e-12)
    with pytest.raises(PreconditionError):
        norms.convex_combination_norm(sp, v, 2)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        norms.minimal_norm(orthant_space(2), ComplexElement((1, 0, 0), (0, 0, 0)))


# ---------------------------------------------------------------- PSD path


def test_m2_off_diagonal_unit():
    sp = psd_space(2)
    v = psd_element([[0, 1], [0, 0]])
    m = norms.minimal_norm(sp, v, 1e-9)
    assert abs(m.value - 0.5) <= 1e-6 and m.lower <= 0.5 + 1e-12
    d = norms.decomposition_norm(sp, v)
    M = norms.maximal_norm(sp, v)
    assert (float(d.lower), float(d.upper)) == (1.0, 1.0)
    assert (float(M.lower), float(M.upper)) == (1.0, 1.0)


def test_m2_diagonal_uses_commutative_path():
    sp = psd_space(2)
    v = psd_element(np.diag([1, 1j]))
    d = norms.decomposition_norm(sp, v, TOL)
    M = norms.maximal_norm(sp, v, TOL)
    assert d.contains(1.0, 1e-12) and M.contains(math.sqrt(2), 1e-12)
    assert "normal" in M.method_notes


def _nr_sampled(X, rng, k=20000):
    z = rng.normal(size=(k, X.shape[0])) + 1j * rng.normal(size=(k, X.shape[0]))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return float(np.max(np.abs(np.einsum("ki,ij,kj->k", z.conj(), X, z))))


@pytest.mark.parametrize("seed", range(6))
def test_numerical_radius_brackets_sampling(seed):
    rng = np.random.default_rng(seed)
    d = 2 + seed % 2
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    lo, hi, _ = numerical_radius(X, 1e-10)
    assert lo <= hi <= lo + 1e-8
    assert _nr_sampled(X, rng) <= hi + 1e-12
    assert lo >= np.linalg.norm(X, 2) / 2 - 1e-12


@pytest.mark.parametrize("seed", range(6))
def test_psd_sandwich(seed):
    rng = np.random.default_rng(100 + seed)
    X = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    sp = psd_space(2)
    v = psd_element(X)
    m = norms.minimal_norm(sp, v)
    d = norms.decomposition_norm(sp, v)
    M = norms.maximal_norm(sp, v)
    assert m.lower <= float(d.upper) + 1e-12
    assert float(d.lower) <= float(M.upper) + 1e-12
    assert float(M.lower) <= 2 * m.upper + 1e-9


def test_map_positivity():
    sp = orthant_space(2)
    swap = [[0, 1], [1, 0]]
    rep = norms.map_positivity_test(sp, sp, swap, samples=50)
    assert rep["positive"] and rep["norm_criterion_agrees"]
    assert abs(rep["sampled_m_norm"] - 1) < 1e-12
    bad = [[2, -1], [0, 1]]
    rep = norms.map_positivity_test(sp, sp, bad, samples=50)
    assert not rep["positive"] and rep["sampled_m_norm"] > 1
