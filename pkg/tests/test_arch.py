import random
from fractions import Fraction

import pytest
from hypothesis import given

from ordspace import arch
from ordspace import cone as cn
from ordspace import order
from ordspace.cone import OrderedSpace, h_cone, orthant_space, v_cone
from ordspace.errors import CapabilityError, PreconditionError
from ordspace.linalg import matmul
from spaces import random_space
from strategies import seeds, strict_spaces


def halfplane():
    return OrderedSpace(h_cone([(1, 0)], strict=[True]), (1, 0))


def random_positive_unital_map(rng, space, target):
    """``phi = sum_k p_k f_k`` with states ``f_k`` of ``space`` and positive ``p_k`` summing to ``e_W``."""
    states = order.extreme_states(arch.archimedeanize(space).space)
    q = arch.archimedeanize(space)
    states = [tuple(sum(f[i] * q.projection[i][j] for i in range(len(f))) for j in range(space.n)) for f in states]
    gens = cn.generators(target.cone)
    parts = []
    remaining = target.unit
    for _ in states[:-1]:
        g = rng.choice(gens)
        t = Fraction(rng.randint(0, 4), 8)
        cand = tuple(t * x for x in g)
        rest = tuple(a - b for a, b in zip(remaining, cand))
        if cn.member(target.cone, rest):
            parts.append(cand)
            remaining = rest
        else:
            parts.append(tuple(Fraction(0) for _ in g))
    parts.append(remaining)
    return [[sum(p[r] * f[c] for p, f in zip(parts, states)) for c in range(space.n)] for r in range(target.n)]


def test_archimedeanize_identity_and_closure():
    sp = orthant_space(2)
    assert arch.archimedeanize(sp).is_identity
    oq = OrderedSpace(cn.open_orthant(2), (1, 1))
    res = arch.archimedeanize(oq)
    assert res.is_identity and cn.is_closed(res.space.cone)
    assert cn.member(res.space.cone, (1, 0))


def test_halfplane_archimedeanization():
    res = arch.archimedeanize(halfplane())
    assert res.kernel == [(0, 1)]
    assert res.space.n == 1 and res.space.unit == (1,)
    assert cn.member(res.space.cone, (1,)) and not cn.member(res.space.cone, (-1,))
    assert order.is_archimedean(res.space)


@given(strict_spaces())
def test_archimedeanization_is_archimedean(space):
    res = arch.archimedeanize(space)
    order.validate_space(res.space)
    assert order.is_archimedean(res.space)
    # the projection sends the closed cone onto the new cone
    for g in cn.generators(space.cone):
        assert cn.member(res.space.cone, res.project(g))
    assert matmul(res.projection, res.section) == [
        [Fraction(int(i == j)) for j in range(res.space.n)] for i in range(res.space.n)
    ]


@given(seeds)
def test_factor_through_random_maps(seed):
    rng = random.Random(seed)
    space = halfplane() if rng.random() < 0.3 else OrderedSpace(
        h_cone([(1, 0, 0), (0, 1, 0)], strict=[True, False]), (1, 1, 0)
    )
    target = random_space(rng, rng.randint(1, 3))
    phi = random_positive_unital_map(rng, space, target)
    tilde, diag = arch.factor_through(space, phi, target)
    q = arch.archimedeanize(space)
    assert matmul(tilde, q.projection) == [list(r) for r in phi]
    assert diag["identity_exact"] and diag["kernel_contains_N"]


def test_factor_through_rejects():
    sp = halfplane()
    target = orthant_space(1)
    with pytest.raises(PreconditionError):
        arch.factor_through(sp, [[2, 0]], target)  # not unital
    with pytest.raises(PreconditionError):
        arch.factor_through(sp, [[1, 1]], target)  # not positive (and not zero on N)


def test_order_ideals():
    sp = orthant_space(3)
    assert arch.is_order_ideal(sp, [(1, 0, 0)])
    assert not arch.is_order_ideal(sp, [(1, 1, 0)])
    p, q = arch.order_ideal_witness(sp, [(1, 1, 0)])
    assert cn.member(sp.cone, q) and cn.member(sp.cone, tuple(a - b for a, b in zip(p, q)))
    assert arch.is_order_ideal(sp, [(1, 0, 0), (0, 1, 0)])
    assert arch.is_order_ideal(sp, [])


def test_quotient_by_coordinate_ideal():
    sp = orthant_space(3)
    res = arch.quotient(sp, [(1, 0, 0)])
    assert res.space.n == 2
    assert order.is_archimedean(res.space)
    assert res.project(sp.unit) == res.space.unit
    with pytest.raises(PreconditionError):
        arch.quotient(sp, [(1, 1, 0)])
    with pytest.raises(PreconditionError):
        arch.quotient(sp, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    with pytest.raises(CapabilityError):
        arch.quotient(OrderedSpace(cn.open_orthant(2), (1, 1)), [(1, 0)])


def test_arch_quotient_matches_quotient_on_closed_faces():
    sp = orthant_space(3)
    a = arch.arch_quotient(sp, [(0, 0, 1)])
    b = arch.quotient(sp, [(0, 0, 1)])
    assert a.projection == b.projection and a.kernel == b.kernel
    assert any("passed" in n for n in a.notes)


@pytest.mark.parametrize("n,keep", [(2, [0]), (3, [0, 1]), (3, [2]), (4, [1, 3]), (4, [0, 1, 2])])
def test_first_isomorphism_coordinate_projections(n, keep):
    sp = orthant_space(n)
    phi = [[Fraction(int(j == k)) for j in range(n)] for k in keep]
    target = orthant_space(len(keep))
    rep = arch.first_isomorphism(sp, phi, target)
    assert rep["kernel_is_order_ideal"] and rep["induced_injective"] and rep["image_condition"]
    assert rep["order_isomorphism"]
    assert rep["quotient_dimension"] == len(keep)


def test_first_isomorphism_detects_non_isomorphism():
    sp = orthant_space(2)
    wide = OrderedSpace(v_cone([(2, -1), (-1, 2)]), (1, 1))
    rep = arch.first_isomorphism(sp, [[1, 0], [0, 1]], wide)
    assert rep["induced_injective"] and not rep["image_condition"]
    assert not rep["order_isomorphism"]
    w = tuple(Fraction(x) for x in rep["witness_not_in_image"])
    assert cn.member(wide.cone, w) and not cn.member(sp.cone, w)


def test_map_checks():
    sp = orthant_space(2)
    assert arch.is_positive_map(sp, [[1, 0], [0, 1]], sp)
    assert not arch.is_positive_map(sp, [[1, -1], [0, 1]], sp)
    assert arch.is_unital_map(sp, [[1, 0], [0, 1]], sp)
