import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from scipy.optimize import linprog

from oracles import brute_vertices
from ordspace.errors import BracketError, UnboundedPolytopeError
from ordspace.lp import (
    LinearProgram,
    RevisedSimplex,
    Status,
    check_certificate,
    feasible_point,
    infimum_by_bisection,
    solve,
    vertices,
)
from strategies import seeds


def _random_lp(rng):
    n = rng.randint(1, 4)
    ints = lambda k: tuple(Fraction(rng.randint(-3, 3)) for _ in range(k))
    eq = [(ints(n), Fraction(rng.randint(-3, 3))) for _ in range(rng.randint(0, 2))]
    ineq = [(ints(n), Fraction(rng.randint(-3, 3))) for _ in range(rng.randint(0, 4))]
    nonneg = tuple(rng.random() < 0.5 for _ in range(n))
    return LinearProgram(ints(n), tuple(eq), tuple(ineq), rng.random() < 0.5, nonneg)


def _highs(lp):
    c = np.array([float(x) for x in lp.objective]) * (-1 if lp.maximize else 1)
    A_ub = [[-float(x) for x in a] for a, _ in lp.ineq_rows] or None
    b_ub = [-float(b) for _, b in lp.ineq_rows] or None
    A_eq = [[float(x) for x in a] for a, _ in lp.eq_rows] or None
    b_eq = [float(b) for _, b in lp.eq_rows] or None
    bounds = [(0, None) if nn else (None, None) for nn in lp.nonneg]
    return linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs", options={"presolve": False})


@given(seeds)
def test_solve_agrees_with_highs_and_certifies(seed):
    lp = _random_lp(random.Random(seed))
    res = solve(lp)
    ref = _highs(lp)
    assert check_certificate(lp, res)
    if ref.status == 0:
        assert res.status is Status.OPTIMAL
        val = -ref.fun if lp.maximize else ref.fun
        assert abs(float(res.value) - val) < 1e-7
    elif ref.status == 2:
        assert res.status is Status.INFEASIBLE
    elif ref.status == 3:
        assert res.status is Status.UNBOUNDED


def test_known_lp():
    # max x + y  s.t.  x + 2y <= 4, 3x + y <= 6, x, y >= 0  ->  (8/5, 6/5)
    lp = LinearProgram((1, 1), (), (((-1, -2), -4), ((-3, -1), -6)), maximize=True, nonneg=(True, True))
    res = solve(lp)
    assert res.value == Fraction(14, 5)
    assert res.witness == (Fraction(8, 5), Fraction(6, 5))
    assert check_certificate(lp, res)


def test_infeasible_and_unbounded_certificates():
    infeasible = LinearProgram((1,), (), (((1,), 2), ((-1,), -1)))
    r = solve(infeasible)
    assert r.status is Status.INFEASIBLE and check_certificate(infeasible, r)
    unbounded = LinearProgram((1, 0), (), (((1, 1), 0),), maximize=True)
    r = solve(unbounded)
    assert r.status is Status.UNBOUNDED and check_certificate(unbounded, r)


def test_tampered_certificate_is_rejected():
    lp = LinearProgram((1, 1), (), (((1, 0), 1), ((0, 1), 1)))
    res = solve(lp)
    assert check_certificate(lp, res)
    res.value += 1
    assert not check_certificate(lp, res)


def test_degenerate_problem_terminates():
    # Beale's classic cycling example for the largest-coefficient rule
    c = (Fraction(-3, 4), 150, Fraction(-1, 50), 6, 0, 0, 0)
    A = [
        (Fraction(1, 4), -60, Fraction(-1, 25), 9, 1, 0, 0),
        (Fraction(1, 2), -90, Fraction(-1, 50), 3, 0, 1, 0),
        (0, 0, 1, 0, 0, 0, 1),
    ]
    sx = RevisedSimplex([[r[j] for r in A] for j in range(7)], [0, 0, 1], c)
    assert sx.solve() is Status.OPTIMAL
    assert sx.objective() == Fraction(-1, 20)


def test_column_generation_warm_start():
    sx = RevisedSimplex([[1, 0], [0, 1]], [1, 1], [3, 3])
    sx.solve()
    assert sx.objective() == 6
    sx.add_columns([[1, 1]], [2])
    sx.solve()
    assert sx.objective() == 2


def test_feasible_point():
    x = feasible_point(ineq_rows=[((1, 1), 2), ((1, -1), 0)], n=2)
    assert x[0] + x[1] >= 2 and x[0] >= x[1]
    assert feasible_point(ineq_rows=[((1,), 1), ((-1,), 0)], n=1) is None


@given(seeds)
def test_vertices_match_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    # random polytope inside the box [-2, 2]^n
    ineq = []
    for i in range(n):
        for s in (1, -1):
            ineq.append((tuple(Fraction(s * (i == j)) for j in range(n)), Fraction(-2)))
    for _ in range(rng.randint(0, 3)):
        ineq.append((tuple(Fraction(rng.randint(-2, 2)) for _ in range(n)), Fraction(rng.randint(-2, 1))))
    assert vertices(ineq, n=n) == brute_vertices(ineq, [], n)


def test_vertices_unbounded_and_empty():
    with pytest.raises(UnboundedPolytopeError) as exc:
        vertices([((1, 0), 0), ((0, 1), 0)], n=2)
    assert exc.value.ray is not None
    assert vertices([((1,), 1), ((-1,), 0)], n=1) == []


def test_bisection():
    assert abs(infimum_by_bisection(lambda r: r * r >= 2, 0.0, 2.0, 1e-10) - 2**0.5) < 1e-9
    with pytest.raises(BracketError):
        infimum_by_bisection(lambda r: False, 0.0, 1.0, 1e-6)
