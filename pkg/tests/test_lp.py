from fractions import Fraction

import pytest

from sunlab.lp import LpBuilder, LpProblem, MalformedProblem, lp_solve


def test_lower_bound_optimum():
    b = LpBuilder()
    t = b.free_var()
    b.add({t: 1}, ">=", 1)
    res = b.minimize({t: 1})
    assert res.optimal and res.value == 1


def test_infeasible():
    b = LpBuilder()
    x = b.var()
    b.add({x: 1}, "<=", -1)
    assert lp_solve(b.problem({x: 1})).status == "infeasible"


def test_unbounded():
    b = LpBuilder()
    x = b.var()
    assert b.maximize({x: 1}).status == "unbounded"


def test_equalities_and_bounds_exact():
    b = LpBuilder()
    x, y = b.var(upper=3), b.var()
    b.add({x: 1, y: 1}, "==", Fraction(7, 2))
    b.add({x: 2, y: -1}, "<=", 1)
    res = b.maximize({x: 1})
    assert res.value == Fraction(3, 2)
    assert res.x[x] + res.x[y] == Fraction(7, 2)


def test_degenerate_redundant_rows():
    b = LpBuilder()
    x, y = b.var(), b.var()
    b.add({x: 1, y: 1}, "==", 1)
    b.add({x: 2, y: 2}, "==", 2)
    b.add({x: 1}, ">=", 0)
    res = b.minimize({x: 1, y: 2})
    assert res.optimal and res.value == 1


def test_malformed():
    with pytest.raises(MalformedProblem):
        lp_solve(LpProblem([1, 1], [[1]], ["<="], [1]))
