import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import barycentric_distance, segment_param_distance
from conftest import P
from sunlab.numerics import DimensionMismatch, Norm, Point, dist
from sunlab.oracles import VoxelOracle
from sunlab.projection import nearest_candidates, project, project_primitive
from sunlab.scenario_lab import generate
from sunlab.set_model import AxisBox, Polytope, Segment, SetModel, SinglePoint, contains

# ground truth for the fixed examples, produced by the float oracles in brute.py
SEGMENT_ORACLE = (0.5, 0.5)  # (distance, argmin t) for x=(1,0,0) onto [0,(1,1,1)]
TRIANGLE_ORACLE = 1.0  # x=(2,0,0) onto conv{0, e1, e2}


def test_box_clamp(box):
    rho, y, unique = project_primitive(box.primitives[0], P("2,1/2,1/2"))
    assert (rho, y) == (1, P("1,1/2,1/2"))
    # the whole face {1} x [0,1]^2 is at distance 1, so the minimizer is not unique
    assert not unique
    assert dist(P("2,1/2,1/2"), P("1,0,0")) == 1
    rho, y, unique = project_primitive(box.primitives[0], P("2,1/2,1/2"), Norm.L1)
    assert (rho, y, unique) == (1, P("1,1/2,1/2"), True)


def test_segment_projection_matches_grid_oracle():
    rho, y, unique = project_primitive(Segment(P("0,0,0"), P("1,1,1")), P("1,0,0"))
    d, t = segment_param_distance((0, 0, 0), (1, 1, 1), (1, 0, 0))
    assert (float(rho), 0.5) == pytest.approx(SEGMENT_ORACLE) == (d, t)
    assert (rho, y, unique) == (Fraction(1, 2), P("1/2,1/2,1/2"), True)


def test_point_projection():
    x = P("3,-1,2")
    assert project_primitive(SinglePoint(P("0,0,0")), x) == (3, P("0,0,0"), True)


def test_polytope_projection_matches_barycentric_oracle():
    verts = (P("0,0,0"), P("1,0,0"), P("0,1,0"))
    rho, y, _ = project_primitive(Polytope(verts), P("2,0,0"))
    d, arg = barycentric_distance(verts, (2, 0, 0))
    assert float(rho) == d == TRIANGLE_ORACLE
    assert rho == 1 and dist(P("2,0,0"), y) == 1


def test_cross_projection(cross):
    res = project(cross, P("1,1,0"))
    assert res.rho == 1
    assert not res.is_unique
    cands = nearest_candidates(cross, P("1,1,0"))
    for y in (P("1,0,0"), P("0,1,0"), P("0,0,0")):
        assert y in cands
    assert all(not w.is_unique for w in res.witnesses)
    res = project(cross, P("1,2,0"))
    assert res.rho == 1 and res.points == [P("0,2,0")]
    # voxel oracle at h = 1/8 agrees within its tolerance
    oracle = VoxelOracle(cross, Fraction(1, 8))
    assert abs(oracle.distance(P("1,2,0")) - 1) <= oracle.tolerance


def test_membership_gives_zero(cross):
    res = project(cross, P("0,3,0"))
    assert res.rho == 0 and res.points == [P("0,3,0")]
    with pytest.raises(DimensionMismatch):
        project(cross, P("1,1"))


SCENES = [("main_cross", {"dim": 3}), ("main_cocross", {"dim": 3}), ("box_staircase", {"dim": 3}),
          ("monotone_tube", {"dim": 3}), ("simplex", {"dim": 3}), ("remark_r4", {}), ("random_box", {"dim": 2})]


def _random_point(rng, M, denom=4, margin=2):
    lo, hi = M.bounding_box()
    return Point([Fraction(rng.randint(int((l - margin) * denom), int((u + margin) * denom)), denom)
                  for l, u in zip(lo, hi)])


@pytest.mark.parametrize("family,params", SCENES)
def test_witnesses_reproduce_rho(family, params):
    M = generate(family, 4, **params)
    rng = random.Random(family)
    for _ in range(10):
        x = _random_point(rng, M)
        res = project(M, x)
        assert res.rho == min(project_primitive(p, x)[0] for p in M.primitives)
        assert res.witnesses
        for w in res.witnesses:
            assert contains(M, w.minimizer) and dist(x, w.minimizer) == res.rho
        for y in nearest_candidates(M, x, res):
            assert contains(M, y) and dist(x, y) == res.rho


@pytest.mark.parametrize("family,params", SCENES)
def test_monotone_in_the_set_and_lipschitz(family, params):
    M = generate(family, 6, **params)
    bigger = M.with_primitives([SinglePoint(_random_point(random.Random(1), M))])
    rng = random.Random(family + "lip")
    for _ in range(8):
        x, x2 = _random_point(rng, M), _random_point(rng, M)
        r, r2 = project(M, x).rho, project(M, x2).rho
        assert project(bigger, x).rho <= r
        assert abs(r - r2) <= dist(x, x2)


coords = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=80, deadline=None)
@given(st.tuples(coords, coords, coords), st.tuples(coords, coords, coords), st.tuples(coords, coords, coords))
def test_segment_projection_beats_grid(a, b, x):
    a, b, x = Point(a), Point(b), Point(x)
    if a == b:
        return
    rho, y, _ = project_primitive(Segment(a, b), x)
    d, _ = segment_param_distance(a, b, x, step=1 / 256)
    assert float(rho) <= d + 1e-12
    assert dist(x, y) == rho


@settings(max_examples=60, deadline=None)
@given(st.tuples(coords, coords, coords), st.tuples(coords, coords, coords), st.tuples(coords, coords, coords))
def test_box_projection_is_clamp_distance(lo, hi, x):
    lo, hi = Point([min(p) for p in zip(lo, hi)]), Point([max(p) for p in zip(lo, hi)])
    x = Point(x)
    rho, y, _ = project_primitive(AxisBox(lo, hi), x)
    assert rho == max(max(l - c, 0, c - h) for c, l, h in zip(x, lo, hi))
    assert dist(x, y) == rho
