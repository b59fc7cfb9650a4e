import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import covered_by_grid, in_set
from conftest import P
from sunlab.numerics import DimensionMismatch, Point, eqc_pair, midpoint
from sunlab.oracles import VoxelOracle
from sunlab.scenario_lab import generate
from sunlab.set_model import (
    AxisBox,
    InvalidPrimitive,
    Polytope,
    SampleSpec,
    Segment,
    SetModel,
    SinglePoint,
    connected_components,
    contains,
    eqc_of_set,
    make_segment,
    sample_points,
    segment_inside,
)


def test_primitive_invariants():
    with pytest.raises(InvalidPrimitive):
        Segment(P("1,1,1"), P("1,1,1"))
    assert isinstance(make_segment(P("1,1,1"), P("1,1,1")), SinglePoint)
    with pytest.raises(InvalidPrimitive):
        AxisBox(P("0,1,0"), P("1,0,1"))
    with pytest.raises(InvalidPrimitive):
        Polytope((P("0,0,0"), P("0,0,0")))
    with pytest.raises(DimensionMismatch):
        SetModel((SinglePoint(P("0,0")), SinglePoint(P("0,0,0"))))


def test_membership_examples(box, cross):
    assert contains(box, P("1/2,1/2,1/2"))
    assert not contains(cross, P("1,1,0"))
    assert contains(SetModel((Segment(P("0,0,0"), P("1,1,1")),)), P("1/3,1/3,1/3"))
    tri = SetModel((Polytope((P("0,0,0"), P("1,0,0"), P("0,1,0"))),))
    assert contains(tri, P("1/3,1/3,0"))
    assert not contains(tri, P("1/2,1/2,1/100"))
    with pytest.raises(DimensionMismatch):
        contains(box, P("1,1"))


def test_segment_cover_examples(box, cross):
    assert segment_inside(box, P("0,0,0"), P("1,1,1"))
    assert not segment_inside(cross, P("1,0,0"), P("0,1,0"))
    abutting = SetModel((AxisBox(P("0,0,0"), P("1,1,1")), AxisBox(P("1,0,0"), P("2,1,1"))))
    a, b = P("1/2,1/2,1/2"), P("3/2,1/2,1/2")
    # parameter-grid oracle at step 1/64 says covered
    assert covered_by_grid(abutting, a, b)
    assert segment_inside(abutting, a, b)
    gapped = SetModel((AxisBox(P("0,0,0"), P("1,1,1")), AxisBox(P("11/10,0,0"), P("2,1,1"))))
    assert not segment_inside(gapped, a, b)


def test_components_examples(cross, detached_cross):
    assert connected_components(cross) == [[0, 1, 2]]
    two = SetModel((AxisBox(P("0,0,0"), P("1,1,1")), AxisBox(P("2,2,2"), P("3,3,3"))))
    assert len(connected_components(two)) == 2
    assert len(connected_components(detached_cross)) == 2


def test_eqc_examples(cross):
    assert eqc_of_set(SetModel((SinglePoint(P("1,2,3")),))) == {0, 1, 2}
    assert eqc_of_set(cross) == frozenset()
    square = SetModel((AxisBox(P("0,0,0"), P("1,1,0")),))
    assert eqc_of_set(square) == {2}
    # same frozen coordinate but different values does not count
    assert eqc_of_set(SetModel((AxisBox(P("0,0,0"), P("1,1,0")), AxisBox(P("0,0,1"), P("1,1,1"))))) == frozenset()


def test_sampling_examples(box):
    p = P("1,2,3")
    assert sample_points(SetModel((SinglePoint(p),)), SampleSpec(count=5)) == [p]
    seg = SetModel((Segment(P("0,0,0"), P("2,1,0")),))
    got = sample_points(seg, SampleSpec(count=3))
    assert P("0,0,0") in got and P("2,1,0") in got
    spec = SampleSpec(count=100, seed=7)
    assert sample_points(box, spec) == sample_points(box, spec)
    assert all(contains(box, q) for q in sample_points(box, spec))


SCENES = [
    ("main_cross", {"dim": 3}),
    ("main_cocross", {"dim": 3}),
    ("box_staircase", {"dim": 3}),
    ("monotone_tube", {"dim": 3}),
    ("cross_subset", {"dim": 3, "connected": False}),
    ("random_box", {"dim": 2}),
    ("remark_r4", {}),
]


@pytest.mark.parametrize("family,params", SCENES)
def test_segment_cover_spot_consistency(family, params):
    M = generate(family, 3, **params)
    rng = random.Random(family)
    pts = sample_points(M, SampleSpec(count=16, seed=3))
    for _ in range(40):
        a, b = rng.sample(pts, 2)
        if segment_inside(M, a, b):
            assert contains(M, midpoint(a, b))
            for _ in range(10):
                t = Fraction(rng.randint(0, 64), 64)
                assert contains(M, a + (b - a) * t)


@pytest.mark.parametrize("family,params", SCENES)
def test_components_independent_of_order(family, params):
    M = generate(family, 5, **params)
    prims = list(M.primitives)
    random.Random(0).shuffle(prims)
    shuffled = SetModel(tuple(prims))
    back = {p: i for i, p in enumerate(M.primitives)}
    relabel = sorted(sorted(back[shuffled.primitives[i]] for i in comp) for comp in connected_components(shuffled))
    assert relabel == connected_components(M)


@pytest.mark.parametrize("family,params", SCENES)
def test_eqc_contained_in_pairwise_eqc(family, params):
    M = generate(family, 1, **params)
    pts = sample_points(M, SampleSpec(count=20, seed=1))
    for x in pts:
        for y in pts:
            assert M.eqc <= eqc_pair(x, y)


@pytest.mark.parametrize("family,params", SCENES[:5])
def test_membership_agrees_with_voxels(family, params):
    h = Fraction(1, 16)
    M = generate(family, 2, **params)
    oracle = VoxelOracle(M, h)
    lo, hi = M.bounding_box()
    rng = random.Random(family)
    for _ in range(60):
        x = Point([Fraction(rng.randint(int((l - 1) * 32), int((u + 1) * 32)), 32) for l, u in zip(lo, hi)])
        d = oracle.distance(x)
        inside = contains(M, x)
        assert inside == in_set(M, x)
        if inside:
            assert d <= oracle.tolerance
        if d > oracle.tolerance:
            assert not inside


coords = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=2, max_size=2),
       st.tuples(coords, coords, coords), st.tuples(coords, coords, coords))
def test_box_segment_cover_matches_grid(corners, a, b):
    lo = Point([min(c) for c in zip(*corners)])
    hi = Point([max(c) for c in zip(*corners)])
    M = SetModel((AxisBox(lo, hi),))
    a, b = Point(a), Point(b)
    # a convex box covers a segment iff it holds both endpoints
    assert segment_inside(M, a, b) == (contains(M, a) and contains(M, b))
