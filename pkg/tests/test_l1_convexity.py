import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brute import between_points_grid
from conftest import P
from sunlab.l1_convexity import (
    GeodesicPath,
    InvalidPath,
    Refuted,
    SampledPass,
    find_ff_pair,
    is_l1_convex,
    is_strictly_l1_convex,
    local_obstruction,
    menger_witness,
    monotone_geodesic,
)
from sunlab.numerics import Norm, Point, PreconditionError, between_l1, dist, ff
from sunlab.scenario_lab import generate
from sunlab.set_model import SampleSpec, SetModel, SinglePoint, contains


def test_menger_examples(cross, cocross):
    assert menger_witness(cross, P("2,0,0"), P("0,2,0")) == P("0,0,0")
    pair = SetModel((SinglePoint(P("0,0,0")), SinglePoint(P("1,1,1"))))
    assert menger_witness(pair, P("0,0,0"), P("1,1,1")) is None
    x, y = P("1,1,0"), P("1,0,1")
    z = menger_witness(cocross, x, y)
    assert z is not None and contains(cocross, z) and z not in (x, y) and between_l1(x, z, y)
    # grid enumeration of the pair box finds (1,0,0) among the witnesses
    assert (1.0, 0.0, 0.0) in between_points_grid(cocross, x, y)
    with pytest.raises(PreconditionError):
        menger_witness(cross, P("1,1,0"), P("0,0,0"))


def test_l1_convexity_examples(cross, detached_cross):
    assert isinstance(is_l1_convex(cross), SampledPass)
    pair = SetModel((SinglePoint(P("0,0,0")), SinglePoint(P("1,1,1"))))
    v = is_l1_convex(pair)
    assert isinstance(v, Refuted) and {v.witness["x"], v.witness["y"]} == {P("0,0,0"), P("1,1,1")}
    v = is_l1_convex(detached_cross)
    assert isinstance(v, Refuted)
    a, b = v.witness["x"], v.witness["y"]
    # one endpoint on the detached arm, the other on the rest
    assert (a[1] >= 1) != (b[1] >= 1)
    assert menger_witness(detached_cross, a, b) is None


def test_geodesic_examples(box, cocross, cross):
    path = monotone_geodesic(box, P("0,0,0"), P("1,1,1"), {0, 1, 2})
    assert path.waypoints == (P("0,0,0"), P("1,1,1"))
    for d in (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)):
        assert monotone_geodesic(cocross, P("1,1,0"), P("0,2,2"), {0, 1, 2}, d) is None
    path = monotone_geodesic(cross, P("2,0,0"), P("0,2,0"), frozenset())
    assert P("0,0,0") in path.waypoints and path.inside(cross)
    assert path.length_l1 == dist(P("2,0,0"), P("0,2,0"), Norm.L1)


def test_geodesic_path_invariants():
    with pytest.raises(InvalidPath):
        GeodesicPath((P("0,0,0"), P("0,0,0")), frozenset())
    with pytest.raises(InvalidPath):
        GeodesicPath((P("0,0,0"), P("1,0,0"), P("0,1,0")), frozenset())
    with pytest.raises(InvalidPath):
        GeodesicPath((P("0,0,0"), P("1,0,0"), P("2,1,0")), {1})
    GeodesicPath((P("0,0,0"), P("1,1,0"), P("2,2,0")), {0, 1})


def test_strict_convexity_examples(box, cross, cocross):
    assert isinstance(is_strictly_l1_convex(box), SampledPass)
    v = is_strictly_l1_convex(cross)
    assert isinstance(v, SampledPass) and v.details["ff_pairs"] == 0
    v = is_strictly_l1_convex(cocross)
    assert isinstance(v, Refuted) and v.witness["kind"] == "strict_geodesic"
    # the documented pair has a local certificate
    assert local_obstruction(cocross, P("1,1,0"), P("0,2,2"), frozenset({0, 1, 2})) is not None


def test_ff_pair_examples(box, cross, slab_cocross):
    x, y = find_ff_pair(box)
    assert ff(x, y)
    assert find_ff_pair(cross) is None
    assert find_ff_pair(slab_cocross) is None


def test_monotone_polylines_are_strictly_convex():
    M = generate("monotone_tube", 2, dim=3)
    assert is_strictly_l1_convex(M).passed
    stair = generate("box_staircase", 2, dim=3)
    assert is_l1_convex(stair).passed
    assert not is_strictly_l1_convex(stair).passed


SCENES = [("main_cross", {}), ("box_staircase", {}), ("monotone_tube", {}), ("random_l1_convex", {}),
          ("main_cocross", {}), ("cross_subset", {}), ("random_box", {})]


@pytest.mark.parametrize("family,params", SCENES)
def test_found_geodesics_validate(family, params):
    M = generate(family, 7, dim=3, **params)
    rng = random.Random(family)
    pts = [p for p in M.vertices()]
    for x, y in itertools.islice(itertools.permutations(pts, 2), 30):
        strict = frozenset(j for j in range(3) if x[j] != y[j] and rng.random() < 0.5)
        path = monotone_geodesic(M, x, y, strict, Fraction(1, 2))
        if path is None:
            continue
        assert path.inside(M)
        assert sum(dist(a, b, Norm.L1) for a, b in zip(path.waypoints, path.waypoints[1:])) == dist(x, y, Norm.L1)
        for a, b in zip(path.waypoints, path.waypoints[1:]):
            assert all(b[j] != a[j] for j in strict)


@pytest.mark.parametrize("family,params", SCENES)
def test_menger_witnesses_satisfy_triangle_equality(family, params):
    M = generate(family, 9, dim=3, **params)
    pts = M.vertices()
    for x, y in itertools.islice(itertools.combinations(pts, 2), 40):
        z = menger_witness(M, x, y)
        if z is not None:
            assert contains(M, z)
            assert dist(x, y, Norm.L1) == dist(x, z, Norm.L1) + dist(z, y, Norm.L1)


coords = st.fractions(min_value=-2, max_value=2, max_denominator=2)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=2, max_size=5, unique=True))
def test_sign_consistent_polylines_are_geodesics(deltas):
    signs = [1, -1, 1]
    pts = [Point.zero(3)]
    for d in deltas:
        step = Point([abs(c) * s for c, s in zip(d, signs)])
        if step == Point.zero(3):
            continue
        pts.append(pts[-1] + step)
    if len(pts) < 2:
        return
    path = GeodesicPath(tuple(pts), frozenset())
    assert path.length_l1 == dist(pts[0], pts[-1], Norm.L1)
