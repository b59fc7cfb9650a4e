"""Acceptance criteria, one test each, at full scale.

Each test records a ``[PASS]``/``[FAIL]`` line that conftest prints in the
terminal summary, so the lines appear even with output capture on.
"""
from fractions import Fraction

import pytest

from sunlab import suite
from sunlab.config import Config
from sunlab.numerics import Point, dist
from sunlab.oracles import VoxelOracle
from sunlab.projection import project
from sunlab.scenario_lab import generate
from sunlab.sun_checker import DEFAULT_SCHEDULE, NotSolar, is_solar_point

CONFIG = Config()
SCALE = suite.SuiteScale()
RESULTS: dict[int, tuple[bool, str]] = {}


def record(number: int, title: str, ok: bool) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
    RESULTS[number] = (ok, line)
    print(line)


def run(check):
    return check(CONFIG, SCALE, 1)


def test_01_cross_is_sun_not_strict_sun():
    res = run(suite.check_cross)
    d = res.details
    M = generate("main_cross", 0, dim=3, extent=4)
    x, y, z = Point.parse("1,1,0"), Point.parse("1,0,0"), Point.parse("1,2,0")
    v = is_solar_point(M, x, y, DEFAULT_SCHEDULE)
    exact = isinstance(v, NotSolar) and v.lambda_witness == 2 and v.z == z
    exact = exact and project(M, z).rho == 1 and dist(z, y) == 2
    # float voxel oracle at h = 1/8 agrees with the exact distance of z
    voxel = VoxelOracle(M, Fraction(1, 8))
    near = abs(voxel.distance(z) - 1) <= voxel.tolerance
    ok = res.passed and exact and near and d["sun"]["verdict"] == "SampledPass"
    record(1, "cross passes the sun sweep and has the exact strict-sun witness at x=(1,1,0)", ok)
    assert ok, d


def test_02_box_is_strict_sun():
    res = run(suite.check_box)
    d = res.details
    ok = (res.passed and d["strict_sun"]["pairs_checked"] >= 500
          and d["strictly_l1_convex"]["pairs_checked"] >= 200
          and DEFAULT_SCHEDULE == CONFIG.lambda_schedule)
    record(2, "unit box passes strict sun on >=500 points and strict l1 on >=200 pairs", ok)
    assert ok, d


def test_03_four_dim_cocross_strictly_l1_convex():
    res = run(suite.check_four_dim_cocross)
    ok = res.passed and res.details["classification"]["is_cocross"] and not res.details["classification"]["is_cross"]
    record(3, "four-dimensional cocross: not a cross, no coordinate-disjoint pair, strictly l1-convex", ok)
    assert ok, res.details


def test_04_main_cocross_not_strict():
    res = run(suite.check_main_cocross)
    d = res.details
    ok = res.passed and all(d["pair_absent_by_density"].values()) and d["strict_sun"]["verdict"] == "Refuted"
    record(4, "main cocross fails strict l1-convexity at every density and strict sunness", ok)
    assert ok, d


def test_05_cocross_sweep_agreement():
    res = run(suite.check_cocross_sweep)
    ok = res.passed and res.details["scenes"] >= 20
    record(5, f"cocross sweep agrees on {res.details['scenes']} scenes", ok)
    assert ok, res.details["disagreements"]


def test_06_three_dim_strict_sun_sweep():
    res = run(suite.check_strict_sun_sweep)
    ok = res.passed and res.details["scenes"] >= 50
    record(6, f"strict sun characterization agrees on {res.details['scenes']} scenes", ok)
    assert ok, res.details["disagreements"]


def test_07_projection_matches_voxel_oracle():
    res = run(suite.check_oracle)
    d = res.details
    ok = res.passed and d["pairs"] >= 100 and d["h"] == Fraction(1, 16) and d["max_abs_gap"] <= 2 / 16
    record(7, f"voxel oracle gap {d['max_abs_gap']:.4f} <= 2h over {d['pairs']} pairs", ok)
    assert ok, d


def test_08_cone_forms_agree():
    res = run(suite.check_cone)
    d = res.details
    ok = res.passed and d["triples"] >= 1000 and not d["mismatches"] and d["cone_holds_but_not_solar"] == 0
    record(8, f"cone forms agree on {d['triples']} triples; cone condition never holds at a non-solar point", ok)
    assert ok, d


def test_09_sphere_segment_property():
    res = run(suite.check_sphere_segments)
    ok = res.passed and res.details["failed"] == 0
    record(9, f"sphere segment property holds on {res.details['checked']} configurations", ok)
    assert ok, res.details


def test_10_coordinate_disjoint_pairs():
    res = run(suite.check_ff_pairs)
    d = res.details
    ok = res.passed and not d["failures"]
    record(10, "coordinate-disjoint pairs found on every qualifying scene", ok)
    assert ok, d
