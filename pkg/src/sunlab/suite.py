"""The end-to-end acceptance sweep, shared by the ``suite`` command and the tests.

Each check returns a :class:`CheckResult` whose details carry every witness
needed to audit the outcome by hand.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .classification import classify
from .config import Config
from .l1_convexity import (
    _jsonable,
    find_ff_pair,
    find_ff_partner,
    is_l1_convex,
    is_strictly_l1_convex,
    monotone_geodesic,
)
from .numerics import Point, dist, ff
from .oracles import VoxelOracle
from .projection import nearest_candidates, project
from .scenario_lab import (
    COCROSS_FAMILIES,
    STRICT_SUN_FAMILIES,
    catalogue,
    generate,
    run_validations,
)
from .set_model import AxisBox, SampleSpec, SetModel, contains, make_segment
from .sun_checker import (
    ConeSpec,
    NotSolar,
    check_strict_sun,
    check_sun,
    cone_contains,
    cone_contains_by_definition,
    is_solar_point,
    sweep_reports,
)


@dataclass(frozen=True)
class SuiteScale:
    """How much sampling each check does."""

    box_sweep: int = 520
    cross_sweep: int = 300
    scene_sweep: int = 120
    strict_sun_seeds: int = 5
    cocross_seeds: int = 4
    oracle_pairs: int = 120
    cone_triples: int = 1200
    sphere_sweep: int = 200

    @classmethod
    def quick(cls) -> "SuiteScale":
        return cls(box_sweep=60, cross_sweep=40, scene_sweep=30, strict_sun_seeds=1, cocross_seeds=1,
                   oracle_pairs=20, cone_triples=100, sphere_sweep=40)


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "passed": self.passed, "details": _jsonable(self.details)}


def _sweep(count: int, config: Config) -> SampleSpec:
    return SampleSpec(count=count, seed=config.seed, densities=config.densities)


def unit_box(dim: int = 3) -> SetModel:
    return generate("box", 0, dim=dim, lo=0, hi=1)


def check_cross(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    M = generate("main_cross", config.seed, dim=3, extent=4)
    sweep = _sweep(scale.cross_sweep, config)
    sun = check_sun(M, sweep, config.lambda_schedule, jobs=jobs, stop_at_first=False)
    strict = check_strict_sun(M, sweep, config.lambda_schedule, jobs=jobs)
    x, y = Point.parse("1,1,0"), Point.parse("1,0,0")
    canon = is_solar_point(M, x, y, config.lambda_schedule)
    z = Point.parse("1,2,0")
    # independent re-verification of the canonical witness
    reverified = (isinstance(canon, NotSolar) and canon.lambda_witness == 2 and canon.z == z
                  and project(M, z).rho == 1 and dist(z, y) == 2
                  and contains(M, canon.competing_point) and dist(z, canon.competing_point) == 1)
    first = strict.witness if not strict.passed else {}
    strict_ok = (not strict.passed and first.get("x") == x and first.get("y") == y
                 and first.get("lambda") == 2 and first.get("z") == z)
    return CheckResult("cross", "cross is a sun but not a strict sun", sun.passed and strict_ok and reverified,
                       {"sun": sun.to_json(), "strict_sun": strict.to_json(), "canonical": canon.to_json(),
                        "canonical_reverified": reverified})


def check_box(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    M = unit_box()
    strict = check_strict_sun(M, _sweep(scale.box_sweep, config), config.lambda_schedule, jobs=jobs,
                              stop_at_first=False)
    cls = classify(M)
    sl1 = is_strictly_l1_convex(M, config.pair_spec())
    points = strict.pairs_checked if strict.passed else 0
    ok = (strict.passed and points >= min(500, scale.box_sweep) and not cls.is_cocross
          and sl1.passed and sl1.pairs_checked >= 200)
    return CheckResult("box", "unit box is a strict sun", ok,
                       {"strict_sun": strict.to_json(), "classification": cls.to_json(),
                        "strictly_l1_convex": sl1.to_json()})


def check_four_dim_cocross(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    M = generate("remark_r4", config.seed, extent=2)
    cls = classify(M)
    pair = find_ff_pair(M, config.pair_spec())
    sl1 = is_strictly_l1_convex(M, config.pair_spec())
    ok = (cls.is_cocross and not cls.is_cross and pair is None and sl1.passed
          and sl1.details.get("ff_pairs") == 0)
    return CheckResult("four_dim_cocross", "four-dimensional cocross that is strictly l1-convex but not a cross", ok,
                       {"classification": cls.to_json(), "ff_pair": pair, "strictly_l1_convex": sl1.to_json()})


def check_main_cocross(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    M = generate("main_cocross", config.seed, dim=3, extent=2)
    sl1 = is_strictly_l1_convex(M, config.pair_spec())
    x, y = Point.parse("1,1,0"), Point.parse("0,2,2")
    per_density = {str(d): monotone_geodesic(M, x, y, frozenset(range(3)), d) is None for d in config.densities}
    strict = check_strict_sun(M, _sweep(scale.scene_sweep, config), config.lambda_schedule, jobs=jobs)
    menger = is_l1_convex(M, config.pair_spec())
    ok = (not sl1.passed and sl1.witness.get("kind") == "strict_geodesic" and all(per_density.values())
          and not strict.passed)
    return CheckResult("main_cocross", "main cocross fails strict l1-convexity and strict sunness", ok,
                       {"strictly_l1_convex": sl1.to_json(), "pair_absent_by_density": per_density,
                        "strict_sun": strict.to_json(), "menger_informational": menger.to_json()})


def _agreement_check(key, title, kind, scenes, config, jobs, minimum):
    reports = run_validations(kind, scenes, config, jobs)
    rec_key = {"1": "theorem1", "prop1": "prop1"}[kind]
    rows = []
    disagreements = []
    for rep in reports:
        rec = rep.theorem_agreements[rec_key]
        rows.append({"scene": rep.scene.name, "lhs": rec["lhs"], "rhs": rec["rhs"], "agree": rec["agree"]})
        if not rec["agree"]:
            disagreements.append(rep.to_json())
    ok = len(reports) >= minimum and not disagreements
    return CheckResult(key, title, ok, {"scenes": len(reports), "rows": rows, "disagreements": disagreements})


def check_cocross_sweep(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    scenes = catalogue(COCROSS_FAMILIES, scale.cocross_seeds, config.seed)
    cfg = Config(seed=config.seed, pair_budget=config.pair_budget, sweep_budget=scale.scene_sweep,
                 lambda_schedule=config.lambda_schedule, densities=config.densities)
    return _agreement_check("cocross_sweep", "cocrosses: strict l1-convexity iff connected cross", "prop1",
                            scenes, cfg, jobs, min(20, len(scenes)))


def check_strict_sun_sweep(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    scenes = catalogue(STRICT_SUN_FAMILIES, scale.strict_sun_seeds, config.seed)
    cfg = Config(seed=config.seed, pair_budget=config.pair_budget, sweep_budget=scale.scene_sweep,
                 lambda_schedule=config.lambda_schedule, densities=config.densities)
    return _agreement_check("strict_sun_sweep", "three-dimensional strict suns: strict sun iff strictly l1-convex and not a cross",
                            "1", scenes, cfg, jobs, min(50, len(scenes)))


ORACLE_FAMILIES = (
    ("main_cross", {"dim": 3}),
    ("main_cocross", {"dim": 3}),
    ("random_box", {"dim": 3}),
    ("monotone_tube", {"dim": 3}),
    ("box_staircase", {"dim": 3}),
    ("two_points", {"dim": 3}),
    ("simplex", {"dim": 3}),
    ("random_box", {"dim": 2}),
    ("cross_subset", {"dim": 4, "connected": False}),
)


def check_oracle(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    h = config.oracle_resolution
    rng = random.Random(f"oracle:{config.seed}")
    worst = 0.0
    rows = []
    per_scene = max(1, scale.oracle_pairs // len(ORACLE_FAMILIES) + 1)
    for name, params in ORACLE_FAMILIES:
        M = generate(name, config.seed, **params)
        oracle = VoxelOracle(M, h)
        lo, hi = M.bounding_box()
        for _ in range(per_scene):
            x = Point([Fraction(rng.randint(int((l - 2) * 8), int((u + 2) * 8)), 8) for l, u in zip(lo, hi)])
            exact = project(M, x).rho
            approx = oracle.distance(x)
            gap = abs(float(exact) - approx)
            worst = max(worst, gap)
            rows.append({"scene": M.name, "x": x, "exact": exact, "voxel": approx})
    ok = len(rows) >= min(100, scale.oracle_pairs) and worst <= 2 * float(h)
    return CheckResult("oracle", "exact projection distance matches the voxel oracle", ok,
                       {"pairs": len(rows), "h": h, "max_abs_gap": worst, "bound": 2 * h, "rows": rows[:10]})


CONE_SCENES = (("main_cross", {"dim": 3}), ("main_cocross", {"dim": 3}), ("random_box", {"dim": 3}),
               ("box_staircase", {"dim": 3}), ("monotone_tube", {"dim": 3}), ("remark_r4", {}),
               ("random_box", {"dim": 2}))


def check_cone(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    rng = random.Random(f"cone:{config.seed}")
    triples = 0
    mismatches = []
    holds_notsolar = 0
    pairs_checked = 0
    per_scene = scale.cone_triples // len(CONE_SCENES) + 1
    for name, params in CONE_SCENES:
        M = generate(name, config.seed, **params)
        lo, hi = M.bounding_box()

        def rand_point(margin):
            return Point([Fraction(rng.randint(int((l - margin) * 4), int((u + margin) * 4)), 4)
                          for l, u in zip(lo, hi)])

        done = 0
        while done < per_scene:
            x = rand_point(2)
            if contains(M, x):
                continue
            for y in nearest_candidates(M, x):
                spec = ConeSpec.from_points(x, y)
                for _ in range(8):
                    z = rand_point(3) if rng.random() < 0.7 else y + (x - y) * Fraction(rng.randint(1, 8), 4)
                    a, b = cone_contains(spec, z), cone_contains_by_definition(spec, z)
                    triples += 1
                    done += 1
                    if a != b:
                        mismatches.append({"x": x, "y": y, "z": z, "halfspace": a, "definition": b})
        _, stats = sweep_reports(M, _sweep(max(10, scale.scene_sweep // 3), config), config.lambda_schedule, jobs)
        holds_notsolar += stats.ob_holds_notsolar
        pairs_checked += stats.candidates_checked
    ok = triples >= min(1000, scale.cone_triples) and not mismatches and holds_notsolar == 0
    return CheckResult("cone", "supporting-cone forms agree and the cone condition implies solarity", ok,
                       {"triples": triples, "mismatches": mismatches[:10], "sweep_pairs": pairs_checked,
                        "cone_holds_but_not_solar": holds_notsolar})


SPHERE_SCENES = (("main_cross", {"dim": 3}), ("random_box", {"dim": 3}), ("main_cocross", {"dim": 3}),
                 ("box_staircase", {"dim": 3}), ("cross_subset", {"dim": 3}), ("remark_r4", {}),
                 ("monotone_tube", {"dim": 3}))


def check_sphere_segments(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    checked = failed = 0
    rows = []
    for name, params in SPHERE_SCENES:
        M = generate(name, config.seed, **params)
        reports, stats = sweep_reports(M, _sweep(scale.sphere_sweep, config), config.lambda_schedule, jobs)
        checked += stats.sphere_checked
        failed += stats.sphere_failed
        rows.append({"scene": M.name, "checked": stats.sphere_checked, "failed": stats.sphere_failed,
                     "failures": [f for rep in reports for f in rep.sphere_failures][:5]})
    return CheckResult("sphere_segments", "segments between a solar and another nearest point stay on the sphere",
                       checked > 0 and failed == 0, {"checked": checked, "failed": failed, "rows": rows})


def ff_pair_scenes(seed: int) -> list[SetModel]:
    """Three-dimensional scenes with a varying mix of l1-convexity and cross status."""
    scenes = catalogue(STRICT_SUN_FAMILIES, 2, seed)
    scenes += catalogue(COCROSS_FAMILIES, 1, seed)
    return [M for M in scenes if M.dim == 3]


def origin_partner_scenes() -> list[SetModel]:
    """Scenes containing the origin and the three unit vectors."""
    P = Point.parse
    out = [unit_box(), generate("box", 0, dim=3, lo=-1, hi=1), generate("box", 0, dim=3, lo=0, hi=2)]
    out.append(SetModel((AxisBox(P("0,0,0"), P("1,1,1")), AxisBox(P("1/2,1/2,1/2"), P("2,2,2"))), "two_boxes"))
    cross = generate("main_cross", 0, dim=3, extent=4)
    out.append(cross.with_primitives([make_segment(P("0,0,0"), P("1,1,1"))], "cross_with_diagonal"))
    out.append(cross.with_primitives([AxisBox(P("0,0,0"), P("1,1,1"))], "cross_with_box"))
    return out


def check_ff_pairs(config: Config, scale: SuiteScale, jobs: int = 1) -> CheckResult:
    budget = config.pair_spec()
    rows3 = []
    bad = []
    for M in ff_pair_scenes(config.seed):
        if M.eqc:
            continue
        l1 = is_l1_convex(M, budget)
        cls = classify(M)
        if not l1.passed or cls.is_cross:
            continue
        pair = find_ff_pair(M, budget)
        rows3.append({"scene": M.name, "pair": pair})
        if pair is None:
            bad.append({"check": "ff_pair", "scene": M.name})
    rows1 = []
    e = [Point.zero(3)] + [Point.unit(3, k) for k in range(3)]
    for M in origin_partner_scenes():
        if not all(contains(M, p) for p in e) or classify(M).is_cross:
            continue
        sl1 = is_strictly_l1_convex(M, budget)
        if not sl1.passed:
            rows1.append({"scene": M.name, "preconditions": False})
            continue
        w = find_ff_partner(M, Point.zero(3), budget)
        rows1.append({"scene": M.name, "preconditions": True, "w": w})
        if w is None or not ff(w, Point.zero(3)):
            bad.append({"check": "partner_of_origin", "scene": M.name})
    used1 = sum(1 for r in rows1 if r["preconditions"])
    ok = not bad and len(rows3) > 0 and used1 > 0
    return CheckResult("ff_pairs", "coordinate-disjoint pairs exist where the structure forces them", ok,
                       {"ff_pair_scenes": rows3, "origin_partner_scenes": rows1, "failures": bad})


CHECKS: tuple[tuple[str, Callable], ...] = (
    ("cross", check_cross),
    ("box", check_box),
    ("four_dim_cocross", check_four_dim_cocross),
    ("main_cocross", check_main_cocross),
    ("cocross_sweep", check_cocross_sweep),
    ("strict_sun_sweep", check_strict_sun_sweep),
    ("oracle", check_oracle),
    ("cone", check_cone),
    ("sphere_segments", check_sphere_segments),
    ("ff_pairs", check_ff_pairs),
)


def run_suite(config: Config | None = None, scale: SuiteScale | None = None, jobs: int = 1,
              only: tuple = ()) -> dict:
    config = config or Config()
    scale = scale or SuiteScale()
    results = [fn(config, scale, jobs) for key, fn in CHECKS if not only or key in only]
    return {"config": config.to_json(), "passed": all(r.passed for r in results),
            "checks": [r.to_json() for r in results]}
