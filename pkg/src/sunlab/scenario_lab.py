"""Seeded scene families and the characterization cross-checks run on them.

Each ``validate_*`` computes the verdicts one characterization needs and
stores them in a :class:`ScenarioReport`; agreement flags are always derived
from the stored verdicts.  Sampled passes count as "true" and refutations as
"false" when compared with the exact structural predicates, and every
report says so.
"""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .classification import Classification, classify
from .config import Config
from .l1_convexity import _jsonable, is_l1_convex, is_strictly_l1_convex
from .numerics import SUPPORTED_DIMS, Point, PreconditionError, as_scalar
from .scene_io import scene_to_json
from .set_model import AxisBox, Polytope, SetModel, SinglePoint, make_segment
from .sun_checker import check_strict_sun, check_sun

CONVENTION = "SampledPass counts as pass/true, Refuted as fail/false; sampled verdicts are not proofs"


class InvalidFamily(PreconditionError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)

    @property
    def key(self) -> str:
        return self.name.replace("-", "_")


# --- helpers -------------------------------------------------------------------

def _rat(rng: random.Random, lo, hi, denom: int = 2) -> Fraction:
    lo, hi = as_scalar(lo), as_scalar(hi)
    return Fraction(rng.randint(int(lo * denom), int(hi * denom)), denom)


def _dim(dim) -> int:
    dim = int(dim)
    if dim not in SUPPORTED_DIMS:
        raise InvalidFamily(f"dimension must be one of {SUPPORTED_DIMS}, got {dim}")
    return dim


def _extent(extent) -> Fraction:
    extent = as_scalar(extent)
    if extent <= 0:
        raise InvalidFamily("extent must be positive")
    return extent


def _center(center, dim: int) -> Point:
    if center is None:
        return Point.zero(dim)
    c = Point.parse(center) if isinstance(center, str) else Point(center)
    if len(c) != dim:
        raise InvalidFamily("center dimension mismatch")
    return c


def _axis_seg(center: Point, k: int, a: Fraction, b: Fraction):
    return make_segment(center.replace(k, center[k] + a), center.replace(k, center[k] + b))


def _slab(center: Point, k: int, extent: Fraction, frozen: dict | None = None) -> AxisBox:
    """The extent box around ``center`` flattened to ``z_k = center_k``."""
    frozen = frozen or {}
    lo, hi = [], []
    for j in range(len(center)):
        if j == k:
            lo.append(center[j]), hi.append(center[j])
        elif j in frozen:
            lo.append(frozen[j]), hi.append(frozen[j])
        else:
            lo.append(center[j] - extent), hi.append(center[j] + extent)
    return AxisBox(Point(lo), Point(hi))


# --- families ------------------------------------------------------------------

def _main_cross(rng, dim=3, center=None, extent=4):
    dim, extent = _dim(dim), _extent(extent)
    c = _center(center, dim)
    return [_axis_seg(c, k, -extent, extent) for k in range(dim)]


def _cross_subset(rng, dim=3, center=None, extent=4, connected=True):
    """Sub-segments of a main cross; the disconnected variant detaches one arm."""
    dim, extent = _dim(dim), _extent(extent)
    c = _center(center, dim)
    prims = []
    gap_axis = rng.randrange(dim) if not connected else None
    for k in range(dim):
        if k == gap_axis:
            a = _rat(rng, Fraction(1, 2), extent / 2)
            b = _rat(rng, a + Fraction(1, 2), extent)
            sgn = rng.choice((1, -1))
            prims.append(_axis_seg(c, k, sgn * a, sgn * b) if sgn > 0 else _axis_seg(c, k, -b, -a))
        else:
            a = _rat(rng, 0, extent)
            b = _rat(rng, 0, extent)
            if a == 0 and b == 0:
                b = extent
            prims.append(_axis_seg(c, k, -a, b))
    return prims


def _main_cocross(rng, dim=3, center=None, extent=2):
    dim, extent = _dim(dim), _extent(extent)
    c = _center(center, dim)
    return [_slab(c, k, extent) for k in range(dim)]


def _cocross_cJ(rng, dim=4, J=(0,), consts=None, center=None, extent=2):
    dim, extent = _dim(dim), _extent(extent)
    J = tuple(sorted(set(int(j) for j in J)))
    if len(J) > dim - 2 or any(not 0 <= j < dim for j in J):
        raise InvalidFamily("frozen coordinates J need card J <= dim - 2")
    c = _center(center, dim)
    consts = [as_scalar(v) for v in consts] if consts is not None else [c[j] + 1 for j in J]
    if len(consts) != len(J):
        raise InvalidFamily("one constant per frozen coordinate")
    frozen = dict(zip(J, consts))
    return [_slab(c, k, extent, frozen) for k in range(dim) if k not in frozen]


def _cocross_random(rng, dim=3, center=None, extent=2):
    """Random sub-rectangles of at least two coordinate hyperplanes through a centre."""
    dim, extent = _dim(dim), _extent(extent)
    c = _center(center, dim)
    axes = rng.sample(range(dim), rng.randint(2, dim))
    prims = []
    for k in axes:
        lo, hi = [], []
        for j in range(dim):
            if j == k:
                lo.append(c[j]), hi.append(c[j])
                continue
            a = _rat(rng, -extent, 0)
            b = _rat(rng, Fraction(1, 2), extent)
            lo.append(c[j] + a), hi.append(c[j] + b)
        prims.append(AxisBox(Point(lo), Point(hi)))
    return prims


def _box(rng, dim=3, lo=0, hi=1):
    dim = _dim(dim)
    lo = Point([as_scalar(lo)] * dim) if not isinstance(lo, (list, tuple, Point)) else Point(lo)
    hi = Point([as_scalar(hi)] * dim) if not isinstance(hi, (list, tuple, Point)) else Point(hi)
    if any(a > b for a, b in zip(lo, hi)):
        raise InvalidFamily("box needs lo <= hi")
    return [AxisBox(lo, hi)]


def _random_box(rng, dim=3, extent=2):
    dim, extent = _dim(dim), _extent(extent)
    lo = [_rat(rng, -extent, 0) for _ in range(dim)]
    hi = [l + _rat(rng, Fraction(1, 2), extent) for l in lo]
    return [AxisBox(Point(lo), Point(hi))]


def _monotone_path(rng, dim, steps, extent, allow_zero):
    signs = [rng.choice((1, -1)) for _ in range(dim)]
    p = Point([_rat(rng, -extent, 0) for _ in range(dim)])
    prims = []
    for _ in range(steps):
        while True:
            lows = 0 if allow_zero else Fraction(1, 2)
            d = [s * _rat(rng, lows, 2) for s in signs]
            if any(d):
                break
        q = p + Point(d)
        prims.append(make_segment(p, q))
        p = q
    return prims


def _monotone_tube(rng, dim=3, steps=3, extent=2):
    """Polyline whose every step moves every coordinate in a fixed direction."""
    return _monotone_path(rng, _dim(dim), int(steps), _extent(extent), allow_zero=False)


def _random_l1_convex(rng, dim=3, steps=3, extent=2):
    """Polyline with a fixed sign pattern; individual coordinates may stall."""
    return _monotone_path(rng, _dim(dim), int(steps), _extent(extent), allow_zero=True)


def _box_staircase(rng, dim=3, steps=2, extent=2):
    """Boxes shifted diagonally so consecutive ones overlap in a proper box."""
    dim = _dim(dim)
    size = [_rat(rng, 1, extent) for _ in range(dim)]
    lo = Point([_rat(rng, -extent, 0) for _ in range(dim)])
    prims = []
    for _ in range(int(steps)):
        hi = lo + Point(size)
        prims.append(AxisBox(lo, hi))
        lo = lo + Point([s / 2 for s in size])
    return prims


def _remark_r4(rng, extent=2):
    """Truncated c3(0) inside the hyperplane x4 = 0, plus the x4 axis."""
    extent = _extent(extent)
    c = Point.zero(4)
    prims = [_slab(c, k, extent, {3: Fraction(0)}) for k in range(3)]
    prims.append(_axis_seg(c, 3, -extent, extent))
    return prims


def _two_points(rng, dim=3, a=None, b=None, extent=2):
    dim = _dim(dim)
    if a is None and b is None:
        if rng.random() < 0.5:
            return [SinglePoint(Point.zero(dim)), SinglePoint(Point([1] * dim))]
        a = Point([_rat(rng, -extent, extent) for _ in range(dim)])
        b = a
        while b == a:
            b = Point([_rat(rng, -extent, extent) for _ in range(dim)])
    a, b = Point(a), Point(b)
    if a == b:
        raise InvalidFamily("two_points needs distinct points")
    return [SinglePoint(a), SinglePoint(b)]


def _simplex(rng, dim=3, extent=2):
    """A random full-dimensional simplex, stored as a polytope."""
    dim, extent = _dim(dim), _extent(extent)
    base = Point([_rat(rng, -extent, 0) for _ in range(dim)])
    verts = [base] + [base + Point.unit(dim, k) * _rat(rng, 1, extent) for k in range(dim)]
    return [Polytope(tuple(verts))]


FAMILIES: dict[str, Callable] = {
    "main_cross": _main_cross,
    "cross_subset": _cross_subset,
    "main_cocross": _main_cocross,
    "cocross_cJ": _cocross_cJ,
    "cocross_random": _cocross_random,
    "box": _box,
    "random_box": _random_box,
    "monotone_tube": _monotone_tube,
    "box_staircase": _box_staircase,
    "remark_r4": _remark_r4,
    "two_points": _two_points,
    "random_l1_convex": _random_l1_convex,
    "simplex": _simplex,
}


def generate(family: FamilySpec | str, seed: int = 0, **params) -> SetModel:
    if isinstance(family, str):
        family = FamilySpec(family, params)
    elif params:
        family = FamilySpec(family.name, {**family.params, **params})
    fn = FAMILIES.get(family.key)
    if fn is None:
        raise InvalidFamily(f"unknown family {family.name!r}; known: {', '.join(sorted(FAMILIES))}")
    rng = random.Random(f"{family.key}:{seed}")
    try:
        prims = fn(rng, **family.params)
    except TypeError as exc:
        raise InvalidFamily(str(exc)) from exc
    return SetModel(tuple(prims), f"{family.key}-{seed}")


# --- reports -------------------------------------------------------------------

VERDICT_NAMES = ("l1_convex", "strictly_l1_convex", "sun", "strict_sun")


@dataclass
class ScenarioReport:
    scene: SetModel
    seed: int
    classification: Classification
    config: Config
    l1_convex: Optional[object] = None
    strictly_l1_convex: Optional[object] = None
    sun_verdict: Optional[object] = None
    strict_sun_verdict: Optional[object] = None
    requested: tuple = ()
    timings: dict = field(default_factory=dict)

    def _verdict(self, name):
        return {"l1_convex": self.l1_convex, "strictly_l1_convex": self.strictly_l1_convex,
                "sun": self.sun_verdict, "strict_sun": self.strict_sun_verdict}[name]

    def _record(self, lhs, rhs):
        return {"lhs": lhs, "rhs": rhs, "agree": lhs == rhs, "convention": CONVENTION}

    @property
    def theorem_agreements(self) -> dict:
        """Agreement records recomputed from the stored verdicts."""
        c = self.classification
        out = {}
        if "theorem1" in self.requested and self.strict_sun_verdict and self.strictly_l1_convex:
            out["theorem1"] = self._record(self.strict_sun_verdict.passed,
                                           self.strictly_l1_convex.passed and not c.is_cross)
        if "theoremA" in self.requested and self.strict_sun_verdict and self.strictly_l1_convex:
            out["theoremA"] = self._record(self.strict_sun_verdict.passed,
                                           self.strictly_l1_convex.passed and not c.is_cocross)
        if "berens_hetzelt" in self.requested and self.sun_verdict and self.l1_convex:
            out["berens_hetzelt"] = self._record(self.sun_verdict.passed, self.l1_convex.passed)
        if "prop1" in self.requested and self.strictly_l1_convex:
            out["prop1"] = self._record(self.strictly_l1_convex.passed,
                                        c.is_cross and c.component_count == 1)
        return out

    @property
    def all_agree(self) -> bool:
        return all(rec["agree"] for rec in self.theorem_agreements.values())

    def to_json(self) -> dict:
        verdicts = {"classification": self.classification.to_json()}
        witnesses = []
        for name in VERDICT_NAMES:
            v = self._verdict(name)
            if v is None:
                continue
            verdicts[name] = v.to_json()
            if not v.passed:
                witnesses.append({"check": name, **v.to_json()})
        return _jsonable({
            "scene": scene_to_json(self.scene),
            "seed": self.seed,
            "verdicts": verdicts,
            "agreements": self.theorem_agreements,
            "witnesses": witnesses,
            "config": self.config.to_json(),
        })


def _timed(report: ScenarioReport, name: str, fn):
    t0 = time.perf_counter()
    out = fn()
    report.timings[name] = time.perf_counter() - t0
    return out


def _fill(M: SetModel, config: Config, needs: set, requested: tuple, jobs: int) -> ScenarioReport:
    rep = ScenarioReport(M, config.seed, classify(M), config, requested=requested)
    pairs, sweep, sched = config.pair_spec(), config.sweep_spec(), config.lambda_schedule
    if "l1_convex" in needs:
        rep.l1_convex = _timed(rep, "l1_convex", lambda: is_l1_convex(M, pairs))
    if "strictly_l1_convex" in needs:
        rep.strictly_l1_convex = _timed(rep, "strictly_l1_convex", lambda: is_strictly_l1_convex(M, pairs))
    if "sun" in needs:
        rep.sun_verdict = _timed(rep, "sun", lambda: check_sun(M, sweep, sched, jobs=jobs))
    if "strict_sun" in needs:
        rep.strict_sun_verdict = _timed(rep, "strict_sun", lambda: check_strict_sun(M, sweep, sched, jobs=jobs))
    return rep


def validate_theorem1(M: SetModel, config: Config | None = None, jobs: int = 1) -> ScenarioReport:
    """Strict sun in three dimensions versus strict l1-convexity and not being a cross."""
    if M.dim != 3:
        raise PreconditionError("the three-dimensional characterization needs dim = 3")
    return _fill(M, config or Config(), {"strictly_l1_convex", "strict_sun"}, ("theorem1",), jobs)


def validate_theoremA(M: SetModel, config: Config | None = None, jobs: int = 1) -> ScenarioReport:
    """Strict sun versus strict l1-convexity and not being a cocross."""
    return _fill(M, config or Config(), {"strictly_l1_convex", "strict_sun"}, ("theoremA",), jobs)


def validate_bh(M: SetModel, config: Config | None = None, jobs: int = 1) -> ScenarioReport:
    """Sun versus (Menger) l1-convexity."""
    return _fill(M, config or Config(), {"l1_convex", "sun"}, ("berens_hetzelt",), jobs)


def validate_prop1(M: SetModel, config: Config | None = None, jobs: int = 1) -> ScenarioReport:
    """For a cocross in three dimensions: strict l1-convexity versus being a connected cross."""
    if M.dim != 3:
        raise PreconditionError("the cocross check needs dim = 3")
    if classify(M).is_cocross is False:
        raise PreconditionError("the cocross check applies to cocrosses only")
    return _fill(M, config or Config(), {"strictly_l1_convex"}, ("prop1",), jobs)


def validate_all(M: SetModel, config: Config | None = None, jobs: int = 1) -> ScenarioReport:
    """Every verdict and every characterization whose preconditions hold."""
    config = config or Config()
    c = classify(M)
    requested = ["theoremA", "berens_hetzelt"]
    if M.dim == 3:
        requested.insert(0, "theorem1")
        if c.is_cocross:
            requested.append("prop1")
    return _fill(M, config, set(VERDICT_NAMES), tuple(requested), jobs)


VALIDATORS = {"1": validate_theorem1, "A": validate_theoremA, "BH": validate_bh, "prop1": validate_prop1}


# --- scene catalogues ----------------------------------------------------------

STRICT_SUN_FAMILIES = (
    ("random_box", {}),
    ("monotone_tube", {}),
    ("box_staircase", {}),
    ("main_cross", {}),
    ("cross_subset", {"connected": True}),
    ("cross_subset", {"connected": False}),
    ("main_cocross", {}),
    ("cocross_random", {}),
    ("two_points", {}),
    ("random_l1_convex", {}),
)

COCROSS_FAMILIES = (
    ("main_cross", {}),
    ("cross_subset", {"connected": True}),
    ("cross_subset", {"connected": False}),
    ("main_cocross", {}),
    ("cocross_random", {}),
    ("cocross_cJ", {"dim": 3, "J": (2,)}),
)


def catalogue(families, seeds: int, base_seed: int = 0) -> list[SetModel]:
    out = []
    for s in range(seeds):
        for name, params in families:
            extra = {} if name in ("two_points", "cocross_cJ") or "dim" in params else {"dim": 3}
            M = generate(name, base_seed + s, **params, **extra)
            if params.get("connected") is False:
                M = SetModel(M.primitives, M.name.replace("cross_subset", "cross_subset_disconnected"))
            out.append(M)
    return out


def _run_one(args):
    kind, M, config = args
    return VALIDATORS[kind](M, config)


def run_validations(kind: str, scenes: list[SetModel], config: Config, jobs: int = 1) -> list[ScenarioReport]:
    """Validate independent scenes, in parallel when ``jobs > 1``; order is preserved."""
    tasks = [(kind, M, config) for M in scenes]
    if jobs <= 1:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks))
