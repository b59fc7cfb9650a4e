"""Solar-point tests, sun / strict-sun sweeps and the supporting-cone criterion.

For an external point ``x`` with nearest point ``y`` at l-infinity distance
``r``, the open supporting cone at ``y`` is the set of ``z`` whose segment to
``y`` enters the open ball around ``x``.  In l-infinity it is the product of
strict half-spaces over the *active* coordinates ``{j : |x_j - y_j| = r}``.
``y`` is solar exactly when this cone misses the set, and the union over
``lam`` of the balls around ``y + lam (x - y)`` is that cone; the ``lam``
needed to expose a given cone point is computed in closed form.
"""
from __future__ import annotations

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .l1_convexity import Refuted, SampledPass, _jsonable
from .numerics import (
    ZERO,
    Norm,
    Point,
    PreconditionError,
    as_scalar,
    dist,
    lerp,
    ray_point,
    sign,
)
from .projection import nearest_candidates, project
from .set_model import SampleSpec, Segment, SetModel, contains, sample_points

DEFAULT_SCHEDULE = (Fraction(2), Fraction(4), Fraction(8), Fraction(16))
SPHERE_T_SAMPLES = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))
FACE_SAMPLING = "optimal-face centroid + extreme points"


# --- cones -------------------------------------------------------------------

@dataclass(frozen=True)
class ConeSpec:
    y: Point
    x: Point
    r: Fraction
    active: frozenset

    def __post_init__(self):
        if self.r <= 0:
            raise PreconditionError("cone radius must be positive (x must differ from y)")
        if dist(self.x, self.y) != self.r:
            raise PreconditionError("cone radius must equal |x - y|_inf")
        if not self.active:
            raise PreconditionError("active coordinate set must be nonempty")

    @classmethod
    def from_points(cls, x: Point, y: Point) -> "ConeSpec":
        x, y = Point(x), Point(y)
        r = dist(x, y)
        active = frozenset(j for j in range(len(x)) if abs(x[j] - y[j]) == r)
        return cls(y, x, r, active)

    @property
    def signs(self) -> dict[int, int]:
        return {j: sign(self.x[j] - self.y[j]) for j in sorted(self.active)}


def cone_contains(spec: ConeSpec, z: Point) -> bool:
    """Membership in the open supporting cone via the half-space form."""
    if len(z) != len(spec.y):
        raise PreconditionError("dimension mismatch")
    return all(s * (z[j] - spec.y[j]) > 0 for j, s in spec.signs.items())


def cone_contains_by_definition(spec: ConeSpec, z: Point) -> bool:
    """Membership via the definition: [z, y] meets the open ball B(x, r)."""
    z = Point(z)
    if len(z) != len(spec.y):
        raise PreconditionError("dimension mismatch")
    if z == spec.y:
        return False
    closest, _, _ = Segment(spec.y, z).project(spec.x, Norm.LINF)
    return closest < spec.r


@dataclass(frozen=True)
class Holds:
    passed = True

    def to_json(self):
        return {"ob_condition": "Holds"}


@dataclass(frozen=True)
class Violated:
    witness: Point
    primitive: int
    slack: Fraction
    passed = False

    def to_json(self):
        return {"ob_condition": "Violated", "witness": _jsonable(self.witness),
                "primitive": self.primitive, "slack": _jsonable(self.slack)}


def ob_condition(M: SetModel, spec: ConeSpec) -> Holds | Violated:
    """Exact test of whether the open supporting cone misses M.

    Per primitive, maximize the smallest active-coordinate slack; a positive
    optimum is a point of the primitive strictly inside the cone.
    """
    best = None
    for idx, prim in enumerate(M.primitives):
        val, w = prim.max_min_slack(spec.y, spec.signs)
        if val > 0 and (best is None or val > best.slack):
            best = Violated(w, idx, val)
    return Holds() if best is None else best


def exposing_lambda(spec: ConeSpec, m: Point) -> Fraction:
    """Smallest power of two ``lam >= 2`` with ``m`` inside the open ball of
    radius ``lam * r`` around ``y + lam (x - y)``; ``m`` must lie in the cone."""
    r = spec.r
    bound = ZERO
    for j in range(len(m)):
        u = m[j] - spec.y[j]
        v = spec.x[j] - spec.y[j]
        if v + r != 0:
            bound = max(bound, u / (v + r))
        if v - r != 0:
            bound = max(bound, u / (v - r))
    lam = Fraction(2)
    while lam <= bound:
        lam *= 2
    return lam


# --- solar points --------------------------------------------------------------

@dataclass(frozen=True)
class Solar:
    lambda_max_checked: Fraction
    cone_certified: bool = False
    passed = True

    def to_json(self):
        return {"solar": True, "lambda_max_checked": _jsonable(self.lambda_max_checked),
                "cone_certified": self.cone_certified}


@dataclass(frozen=True)
class NotSolar:
    lambda_witness: Fraction
    rho_at_witness: Fraction
    competing_point: Point
    z: Point
    from_cone: bool = False
    passed = False

    def to_json(self):
        return {"solar": False, "lambda": _jsonable(self.lambda_witness), "z": _jsonable(self.z),
                "rho_at_z": _jsonable(self.rho_at_witness), "competing_point": _jsonable(self.competing_point),
                "from_cone": self.from_cone}


def _require_nearest(M: SetModel, x: Point, y: Point):
    if contains(M, x):
        raise PreconditionError(f"{x} lies in the set")
    pr = project(M, x)
    if dist(x, y) != pr.rho or not contains(M, y):
        raise PreconditionError(f"{y} is not a nearest point of the set to {x}")
    return pr


def _ray_test(M: SetModel, x: Point, y: Point, lam: Fraction, from_cone=False) -> Optional[NotSolar]:
    z = ray_point(y, x, lam)
    pr = project(M, z)
    if pr.rho < dist(z, y):
        return NotSolar(lam, pr.rho, pr.points[0], z, from_cone)
    return None


def _cone_refutation(M: SetModel, x: Point, y: Point, ob: Violated) -> NotSolar:
    spec = ConeSpec.from_points(x, y)
    lam = exposing_lambda(spec, ob.witness)
    found = _ray_test(M, x, y, lam, from_cone=True)
    if found is None:
        raise AssertionError(f"cone witness {ob.witness} failed to expose non-solarity at lambda={lam}")
    return found


def is_solar_point(M: SetModel, x: Point, y: Point, schedule: Sequence = DEFAULT_SCHEDULE,
                   cone_probe: bool = True) -> Solar | NotSolar:
    """Test whether ``y`` stays nearest along the ray from ``y`` through ``x``.

    Checks each ``lam`` of ``schedule``.  With ``cone_probe`` a schedule pass
    is followed by the exact cone test; a cone point found there is turned
    into a concrete ``lam`` so the refutation is still an explicit ray point.
    """
    x, y = Point(x), Point(y)
    _require_nearest(M, x, y)
    schedule = [as_scalar(l) for l in schedule]
    for lam in schedule:
        found = _ray_test(M, x, y, lam)
        if found is not None:
            return found
    lam_max = max(schedule) if schedule else ZERO
    if not cone_probe:
        return Solar(lam_max)
    ob = ob_condition(M, ConeSpec.from_points(x, y))
    if isinstance(ob, Violated):
        return _cone_refutation(M, x, y, ob)
    return Solar(lam_max, cone_certified=True)


@dataclass(frozen=True)
class SunWitness:
    y: Point
    passed = True


@dataclass(frozen=True)
class NoSolarFound:
    candidates_checked: int
    passed = False


def check_sun_at(M: SetModel, x: Point, schedule: Sequence = DEFAULT_SCHEDULE) -> SunWitness | NoSolarFound:
    x = Point(x)
    if contains(M, x):
        raise PreconditionError(f"{x} lies in the set")
    cands = nearest_candidates(M, x)
    for y in cands:
        if is_solar_point(M, x, y, schedule).passed:
            return SunWitness(y)
    return NoSolarFound(len(cands))


def verify_lemma2(M: SetModel, x: Point, y_hat: Point, y: Point, t_samples: Sequence = SPHERE_T_SAMPLES) -> bool:
    """Whether the segment [y, y_hat] stays on the sphere of radius rho(x, M)."""
    x, y_hat, y = Point(x), Point(y_hat), Point(y)
    pr = project(M, x)
    if dist(x, y) != pr.rho or dist(x, y_hat) != pr.rho:
        raise PreconditionError("both points must be nearest points of the set to x")
    return all(dist(x, lerp(y, y_hat, t)) == pr.rho for t in t_samples)


# --- external point sweeps -------------------------------------------------------

def _lattice_step(span: Fraction) -> Fraction:
    step = Fraction(1)
    while step > span / 8:
        step /= 2
    while step * 2 <= span / 8:
        step *= 2
    return step


def external_points(M: SetModel, sweep: SampleSpec) -> list[Point]:
    """Deterministic external sample points, ordered.

    First a lattice shell around the bounding box (nearest the box centre
    first), then midpoints of sampled pairs of M, then seeded random rational
    points in the enlarged box.  Points of M are discarded.
    """
    lo, hi = M.bounding_box()
    dim = M.dim
    side = max(h - l for l, h in zip(lo, hi))
    margin = max(Fraction(1), side / 4)
    span = side + 2 * margin
    step = _lattice_step(span)
    center = Point._raw(tuple((l + h) / 2 for l, h in zip(lo, hi)))
    axes = []
    for l, h in zip(lo, hi):
        k0 = -((-(l - margin)) // step)  # ceil
        k1 = (h + margin) // step
        axes.append([k * step for k in range(int(k0), int(k1) + 1)])

    def key(p):
        d = p - center
        return (max(abs(c) for c in d), sum(abs(c) for c in d), tuple(-c for c in d))

    lattice = sorted((Point._raw(c) for c in itertools.product(*axes)), key=key)
    n_lattice = sweep.count // 2
    n_mid = sweep.count // 4
    out: list[Point] = []
    seen = set()

    def take(p: Point, limit: int) -> bool:
        if len(out) >= limit:
            return False
        if p in seen or contains(M, p):
            return True
        seen.add(p)
        out.append(p)
        return True

    for p in lattice:
        if not take(p, n_lattice):
            break
    rng = random.Random(sweep.seed)
    pts = sample_points(M, SampleSpec(count=max(sweep.count // 8, 16), seed=sweep.seed))
    pairs = list(itertools.combinations(pts, 2))
    rng.shuffle(pairs)
    for a, b in pairs:
        if not take((a + b) * Fraction(1, 2), n_lattice + n_mid):
            break
    denom = 16
    attempts = 0
    while len(out) < sweep.count and attempts < 50 * sweep.count:
        attempts += 1
        p = Point._raw(tuple(
            Fraction(rng.randint(int((l - margin) * denom), int((h + margin) * denom)), denom)
            for l, h in zip(lo, hi)))
        take(p, sweep.count)
    return out


@dataclass
class SweepStats:
    points_checked: int = 0
    candidates_checked: int = 0
    ob_holds_solar: int = 0
    ob_violated_notsolar: int = 0
    ob_violated_schedule_solar: int = 0
    ob_holds_notsolar: int = 0
    sphere_checked: int = 0
    sphere_failed: int = 0
    face_sampling: str = FACE_SAMPLING

    def merge(self, other: "SweepStats") -> None:
        for name in ("points_checked", "candidates_checked", "ob_holds_solar", "ob_violated_notsolar",
                     "ob_violated_schedule_solar", "ob_holds_notsolar", "sphere_checked", "sphere_failed"):
            setattr(self, name, getattr(self, name) + getattr(other, name))

    @property
    def ob_agreement(self) -> bool:
        return self.ob_holds_notsolar == 0

    def to_json(self):
        return {**self.__dict__, "ob_agreement": self.ob_agreement}


@dataclass
class PointReport:
    x: Point
    stats: SweepStats
    violation: Optional[dict] = None
    solar: Optional[Point] = None
    sphere_failures: list = field(default_factory=list)


def _examine_point(M: SetModel, x: Point, schedule, strict: bool) -> PointReport:
    """All nearest candidates of one external point, with cone bookkeeping."""
    stats = SweepStats(points_checked=1)
    rep = PointReport(x, stats)
    cands = nearest_candidates(M, x)
    certified = []
    for y in cands:
        stats.candidates_checked += 1
        ob = ob_condition(M, ConeSpec.from_points(x, y))
        sol = is_solar_point(M, x, y, schedule, cone_probe=False)
        if isinstance(ob, Holds):
            certified.append(y)
            if sol.passed:
                stats.ob_holds_solar += 1
            else:
                stats.ob_holds_notsolar += 1
        elif sol.passed:
            stats.ob_violated_schedule_solar += 1
            sol = _cone_refutation(M, x, y, ob)
        else:
            stats.ob_violated_notsolar += 1
        if sol.passed:
            if rep.solar is None:
                rep.solar = y
        elif rep.violation is None:
            rep.violation = {"x": x, "y": y, "lambda": sol.lambda_witness, "z": sol.z,
                             "rho_at_z": sol.rho_at_witness, "dist_z_y": dist(sol.z, y),
                             "competing_point": sol.competing_point, "from_cone": sol.from_cone}
        if not strict and rep.solar is not None:
            break
    if certified:
        y_hat = certified[0]
        for y in cands:
            if y == y_hat:
                continue
            stats.sphere_checked += 1
            if not verify_lemma2(M, x, y_hat, y):
                stats.sphere_failed += 1
                rep.sphere_failures.append({"x": x, "y_hat": y_hat, "y": y})
    return rep


def _examine_chunk(args):
    M, xs, schedule, strict = args
    return [_examine_point(M, x, schedule, strict) for x in xs]


def _sweep(M: SetModel, sweep: SampleSpec, schedule, strict: bool, jobs: int, stop_at_first: bool):
    xs = external_points(M, sweep)
    reports: list[PointReport] = []
    if jobs <= 1:
        for x in xs:
            rep = _examine_point(M, x, schedule, strict)
            reports.append(rep)
            if stop_at_first and _failed(rep, strict):
                break
    else:
        n = max(1, len(xs) // (jobs * 4))
        chunks = [(M, xs[i:i + n], schedule, strict) for i in range(0, len(xs), n)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_examine_chunk, chunks):
                reports.extend(part)
        if stop_at_first:
            for i, rep in enumerate(reports):
                if _failed(rep, strict):
                    reports = reports[:i + 1]
                    break
    stats = SweepStats()
    for rep in reports:
        stats.merge(rep.stats)
    return reports, stats


def _failed(rep: PointReport, strict: bool) -> bool:
    return rep.violation is not None if strict else rep.solar is None


def default_jobs() -> int:
    return os.cpu_count() or 1


def check_strict_sun(M: SetModel, sweep: SampleSpec | None = None, schedule: Sequence = DEFAULT_SCHEDULE,
                     jobs: int = 1, stop_at_first: bool = True):
    """Every sampled nearest point of every sampled external point must be solar."""
    sweep = sweep or SampleSpec(count=300)
    reports, stats = _sweep(M, sweep, schedule, True, jobs, stop_at_first)
    for rep in reports:
        if rep.violation is not None:
            return Refuted({"kind": "non_solar_nearest_point", **rep.violation, "stats": stats.to_json()})
    return SampledPass(stats.points_checked, max(as_scalar(l) for l in schedule),
                       {"external_points": stats.points_checked, "stats": stats.to_json(),
                        "schedule": list(schedule)})


def check_sun(M: SetModel, sweep: SampleSpec | None = None, schedule: Sequence = DEFAULT_SCHEDULE,
              jobs: int = 1, stop_at_first: bool = True):
    """Every sampled external point must have at least one solar nearest point."""
    sweep = sweep or SampleSpec(count=300)
    reports, stats = _sweep(M, sweep, schedule, False, jobs, stop_at_first)
    for rep in reports:
        if rep.solar is None:
            return Refuted({"kind": "no_solar_point", "x": rep.x,
                            "candidates": nearest_candidates(M, rep.x), "stats": stats.to_json()})
    return SampledPass(stats.points_checked, max(as_scalar(l) for l in schedule),
                       {"external_points": stats.points_checked, "stats": stats.to_json(),
                        "schedule": list(schedule)})


def sweep_reports(M: SetModel, sweep: SampleSpec, schedule: Sequence = DEFAULT_SCHEDULE, jobs: int = 1):
    """Full strict sweep without early exit; returns per-point reports and totals."""
    return _sweep(M, sweep, schedule, True, jobs, stop_at_first=False)
