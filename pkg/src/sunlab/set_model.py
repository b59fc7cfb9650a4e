"""Closed bounded sets represented as finite unions of convex primitives.

Every primitive answers the same small set of exact queries (membership,
clipping a segment, projection, optimal faces, maximal cone slack).  Points,
segments and axis boxes use closed forms; polytopes and clipped regions fall
back to the exact LP solver.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lp import EQ, GE, LE, LpBuilder
from .numerics import (
    ONE,
    ZERO,
    DimensionMismatch,
    Norm,
    Point,
    SunlabError,
    as_scalar,
    dist,
    lerp,
    midpoint,
)

LATTICE = 8  # subdivisions used for stratified sampling inside primitives


class InvalidPrimitive(SunlabError, ValueError):
    pass


def _centroid(points: Sequence[Point]) -> Point:
    n = len(points)
    dim = len(points[0])
    return Point._raw(tuple(sum((p[j] for p in points), ZERO) / n for j in range(dim)))


def _dedupe(points: Iterable[Point]) -> list[Point]:
    seen = set()
    out = []
    for p in points:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def _interval_of_affine(const: Fraction, slope: Fraction, lo: Fraction, hi: Fraction):
    """Parameter set {t : lo <= const + t*slope <= hi} as (t0, t1); None if empty.

    Infinite ends are returned as None inside the tuple.
    """
    if slope == 0:
        if lo <= const <= hi:
            return (None, None)
        return False
    a = (lo - const) / slope
    b = (hi - const) / slope
    return (a, b) if slope > 0 else (b, a)


class Convex:
    """A closed convex set in R^dim.  Subclasses override the LP defaults."""

    dim: int
    kind = "convex"

    # --- LP description -------------------------------------------------
    def lp_constrain(self, b: LpBuilder, z: Sequence[int]) -> None:
        raise NotImplementedError

    def _builder(self) -> tuple[LpBuilder, list[int]]:
        b = LpBuilder()
        z = [b.free_var() for _ in range(self.dim)]
        self.lp_constrain(b, z)
        return b, z

    # --- queries (generic, LP-backed) -----------------------------------
    def vertices(self) -> list[Point]:
        return self.probe_points()

    def probe_points(self) -> list[Point]:
        """Extreme points found by optimizing signed coordinate objectives."""
        b, z = self._builder()
        pts = []
        objectives = []
        for j in range(self.dim):
            objectives.append({z[j]: 1})
            objectives.append({z[j]: -1})
        for signs in itertools.product((1, -1), repeat=self.dim):
            objectives.append({z[j]: s for j, s in enumerate(signs)})
        for obj in objectives:
            res = b.minimize(obj)
            if not res.optimal:
                return []
            pts.append(Point._raw(tuple(res.x[k] for k in z)))
        return _dedupe(pts)

    def is_empty(self) -> bool:
        b, _ = self._builder()
        return b.feasible_point() is None

    def contains(self, q: Point) -> bool:
        b, z = self._builder()
        for j, k in enumerate(z):
            b.add({k: 1}, EQ, q[j])
        return b.feasible_point() is not None

    def line_interval(self, p0: Point, p1: Point):
        b, z = self._builder()
        t = b.var(0, 1)
        for j, k in enumerate(z):
            # z_j = p0_j + t (p1_j - p0_j)
            b.add({k: 1, t: -(p1[j] - p0[j])}, EQ, p0[j])
        lo = b.minimize({t: 1})
        if not lo.optimal:
            return None
        hi = b.maximize({t: 1})
        return (lo.value, hi.value)

    def constant_coords(self) -> dict[int, Fraction]:
        verts = self.vertices()
        out = {}
        for j in range(self.dim):
            vals = {v[j] for v in verts}
            if len(vals) == 1:
                out[j] = next(iter(vals))
        return out

    def clip(self, lo: Point, hi: Point) -> "Convex | None":
        region = ConvexIntersection((self, AxisBox(lo, hi)))
        return None if region.is_empty() else region

    def project(self, x: Point, which: Norm = Norm.LINF) -> tuple[Fraction, Point, bool]:
        b, z = self._builder()
        if Norm(which) is Norm.LINF:
            s = b.var(0)
            for j, k in enumerate(z):
                b.add({s: 1, k: 1}, GE, x[j])
                b.add({s: 1, k: -1}, GE, -x[j])
            res = b.minimize({s: 1})
        else:
            us = []
            for j, k in enumerate(z):
                u = b.var(0)
                us.append(u)
                b.add({u: 1, k: 1}, GE, x[j])
                b.add({u: 1, k: -1}, GE, -x[j])
            res = b.minimize({u: 1 for u in us})
        if not res.optimal:
            raise InvalidPrimitive("projection onto an empty region")
        rho = res.value
        y = Point._raw(tuple(res.x[k] for k in z))
        face = self.face_points(x, rho, which)
        return rho, y, len(face) <= 1

    def face_points(self, x: Point, rho: Fraction, which: Norm = Norm.LINF) -> list[Point]:
        """Extreme points of {z in self : |x - z| <= rho}."""
        if Norm(which) is Norm.LINF:
            region = ConvexIntersection((self, AxisBox(x - Point._raw((rho,) * self.dim),
                                                       x + Point._raw((rho,) * self.dim))))
            return region.probe_points()
        b, z = self._builder()
        us = []
        for j, k in enumerate(z):
            u = b.var(0)
            us.append(u)
            b.add({u: 1, k: 1}, GE, x[j])
            b.add({u: 1, k: -1}, GE, -x[j])
        b.add({u: 1 for u in us}, LE, rho)
        pts = []
        for j in range(self.dim):
            for s in (1, -1):
                res = b.minimize({z[j]: s})
                if res.optimal:
                    pts.append(Point._raw(tuple(res.x[k] for k in z)))
        return _dedupe(pts)

    def max_min_slack(self, y: Point, signs: dict[int, int]) -> tuple[Fraction, Point]:
        """Maximize min_j signs[j] * (z_j - y_j) over the set; return (value, argmax)."""
        b, z = self._builder()
        s = b.free_var()
        for j, sg in signs.items():
            # s <= sg * (z_j - y_j)
            b.add({s: 1, z[j]: -sg}, LE, -sg * y[j])
        # keep the LP bounded even when the region is unbounded in the slack
        res = b.maximize({s: 1})
        if not res.optimal:
            raise InvalidPrimitive(f"slack maximization failed: {res.status}")
        return res.value, Point._raw(tuple(res.x[k] for k in z))

    def sample(self, rng: random.Random, count: int) -> list[Point]:
        verts = self.vertices()
        out = [_centroid(verts)]
        for _ in range(count - 1):
            weights = [rng.randint(0, LATTICE) for _ in verts]
            total = sum(weights)
            if total == 0:
                continue
            out.append(Point._raw(tuple(
                sum((Fraction(w, total) * v[j] for w, v in zip(weights, verts)), ZERO)
                for j in range(self.dim))))
        return out

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class SinglePoint(Convex):
    p: Point
    kind = "point"

    def __post_init__(self):
        object.__setattr__(self, "p", Point(self.p))

    @property
    def dim(self) -> int:
        return len(self.p)

    def lp_constrain(self, b, z):
        for j, k in enumerate(z):
            b.add({k: 1}, EQ, self.p[j])

    def vertices(self):
        return [self.p]

    probe_points = vertices

    def is_empty(self):
        return False

    def contains(self, q):
        return q == self.p

    def line_interval(self, p0, p1):
        e = p1 - p0
        t = _param_on_line(p0, e, self.p)
        if t is None:
            return None
        if t == "any":
            return (ZERO, ONE)
        if ZERO <= t <= ONE:
            return (t, t)
        return None

    def constant_coords(self):
        return dict(enumerate(self.p))

    def clip(self, lo, hi):
        return self if all(l <= c <= h for l, c, h in zip(lo, self.p, hi)) else None

    def project(self, x, which=Norm.LINF):
        return dist(x, self.p, which), self.p, True

    def face_points(self, x, rho, which=Norm.LINF):
        return [self.p] if dist(x, self.p, which) <= rho else []

    def max_min_slack(self, y, signs):
        val = min(sg * (self.p[j] - y[j]) for j, sg in signs.items())
        return val, self.p

    def sample(self, rng, count):
        return [self.p]

    def to_json(self):
        return {"type": "point", "coords": list(self.p)}


def _param_on_line(a: Point, d: Point, q: Point):
    """t with a + t d = q; "any" when d = 0 and q = a; None when off the line."""
    t = None
    for aj, dj, qj in zip(a, d, q):
        if dj == 0:
            if aj != qj:
                return None
        else:
            tj = (qj - aj) / dj
            if t is None:
                t = tj
            elif t != tj:
                return None
    return "any" if t is None else t


@dataclass(frozen=True)
class Segment(Convex):
    a: Point
    b: Point
    kind = "segment"

    def __post_init__(self):
        object.__setattr__(self, "a", Point(self.a))
        object.__setattr__(self, "b", Point(self.b))
        if len(self.a) != len(self.b):
            raise DimensionMismatch("segment endpoints differ in dimension")
        if self.a == self.b:
            raise InvalidPrimitive("degenerate segment; use SinglePoint")

    @property
    def dim(self):
        return len(self.a)

    @property
    def direction(self) -> Point:
        return self.b - self.a

    def point_at(self, t) -> Point:
        return lerp(self.a, self.b, t)

    def lp_constrain(self, b, z):
        t = b.var(0, 1)
        d = self.direction
        for j, k in enumerate(z):
            b.add({k: 1, t: -d[j]}, EQ, self.a[j])

    def vertices(self):
        return [self.a, self.b]

    probe_points = vertices

    def is_empty(self):
        return False

    def contains(self, q):
        t = _param_on_line(self.a, self.direction, q)
        return t is not None and ZERO <= t <= ONE

    def line_interval(self, p0, p1):
        e = p1 - p0
        d = self.direction
        if all(c == 0 for c in e):
            return (ZERO, ONE) if self.contains(p0) else None
        # parallel test: e = k d
        k = None
        parallel = True
        for ej, dj in zip(e, d):
            if dj == 0:
                if ej != 0:
                    parallel = False
                    break
            else:
                kj = ej / dj
                if k is None:
                    k = kj
                elif k != kj:
                    parallel = False
                    break
        if parallel:
            t0 = _param_on_line(self.a, d, p0)
            if t0 is None:
                return None
            # t(s) = t0 + s k must stay in [0, 1]
            rng = _interval_of_affine(t0, k, ZERO, ONE)
            s0, s1 = rng
            s0 = ZERO if s0 is None else max(ZERO, s0)
            s1 = ONE if s1 is None else min(ONE, s1)
            return (s0, s1) if s0 <= s1 else None
        # p0 + s e = a + t d, two unknowns; pick a nonsingular 2x2 minor
        rhs = self.a - p0
        n = len(e)
        for i in range(n):
            for j in range(i + 1, n):
                det = e[i] * (-d[j]) - (-d[i]) * e[j]
                if det == 0:
                    continue
                s = (rhs[i] * (-d[j]) - (-d[i]) * rhs[j]) / det
                t = (e[i] * rhs[j] - rhs[i] * e[j]) / det
                if any(p0[m] + s * e[m] != self.a[m] + t * d[m] for m in range(n)):
                    return None
                if ZERO <= s <= ONE and ZERO <= t <= ONE:
                    return (s, s)
                return None
        return None  # unreachable for non-parallel directions

    def constant_coords(self):
        return {j: a for j, (a, b) in enumerate(zip(self.a, self.b)) if a == b}

    def clip(self, lo, hi):
        d = self.direction
        t0, t1 = ZERO, ONE
        for j in range(self.dim):
            rng = _interval_of_affine(self.a[j], d[j], lo[j], hi[j])
            if rng is False:
                return None
            a, b = rng
            if a is not None:
                t0 = max(t0, a)
            if b is not None:
                t1 = min(t1, b)
        if t0 > t1:
            return None
        if t0 == t1:
            return SinglePoint(self.point_at(t0))
        return Segment(self.point_at(t0), self.point_at(t1))

    def _face_interval(self, x, rho, which=Norm.LINF):
        d = self.direction
        if Norm(which) is Norm.LINF:
            t0, t1 = ZERO, ONE
            for j in range(self.dim):
                rng = _interval_of_affine(self.a[j], d[j], x[j] - rho, x[j] + rho)
                if rng is False:
                    return None
                a, b = rng
                if a is not None:
                    t0 = max(t0, a)
                if b is not None:
                    t1 = min(t1, b)
            return (t0, t1) if t0 <= t1 else None
        # l1: the sublevel set of a convex piecewise-linear function of t
        cands = self._l1_breakpoints(x)
        vals = [(self._l1_at(x, t), t) for t in cands]
        inside = [t for v, t in vals if v <= rho]
        if not inside:
            return None
        lo, hi = min(inside), max(inside)
        # extend to the exact crossing with level rho on either side
        lo = self._l1_cross(x, rho, lo, cands, left=True)
        hi = self._l1_cross(x, rho, hi, cands, left=False)
        return (lo, hi)

    def _l1_at(self, x, t):
        return dist(x, self.point_at(t), Norm.L1)

    def _l1_breakpoints(self, x):
        d = self.direction
        cands = {ZERO, ONE}
        for j in range(self.dim):
            if d[j] != 0:
                t = (x[j] - self.a[j]) / d[j]
                if ZERO < t < ONE:
                    cands.add(t)
        return sorted(cands)

    def _l1_cross(self, x, rho, t, cands, left):
        # f is affine between consecutive breakpoints; walk outward from t
        seq = [c for c in cands if c < t][::-1] if left else [c for c in cands if c > t]
        cur, fcur = t, self._l1_at(x, t)
        for nxt in seq:
            fn = self._l1_at(x, nxt)
            if fn <= rho:
                cur, fcur = nxt, fn
                continue
            # affine between cur and nxt
            return cur + (rho - fcur) * (nxt - cur) / (fn - fcur)
        return cur

    def project(self, x, which=Norm.LINF):
        d = self.direction
        n = self.dim
        if Norm(which) is Norm.LINF:
            cands = {ZERO, ONE}
            g0 = [x[j] - self.a[j] for j in range(n)]
            for j in range(n):
                for k in range(j, n):
                    for sg in (1, -1):
                        if j == k and sg == 1:
                            continue
                        den = d[j] - sg * d[k]
                        if den != 0:
                            t = (g0[j] - sg * g0[k]) / den
                            if ZERO < t < ONE:
                                cands.add(t)
            rho = min(max(abs(g0[j] - t * d[j]) for j in range(n)) for t in cands)
        else:
            rho = min(self._l1_at(x, t) for t in self._l1_breakpoints(x))
        t0, t1 = self._face_interval(x, rho, which)
        return rho, self.point_at((t0 + t1) / 2), t0 == t1

    def face_points(self, x, rho, which=Norm.LINF):
        rng = self._face_interval(x, rho, which)
        if rng is None:
            return []
        t0, t1 = rng
        return _dedupe([self.point_at(t0), self.point_at(t1)])

    def max_min_slack(self, y, signs):
        d = self.direction
        items = list(signs.items())
        # h(t) = min_j sg_j (a_j - y_j + t d_j), concave piecewise linear
        const = [sg * (self.a[j] - y[j]) for j, sg in items]
        slope = [sg * d[j] for j, sg in items]
        cands = {ZERO, ONE}
        for p in range(len(items)):
            for q in range(p + 1, len(items)):
                den = slope[p] - slope[q]
                if den != 0:
                    t = (const[q] - const[p]) / den
                    if ZERO < t < ONE:
                        cands.add(t)
        best_t = max(sorted(cands), key=lambda t: min(c + t * s for c, s in zip(const, slope)))
        val = min(c + best_t * s for c, s in zip(const, slope))
        return val, self.point_at(best_t)

    def sample(self, rng, count):
        out = [self.point_at(Fraction(1, 2))]
        for _ in range(count - 1):
            out.append(self.point_at(Fraction(rng.randint(0, LATTICE), LATTICE)))
        return out

    def to_json(self):
        return {"type": "segment", "a": list(self.a), "b": list(self.b)}


@dataclass(frozen=True)
class AxisBox(Convex):
    lo: Point
    hi: Point
    kind = "box"

    def __post_init__(self):
        object.__setattr__(self, "lo", Point(self.lo))
        object.__setattr__(self, "hi", Point(self.hi))
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch("box corners differ in dimension")
        if any(l > h for l, h in zip(self.lo, self.hi)):
            raise InvalidPrimitive(f"box has lo > hi: {self.lo} {self.hi}")

    @property
    def dim(self):
        return len(self.lo)

    @property
    def center(self) -> Point:
        return midpoint(self.lo, self.hi)

    def lp_constrain(self, b, z):
        for j, k in enumerate(z):
            if self.lo[j] == self.hi[j]:
                b.add({k: 1}, EQ, self.lo[j])
            else:
                b.add({k: 1}, GE, self.lo[j])
                b.add({k: 1}, LE, self.hi[j])

    def vertices(self):
        choices = [(l,) if l == h else (l, h) for l, h in zip(self.lo, self.hi)]
        return [Point._raw(c) for c in itertools.product(*choices)]

    probe_points = vertices

    def is_empty(self):
        return False

    def contains(self, q):
        return all(l <= c <= h for l, c, h in zip(self.lo, q, self.hi))

    def line_interval(self, p0, p1):
        t0, t1 = ZERO, ONE
        for j in range(self.dim):
            rng = _interval_of_affine(p0[j], p1[j] - p0[j], self.lo[j], self.hi[j])
            if rng is False:
                return None
            a, b = rng
            if a is not None:
                t0 = max(t0, a)
            if b is not None:
                t1 = min(t1, b)
        return (t0, t1) if t0 <= t1 else None

    def constant_coords(self):
        return {j: l for j, (l, h) in enumerate(zip(self.lo, self.hi)) if l == h}

    def clip(self, lo, hi):
        nlo = tuple(max(a, b) for a, b in zip(self.lo, lo))
        nhi = tuple(min(a, b) for a, b in zip(self.hi, hi))
        if any(a > b for a, b in zip(nlo, nhi)):
            return None
        if nlo == nhi:
            return SinglePoint(Point._raw(nlo))
        return AxisBox(Point._raw(nlo), Point._raw(nhi))

    def clamp(self, x: Point) -> Point:
        return Point._raw(tuple(min(max(c, l), h) for l, c, h in zip(self.lo, x, self.hi)))

    def project(self, x, which=Norm.LINF):
        y = self.clamp(x)
        rho = dist(x, y, which)
        if Norm(which) is Norm.L1:
            return rho, y, True
        sub = self._face_box(x, rho)
        return rho, y, sub[0] == sub[1]

    def _face_box(self, x, rho):
        lo = tuple(max(l, c - rho) for l, c in zip(self.lo, x))
        hi = tuple(min(h, c + rho) for h, c in zip(self.hi, x))
        return lo, hi

    def face_points(self, x, rho, which=Norm.LINF):
        if Norm(which) is Norm.L1:
            return super().face_points(x, rho, which)
        lo, hi = self._face_box(x, rho)
        if any(a > b for a, b in zip(lo, hi)):
            return []
        if lo == hi:
            return [Point._raw(lo)]
        return AxisBox(Point._raw(lo), Point._raw(hi)).vertices()

    def max_min_slack(self, y, signs):
        w = list(self.lo)
        for j, sg in signs.items():
            w[j] = self.hi[j] if sg > 0 else self.lo[j]
        w = Point._raw(tuple(w))
        return min(sg * (w[j] - y[j]) for j, sg in signs.items()), w

    def sample(self, rng, count):
        out = [self.center]
        for _ in range(count - 1):
            out.append(Point._raw(tuple(
                l + Fraction(rng.randint(0, LATTICE), LATTICE) * (h - l) for l, h in zip(self.lo, self.hi))))
        return out

    def to_json(self):
        return {"type": "box", "lo": list(self.lo), "hi": list(self.hi)}


@dataclass(frozen=True)
class Polytope(Convex):
    """Convex hull of finitely many distinct vertices."""

    verts: tuple
    kind = "polytope"

    def __post_init__(self):
        pts = tuple(Point(v) for v in self.verts)
        if not pts:
            raise InvalidPrimitive("polytope needs at least one vertex")
        if len({len(p) for p in pts}) != 1:
            raise DimensionMismatch("polytope vertices differ in dimension")
        if len(set(pts)) != len(pts):
            raise InvalidPrimitive("polytope vertices must be pairwise distinct")
        object.__setattr__(self, "verts", pts)

    @property
    def dim(self):
        return len(self.verts[0])

    def lp_constrain(self, b, z):
        lam = [b.var(0) for _ in self.verts]
        b.add({l: 1 for l in lam}, EQ, 1)
        for j, k in enumerate(z):
            coeffs = {k: 1}
            for l, v in zip(lam, self.verts):
                if v[j]:
                    coeffs[l] = -v[j]
            b.add(coeffs, EQ, 0)

    def vertices(self):
        return list(self.verts)

    def is_empty(self):
        return False

    def constant_coords(self):
        out = {}
        for j in range(self.dim):
            vals = {v[j] for v in self.verts}
            if len(vals) == 1:
                out[j] = next(iter(vals))
        return out

    def to_json(self):
        return {"type": "polytope", "vertices": [list(v) for v in self.verts]}


@dataclass(frozen=True)
class ConvexIntersection(Convex):
    """Intersection of convex parts; used for clipped polytopes and faces."""

    parts: tuple
    kind = "intersection"

    @property
    def dim(self):
        return self.parts[0].dim

    def lp_constrain(self, b, z):
        for part in self.parts:
            part.lp_constrain(b, z)

    def clip(self, lo, hi):
        region = ConvexIntersection(self.parts + (AxisBox(lo, hi),))
        return None if region.is_empty() else region


Primitive = Convex


def intersects(p: Convex, q: Convex) -> bool:
    """Exact nonempty-intersection test for two convex primitives."""
    if isinstance(p, SinglePoint):
        return q.contains(p.p)
    if isinstance(q, SinglePoint):
        return p.contains(q.p)
    if isinstance(p, Segment):
        return q.line_interval(p.a, p.b) is not None
    if isinstance(q, Segment):
        return p.line_interval(q.a, q.b) is not None
    if isinstance(p, AxisBox) and isinstance(q, AxisBox):
        return all(max(a, c) <= min(b, d) for a, b, c, d in zip(p.lo, p.hi, q.lo, q.hi))
    return not ConvexIntersection((p, q)).is_empty()


def primitive_from_json(obj: dict) -> Convex:
    kind = obj.get("type")
    if kind == "point":
        return SinglePoint(Point(obj["coords"]))
    if kind == "segment":
        a, b = Point(obj["a"]), Point(obj["b"])
        return SinglePoint(a) if a == b else Segment(a, b)
    if kind == "box":
        return AxisBox(Point(obj["lo"]), Point(obj["hi"]))
    if kind == "polytope":
        return Polytope(tuple(Point(v) for v in obj["vertices"]))
    raise InvalidPrimitive(f"unknown primitive type {kind!r}")


def make_segment(a, b) -> Convex:
    """Segment constructor that normalizes a == b to a point."""
    a, b = Point(a), Point(b)
    return SinglePoint(a) if a == b else Segment(a, b)


@dataclass(frozen=True)
class SampleSpec:
    """Sampling budget: point count, RNG seed, random pair budget and the
    density ladder used by geodesic search."""

    count: int = 24
    seed: int = 0
    pairs: int = 200
    densities: tuple = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8))

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("sample count must be positive")
        object.__setattr__(self, "densities", tuple(as_scalar(d) for d in self.densities))


@dataclass(frozen=True)
class SetModel:
    """A nonempty bounded closed set: the union of ``primitives``."""

    primitives: tuple
    name: str = "scene"
    eqc_cache: frozenset = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        prims = tuple(self.primitives)
        if not prims:
            raise InvalidPrimitive("a set model needs at least one primitive")
        dims = {p.dim for p in prims}
        if len(dims) != 1:
            raise DimensionMismatch(f"primitives of mixed dimension {sorted(dims)}")
        object.__setattr__(self, "primitives", prims)
        object.__setattr__(self, "eqc_cache", _compute_eqc(prims))

    @property
    def dim(self) -> int:
        return self.primitives[0].dim

    @property
    def eqc(self) -> frozenset:
        return self.eqc_cache

    def vertices(self) -> list[Point]:
        return _dedupe(v for p in self.primitives for v in p.vertices())

    def bounding_box(self) -> tuple[Point, Point]:
        verts = self.vertices()
        lo = Point._raw(tuple(min(v[j] for v in verts) for j in range(self.dim)))
        hi = Point._raw(tuple(max(v[j] for v in verts) for j in range(self.dim)))
        return lo, hi

    def contains(self, p: Point) -> bool:
        return contains(self, p)

    def with_primitives(self, extra: Sequence[Convex], name: str | None = None) -> "SetModel":
        return SetModel(self.primitives + tuple(extra), name or self.name)

    def permuted(self, perm: Sequence[int]) -> "SetModel":
        prims = [primitive_from_json(_permute_json(p.to_json(), perm)) for p in self.primitives]
        return SetModel(tuple(prims), self.name)


def _permute_json(obj, perm):
    out = {}
    for k, v in obj.items():
        if k == "type":
            out[k] = v
        elif k == "vertices":
            out[k] = [list(Point(c).permuted(perm)) for c in v]
        else:
            out[k] = list(Point(v).permuted(perm))
    return out


def _check_dim(M: SetModel, p: Sequence) -> None:
    if len(p) != M.dim:
        raise DimensionMismatch(f"point of dimension {len(p)} queried against a {M.dim}-dimensional set")


def contains(M: SetModel, p: Point) -> bool:
    _check_dim(M, p)
    p = Point(p)
    return any(prim.contains(p) for prim in M.primitives)


def segment_inside(M: SetModel, a: Point, b: Point) -> bool:
    """Whether the closed segment [a, b] is covered by the union of primitives."""
    _check_dim(M, a)
    _check_dim(M, b)
    a, b = Point(a), Point(b)
    if a == b:
        return contains(M, a)
    intervals = []
    for prim in M.primitives:
        rng = prim.line_interval(a, b)
        if rng is not None:
            intervals.append(rng)
    intervals.sort()
    reach = ZERO
    for t0, t1 in intervals:
        if t0 > reach:
            return False
        reach = max(reach, t1)
        if reach >= ONE:
            return True
    return False


def connected_components(M: SetModel) -> list[list[int]]:
    """Partition of primitive indices into groups joined by pairwise intersection."""
    n = len(M.primitives)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and intersects(M.primitives[i], M.primitives[j]):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _compute_eqc(prims) -> frozenset:
    dim = prims[0].dim
    common: dict[int, Fraction] | None = None
    for prim in prims:
        cc = prim.constant_coords()
        if common is None:
            common = dict(cc)
        else:
            common = {j: v for j, v in common.items() if cc.get(j) == v}
    return frozenset(j for j in range(dim) if j in common)


def eqc_of_set(M: SetModel) -> frozenset:
    return M.eqc_cache


def sample_points(M: SetModel, spec: SampleSpec | None = None) -> list[Point]:
    """Deterministic sample of points of M.

    All primitive vertices come first; the remainder is filled round-robin
    with each primitive's centroid and then seeded rational lattice points.
    """
    spec = spec or SampleSpec()
    out = M.vertices()
    seen = set(out)
    if len(out) >= spec.count:
        return out
    rng = random.Random(spec.seed)
    per = max(2, spec.count // len(M.primitives) + 1)
    pools = [prim.sample(rng, per) for prim in M.primitives]
    for layer in itertools.zip_longest(*pools):
        for p in layer:
            if p is not None and p not in seen:
                seen.add(p)
                out.append(p)
                if len(out) >= spec.count:
                    return out
    return out
