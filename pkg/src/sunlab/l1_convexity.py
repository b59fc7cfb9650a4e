"""Menger l1-convexity, monotone l1-geodesic search and strict l1-convexity.

Verdicts are three-valued.  A :class:`Refuted` verdict always carries an
exactly re-checkable witness; :class:`SampledPass` only says that no
counterexample turned up among the sampled pairs.
"""
from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .numerics import (
    ZERO,
    Norm,
    Point,
    PreconditionError,
    between_l1,
    dist,
    ff,
    ff_mod,
    format_rational,
    sign,
)
from .set_model import (
    LATTICE,
    AxisBox,
    Convex,
    SampleSpec,
    Segment,
    SetModel,
    SinglePoint,
    _centroid,
    _dedupe,
    contains,
    sample_points,
    segment_inside,
)


# --- verdicts ---------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Point):
        return [format_rational(c) for c in obj]
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return obj.to_json()
    return obj


@dataclass(frozen=True)
class Proven:
    witness: dict
    passed = True

    def to_json(self):
        return {"verdict": "Proven", "witness": _jsonable(self.witness)}


@dataclass(frozen=True)
class Refuted:
    witness: dict
    passed = False

    def to_json(self):
        return {"verdict": "Refuted", "witness": _jsonable(self.witness)}


@dataclass(frozen=True)
class SampledPass:
    pairs_checked: int
    resolution: Fraction
    details: dict = field(default_factory=dict)
    passed = True

    def to_json(self):
        return {
            "verdict": "SampledPass",
            "pairs_checked": self.pairs_checked,
            "resolution": format_rational(self.resolution),
            "details": _jsonable(self.details),
        }


Verdict = Proven | Refuted | SampledPass


# --- geodesic paths ---------------------------------------------------------

class InvalidPath(ValueError):
    pass


@dataclass(frozen=True)
class GeodesicPath:
    """Polyline whose steps are sign-consistent per coordinate.

    Coordinates in ``strict_indices`` move on every step, so the coordinate
    functions of the polyline are strictly monotone there.
    """

    waypoints: tuple
    strict_indices: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "waypoints", tuple(Point(w) for w in self.waypoints))
        object.__setattr__(self, "strict_indices", frozenset(self.strict_indices))
        self.validate()

    @property
    def start(self) -> Point:
        return self.waypoints[0]

    @property
    def end(self) -> Point:
        return self.waypoints[-1]

    @property
    def steps(self) -> list[Point]:
        return [b - a for a, b in zip(self.waypoints, self.waypoints[1:])]

    @property
    def length_l1(self) -> Fraction:
        return sum((dist(a, b, Norm.L1) for a, b in zip(self.waypoints, self.waypoints[1:])), ZERO)

    def validate(self) -> None:
        w = self.waypoints
        if len(w) < 2:
            raise InvalidPath("a geodesic path needs at least two waypoints")
        steps = self.steps
        if any(all(c == 0 for c in s) for s in steps):
            raise InvalidPath("consecutive waypoints must differ")
        dim = len(w[0])
        for j in range(dim):
            signs = {sign(s[j]) for s in steps} - {0}
            if len(signs) > 1:
                raise InvalidPath(f"coordinate {j} is not monotone along the path")
            if j in self.strict_indices and any(s[j] == 0 for s in steps):
                raise InvalidPath(f"coordinate {j} is not strictly monotone along the path")
        if self.length_l1 != dist(self.start, self.end, Norm.L1):
            raise InvalidPath("l1 length differs from endpoint distance")

    def inside(self, M: SetModel) -> bool:
        return all(segment_inside(M, a, b) for a, b in zip(self.waypoints, self.waypoints[1:]))

    def to_json(self):
        return {"waypoints": _jsonable(list(self.waypoints)), "strict_indices": sorted(self.strict_indices)}


# --- Menger betweenness -------------------------------------------------------

def _pair_box(x: Point, y: Point) -> tuple[Point, Point]:
    lo = Point._raw(tuple(min(a, b) for a, b in zip(x, y)))
    hi = Point._raw(tuple(max(a, b) for a, b in zip(x, y)))
    return lo, hi


def menger_witness(M: SetModel, x: Point, y: Point) -> Optional[Point]:
    """A point of M other than x, y lying l1-between them, or None if none exists.

    Each primitive meets the coordinate box spanned by x and y in a convex
    set; a convex set with two distinct points has a third one, so checking
    the extreme points plus their centroid decides existence exactly.
    """
    x, y = Point(x), Point(y)
    if x == y:
        raise PreconditionError("menger_witness needs distinct points")
    if not (contains(M, x) and contains(M, y)):
        raise PreconditionError("both points must lie in the set")
    lo, hi = _pair_box(x, y)
    for prim in M.primitives:
        piece = prim.clip(lo, hi)
        if piece is None:
            continue
        verts = piece.vertices()
        for z in verts + [_centroid(verts)]:
            if z != x and z != y:
                return z
    return None


def _anchor_points(M: SetModel) -> list[tuple[Point, Point]]:
    """Pairs (vertex, its l1-nearest point on another primitive).

    Gaps between pieces of a set show up between a vertex and its closest
    point on a neighbouring piece.
    """
    out = []
    for i, prim in enumerate(M.primitives):
        for v in prim.vertices():
            for k, other in enumerate(M.primitives):
                if k == i or other.contains(v):
                    continue
                _, w, _ = other.project(v, Norm.L1)
                out.append((v, w))
    return out


def candidate_pairs(M: SetModel, budget: SampleSpec) -> list[tuple[Point, Point]]:
    """Deterministic pair set: vertex pairs, anchor pairs, then seeded sample pairs."""
    verts = M.vertices()
    pairs = list(itertools.combinations(verts, 2))
    pairs.extend(_anchor_points(M))
    pts = sample_points(M, budget)
    all_pairs = list(itertools.combinations(pts, 2))
    if len(all_pairs) > budget.pairs:
        rng = random.Random(budget.seed)
        all_pairs = rng.sample(all_pairs, budget.pairs)
    pairs.extend(all_pairs)
    seen = set()
    out = []
    for a, b in pairs:
        if a == b:
            continue
        key = (a, b) if a <= b else (b, a)
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def is_l1_convex(M: SetModel, budget: SampleSpec | None = None) -> Verdict:
    budget = budget or SampleSpec()
    pairs = candidate_pairs(M, budget)
    for x, y in pairs:
        if menger_witness(M, x, y) is None:
            return Refuted({"kind": "menger", "x": x, "y": y, "exact": True})
    return SampledPass(len(pairs), Fraction(1, LATTICE))


# --- monotone geodesic search -------------------------------------------------

def _grid_values(lo: Fraction, hi: Fraction, density: Fraction) -> list[Fraction]:
    if lo == hi:
        return [lo]
    n = int(1 / density)
    return [lo + Fraction(k, n) * (hi - lo) for k in range(n + 1)]


def _piece_nodes(piece: Convex, grid: list[list[Fraction]], density: Fraction) -> list[Point]:
    if isinstance(piece, SinglePoint):
        return [piece.p]
    if isinstance(piece, Segment):
        n = int(1 / density)
        return [piece.point_at(Fraction(k, n)) for k in range(n + 1)]
    if isinstance(piece, AxisBox):
        axes = []
        for j, (l, h) in enumerate(zip(piece.lo, piece.hi)):
            vals = {v for v in grid[j] if l <= v <= h} | {l, h}
            axes.append(sorted(vals))
        return [Point._raw(c) for c in itertools.product(*axes)] + [piece.center]
    verts = piece.vertices()
    return verts + [_centroid(verts)]


def _intersection_nodes(p: Convex, q: Convex) -> list[Point]:
    if isinstance(p, SinglePoint):
        return [p.p] if q.contains(p.p) else []
    if isinstance(q, SinglePoint):
        return [q.p] if p.contains(q.p) else []
    if isinstance(p, Segment) or isinstance(q, Segment):
        seg, other = (p, q) if isinstance(p, Segment) else (q, p)
        rng = other.line_interval(seg.a, seg.b)
        if rng is None:
            return []
        a, b = seg.point_at(rng[0]), seg.point_at(rng[1])
        return _dedupe([a, b, (a + b) * Fraction(1, 2)])
    if isinstance(p, AxisBox) and isinstance(q, AxisBox):
        piece = p.clip(q.lo, q.hi)
        return [] if piece is None else piece.vertices() + [_centroid(piece.vertices())]
    from .set_model import ConvexIntersection

    region = ConvexIntersection((p, q))
    if region.is_empty():
        return []
    verts = region.vertices()
    return verts + [_centroid(verts)]


def _step_ok(p: Point, q: Point, signs: Sequence[int], strict: frozenset) -> bool:
    moved = False
    for j, (a, b) in enumerate(zip(p, q)):
        d = b - a
        s = signs[j]
        if d == 0:
            if j in strict:
                return False
            continue
        if (d > 0) != (s > 0) or s == 0:
            return False
        moved = True
    return moved


def _search(M: SetModel, x: Point, y: Point, strict: frozenset, density: Fraction) -> Optional[list[Point]]:
    lo, hi = _pair_box(x, y)
    signs = [sign(b - a) for a, b in zip(x, y)]
    grid = [_grid_values(l, h, density) for l, h in zip(lo, hi)]
    pieces = []
    for prim in M.primitives:
        piece = prim.clip(lo, hi)
        if piece is not None:
            pieces.append(piece)
    nodes = [x, y]
    for piece in pieces:
        nodes.extend(_piece_nodes(piece, grid, density))
    for p, q in itertools.combinations(pieces, 2):
        nodes.extend(_intersection_nodes(p, q))
    nodes = _dedupe(nodes)
    # membership masks only for closed-form pieces; LP pieces fall back to
    # the exact segment cover test
    cheap = [isinstance(pc, (SinglePoint, Segment, AxisBox)) for pc in pieces]
    masks = []
    for node in nodes:
        m = 0
        for k, pc in enumerate(pieces):
            if cheap[k] and pc.contains(node):
                m |= 1 << k
        masks.append(m)

    def edge(i: int, k: int) -> bool:
        if masks[i] & masks[k]:
            return True
        return segment_inside(M, nodes[i], nodes[k])

    target = 1
    prev = {0: None}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        p = nodes[i]
        # try the target first so direct connections win
        order = [target] + [k for k in range(2, len(nodes))]
        for k in order:
            if k in prev:
                continue
            if not _step_ok(p, nodes[k], signs, strict):
                continue
            if not edge(i, k):
                continue
            prev[k] = i
            if k == target:
                path = [target]
                while prev[path[-1]] is not None:
                    path.append(prev[path[-1]])
                return [nodes[t] for t in reversed(path)]
            queue.append(k)
    return None


def monotone_geodesic(M: SetModel, x: Point, y: Point, strict=frozenset(),
                      density: SampleSpec | Fraction | None = None) -> Optional[GeodesicPath]:
    """Search for a polyline in M from x to y with monotone coordinates.

    Coordinates in ``strict`` must change on every step.  Tries each density
    of the ladder in turn; ``None`` means nothing was found at any density,
    not that no such curve exists.
    """
    x, y = Point(x), Point(y)
    strict = frozenset(strict)
    if not (contains(M, x) and contains(M, y)):
        raise PreconditionError("both endpoints must lie in the set")
    if any(x[j] == y[j] for j in strict):
        raise PreconditionError("strict coordinates must differ between the endpoints")
    if x == y:
        raise PreconditionError("endpoints must differ")
    if density is None:
        ladder = SampleSpec().densities
    elif isinstance(density, SampleSpec):
        ladder = density.densities
    else:
        ladder = (Fraction(density),)
    if segment_inside(M, x, y):
        return GeodesicPath((x, y), strict)
    for d in ladder:
        found = _search(M, x, y, strict, d)
        if found is not None:
            path = GeodesicPath(tuple(found), strict)
            assert path.inside(M)
            return path
    return None


def local_obstruction(M: SetModel, x: Point, y: Point, strict: frozenset) -> Optional[dict]:
    """Exact certificate that no strictly monotone curve in M joins x and y.

    Such a curve leaves x into the open orthant pointing at y (in the strict
    coordinates), and for small parameters stays in primitives containing x.
    If none of those primitives meets that orthant the curve cannot exist;
    symmetrically at y.
    """
    for start, end in ((x, y), (y, x)):
        signs = {j: sign(end[j] - start[j]) for j in strict}
        if not signs:
            return None
        best = None
        for idx, prim in enumerate(M.primitives):
            if not prim.contains(start):
                continue
            val, _ = prim.max_min_slack(start, signs)
            if best is None or val > best:
                best = val
        if best is not None and best <= 0:
            return {"endpoint": start, "towards": end, "max_orthant_slack": best}
    return None


def is_strictly_l1_convex(M: SetModel, budget: SampleSpec | None = None) -> Verdict:
    budget = budget or SampleSpec()
    menger = is_l1_convex(M, budget)
    if not menger.passed:
        return Refuted({"kind": "menger", **menger.witness})
    eqc = M.eqc
    strict = frozenset(range(M.dim)) - eqc
    pairs = candidate_pairs(M, budget)
    ff_pairs = 0
    for x, y in pairs:
        if not ff_mod(x, y, eqc):
            continue
        ff_pairs += 1
        cert = local_obstruction(M, x, y, strict)
        if cert is not None:
            return Refuted({"kind": "strict_geodesic", "x": x, "y": y,
                            "status": "certified", "certificate": cert})
        if monotone_geodesic(M, x, y, strict, budget) is None:
            return Refuted({"kind": "strict_geodesic", "x": x, "y": y, "status": "exhausted",
                            "densities": list(budget.densities), "certificate": None})
    return SampledPass(len(pairs), min(budget.densities), {"ff_pairs": ff_pairs,
                                                          "menger_pairs": menger.pairs_checked})


# --- coordinate-disjoint pairs --------------------------------------------------

def find_ff_pair(M: SetModel, budget: SampleSpec | None = None, relative: bool = False):
    """First sampled pair of points of M that differ in every coordinate.

    With ``relative`` the coordinates frozen over M are ignored.
    """
    budget = budget or SampleSpec()
    pts = sample_points(M, budget)
    frozen = M.eqc if relative else frozenset()
    for x, y in itertools.chain(itertools.combinations(M.vertices(), 2), itertools.combinations(pts, 2)):
        if x != y and ff_mod(x, y, frozen):
            return x, y
    return None


def find_ff_partner(M: SetModel, target: Point, budget: SampleSpec | None = None) -> Optional[Point]:
    """A sampled point w of M with w and ``target`` differing in every coordinate."""
    budget = budget or SampleSpec()
    for w in sample_points(M, budget):
        if ff(w, target):
            return w
    return None
