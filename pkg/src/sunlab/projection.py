"""Exact metric projection onto a :class:`SetModel` in the l-infinity norm
(and the l1 norm, used by oracles and anchor-pair generation)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lp import LpBuilder, LpProblem, LpResult, lp_feasible, lp_solve
from .numerics import DimensionMismatch, Norm, Point, dist
from .set_model import Convex, SetModel, _centroid, _dedupe, contains

__all__ = [
    "Witness",
    "ProjectionResult",
    "project_primitive",
    "project",
    "nearest_candidates",
    "lp_solve",
    "lp_feasible",
    "LpProblem",
    "LpResult",
    "LpBuilder",
]


@dataclass(frozen=True)
class Witness:
    index: int
    minimizer: Point
    is_unique: bool


@dataclass(frozen=True)
class ProjectionResult:
    rho: Fraction
    witnesses: tuple
    norm_used: Norm

    @property
    def points(self) -> list[Point]:
        return _dedupe(w.minimizer for w in self.witnesses)

    @property
    def indices(self) -> list[int]:
        return [w.index for w in self.witnesses]

    @property
    def is_unique(self) -> bool:
        return len(self.points) == 1 and all(w.is_unique for w in self.witnesses)


def project_primitive(prim: Convex, x: Point, which: Norm = Norm.LINF) -> tuple[Fraction, Point, bool]:
    """Distance from ``x`` to ``prim``, one minimizer, and whether it is the only one."""
    if len(x) != prim.dim:
        raise DimensionMismatch(f"point of dimension {len(x)} vs primitive of dimension {prim.dim}")
    return prim.project(Point(x), Norm(which))


def project(M: SetModel, x: Point, which: Norm = Norm.LINF) -> ProjectionResult:
    if len(x) != M.dim:
        raise DimensionMismatch(f"point of dimension {len(x)} vs set of dimension {M.dim}")
    x = Point(x)
    which = Norm(which)
    if contains(M, x):
        idx = [i for i, p in enumerate(M.primitives) if p.contains(x)]
        return ProjectionResult(Fraction(0), tuple(Witness(i, x, True) for i in idx), which)
    per = [prim.project(x, which) for prim in M.primitives]
    rho = min(r for r, _, _ in per)
    wit = tuple(Witness(i, y, u) for i, (r, y, u) in enumerate(per) if r == rho)
    return ProjectionResult(rho, wit, which)


def nearest_candidates(M: SetModel, x: Point, result: ProjectionResult | None = None) -> list[Point]:
    """Finite sample of the l-infinity metric projection of ``x``.

    For every primitive attaining the distance: the centroid of its optimal
    face first, then the face's extreme points.  The centroid carries the
    smallest active-coordinate set of the face; the extreme points carry the
    largest ones.
    """
    result = result or project(M, x)
    out = []
    for w in result.witnesses:
        prim = M.primitives[w.index]
        face = prim.face_points(x, result.rho)
        if not face:
            face = [w.minimizer]
        out.append(_centroid(face))
        out.append(w.minimizer)
        out.extend(face)
    pts = _dedupe(out)
    assert all(dist(x, p) == result.rho for p in pts)
    return pts
