"""Exact decision procedures for crosses, cocrosses and their main variants.

A *main cross* through ``x`` is the union of the axis-parallel lines through
``x``; a *cross* is a subset of one with no frozen coordinate.  A *cocross*
with frozen coordinates ``J`` is a set whose points all match some centre
``x`` in at least one coordinate outside ``J``, where ``J`` is the set of
coordinates constant over the whole set and ``|J| <= dim - 2``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .numerics import ZERO, Point, format_rational
from .set_model import Convex, SetModel, connected_components, eqc_of_set


@dataclass(frozen=True)
class Classification:
    eqc: frozenset
    is_cross: bool
    cross_center: Optional[Point]
    is_cocross: bool
    cocross_center: Optional[Point]
    cocross_frozen: Optional[frozenset]
    is_main_cross_subset: Optional[Point]
    component_count: int
    prop1_expected_strictly_l1_convex: Optional[bool]

    def to_json(self) -> dict:
        def pt(p):
            return None if p is None else [format_rational(c) for c in p]

        return {
            "eqc": sorted(self.eqc),
            "is_cross": self.is_cross,
            "cross_center": pt(self.cross_center),
            "is_cocross": self.is_cocross,
            "cocross_center": pt(self.cocross_center),
            "cocross_frozen": None if self.cocross_frozen is None else sorted(self.cocross_frozen),
            "is_main_cross_subset": pt(self.is_main_cross_subset),
            "component_count": self.component_count,
            "prop1_expected_strictly_l1_convex": self.prop1_expected_strictly_l1_convex,
        }


def _varying(prim: Convex) -> list[int]:
    cc = prim.constant_coords()
    return [j for j in range(prim.dim) if j not in cc]


def _in_main_cross(prim: Convex, center: Point) -> bool:
    """Whether ``prim`` lies in the union of axis lines through ``center``."""
    cc = prim.constant_coords()
    free = [j for j in range(prim.dim) if j not in cc]
    if len(free) > 1:
        return False
    matches = sum(1 for j, v in cc.items() if center[j] == v)
    return matches >= prim.dim - 1


def main_cross_center(M: SetModel) -> Optional[Point]:
    """A centre ``x`` with M contained in the main cross through ``x``, if any.

    Segments (and degenerate boxes/polytopes) along axis ``k`` pin every
    coordinate of the centre except ``k``.  Remaining coordinates are chosen
    from the finitely many candidate values the primitives offer.
    """
    dim = M.dim
    pinned: dict[int, Fraction] = {}
    for prim in M.primitives:
        cc = prim.constant_coords()
        free = [j for j in range(dim) if j not in cc]
        if len(free) > 1:
            return None
        if len(free) == 1:
            for j, v in cc.items():
                if pinned.setdefault(j, v) != v:
                    return None
    candidates = []
    for j in range(dim):
        if j in pinned:
            candidates.append([pinned[j]])
        else:
            vals = sorted({v for prim in M.primitives for v in [vert[j] for vert in prim.vertices()]} | {ZERO})
            candidates.append(vals)
    for combo in itertools.product(*candidates):
        center = Point._raw(tuple(combo))
        if all(_in_main_cross(prim, center) for prim in M.primitives):
            return center
    return None


def is_cross(M: SetModel) -> Optional[Point]:
    if eqc_of_set(M):
        return None
    return main_cross_center(M)


def cocross_options(prim: Convex, frozen: frozenset) -> list[tuple[int, Fraction]]:
    """(coordinate, value) pairs outside ``frozen`` that are constant over ``prim``.

    A convex set covered by finitely many hyperplanes lies in one of them, so
    these are the only ways ``prim`` can sit inside a cocross.
    """
    return sorted((j, v) for j, v in prim.constant_coords().items() if j not in frozen)


def is_cocross(M: SetModel) -> Optional[tuple[Point, frozenset]]:
    frozen = eqc_of_set(M)
    if len(frozen) > M.dim - 2:
        return None
    options = [cocross_options(prim, frozen) for prim in M.primitives]
    if any(not opts for opts in options):
        return None
    # most constrained primitives first
    order = sorted(range(len(options)), key=lambda i: (len(options[i]), i))
    chosen: dict[int, Fraction] = {}

    def search(k: int) -> bool:
        if k == len(order):
            return True
        for j, v in options[order[k]]:
            if j in chosen:
                if chosen[j] != v:
                    continue
                if search(k + 1):
                    return True
            else:
                chosen[j] = v
                if search(k + 1):
                    return True
                del chosen[j]
        return False

    if not search(0):
        return None
    # unconstrained and frozen coordinates take the value of any point of M
    ref = M.primitives[0].vertices()[0]
    center = Point._raw(tuple(chosen.get(j, ref[j]) for j in range(M.dim)))
    return center, frozen


def classify(M: SetModel) -> Classification:
    eqc = eqc_of_set(M)
    cross_center = is_cross(M)
    cocross = is_cocross(M)
    components = len(connected_components(M))
    prop1 = None
    if cocross is not None and M.dim == 3:
        prop1 = cross_center is not None and components == 1
    return Classification(
        eqc=eqc,
        is_cross=cross_center is not None,
        cross_center=cross_center,
        is_cocross=cocross is not None,
        cocross_center=None if cocross is None else cocross[0],
        cocross_frozen=None if cocross is None else cocross[1],
        is_main_cross_subset=main_cross_center(M),
        component_count=components,
        prop1_expected_strictly_l1_convex=prop1,
    )
