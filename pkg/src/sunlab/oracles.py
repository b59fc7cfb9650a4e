"""Floating-point brute-force oracles, independent of the exact machinery.

Primitives are rasterized into voxels of side ``h`` from dense samples:
parametric grids for points, segments and boxes, and for polytopes a grid
filtered by Delaunay point location plus sampled edges.  The oracle distance
is the l-infinity distance to the nearest occupied voxel centre.  With
samples ``h/4``-dense in M this is within ``3h/4`` of the exact distance.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.spatial import Delaunay, QhullError

from .set_model import AxisBox, Polytope, Segment, SetModel, SinglePoint


def _floats(p) -> np.ndarray:
    return np.array([float(c) for c in p], dtype=float)


def _sample_primitive(prim, step: float) -> np.ndarray:
    if isinstance(prim, SinglePoint):
        return _floats(prim.p)[None, :]
    if isinstance(prim, Segment):
        a, b = _floats(prim.a), _floats(prim.b)
        n = max(2, math.ceil(np.max(np.abs(b - a)) / step) + 1)
        t = np.linspace(0.0, 1.0, n)[:, None]
        return a + t * (b - a)
    if isinstance(prim, AxisBox):
        lo, hi = _floats(prim.lo), _floats(prim.hi)
        axes = [np.linspace(l, u, max(2, math.ceil((u - l) / step) + 1)) if u > l else np.array([l])
                for l, u in zip(lo, hi)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(lo))
    if isinstance(prim, Polytope):
        return _sample_polytope(np.array([_floats(v) for v in prim.verts]), step)
    raise TypeError(f"no rasterizer for {type(prim).__name__}")


def _sample_polytope(verts: np.ndarray, step: float) -> np.ndarray:
    """Grid points inside the hull plus densely sampled edges.

    Lower-dimensional hulls fall back to a coarse barycentric lattice.
    """
    edges = [verts]
    for a, b in itertools.combinations(verts, 2):
        n = max(2, math.ceil(np.max(np.abs(b - a)) / step) + 1)
        edges.append(a + np.linspace(0.0, 1.0, n)[:, None] * (b - a))
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    axes = [np.linspace(l, u, max(2, math.ceil((u - l) / step) + 1)) for l, u in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, verts.shape[1])
    try:
        inside = Delaunay(verts).find_simplex(grid, tol=1e-12) >= 0
        return np.concatenate(edges + [grid[inside]])
    except QhullError:
        k = len(verts)
        n = 24
        lattice = np.stack(np.meshgrid(*[np.arange(n + 1)] * (k - 1), indexing="ij"), axis=-1).reshape(-1, k - 1)
        lattice = lattice[lattice.sum(axis=1) <= n]
        bary = np.concatenate([lattice, n - lattice.sum(axis=1, keepdims=True)], axis=1) / n
        return np.concatenate(edges + [bary @ verts])


class VoxelOracle:
    """Occupied-voxel distance field for one scene at resolution ``h``."""

    def __init__(self, M: SetModel, h: Fraction | float = Fraction(1, 16)):
        self.h = float(h)
        pts = np.concatenate([_sample_primitive(p, self.h / 4) for p in M.primitives])
        idx = np.unique(np.floor(pts / self.h + 1e-9).astype(np.int64), axis=0)
        self.centres = (idx + 0.5) * self.h

    def distance(self, x) -> float:
        return float(np.min(np.max(np.abs(self.centres - _floats(x)), axis=1)))

    def nearest(self, x) -> np.ndarray:
        d = np.max(np.abs(self.centres - _floats(x)), axis=1)
        return self.centres[int(np.argmin(d))]

    @property
    def tolerance(self) -> float:
        return 0.75 * self.h


def voxel_distance(M: SetModel, x, h: Fraction | float = Fraction(1, 16)) -> float:
    return VoxelOracle(M, h).distance(x)

