"""Exact rational scalars, points, norms and coordinate-equality relations.

Coordinates are :class:`fractions.Fraction` throughout.  Index sets are
frozensets of 0-based coordinate indices.
"""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = Fraction
IndexSet = frozenset

SUPPORTED_DIMS = (2, 3, 4)

ZERO = Fraction(0)
ONE = Fraction(1)


class SunlabError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(SunlabError, ValueError):
    pass


class PreconditionError(SunlabError, ValueError):
    pass


class Norm(str, Enum):
    L1 = "L1"
    LINF = "Linf"


def as_scalar(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact scalar.

    Floats are rejected so that nothing inexact leaks into the pipeline.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a Fraction or 'p/q' string")
    # numbers.Rational implementations (gmpy2.mpq, numpy ints)
    try:
        return Fraction(int(value.numerator), int(value.denominator))
    except AttributeError:
        pass
    return Fraction(int(value))


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text:
        raise ValueError("empty rational literal")
    if any(ch in text for ch in ".eE"):
        raise ValueError(f"rational literal must be 'p' or 'p/q', got {text!r}")
    value = Fraction(text)
    return value


def format_rational(value: Fraction) -> str:
    value = as_scalar(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int) -> str:
    """Render ``value`` rounded half-away-from-zero to ``places`` decimals."""
    value = as_scalar(value)
    scale = 10 ** places
    scaled = abs(value) * scale
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r >= scaled.denominator:
        q += 1
    sign = "-" if value < 0 and q else ""
    if places == 0:
        return f"{sign}{q}"
    digits = str(q).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


class Point(tuple):
    """Immutable exact point in R^2, R^3 or R^4.

    Arithmetic between points of different dimension raises
    :class:`DimensionMismatch`.  ``+`` and ``-`` are vector operations, not
    tuple concatenation.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable) -> "Point":
        if isinstance(coords, Point):
            return coords
        values = tuple(as_scalar(c) for c in coords)
        if len(values) not in SUPPORTED_DIMS:
            raise DimensionMismatch(f"point dimension must be one of {SUPPORTED_DIMS}, got {len(values)}")
        return tuple.__new__(cls, values)

    @classmethod
    def _raw(cls, values: tuple) -> "Point":
        # trusted constructor: values already Fractions of a supported dim
        return tuple.__new__(cls, values)

    @classmethod
    def zero(cls, dim: int) -> "Point":
        return cls([0] * dim)

    @classmethod
    def unit(cls, dim: int, index: int) -> "Point":
        return cls([1 if i == index else 0 for i in range(dim)])

    @classmethod
    def parse(cls, text: str) -> "Point":
        """Parse ``"1,1/2,0"`` (optionally wrapped in parentheses)."""
        text = text.strip().strip("()[]")
        return cls(parse_rational(part) for part in text.split(","))

    @property
    def dim(self) -> int:
        return len(self)

    def _check(self, other: Sequence) -> None:
        if len(other) != len(self):
            raise DimensionMismatch(f"dimension mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other):  # type: ignore[override]
        self._check(other)
        return Point._raw(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other):
        self._check(other)
        return Point._raw(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self):
        return Point._raw(tuple(-a for a in self))

    def __mul__(self, k):  # type: ignore[override]
        k = as_scalar(k)
        return Point._raw(tuple(a * k for a in self))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "Point(" + ", ".join(format_rational(c) for c in self) + ")"

    def __str__(self) -> str:
        return "(" + ",".join(format_rational(c) for c in self) + ")"

    def replace(self, index: int, value) -> "Point":
        coords = list(self)
        coords[index] = as_scalar(value)
        return Point._raw(tuple(coords))

    def permuted(self, perm: Sequence[int]) -> "Point":
        """Coordinate relabelling: result[perm[i]] = self[i]."""
        out = [ZERO] * len(self)
        for i, j in enumerate(perm):
            out[j] = self[i]
        return Point._raw(tuple(out))


def _same_dim(*points: Sequence) -> int:
    dim = len(points[0])
    for p in points[1:]:
        if len(p) != dim:
            raise DimensionMismatch(f"dimension mismatch: {dim} vs {len(p)}")
    return dim


def norm(p: Sequence, which: Norm | str = Norm.LINF) -> Fraction:
    which = Norm(which)
    if which is Norm.L1:
        return sum((abs(c) for c in p), ZERO)
    return max((abs(c) for c in p), default=ZERO)


def dist(x: Sequence, y: Sequence, which: Norm | str = Norm.LINF) -> Fraction:
    _same_dim(x, y)
    if Norm(which) is Norm.L1:
        return sum((abs(a - b) for a, b in zip(x, y)), ZERO)
    return max(abs(a - b) for a, b in zip(x, y))


def eqc_pair(x: Sequence, y: Sequence) -> frozenset:
    """Indices of coordinates on which ``x`` and ``y`` agree."""
    _same_dim(x, y)
    return frozenset(j for j, (a, b) in enumerate(zip(x, y)) if a == b)


def ff(x: Sequence, y: Sequence) -> bool:
    """True when ``x`` and ``y`` differ in every coordinate."""
    return not eqc_pair(x, y)


def ff_mod(x: Sequence, y: Sequence, eqc_m: Iterable[int]) -> bool:
    """True when ``x`` and ``y`` differ in every coordinate outside ``eqc_m``."""
    _same_dim(x, y)
    frozen = frozenset(eqc_m)
    return all(a != b for j, (a, b) in enumerate(zip(x, y)) if j not in frozen)


def ray_point(y: Point, x: Point, lam) -> Point:
    """The point ``lam*x + (1-lam)*y`` of the ray from ``y`` through ``x``."""
    _same_dim(x, y)
    lam = as_scalar(lam)
    if lam <= 0:
        raise PreconditionError(f"ray parameter must be positive, got {lam}")
    return Point._raw(tuple(b + lam * (a - b) for a, b in zip(x, y)))


def between_l1(x: Sequence, z: Sequence, y: Sequence) -> bool:
    """Whether ``z`` lies metrically between ``x`` and ``y`` in the l1 norm.

    Decided coordinatewise (z_j inside the closed interval spanned by x_j, y_j),
    which is equivalent to the triangle equality.
    """
    _same_dim(x, z, y)
    for a, c, b in zip(x, z, y):
        if a <= b:
            if not a <= c <= b:
                return False
        elif not b <= c <= a:
            return False
    return True


def between_l1_by_norms(x: Sequence, z: Sequence, y: Sequence) -> bool:
    return dist(x, y, Norm.L1) == dist(x, z, Norm.L1) + dist(z, y, Norm.L1)


def sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def midpoint(a: Point, b: Point) -> Point:
    _same_dim(a, b)
    return Point._raw(tuple((p + q) / 2 for p, q in zip(a, b)))


def lerp(a: Point, b: Point, t) -> Point:
    t = as_scalar(t)
    return Point._raw(tuple(p + t * (q - p) for p, q in zip(a, b)))
