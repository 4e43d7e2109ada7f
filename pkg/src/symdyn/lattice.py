"""Lattice arithmetic on Z^d: points, finite shapes, Følner boxes and sublattice tilings.

Points are plain tuples of ints. A :class:`Shape` is an immutable, lexicographically
sorted set of points of one dimension. Set products ``F E`` of the group become
Minkowski sums here since the group is additive.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Tuple, Union

Point = Tuple[int, ...]
PointLike = Union[int, Sequence[int]]


class DimensionError(ValueError):
    """Raised when objects of different dimensions are combined."""


def as_point(p: PointLike) -> Point:
    if isinstance(p, int):
        return (p,)
    return tuple(int(c) for c in p)


def add(p: Point, q: Point) -> Point:
    return tuple(a + b for a, b in zip(p, q))


def neg(p: Point) -> Point:
    return tuple(-a for a in p)


@dataclass(frozen=True)
class Shape:
    points: Tuple[Point, ...]
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("dimension must be >= 1")
        for p in self.points:
            if len(p) != self.dim:
                raise DimensionError(f"point {p} does not have dimension {self.dim}")

    @classmethod
    def of(cls, points: Iterable[PointLike], dim: int | None = None) -> "Shape":
        pts = sorted({as_point(p) for p in points})
        if dim is None:
            if not pts:
                raise DimensionError("cannot infer the dimension of an empty shape")
            dim = len(pts[0])
        return cls(tuple(pts), dim)

    @classmethod
    def empty(cls, dim: int) -> "Shape":
        return cls((), dim)

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.points)

    def __contains__(self, p) -> bool:
        return as_point(p) in self._set

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __bool__(self) -> bool:
        return bool(self.points)

    def _check(self, other: "Shape"):
        if self.dim != other.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __or__(self, other: "Shape") -> "Shape":
        self._check(other)
        return Shape.of(self._set | other._set, self.dim)

    def __and__(self, other: "Shape") -> "Shape":
        self._check(other)
        return Shape.of(self._set & other._set, self.dim)

    def __sub__(self, other: "Shape") -> "Shape":
        self._check(other)
        return Shape.of(self._set - other._set, self.dim)

    def issubset(self, other: "Shape") -> bool:
        self._check(other)
        return self._set <= other._set

    def translate(self, v: PointLike) -> "Shape":
        v = as_point(v)
        return Shape(tuple(add(p, v) for p in self.points), self.dim)

    def negate(self) -> "Shape":
        return Shape.of((neg(p) for p in self.points), self.dim)

    def is_symmetric(self) -> bool:
        return all(neg(p) in self._set for p in self.points)

    def bounding_box(self) -> Tuple[Point, Point]:
        if not self.points:
            raise ValueError("empty shape has no bounding box")
        lo = tuple(min(p[i] for p in self.points) for i in range(self.dim))
        hi = tuple(max(p[i] for p in self.points) for i in range(self.dim))
        return lo, hi

    def to_json(self) -> list:
        return [list(p) for p in self.points]

    def __repr__(self) -> str:
        if self.dim == 1:
            return f"Shape({[p[0] for p in self.points]})"
        return f"Shape({list(self.points)})"


def rect(lo: PointLike, hi: PointLike) -> Shape:
    """All points between ``lo`` and ``hi`` inclusive."""
    lo, hi = as_point(lo), as_point(hi)
    if len(lo) != len(hi):
        raise DimensionError("corner dimensions differ")
    ranges = [range(a, b + 1) for a, b in zip(lo, hi)]
    return Shape(tuple(itertools.product(*ranges)), len(lo))


def interval(a: int, b: int) -> Shape:
    return rect((a,), (b,))


def box(n: int, d: int = 1) -> Shape:
    """The symmetric cube ``[-n, n]^d``."""
    if n < 0:
        raise ValueError("box radius must be non-negative")
    return rect((-n,) * d, (n,) * d)


def cube(n: int, d: int = 1) -> Shape:
    """The cube ``[0, n)^d``."""
    if n < 1:
        raise ValueError("cube side must be positive")
    return rect((0,) * d, (n - 1,) * d)


def shape_sum(s: Shape, t: Shape) -> Shape:
    s._check(t)
    return Shape.of((add(p, q) for p in s for q in t), s.dim)


def is_delta_apart(s1: Shape, s2: Shape, delta: Shape) -> bool:
    """True iff ``s1 + delta`` does not meet ``s2``."""
    s1._check(s2)
    s1._check(delta)
    return not (shape_sum(s1, delta)._set & s2._set)


def folner_defect(f: Shape, e: Shape) -> Fraction:
    if not f:
        raise ValueError("folner_defect needs a non-empty shape")
    return Fraction(len(shape_sum(f, e) - f), len(f))


def growth_ratio(f: Shape, e: Shape) -> Fraction:
    """``|f + e| / |f|``."""
    if not f:
        raise ValueError("growth_ratio needs a non-empty shape")
    return Fraction(len(shape_sum(f, e)), len(f))


def _check_window(omega: Shape):
    if (0,) * omega.dim not in omega or not omega.is_symmetric():
        raise ValueError("window must contain the origin and be symmetric")


def boundary_shape(f: Shape, omega: Shape) -> Shape:
    """The collar ``f + omega + omega`` minus ``f``."""
    _check_window(omega)
    return shape_sum(shape_sum(f, omega), omega) - f


def erode(f: Shape, delta: Shape) -> Shape:
    """Largest ``F`` with ``F + delta`` contained in ``f``."""
    f._check(delta)
    if not delta:
        raise ValueError("erosion by an empty shape is unbounded")
    d0 = delta.points[0]
    candidates = (add(p, neg(d0)) for p in f)
    return Shape.of((g for g in candidates if all(add(g, d) in f for d in delta)), f.dim)


@dataclass(frozen=True)
class SublatticeTiling:
    """Translates of ``cell`` by the lattice ``periods[0] Z x ... x periods[d-1] Z``.

    The tile positions are taken as a coset of that lattice anchored at the lower
    corner of the region being tiled, so the first tile sits flush with it.
    """

    cell: Shape
    periods: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.cell.dim

    @property
    def density(self) -> Fraction:
        """The guaranteed linear density ``prod 1/(2 c_i)``."""
        out = Fraction(1)
        for c in self.periods:
            out /= 2 * c
        return out

    def tile_centers_in(self, f: Shape) -> Shape:
        if not f:
            return Shape.empty(self.dim)
        f_lo, f_hi = f.bounding_box()
        c_lo, c_hi = self.cell.bounding_box()
        axes = []
        for i, c in enumerate(self.periods):
            start = f_lo[i] - c_lo[i]
            stop = f_hi[i] - c_hi[i]
            axes.append(range(start, stop + 1, c))
        centers = []
        for h in itertools.product(*axes):
            if all(add(h, q) in f for q in self.cell):
                centers.append(h)
        return Shape.of(centers, self.dim)

    def tiles_disjoint_within(self, region: Shape) -> bool:
        """Exhaustive disjointness check of the tiles whose centers lie in ``region``."""
        seen = set()
        lo, _ = region.bounding_box()
        c_lo, _ = self.cell.bounding_box()
        for h in region:
            if any((h[i] - lo[i] + c_lo[i]) % c for i, c in enumerate(self.periods)):
                continue
            for q in self.cell:
                p = add(h, q)
                if p in seen:
                    return False
                seen.add(p)
        return True


def make_tiling(cell: Shape) -> SublatticeTiling:
    if not cell:
        raise ValueError("tiling cell must be non-empty")
    lo, hi = cell.bounding_box()
    return SublatticeTiling(cell, tuple(b - a + 1 for a, b in zip(lo, hi)))
