"""Alphabets and finite patterns (maps from a shape to symbols)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, Iterable, Mapping, Sequence, Tuple

from .lattice import Point, PointLike, Shape, add, as_point


class GlueConflict(ValueError):
    def __init__(self, point, left, right):
        super().__init__(f"patterns conflict at {point}: {left!r} != {right!r}")
        self.point = point


@dataclass(frozen=True)
class Alphabet:
    symbols: Tuple[Hashable, ...]

    def __post_init__(self):
        if not self.symbols:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError("alphabet symbols must be distinct")

    @classmethod
    def of(cls, symbols: Iterable[Hashable]) -> "Alphabet":
        return cls(tuple(symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, a) -> bool:
        return a in self.symbols

    def index(self, a) -> int:
        return self.symbols.index(a)


BINARY = Alphabet((0, 1))


@dataclass(frozen=True, order=True)
class Pattern:
    """A finite pattern; ``cells`` is sorted and ``values[i]`` sits at ``cells[i]``.

    Patterns order lexicographically by ``(cells, values)``.
    """

    cells: Tuple[Point, ...]
    values: Tuple[Any, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.values):
            raise ValueError("cells and values differ in length")

    @classmethod
    def from_mapping(cls, mapping: Mapping[PointLike, Any]) -> "Pattern":
        items = sorted((as_point(p), v) for p, v in mapping.items())
        return cls(tuple(p for p, _ in items), tuple(v for _, v in items))

    @classmethod
    def on(cls, shape: Shape, values: Sequence[Any]) -> "Pattern":
        """Pattern on ``shape`` with values listed in the shape's sorted order."""
        values = tuple(values)
        if len(values) != len(shape):
            raise ValueError("wrong number of values for shape")
        return cls(shape.points, values)

    @classmethod
    def word(cls, symbols: Iterable[Any], start: int = 0) -> "Pattern":
        symbols = tuple(symbols)
        return cls(tuple((start + i,) for i in range(len(symbols))), symbols)

    @cached_property
    def _map(self) -> dict:
        return dict(zip(self.cells, self.values))

    @property
    def support(self) -> Shape:
        dim = len(self.cells[0]) if self.cells else 1
        return Shape(self.cells, dim)

    @property
    def dim(self) -> int:
        return len(self.cells[0]) if self.cells else 1

    def __getitem__(self, p: PointLike):
        return self._map[as_point(p)]

    def get(self, p: PointLike, default=None):
        return self._map.get(as_point(p), default)

    def __contains__(self, p) -> bool:
        return as_point(p) in self._map

    def __len__(self) -> int:
        return len(self.cells)

    def items(self):
        return zip(self.cells, self.values)

    def as_dict(self) -> dict:
        return dict(self._map)

    def restrict(self, shape: Iterable[PointLike]) -> "Pattern":
        return Pattern.from_mapping({p: self[p] for p in shape})

    def translate(self, v: PointLike) -> "Pattern":
        v = as_point(v)
        return Pattern(tuple(add(p, v) for p in self.cells), self.values)

    @property
    def symbols(self) -> Tuple[Any, ...]:
        """Values in cell order; for 1-D interval patterns this is the word."""
        return self.values

    def to_json(self) -> dict:
        return {"support": [list(p) for p in self.cells], "values": list(self.values)}

    def __repr__(self) -> str:
        if self.cells and len(self.cells[0]) == 1:
            return f"Pattern(@{self.cells[0][0]}:{''.join(map(str, self.values))})"
        return f"Pattern({self._map})"


def pattern_glue(p1: Pattern, p2: Pattern) -> Pattern:
    merged = p1.as_dict()
    for p, v in p2.items():
        if p in merged and merged[p] != v:
            raise GlueConflict(p, merged[p], v)
        merged[p] = v
    return Pattern.from_mapping(merged)
