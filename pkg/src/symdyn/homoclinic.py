"""Homoclinic (almost equal) configurations and the censuses built from them.

Configurations are finitely described: a periodic background plus a finite patch.
Two such configurations are almost equal exactly when their backgrounds agree, and
then they differ on a subset of the union of the patches.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from math import lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import gf2
from .blockcode import BlockCode
from .budget import Budget, default_budget
from .lattice import (DimensionError, Point, Shape, add, box, erode, make_tiling, neg, shape_sum)
from .pattern import Pattern
from .subshift import (HoldsUpTo, InvariantViolation, LEDRAPPIER_TRIANGLE, PreconditionError, Sft, Subshift,
                       check_delta_irreducible, pattern_count)


@dataclass(frozen=True)
class DescribedConfig:
    """``background`` is a pattern on ``[0,c_1) x ... x [0,c_d)`` repeated with
    periods ``c``; ``patch`` overrides it on a finite set."""

    periods: Tuple[int, ...]
    background: Tuple[Any, ...]
    patch: Pattern = Pattern((), ())

    def __post_init__(self):
        size = math.prod(self.periods)
        if len(self.background) != size:
            raise ValueError("background must list one value per fundamental-domain cell")

    @classmethod
    def constant(cls, symbol, dim: int = 1, patch: Pattern | None = None) -> "DescribedConfig":
        return cls((1,) * dim, (symbol,), patch or Pattern((), ()))

    @classmethod
    def periodic(cls, word: Sequence[Any], patch: Pattern | None = None) -> "DescribedConfig":
        return cls((len(word),), tuple(word), patch or Pattern((), ()))

    @property
    def dim(self) -> int:
        return len(self.periods)

    def background_at(self, g: Point):
        idx = 0
        for gi, c in zip(g, self.periods):
            idx = idx * c + gi % c
        return self.background[idx]

    def __getitem__(self, g: Point):
        g = tuple(g)
        if g in self.patch:
            return self.patch[g]
        return self.background_at(g)

    def with_patch(self, p: Pattern) -> "DescribedConfig":
        merged = self.patch.as_dict()
        merged.update(p.as_dict())
        return DescribedConfig(self.periods, self.background, Pattern.from_mapping(merged))

    def restrict(self, f: Shape) -> Pattern:
        return Pattern(f.points, tuple(self[g] for g in f))

    def to_json(self):
        return {"periods": list(self.periods), "background": list(self.background), "patch": self.patch.to_json()}


@dataclass(frozen=True)
class AlmostEqualResult:
    almost_equal: bool
    difference: Optional[Shape] = None
    certificate_period: Optional[Tuple[int, ...]] = None
    certificate_cell: Optional[Point] = None

    def __bool__(self):
        return self.almost_equal

    def to_json(self):
        if self.almost_equal:
            return {"almost_equal": True, "difference": self.difference.to_json()}
        return {"almost_equal": False, "certificate_period": list(self.certificate_period),
                "certificate_cell": list(self.certificate_cell)}


def almost_equal(u: DescribedConfig, v: DescribedConfig) -> AlmostEqualResult:
    """Finite difference set, or a background cell where they differ periodically."""
    if u.dim != v.dim:
        raise DimensionError("configurations of different dimension")
    period = tuple(lcm(a, b) for a, b in zip(u.periods, v.periods))
    for g in itertools.product(*(range(c) for c in period)):
        if u.background_at(g) != v.background_at(g):
            # the two backgrounds differ on g + period * Z^d, which is infinite
            return AlmostEqualResult(False, certificate_period=period, certificate_cell=g)
    cells = set(u.patch.cells) | set(v.patch.cells)
    diff = [g for g in cells if u[g] != v[g]]
    return AlmostEqualResult(True, Shape.of(diff, u.dim) if diff else Shape.empty(u.dim))


def apply_code(c: BlockCode, u: DescribedConfig) -> DescribedConfig:
    """Image of a described configuration; the new patch lives on ``patch - S``."""
    if c.dim != u.dim:
        raise DimensionError("code and configuration dimensions differ")
    dom = list(itertools.product(*(range(p) for p in u.periods)))

    def image_at(cfg_get, g):
        return c.rule(tuple(cfg_get(add(g, s)) for s in c.neighborhood))

    background = tuple(image_at(u.background_at, g) for g in dom)
    touched = {add(p, neg(s)) for p in u.patch.cells for s in c.neighborhood}
    patch = Pattern.from_mapping({g: image_at(u.__getitem__, g) for g in touched})
    return DescribedConfig(u.periods, background, patch)


# ---------------------------------------------------------------- membership of described configurations


def _tail_states_1d(g, word: Sequence[Any]):
    """(ends of left-infinite ``...www`` paths, starts of right-infinite ``www...`` paths)."""
    left = frozenset(g.vertices)
    while True:
        nxt = left
        for a in word:
            nxt = g.step(nxt, a)
        nxt = nxt & left
        if nxt == left:
            break
        left = nxt
    right = frozenset(g.vertices)
    while True:
        keep = set()
        for v in right:
            states = frozenset((v,))
            for a in word:
                states = g.step(states, a)
            if states & right:
                keep.add(v)
        keep = frozenset(keep)
        if keep == right:
            break
        right = keep
    return left, right


def member_1d(s: Subshift, u: DescribedConfig) -> bool:
    """Exact membership of a described configuration in a 1-D subshift."""
    if s.dim != 1 or u.dim != 1:
        raise DimensionError("member_1d is for dimension 1")
    g = s.presentation()
    q = u.periods[0]
    word = u.background
    left, right = _tail_states_1d(g, word)
    if not u.patch.cells:
        return bool(left & right)
    lo = min(c[0] for c in u.patch.cells)
    hi = max(c[0] for c in u.patch.cells)
    a = lo - lo % q
    b = hi + (q - 1 - hi % q)
    states = left
    for i in range(a, b + 1):
        states = g.step(states, u[(i,)])
        if not states:
            return False
    return bool(states & right)


def _collar_fixed(s: Subshift, u: DescribedConfig, f: Shape) -> Dict[Point, Any]:
    window = s.spec.window if isinstance(s, Sft) else Shape(((0,) * s.dim,), s.dim)
    reach = shape_sum(shape_sum(f, window), window)
    return {g: u[g] for g in reach if g not in f}


# ---------------------------------------------------------------- class census


@dataclass
class HomoclinicClassSample:
    system: str
    base: DescribedConfig
    window: Shape
    delta: Shape
    members: List[Pattern]
    inner: Shape
    lower_bound: int
    hypothesis: Any
    truncated: bool = False

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def bound_satisfied(self) -> bool:
        return self.size >= self.lower_bound

    def to_json(self, member_limit: int = 2 ** 14) -> dict:
        out = {"system": self.system, "base": self.base.to_json(), "window": self.window.to_json(),
               "delta": self.delta.to_json(), "size": self.size, "inner": self.inner.to_json(),
               "lower_bound": self.lower_bound, "bound_satisfied": self.bound_satisfied,
               "hypothesis": self.hypothesis.to_json(), "truncated": self.truncated}
        if self.size <= member_limit:
            out["members"] = [list(m.values) for m in self.members]
        return out


def class_members(s: Subshift, base: DescribedConfig, f: Shape, budget: Budget | None = None) -> List[Pattern]:
    """Patterns ``p`` on ``f`` such that ``base`` with ``p`` on ``f`` lies in ``s``."""
    budget = budget or default_budget()
    if s.dim == 1:
        budget.check_patterns(len(s.alphabet) ** len(f))
        members = []
        for vals in itertools.product(s.alphabet.symbols, repeat=len(f)):
            p = Pattern(f.points, vals)
            if member_1d(s, base.with_patch(p)):
                members.append(p)
            budget.tick()
        return members
    if not isinstance(s, Sft) and s.rules():
        raise DimensionError("census in dimension >= 2 needs a subshift given by local rules")
    fixed = _collar_fixed(s, base, f)
    region = s.region(f, fixed)
    index = [region.index[g] for g in f]
    return sorted(Pattern(f.points, tuple(sol[i] for i in index)) for sol in region.solutions())


def class_census(s: Subshift, base: DescribedConfig, f: Shape, delta: Shape, irreducibility_bound: int = 4,
                 budget: Budget | None = None) -> HomoclinicClassSample:
    """Members of the class of ``base`` that differ from it only inside ``f``.

    Every pattern on ``F = {g : g + delta in f}`` that occurs in ``s`` can be glued
    into ``base`` inside ``f`` when ``s`` is delta-irreducible, so then the census
    has at least ``pattern_count(s, F)`` members; this is asserted when the bounded
    irreducibility check passes.
    """
    if base.dim != s.dim or f.dim != s.dim or delta.dim != s.dim:
        raise DimensionError("system, base, window and delta dimensions differ")
    base_ok = member_1d(s, base) if s.dim == 1 else True
    if not base_ok:
        raise PreconditionError("base configuration is not in the subshift")
    members = class_members(s, base, f, budget)
    inner = erode(f, delta)
    mode = "global1d" if s.dim == 1 else "local"
    lower = pattern_count(s, inner, mode) if inner else 1
    hyp = check_delta_irreducible(s, delta, irreducibility_bound)
    sample = HomoclinicClassSample(s.name, base, f, delta, members, inner, lower, hyp)
    if isinstance(hyp, HoldsUpTo) and not sample.bound_satisfied:
        raise InvariantViolation(f"census of size {sample.size} below the gluing bound {lower}")
    return sample


# ---------------------------------------------------------------- Ledrappier


def ledrappier_finite_support_kernel(n: int, relations: bool = True) -> int:
    """Dimension of the GF(2) space of configurations supported in the ``n x n`` box
    satisfying the three-point relation at every triangle of Z^2.

    Triangles meeting the box impose a relation on the box cells they contain
    (cells outside are zero). With ``relations=False`` nothing is imposed and the
    answer is ``n * n``.
    """
    if n < 1:
        raise ValueError("box side must be positive")
    cells = [(i, j) for i in range(n) for j in range(n)]
    if not relations:
        return len(cells)
    index = {p: k for k, p in enumerate(cells)}
    rows = set()
    for i in range(-1, n):
        for j in range(-1, n):
            row = 0
            for t in LEDRAPPIER_TRIANGLE:
                q = add((i, j), t)
                if q in index:
                    row |= 1 << index[q]
            if row:
                rows.add(row)
    return gf2.nullity(sorted(rows), len(cells))


# ---------------------------------------------------------------- gluing families


@dataclass
class WzFamily:
    patterns: List[Pattern]
    centers: Shape
    window: Shape
    cell: Shape
    density: Any

    @property
    def count(self) -> int:
        return len(self.patterns)

    @property
    def entropy_bound(self) -> float:
        return math.log(self.count) / len(self.window)

    @property
    def density_bound(self) -> float:
        """``alpha * ln 2``; ``entropy_bound`` dominates it once the window is large."""
        return float(self.density) * math.log(2)

    def to_json(self, member_limit: int = 2 ** 14) -> dict:
        out = {"count": self.count, "centers": self.centers.to_json(), "window": self.window.to_json(),
               "cell": self.cell.to_json(), "density": str(self.density),
               "entropy_bound": round(self.entropy_bound, 6), "density_bound": round(self.density_bound, 6)}
        if self.count <= member_limit:
            out["patterns"] = [list(p.values) for p in self.patterns]
        return out


def _violation(s: Sft, cfg: DescribedConfig, around: Shape) -> Optional[tuple]:
    """First rule window inside ``around + W + W`` violated by ``cfg`` (all cells pinned)."""
    w = s.spec.window
    reach = shape_sum(shape_sum(around, w), w)
    from .subshift import admissibility_violation

    return admissibility_violation(s, cfg.restrict(reach))


def wz_family(s: Sft, u0: Pattern, u1: Pattern, v: DescribedConfig, f: Shape,
              budget: Budget | None = None) -> WzFamily:
    """Place ``u0`` or ``u1`` on every tile of a lattice tiling of ``f`` by
    ``E + W + W`` (``W`` the normalized window), with ``v`` elsewhere.

    The rule windows meeting a tile's core stay inside the tile, so every choice
    gives a configuration of ``s``; this is re-checked for each pattern.
    """
    budget = budget or default_budget()
    if u0.support != u1.support:
        raise PreconditionError("u0 and u1 must share their support E")
    if u0 == u1:
        raise PreconditionError("u0 and u1 must differ")
    e = u0.support
    for u in (u0, u1):
        if _violation(s, v.with_patch(u), e) is not None:
            raise PreconditionError("pattern is not admissible against the background")
    if _violation(s, v, e) is not None:
        raise PreconditionError("background is not admissible")
    w = s.spec.window
    cell = shape_sum(shape_sum(e, w), w)
    tiling = make_tiling(cell)
    centers = tiling.tile_centers_in(f)
    budget.check_patterns(2 ** len(centers))
    patterns = []
    for z in itertools.product((0, 1), repeat=len(centers)):
        cfg = v
        for h, bit in zip(centers, z):
            cfg = cfg.with_patch((u1 if bit else u0).translate(h))
        bad = _violation(s, cfg, f)
        if bad is not None:
            raise InvariantViolation(f"tiled configuration violates a rule at {bad}")
        patterns.append(cfg.restrict(f))
        budget.tick()
    if len(set(patterns)) != len(patterns):
        raise InvariantViolation("tiled patterns are not pairwise distinct")
    return WzFamily(patterns, centers, f, cell, tiling.density)


@dataclass
class PhiReport:
    n: int
    region: Shape
    count: int
    lower_bound: int
    hypothesis: Any

    @property
    def hypothesis_met(self) -> bool:
        return isinstance(self.hypothesis, HoldsUpTo)

    @property
    def bound_satisfied(self) -> bool:
        return self.count >= self.lower_bound

    def to_json(self):
        return {"n": self.n, "region": self.region.to_json(), "count": self.count, "lower_bound": self.lower_bound,
                "bound_satisfied": self.bound_satisfied, "hypothesis_met": self.hypothesis_met,
                "hypothesis": self.hypothesis.to_json()}


def phi_n_family(s: Subshift, u: DescribedConfig, n: int, delta: Shape, irreducibility_bound: int = 4,
                 budget: Budget | None = None) -> PhiReport:
    """Configurations equal to ``u`` outside ``box(n) + D`` with ``D = delta | -delta``.

    Their number is at least the number of patterns on ``box(n)`` whenever ``s`` is
    ``D``-irreducible; the comparison is asserted only when the bounded check passes.
    """
    d = delta | delta.negate()
    region = shape_sum(box(n, s.dim), d)
    count = len(class_members(s, u, region, budget))
    mode = "global1d" if s.dim == 1 else "local"
    lower = pattern_count(s, box(n, s.dim), mode)
    hyp = check_delta_irreducible(s, d, irreducibility_bound)
    report = PhiReport(n, region, count, lower, hyp)
    if report.hypothesis_met and not report.bound_satisfied:
        raise InvariantViolation(f"family of size {count} below {lower}")
    return report
