"""Subshifts and their pattern languages.

Four kinds of system are supported behind one interface: full shifts, subshifts of
finite type (any dimension), one-dimensional sofic shifts given by labeled graphs,
and the Ledrappier subshift of Z^2.

Local admissibility of a pattern on a finite shape ``f`` means that every local rule
whose translate fits inside ``f`` is satisfied. In one dimension the exact language
(``pi_f`` of the subshift) is available from a graph presentation; in two dimensions
only local counts are offered.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

from . import automata, gf2
from .automata import LabeledGraph
from .budget import Budget, BudgetExceeded, default_budget
from .lattice import DimensionError, Point, Shape, add, box, boundary_shape, interval, is_delta_apart, neg, rect, shape_sum
from .pattern import Alphabet, Pattern, pattern_glue
from .search import Region


class InvariantViolation(AssertionError):
    """A construction that the theory guarantees produced an inadmissible result."""


class PreconditionError(ValueError):
    pass


def normalize_window(window: Shape) -> Shape:
    """Smallest superset containing the origin and closed under negation."""
    origin = Shape(((0,) * window.dim,), window.dim)
    w = window | origin
    return w | w.negate()


@dataclass(frozen=True)
class Constraint:
    """One local condition: on every translate of ``support`` the values must be in
    ``patterns`` (``allowed=True``) or must avoid them (``allowed=False``)."""

    support: Shape
    patterns: frozenset
    allowed: bool = True

    def check(self, values: tuple) -> bool:
        return (values in self.patterns) == self.allowed


@dataclass(frozen=True)
class SftSpec:
    """A subshift of finite type ``{u : (g u)|_window in allowed for all g}``.

    ``window`` is normalized (origin included, symmetric) and ``allowed`` lists
    value tuples in the window's sorted point order. ``rules`` keeps the ingested
    conditions, which define the same subshift and drive local admissibility.
    """

    dim: int
    alphabet: Alphabet
    window: Shape
    allowed: frozenset
    rules: Tuple[Constraint, ...]

    @classmethod
    def from_forbidden(cls, alphabet: Alphabet | Iterable, forbidden: Sequence[Pattern], dim: int | None = None) -> "SftSpec":
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)
        if dim is None:
            if not forbidden:
                raise ValueError("dimension required when no forbidden patterns are given")
            dim = forbidden[0].dim
        groups: Dict[Shape, set] = {}
        for p in forbidden:
            if p.dim != dim:
                raise DimensionError("forbidden patterns of mixed dimension")
            for v in p.values:
                if v not in alphabet:
                    raise ValueError(f"symbol {v!r} is not in the alphabet")
            groups.setdefault(p.support, set()).add(p.values)
        rules = tuple(Constraint(s, frozenset(v), allowed=False) for s, v in sorted(groups.items(), key=lambda kv: kv[0].points))
        window = Shape(((0,) * dim,), dim)
        for r in rules:
            window = window | r.support
        window = normalize_window(window)
        return cls(dim, alphabet, window, _allowed_on(window, alphabet, rules), rules)

    @classmethod
    def from_allowed(cls, alphabet: Alphabet | Iterable, window: Shape, allowed: Iterable[Sequence]) -> "SftSpec":
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)
        allowed = frozenset(tuple(a) for a in allowed)
        for a in allowed:
            if len(a) != len(window):
                raise ValueError("allowed pattern does not match the window size")
            for v in a:
                if v not in alphabet:
                    raise ValueError(f"symbol {v!r} is not in the alphabet")
        rules = (Constraint(window, allowed, allowed=True),)
        norm = normalize_window(window)
        if (0,) * window.dim not in window:
            warnings.warn("window does not contain the origin; enlarged to a symmetric window", stacklevel=2)
        return cls(window.dim, alphabet, norm, _allowed_on(norm, alphabet, rules), rules)

    def allowed_patterns(self) -> List[Pattern]:
        return sorted(Pattern.on(self.window, a) for a in self.allowed)


def _rule_constraints(rules: Sequence[Constraint], cells: Iterable[Point]) -> list:
    cells = list(cells)
    present = set(cells)
    out = []
    for r in rules:
        s0 = r.support.points[0]
        for p in cells:
            g = add(p, neg(s0))
            win = tuple(add(g, s) for s in r.support)
            if all(q in present for q in win):
                out.append((win, r.check))
    return out


def _torus_constraints(rules: Sequence[Constraint], periods: Tuple[int, ...]) -> list:
    domain = list(itertools.product(*(range(c) for c in periods)))
    out = []
    for r in rules:
        for g in domain:
            win = tuple(tuple((gi + si) % c for gi, si, c in zip(g, s, periods)) for s in r.support)
            out.append((win, r.check))
    return out


def _allowed_on(window: Shape, alphabet: Alphabet, rules: Sequence[Constraint]) -> frozenset:
    region = Region(list(window.points), [alphabet.symbols] * len(window), _rule_constraints(rules, window.points))
    return frozenset(region.solutions())


# ---------------------------------------------------------------- handles


class Subshift:
    """Common interface; concrete systems override what they can answer."""

    name: str = "subshift"
    dim: int
    alphabet: Alphabet

    def rules(self) -> Tuple[Constraint, ...]:
        raise NotImplementedError

    def region(self, f: Shape, fixed: Dict[Point, Any] | None = None) -> Region:
        """Constraint region on ``f`` (plus pinned ``fixed`` cells) for local admissibility."""
        fixed = fixed or {}
        cells = sorted(set(f.points) | set(fixed))
        domains = [(fixed[c],) if c in fixed else self.alphabet.symbols for c in cells]
        return Region(cells, domains, _rule_constraints(self.rules(), cells))

    def torus_region(self, periods: Tuple[int, ...]) -> Region:
        cells = list(itertools.product(*(range(c) for c in periods)))
        return Region(cells, [self.alphabet.symbols] * len(cells), _torus_constraints(self.rules(), periods))

    def presentation(self) -> LabeledGraph:
        raise DimensionError(f"{self.name} has no one-dimensional presentation")

    @property
    def local_is_global_on_rectangles(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


@dataclass(frozen=True, repr=False)
class Full(Subshift):
    alphabet: Alphabet
    dim: int = 1
    name: str = "full"

    def rules(self):
        return ()

    @cached_property
    def _presentation(self):
        return LabeledGraph.of([("*", "*", a) for a in self.alphabet], ["*"])

    def presentation(self) -> LabeledGraph:
        if self.dim != 1:
            return super().presentation()
        return self._presentation

    @property
    def local_is_global_on_rectangles(self) -> bool:
        return True


@dataclass(frozen=True, repr=False)
class Sft(Subshift):
    spec: SftSpec
    name: str = "sft"

    @property
    def dim(self) -> int:
        return self.spec.dim

    @property
    def alphabet(self) -> Alphabet:
        return self.spec.alphabet

    def rules(self):
        return self.spec.rules

    @cached_property
    def _presentation(self) -> LabeledGraph:
        lo, hi = self.spec.window.bounding_box()
        span = hi[0] - lo[0] + 1
        edges = []
        region = self.region(interval(0, span - 1))
        for w in region.solutions():
            edges.append((w[:-1], w[1:], w[0]))
        return automata.trim(LabeledGraph.of(edges))

    def presentation(self) -> LabeledGraph:
        """De Bruijn graph on window-width words, labeled by the first symbol."""
        if self.dim != 1:
            return super().presentation()
        return self._presentation


@dataclass(frozen=True, repr=False)
class Sofic1d(Subshift):
    graph: LabeledGraph
    alphabet: Alphabet
    name: str = "sofic"
    dim: int = field(default=1, init=False)

    @cached_property
    def _trimmed(self) -> LabeledGraph:
        return automata.trim(self.graph)

    def presentation(self) -> LabeledGraph:
        return self._trimmed

    def rules(self):
        raise DimensionError("sofic shifts are not given by local rules")


LEDRAPPIER_TRIANGLE = ((0, 0), (0, 1), (1, 0))


class Ledrappier(Sft):
    """``x(m,n) + x(m+1,n) + x(m,n+1) = 0`` over GF(2) on Z^2."""

    def __init__(self):
        odd = [Pattern(LEDRAPPIER_TRIANGLE, v) for v in itertools.product((0, 1), repeat=3) if sum(v) % 2]
        super().__init__(SftSpec.from_forbidden(Alphabet((0, 1)), odd, dim=2), "ledrappier")

    @property
    def local_is_global_on_rectangles(self) -> bool:
        return True

    def linear_rows(self, f: Shape) -> Tuple[List[int], Dict[Point, int]]:
        """GF(2) relation rows for every triangle inside ``f`` (bit i = i-th point)."""
        index = {p: i for i, p in enumerate(f.points)}
        rows = []
        for p in f.points:
            tri = [add(p, t) for t in LEDRAPPIER_TRIANGLE]
            if all(q in index for q in tri):
                rows.append(sum(1 << index[q] for q in tri))
        return rows, index


def full_shift(k_or_symbols: Union[int, Iterable[Hashable]] = 2, dim: int = 1, name: str | None = None) -> Full:
    symbols = tuple(range(k_or_symbols)) if isinstance(k_or_symbols, int) else tuple(k_or_symbols)
    return Full(Alphabet(symbols), dim, name or f"full-{len(symbols)}" + ("" if dim == 1 else f"-{dim}d"))


def sft_from_words(symbols: Iterable[Hashable], forbidden_words: Iterable[Sequence], name: str = "sft") -> Sft:
    """One-dimensional SFT from forbidden words (each placed at ``0..len-1``)."""
    pats = [Pattern.word(w) for w in forbidden_words]
    return Sft(SftSpec.from_forbidden(Alphabet.of(symbols), pats, dim=1), name)


def golden_mean() -> Sft:
    return sft_from_words((0, 1), [(1, 1)], "golden-mean")


def even_shift() -> Sofic1d:
    g = LabeledGraph.of([("A", "A", 0), ("A", "B", 1), ("B", "A", 1)])
    return Sofic1d(g, Alphabet((0, 1)), "even-shift")


# ---------------------------------------------------------------- pattern languages


def _check_dim(s: Subshift, f: Shape):
    if f.dim != s.dim:
        raise DimensionError(f"shape dimension {f.dim} does not match subshift dimension {s.dim}")


def _hull_1d(f: Shape) -> Tuple[int, int]:
    (lo,), (hi,) = f.bounding_box()
    return lo, hi


def _sofic_patterns(g: LabeledGraph, f: Shape, symbols) -> List[Pattern]:
    lo, hi = _hull_1d(f)
    keep = [(i,) in f for i in range(lo, hi + 1)]
    seen = set()
    for w in automata.words(g, hi - lo + 1, symbols):
        seen.add(tuple(a for a, k in zip(w, keep) if k))
    return sorted(Pattern.on(f, v) for v in seen)


def locally_admissible(s: Subshift, f: Shape, budget: Budget | None = None) -> List[Pattern]:
    """All locally admissible patterns on ``f`` in lexicographic order."""
    _check_dim(s, f)
    if not f:
        raise ValueError("shape must be non-empty")
    budget = budget or default_budget()
    budget.check_patterns(pattern_count(s, f, "local"))
    if isinstance(s, Sofic1d):
        return _sofic_patterns(s.presentation(), f, s.alphabet.symbols)
    return [Pattern(tuple(f.points), v) for v in s.region(f).solutions()]


def globally_admissible_1d(s: Subshift, n: int) -> List[Pattern]:
    """Exactly ``pi_[0,n)`` of the subshift (bi-extendable words)."""
    if s.dim != 1:
        raise DimensionError("global admissibility is only decided in dimension 1")
    return [Pattern.word(w) for w in automata.words(s.presentation(), n, s.alphabet.symbols)]


def is_globally_admissible_1d(s: Subshift, p: Pattern) -> bool:
    if s.dim != 1:
        raise DimensionError("global admissibility is only decided in dimension 1")
    lo, hi = _hull_1d(p.support)
    allowed = [(p[(i,)],) if (i,) in p else s.alphabet.symbols for i in range(lo, hi + 1)]
    return _readable(s.presentation(), allowed)


def _readable(g: LabeledGraph, allowed: Sequence[Sequence[Any]]) -> bool:
    states = frozenset(g.vertices)
    for choices in allowed:
        states = frozenset().union(*(g.step(states, a) for a in choices))
        if not states:
            return False
    return bool(states)


def pattern_count(s: Subshift, f: Shape, mode: str = "local", budget: Budget | None = None) -> int:
    """Exact number of local (or, in dimension 1, global) patterns on ``f``."""
    _check_dim(s, f)
    if mode not in ("local", "global1d"):
        raise ValueError(f"unknown mode {mode!r}")
    if not f:
        return 1
    if mode == "global1d" or isinstance(s, Sofic1d):
        if s.dim != 1:
            raise DimensionError("global1d mode requires dimension 1")
        lo, hi = _hull_1d(f)
        mask = [(i,) in f for i in range(lo, hi + 1)]
        return automata.count_words(s.presentation(), hi - lo + 1, mask)
    if isinstance(s, Full):
        return len(s.alphabet) ** len(f)
    if isinstance(s, Ledrappier):
        rows, _ = s.linear_rows(f)
        return 2 ** gf2.nullity(rows, len(f))
    return s.region(f).count(budget)


# ---------------------------------------------------------------- irreducibility


@dataclass(frozen=True)
class HoldsUpTo:
    bound: int

    def to_json(self):
        return {"verdict": "HoldsUpTo", "bound": self.bound}


@dataclass(frozen=True)
class Counterexample:
    omega1: Shape
    omega2: Shape
    p1: Pattern
    p2: Pattern

    def to_json(self):
        return {"verdict": "Counterexample", "omega1": self.omega1.to_json(), "omega2": self.omega2.to_json(),
                "p1": self.p1.to_json(), "p2": self.p2.to_json()}


@dataclass(frozen=True)
class Inconclusive:
    reason: str

    def to_json(self):
        return {"verdict": "Inconclusive", "reason": self.reason}


def _interval_pairs(max_len: int):
    """Pairs of intervals whose union has hull exactly ``[0, L)``, by L then lexicographically."""
    for L in range(1, max_len + 1):
        pairs = []
        ivs = [(a, b) for a in range(L) for b in range(a, L)]
        for (a1, b1), (a2, b2) in itertools.product(ivs, ivs):
            if min(a1, a2) == 0 and max(b1, b2) == L - 1:
                pairs.append((interval(a1, b1), interval(a2, b2)))
        pairs.sort(key=lambda st: (st[0].points, st[1].points))
        yield from pairs


def _word_relations(g: LabeledGraph, n: int, symbols) -> Dict[frozenset, Tuple[Any, ...]]:
    """Map each start/end relation realized by a length-``n`` path word to its least word."""
    layer = {frozenset((v, v) for v in g.vertices): ()}
    for _ in range(n):
        nxt: Dict[frozenset, tuple] = {}
        for rel, w in sorted(layer.items(), key=lambda kv: kv[1]):
            for a in symbols:
                new = frozenset((s, e[1]) for (s, t) in rel for e in g.out[t] if e[2] == a)
                if new:
                    cand = w + (a,)
                    if new not in nxt or cand < nxt[new]:
                        nxt[new] = cand
        layer = nxt
    return layer


def _advance_any(g: LabeledGraph, states: frozenset, steps: int) -> frozenset:
    for _ in range(steps):
        states = frozenset(e[1] for v in states for e in g.out[v])
    return states


def _irreducible_1d(s: Subshift, delta: Shape, bound: int, budget: Budget):
    g = s.presentation()
    symbols = s.alphabet.symbols
    max_len = 2 * bound + 1
    rels = {n: _word_relations(g, n, symbols) for n in range(1, max_len + 1)}
    for o1, o2 in _interval_pairs(max_len):
        budget.tick()
        if not is_delta_apart(o1, o2, delta):
            continue
        (a1,), (b1,) = o1.bounding_box()
        (a2,), (b2,) = o2.bounding_box()
        if b1 < a2 or b2 < a1:
            first_is_left = b1 < a2
            left, right = (o1, o2) if first_is_left else (o2, o1)
            (la,), (lb,) = left.bounding_box()
            (ra,), (rb,) = right.bounding_box()
            gap = ra - lb - 1
            lrels, rrels = rels[lb - la + 1], rels[rb - ra + 1]
            bad = []
            for lrel, lw in lrels.items():
                ends = _advance_any(g, frozenset(t for _, t in lrel), gap)
                for rrel, rw in rrels.items():
                    starts = frozenset(v for v, _ in rrel)
                    if not (ends & starts):
                        bad.append((lw, rw) if first_is_left else (rw, lw))
            if bad:
                w1, w2 = min(bad)
                return Counterexample(o1, o2, Pattern.on(o1, w1), Pattern.on(o2, w2))
        else:
            words1 = [Pattern.on(o1, w) for w in automata.words(g, len(o1), symbols)]
            words2 = [Pattern.on(o2, w) for w in automata.words(g, len(o2), symbols)]
            budget.check_patterns(len(words1) * len(words2))
            for p1 in words1:
                for p2 in words2:
                    try:
                        merged = pattern_glue(p1, p2)
                    except ValueError:
                        return Counterexample(o1, o2, p1, p2)
                    if not is_globally_admissible_1d(s, merged):
                        return Counterexample(o1, o2, p1, p2)
    return HoldsUpTo(bound)



def _rect_pairs(side: int):
    """Pairs of axis-parallel rectangles whose union hull is ``[0,a) x [0,b)``, a, b <= side."""
    for a in range(1, side + 1):
        for b in range(1, side + 1):
            rects = [rect((x0, y0), (x1, y1)) for x0 in range(a) for x1 in range(x0, a)
                     for y0 in range(b) for y1 in range(y0, b)]
            pairs = []
            for r1, r2 in itertools.product(rects, rects):
                pts = r1.points + r2.points
                if (min(p[0] for p in pts), min(p[1] for p in pts)) == (0, 0) and \
                        (max(p[0] for p in pts), max(p[1] for p in pts)) == (a - 1, b - 1):
                    pairs.append((r1, r2))
            pairs.sort(key=lambda st: (st[0].points, st[1].points))
            yield from pairs


def _irreducible_2d(s: Subshift, delta: Shape, bound: int, margin: int, budget: Budget):
    if not s.local_is_global_on_rectangles:
        return Inconclusive("global admissibility of rectangle patterns is not decidable for this system")
    for o1, o2 in _rect_pairs(2 * bound + 1):
        budget.tick()
        if not is_delta_apart(o1, o2, delta):
            continue
        if isinstance(s, Full) and not (o1 & o2):
            continue
        pats1 = locally_admissible(s, o1, budget)
        pats2 = locally_admissible(s, o2, budget)
        budget.check_patterns(len(pats1) * len(pats2))
        lo, hi = (o1 | o2).bounding_box()
        around = rect(tuple(c - margin for c in lo), tuple(c + margin for c in hi))
        for p1 in pats1:
            for p2 in pats2:
                try:
                    merged = pattern_glue(p1, p2)
                except ValueError:
                    return Counterexample(o1, o2, p1, p2)
                if s.region(around, merged.as_dict()).find(budget=budget) is None:
                    return Counterexample(o1, o2, p1, p2)
    return HoldsUpTo(bound)


def check_delta_irreducible(s: Subshift, delta: Shape, bound: int, budget: Budget | None = None, margin: int = 2):
    """Bounded test of Delta-irreducibility over connected sub-shapes of ``box(bound)``.

    Shape pairs are enumerated up to translation (the subshift is shift invariant)
    as intervals in dimension 1 and rectangles in dimension 2. A
    :class:`Counterexample` is conclusive; :class:`HoldsUpTo` is not a proof.
    In dimension 2 a failure to extend is tested on the pair's hull enlarged by
    ``margin`` cells, which is conclusive because every global configuration is
    locally admissible there.
    """
    _check_dim(s, delta)
    budget = budget or default_budget()
    if isinstance(s, Full):
        # apart shapes are disjoint exactly when 0 is in delta; then any two patterns glue
        origin = (0,) * s.dim
        if origin in delta or len(s.alphabet) < 2:
            return HoldsUpTo(bound)
        point = Shape((origin,), s.dim)
        a, b = s.alphabet.symbols[:2]
        return Counterexample(point, point, Pattern((origin,), (a,)), Pattern((origin,), (b,)))
    try:
        if s.dim == 1:
            return _irreducible_1d(s, delta, bound, budget)
        if s.dim == 2:
            return _irreducible_2d(s, delta, bound, margin, budget)
    except BudgetExceeded as exc:
        return Inconclusive(str(exc))
    raise DimensionError("irreducibility checks support dimensions 1 and 2")


def smallest_irreducibility_radius(s: Subshift, bound: int, max_radius: int, budget: Budget | None = None) -> Optional[int]:
    """Least ``r`` such that the bounded check passes for ``Delta = [-r, r]^d``."""
    for r in range(max_radius + 1):
        if isinstance(check_delta_irreducible(s, box(r, s.dim), bound, budget), HoldsUpTo):
            return r
    return None


# ---------------------------------------------------------------- splicing


def admissibility_violation(s: Subshift, p: Pattern) -> Optional[Tuple[Point, ...]]:
    """First window inside ``p``'s support where a local rule fails, else None."""
    for win, check in _rule_constraints(s.rules(), p.cells):
        if not check(tuple(p[q] for q in win)):
            return win
    return None


def splice(s: Sft, u: Pattern, v: Pattern, f: Shape) -> Pattern:
    """Pattern equal to ``v`` on ``f + window`` and to ``u`` elsewhere.

    ``u`` and ``v`` must share a support, be locally admissible there, and agree on
    the collar ``boundary_shape(f, window)``; then the result is admissible.
    """
    omega = s.spec.window
    if u.support != v.support:
        raise PreconditionError("u and v must have the same support")
    support = u.support
    core = shape_sum(f, omega)
    collar = boundary_shape(f, omega)
    if not (core | collar).issubset(support):
        raise PreconditionError("support must contain f + window + window")
    for p in (u, v):
        bad = admissibility_violation(s, p)
        if bad is not None:
            raise PreconditionError(f"input pattern is not locally admissible at {bad}")
    for q in collar:
        if u[q] != v[q]:
            raise PreconditionError(f"boundary disagreement at {q if len(q) > 1 else q[0]}")
    w = Pattern(u.cells, tuple(v[q] if q in core else u[q] for q in u.cells))
    bad = admissibility_violation(s, w)
    if bad is not None:
        raise InvariantViolation(f"splice produced an inadmissible window at {bad}")
    return w
