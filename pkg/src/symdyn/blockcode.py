"""Sliding block codes and the decision procedures for them.

In one dimension every question is answered on the *code graph*: the higher block
graph of the source presentation whose edges are paths of the neighborhood's width,
each carrying the source symbol it appends and the rule's output on the window.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Dict, Hashable, List, Optional, Tuple

from . import automata
from .automata import LabeledGraph
from .budget import Budget, BudgetExceeded, default_budget
from .lattice import DimensionError, Shape, add, boundary_shape, box, interval, neg, rect, shape_sum
from .pattern import Alphabet, Pattern
from .search import Region
from .subshift import Inconclusive, Sft, Sofic1d, Subshift, _rule_constraints, full_shift, golden_mean, locally_admissible


@dataclass(frozen=True)
class LocalRule:
    """Local rule ``A^S -> B``; ``outputs`` follows the lexicographic input order."""

    neighborhood: Shape
    source_alphabet: Alphabet
    target_alphabet: Alphabet
    outputs: Tuple[Any, ...]

    def __post_init__(self):
        if len(self.outputs) != len(self.source_alphabet) ** len(self.neighborhood):
            raise ValueError("rule table must cover every input pattern")
        for b in self.outputs:
            if b not in self.target_alphabet:
                raise ValueError(f"output {b!r} is not in the target alphabet")

    @classmethod
    def from_function(cls, neighborhood: Shape, fn: Callable[[tuple], Any], source_alphabet: Alphabet,
                      target_alphabet: Alphabet | None = None) -> "LocalRule":
        """Tabulate ``fn`` (called with the window values in neighborhood order).

        The neighborhood is enlarged to contain the origin if necessary.
        """
        nbhd = neighborhood
        origin = (0,) * neighborhood.dim
        if origin not in nbhd:
            nbhd = nbhd | Shape((origin,), nbhd.dim)
        keep = [nbhd.points.index(p) for p in neighborhood]
        inputs = itertools.product(source_alphabet.symbols, repeat=len(nbhd))
        outputs = tuple(fn(tuple(x[i] for i in keep)) for x in inputs)
        return cls(nbhd, source_alphabet, target_alphabet or source_alphabet, outputs)

    @property
    def dim(self) -> int:
        return self.neighborhood.dim

    @cached_property
    def table(self) -> Dict[tuple, Any]:
        inputs = itertools.product(self.source_alphabet.symbols, repeat=len(self.neighborhood))
        return dict(zip(inputs, self.outputs))

    def __call__(self, window: tuple):
        return self.table[window]


def eca_rule(number: int) -> LocalRule:
    """Elementary cellular automaton in Wolfram numbering."""
    if not 0 <= number <= 255:
        raise ValueError("elementary rule numbers run from 0 to 255")
    return LocalRule.from_function(interval(-1, 1), lambda x: number >> (4 * x[0] + 2 * x[1] + x[2]) & 1,
                                   Alphabet((0, 1)))


@dataclass(frozen=True)
class BlockCode:
    rule: LocalRule
    source: Subshift
    target: Subshift
    name: str = "code"

    @property
    def dim(self) -> int:
        return self.rule.dim

    @property
    def neighborhood(self) -> Shape:
        return self.rule.neighborhood

    def __repr__(self) -> str:
        return f"<BlockCode {self.name}>"


class CodeError(ValueError):
    pass


def block_code(rule: LocalRule, source: Subshift, target: Subshift | None = None, name: str = "code",
               check: bool = True, check_window: int = 1) -> BlockCode:
    """Build a code and check that it maps the source into the target.

    In dimension 1 the check is exact (image language contained in the target
    language). Otherwise source-admissible patterns on ``box(check_window)`` are
    mapped and tested for target admissibility.
    """
    target = target or source
    if rule.dim != source.dim or rule.dim != target.dim:
        raise DimensionError("rule, source and target dimensions differ")
    if rule.source_alphabet != source.alphabet or rule.target_alphabet != target.alphabet:
        raise CodeError("rule alphabets do not match the source/target alphabets")
    code = BlockCode(rule, source, target, name)
    if check:
        if code.dim == 1:
            bad = automata.difference_word(image_presentation_1d(code), target.presentation(), target.alphabet.symbols)
            if bad is not None:
                raise CodeError(f"image contains {bad}, which is not in the target")
        else:
            win = box(check_window, code.dim)
            for p in locally_admissible(source, win):
                img = apply_to_pattern(code, p)
                if not _pinned_ok(target, img):
                    raise CodeError("rule maps an admissible pattern outside the target")
    return code


def _pinned_ok(s: Subshift, p: Pattern) -> bool:
    return all(check(tuple(p[q] for q in win)) for win, check in _rule_constraints(s.rules(), p.cells))


def _output_support(c: BlockCode, support: Shape) -> Shape:
    present = set(support.points)
    nb = c.neighborhood.points
    return Shape.of((g for g in (add(p, neg(nb[0])) for p in support) if all(add(g, s) in present for s in nb)),
                    support.dim)


def apply_to_pattern(c: BlockCode, p: Pattern, out_support: Shape | None = None) -> Pattern:
    """Apply the local rule at every output cell (by default wherever the window fits)."""
    if out_support is None:
        out_support = _output_support(c, p.support)
    if not out_support:
        raise CodeError("pattern support too small for the neighborhood")
    vals = []
    for g in out_support:
        try:
            vals.append(c.rule(tuple(p[add(g, s)] for s in c.neighborhood)))
        except KeyError:
            raise CodeError(f"pattern does not cover the window at {g}")
    return Pattern(out_support.points, tuple(vals))


def compose(c1: BlockCode, c2: BlockCode, name: str | None = None) -> BlockCode:
    """``c1`` after ``c2``; the neighborhood is ``S2 + S1``."""
    if c1.dim != c2.dim:
        raise DimensionError("cannot compose codes of different dimensions")
    if c2.rule.target_alphabet != c1.rule.source_alphabet:
        raise CodeError("alphabet mismatch between composed codes")
    s1, s2 = c1.neighborhood, c2.neighborhood
    nbhd = shape_sum(s2, s1)
    pos = {p: i for i, p in enumerate(nbhd.points)}

    def fn(x):
        mid = tuple(c2.rule(tuple(x[pos[add(a, b)]] for b in s2)) for a in s1)
        return c1.rule(mid)

    rule = LocalRule.from_function(nbhd, fn, c2.rule.source_alphabet, c1.rule.target_alphabet)
    return BlockCode(rule, c2.source, c1.target, name or f"{c1.name}*{c2.name}")


# ---------------------------------------------------------------- one-dimensional machinery


@dataclass(frozen=True)
class CodeGraph:
    """Higher block graph of the source presentation for a 1-D code.

    ``graph`` edges are labeled ``(appended source symbol, output symbol)``;
    ``window_labels[v]`` are the source symbols a vertex remembers.
    """

    graph: LabeledGraph
    window_labels: Dict[Hashable, tuple]
    width: int


def code_graph(c: BlockCode) -> CodeGraph:
    if c.dim != 1:
        raise DimensionError("code graphs exist in dimension 1 only")
    return _code_graph(c)


_CODE_GRAPHS: Dict[BlockCode, CodeGraph] = {}


def _code_graph(c: BlockCode) -> CodeGraph:
    cached = _CODE_GRAPHS.get(c)
    if cached is not None:
        return cached
    g = c.source.presentation()
    (lo,), (hi,) = c.neighborhood.bounding_box()
    width = hi - lo + 1
    offsets = [s[0] - lo for s in c.neighborhood]
    paths: List[tuple] = [(e,) for e in g.edges]
    for _ in range(width - 1):
        paths = [p + (e,) for p in paths for e in g.out[p[-1][1]]]
    edges = []
    labels: Dict[Hashable, tuple] = {}
    for p in paths:
        syms = tuple(e[2] for e in p)
        out = c.rule(tuple(syms[i] for i in offsets))
        if width == 1:
            src, dst = p[0][0], p[0][1]
            labels[src] = labels[dst] = ()
        else:
            src, dst = p[:-1], p[1:]
            labels[src], labels[dst] = syms[:-1], syms[1:]
        edges.append((src, dst, (syms[-1], out)))
    cg = CodeGraph(automata.trim(LabeledGraph.of(edges)), labels, width)
    if len(_CODE_GRAPHS) > 4096:
        _CODE_GRAPHS.clear()
    _CODE_GRAPHS[c] = cg
    return cg


def image_presentation_1d(c: BlockCode) -> LabeledGraph:
    """Labeled graph presenting the image subshift."""
    cg = code_graph(c)
    return automata.trim(LabeledGraph.of((s, t, lab[1]) for s, t, lab in cg.graph.edges))


def image_subshift_1d(c: BlockCode, name: str | None = None) -> Sofic1d:
    return Sofic1d(image_presentation_1d(c), c.target.alphabet, name or f"image({c.name})")


@dataclass(frozen=True)
class SurjectivityResult:
    surjective: bool
    orphan: Optional[Pattern] = None

    def __bool__(self):
        return self.surjective


def is_surjective_1d(c: BlockCode) -> SurjectivityResult:
    """Decide surjectivity onto the target; a shortest orphan witnesses failure."""
    word = automata.difference_word(c.target.presentation(), image_presentation_1d(c), c.target.alphabet.symbols)
    if word is None:
        return SurjectivityResult(True)
    return SurjectivityResult(False, Pattern.word(word))


def has_preimage_1d(c: BlockCode, p: Pattern) -> bool:
    """Exhaustive preimage search over source words of length ``len(p) + width - 1``."""
    (lo,), (hi,) = c.neighborhood.bounding_box()
    width = hi - lo + 1
    from .subshift import globally_admissible_1d

    target = p.values
    for x in globally_admissible_1d(c.source, len(p) + width - 1):
        y = apply_to_pattern(c, x.translate((-lo,)))
        if y.values == target:
            return True
    return False


@dataclass(frozen=True)
class PreinjectivityResult:
    preinjective: bool
    witness: Optional[Tuple[Pattern, Pattern]] = None

    def __bool__(self):
        return self.preinjective


def _asymptotic_pairs(g: LabeledGraph, backward: bool) -> set:
    """Vertex pairs joined by infinite (backward or forward) paths with equal input labels."""
    succ: Dict[tuple, set] = {}
    pairs = [(u, v) for u in g.vertices for v in g.vertices]
    for u, v in pairs:
        nxt = set()
        for e in g.out[u]:
            for f in g.out[v]:
                if e[2][0] == f[2][0]:
                    nxt.add((e[1], f[1]))
        succ[(u, v)] = nxt
    alive = set(pairs)
    while True:
        if backward:
            has = set()
            for a in alive:
                has.update(b for b in succ[a] if b in alive)
        else:
            has = {a for a in alive if any(b in alive for b in succ[a])}
        keep = alive & has
        if keep == alive:
            return alive
        alive = keep


def is_preinjective_1d(c: BlockCode) -> PreinjectivityResult:
    """Decide pre-injectivity via a diamond search in the pair graph.

    A diamond is a pair of finite paths with equal outputs, starting from a pair of
    vertices that are left-asymptotic with equal input labels, ending in a pair that
    is right-asymptotic with equal remembered labels, and differing in some input
    symbol. Such a diamond exists iff two distinct almost-equal configurations have
    the same image. The witness returned is a shortest one.
    """
    cg = code_graph(c)
    g = cg.graph
    left = _asymptotic_pairs(g, backward=True)
    right = {(u, v) for (u, v) in _asymptotic_pairs(g, backward=False)
             if cg.window_labels[u] == cg.window_labels[v]}

    def key(pair):
        return (cg.window_labels[pair[0]], repr(pair))

    starts = sorted(left, key=key)
    out_sorted = {v: sorted(g.out[v], key=lambda e: repr(e[2])) for v in g.vertices}
    parent: Dict[tuple, Optional[tuple]] = {}
    queue = deque()
    for u, v in starts:
        s = (u, v, False)
        parent[s] = None
        queue.append(s)
    goal = None
    while queue and goal is None:
        state = queue.popleft()
        u, v, flag = state
        for e in out_sorted[u]:
            for f in out_sorted[v]:
                if e[2][1] != f[2][1]:
                    continue
                nflag = flag or e[2][0] != f[2][0]
                ns = (e[1], f[1], nflag)
                if ns in parent:
                    continue
                parent[ns] = (state, e[2][0], f[2][0])
                if nflag and (e[1], f[1]) in right:
                    goal = ns
                    break
                queue.append(ns)
            if goal is not None:
                break
    if goal is None:
        return PreinjectivityResult(True)
    xs, ys = [], []
    s = goal
    while parent[s] is not None:
        s, a, b = parent[s]
        xs.append(a)
        ys.append(b)
    head = cg.window_labels[s[0]]
    x = head + tuple(reversed(xs))
    y = head + tuple(reversed(ys))
    p, q = sorted((Pattern.word(x), Pattern.word(y)))
    return PreinjectivityResult(False, (p, q))


def verify_me_pair(c: BlockCode, p: Pattern, q: Pattern, collar: Shape | None = None) -> bool:
    """Distinct, equal on the collar (default: ``width-1`` cells at each end in 1-D),
    and equal images."""
    if p.support != q.support or p == q:
        return False
    if collar is None:
        if c.dim != 1:
            raise ValueError("collar required outside dimension 1")
        (lo,), (hi,) = c.neighborhood.bounding_box()
        k = hi - lo
        cells = p.cells[:k] + p.cells[len(p.cells) - k:] if k else ()
        collar = Shape.of(cells, 1) if cells else Shape.empty(1)
    if any(p[x] != q[x] for x in collar):
        return False
    return apply_to_pattern(c, p) == apply_to_pattern(c, q)


@dataclass(frozen=True)
class NotFoundUpTo:
    bound: int

    def to_json(self):
        return {"verdict": "NotFoundUpTo", "bound": self.bound}


@dataclass(frozen=True)
class MEWitness:
    support: Shape
    collar: Shape
    p: Pattern
    q: Pattern

    def to_json(self):
        return {"verdict": "Witness", "support": self.support.to_json(), "collar": self.collar.to_json(),
                "p": self.p.to_json(), "q": self.q.to_json()}


def _source_window(c: BlockCode) -> Shape:
    if isinstance(c.source, Sft):
        return c.source.spec.window
    return Shape(((0,) * c.dim,), c.dim)


def _me_region(c: BlockCode, f: Shape) -> Tuple[Region, Shape, Shape]:
    nb = c.neighborhood
    omega = shape_sum(shape_sum(nb, nb.negate()), _source_window(c))
    collar = boundary_shape(f, omega)
    region_shape = f | collar
    cells = list(region_shape.points)
    inside = set(f.points)
    syms = c.source.alphabet.symbols
    domains = [tuple(itertools.product(syms, syms)) if x in inside else tuple((a, a) for a in syms) for x in cells]
    constraints = []
    for win, check in _rule_constraints(c.source.rules(), cells):
        constraints.append((win, lambda vals, check=check: check(tuple(a for a, _ in vals)) and check(tuple(b for _, b in vals))))
    rule = c.rule
    for g in _output_support(c, region_shape):
        win = tuple(add(g, s) for s in nb)
        constraints.append((win, lambda vals: rule(tuple(a for a, _ in vals)) == rule(tuple(b for _, b in vals))))
    marked = [x in inside for x in cells]
    region = Region(cells, domains, constraints, marker=lambda i, v: marked[i] and v[0] != v[1])
    return region, region_shape, collar


def bounded_me_search(c: BlockCode, max_support: int, budget: Budget | None = None):
    """Search rectangles inside ``box(max_support)`` (up to translation) for a
    mutually erasable pair: distinct on the rectangle, equal on its collar
    ``boundary_shape(f, S - S + W)``, locally admissible and with equal images.

    ``W`` is the source window, so every source constraint touching the
    rectangle is checked for both patterns.

    Returns the smallest witness found, :class:`NotFoundUpTo` or
    :class:`Inconclusive` when the budget runs out.
    """
    if c.dim not in (1, 2):
        raise DimensionError("bounded search supports dimensions 1 and 2")
    budget = budget or default_budget()
    side = 2 * max_support + 1
    if c.dim == 1:
        shapes = [interval(0, k - 1) for k in range(1, side + 1)]
    else:
        shapes = sorted((rect((0, 0), (a - 1, b - 1)) for a in range(1, side + 1) for b in range(1, side + 1)),
                        key=lambda s: (len(s), s.points))
    try:
        # any witness on a smaller rectangle also lives on the largest one
        if _me_region(c, shapes[-1])[0].find(require_mark=True, budget=budget) is None:
            return NotFoundUpTo(max_support)
        for f in shapes:
            region, region_shape, collar = _me_region(c, f)
            sol = region.find(require_mark=True, budget=budget)
            if sol is not None:
                p = Pattern(tuple(region.cells), tuple(a for a, _ in sol))
                q = Pattern(tuple(region.cells), tuple(b for _, b in sol))
                p, q = sorted((p, q))
                return MEWitness(f, collar, p, q)
    except BudgetExceeded as exc:
        return Inconclusive(str(exc))
    raise AssertionError("largest support had a witness but no support produced one")


@dataclass
class BoundedToOneReport:
    k_estimate: Optional[int]
    unbounded: bool
    rows: List[dict]
    violations: List[Pattern]

    def to_json(self):
        return {"K_estimate": self.k_estimate, "unbounded": self.unbounded, "rows": self.rows,
                "violations": [v.to_json() for v in self.violations]}


def _fiber_count(cg: CodeGraph, y: tuple) -> Optional[int]:
    """Number of source paths over the periodic point ``y^inf`` (None if infinite)."""
    q = len(y)
    g = cg.graph
    edges = [((s, i), (t, (i + 1) % q), lab) for s, t, lab in g.edges for i in range(q) if lab[1] == y[i]]
    fiber = automata.trim(LabeledGraph.of(edges))
    if not fiber.vertices:
        return 0
    if any(len(fiber.out[v]) != 1 for v in fiber.vertices):
        return None
    indeg: Dict[Hashable, int] = {}
    for s, t, _ in fiber.edges:
        indeg[t] = indeg.get(t, 0) + 1
    if any(indeg[v] != 1 for v in fiber.vertices):
        return None
    return sum(1 for (v, i) in fiber.vertices if i == 0)


def _periodic_preimages(cg: CodeGraph, y: tuple) -> int:
    g = cg.graph
    total = 0
    for v in g.vertices:
        layer = {v: 1}
        for a in y:
            nxt: Dict[Hashable, int] = {}
            for u, cnt in layer.items():
                for e in g.out[u]:
                    if e[2][1] == a:
                        nxt[e[1]] = nxt.get(e[1], 0) + cnt
            layer = nxt
        total += layer.get(v, 0)
    return total


def bounded_to_one_check(c: BlockCode, period_bound: int) -> BoundedToOneReport:
    """Preimage counts of every target periodic point with period at most ``period_bound``.

    ``preimages`` counts all source configurations over the point (None when the
    fiber is infinite); ``periodic_preimages`` counts those with the same period.
    Counts are of source presentation paths, exact for full shifts and SFTs.
    """
    if c.dim != 1:
        raise DimensionError("bounded-to-one check runs in dimension 1")
    cg = code_graph(c)
    tgt = c.target.presentation()
    rows, violations = [], []
    k = 0
    unbounded = False
    for q in range(1, period_bound + 1):
        worst = 0
        worst_periodic = 0
        for y in automata.periodic_words(tgt, q, c.target.alphabet.symbols):
            n = _fiber_count(cg, y)
            worst_periodic = max(worst_periodic, _periodic_preimages(cg, y))
            if n is None:
                unbounded = True
                violations.append(Pattern.word(y))
                worst = None
            elif worst is not None:
                worst = max(worst, n)
        if worst is not None:
            k = max(k, worst)
        rows.append({"period": q, "max_preimages": worst, "max_periodic_preimages": worst_periodic})
    return BoundedToOneReport(None if unbounded else k, unbounded, rows, violations)


# ---------------------------------------------------------------- standard codes


def identity_code(s: Subshift) -> BlockCode:
    nb = Shape(((0,) * s.dim,), s.dim)
    return block_code(LocalRule.from_function(nb, lambda x: x[0], s.alphabet), s, s, f"identity({s.name})", check=False)


def shift_code(s: Subshift) -> BlockCode:
    """``x -> x(1)`` (shift by one along the first axis)."""
    e1 = (1,) + (0,) * (s.dim - 1)
    nb = Shape((e1,), s.dim)
    return block_code(LocalRule.from_function(nb, lambda x: x[0], s.alphabet), s, s, f"shift({s.name})", check=False)


def constant_code(s: Subshift, symbol, target: Subshift | None = None) -> BlockCode:
    target = target or s
    nb = Shape(((0,) * s.dim,), s.dim)
    rule = LocalRule.from_function(nb, lambda x: symbol, s.alphabet, target.alphabet)
    return block_code(rule, s, target, f"constant-{symbol}({s.name})")


def xor_code(s: Subshift | None = None, target: Subshift | None = None, name: str = "xor") -> BlockCode:
    """``x -> x(0) xor x(1)``."""
    s = s or full_shift(2)
    return block_code(LocalRule.from_function(interval(0, 1), lambda x: x[0] ^ x[1], s.alphabet), s, target or full_shift(2), name)


def majority_code() -> BlockCode:
    return block_code(LocalRule.from_function(interval(-1, 1), lambda x: int(sum(x) >= 2), Alphabet((0, 1))),
                      full_shift(2), full_shift(2), "majority")


def golden_mean_to_even() -> BlockCode:
    from .subshift import even_shift

    return xor_code(golden_mean(), even_shift(), "golden-mean-to-even")


def ledrappier_xor_code() -> BlockCode:
    """``x -> x(0,0) + x(1,0) + x(0,1)`` on the full binary shift of Z^2."""
    full2 = full_shift(2, dim=2)
    nb = Shape.of([(0, 0), (1, 0), (0, 1)])
    rule = LocalRule.from_function(nb, lambda x: x[0] ^ x[1] ^ x[2], full2.alphabet)
    return block_code(rule, full2, full2, "ledrappier-xor", check=False)
