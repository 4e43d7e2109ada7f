"""Garden of Eden verdicts, with the periodic-point checks behind them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import automata, gf2
from .blockcode import (BlockCode, LocalRule, MEWitness, NotFoundUpTo, apply_to_pattern, block_code,
                        bounded_me_search, is_preinjective_1d, is_surjective_1d)
from .budget import Budget, BudgetExceeded, default_budget
from .lattice import DimensionError, box, interval, rect
from .pattern import Pattern
from .subshift import (Full, Inconclusive, Ledrappier, Sofic1d, Subshift, locally_admissible,
                       smallest_irreducibility_radius)


def _torus_cells(periods: Tuple[int, ...]) -> Tuple[tuple, ...]:
    return tuple(itertools.product(*(range(c) for c in periods)))


def _ledrappier_torus_rows(periods: Tuple[int, ...]) -> List[int]:
    cells = _torus_cells(periods)
    index = {p: i for i, p in enumerate(cells)}
    rows = []
    for m, n in cells:
        tri = [(m, n), ((m + 1) % periods[0], n), (m, (n + 1) % periods[1])]
        row = 0
        for q in tri:
            row ^= 1 << index[q]
        rows.append(row)
    return rows


def periodic_points(s: Subshift, periods: Sequence[int], budget: Budget | None = None) -> List[Pattern]:
    """Points fixed by ``c_1 Z x ... x c_d Z``, as patterns on ``[0,c_1) x ... x [0,c_d)``."""
    periods = tuple(int(c) for c in periods)
    if len(periods) != s.dim:
        raise DimensionError("one period per dimension required")
    if any(c < 1 for c in periods):
        raise ValueError("periods must be positive")
    if s.dim not in (1, 2):
        raise DimensionError("periodic points are computed in dimensions 1 and 2")
    budget = budget or default_budget()
    cells = _torus_cells(periods)
    budget.check_patterns(periodic_point_count(s, periods, budget))
    if isinstance(s, Full):
        return [Pattern(cells, v) for v in itertools.product(s.alphabet.symbols, repeat=len(cells))]
    if isinstance(s, Sofic1d):
        return [Pattern.word(w) for w in automata.periodic_words(s.presentation(), periods[0], s.alphabet.symbols)]
    if isinstance(s, Ledrappier):
        basis = gf2.kernel_basis(_ledrappier_torus_rows(periods), len(cells))
        return sorted(Pattern(cells, gf2.bits(x, len(cells))) for x in gf2.span(basis))
    return [Pattern(cells, v) for v in s.torus_region(periods).solutions()]


def periodic_point_count(s: Subshift, periods: Sequence[int], budget: Budget | None = None) -> int:
    periods = tuple(periods)
    size = 1
    for c in periods:
        size *= c
    if isinstance(s, Full):
        return len(s.alphabet) ** size
    if isinstance(s, Sofic1d):
        return len(automata.periodic_words(s.presentation(), periods[0], s.alphabet.symbols))
    if isinstance(s, Ledrappier):
        return 2 ** gf2.nullity(_ledrappier_torus_rows(periods), size)
    return s.torus_region(periods).count(budget)


def apply_periodic(c: BlockCode, p: Pattern, periods: Tuple[int, ...]) -> Pattern:
    """Image of the periodic point ``p`` (fundamental-domain pattern) under ``c``."""
    vals = []
    for g in p.cells:
        window = tuple(p[tuple((gi + si) % ci for gi, si, ci in zip(g, s, periods))] for s in c.neighborhood)
        vals.append(c.rule(window))
    return Pattern(p.cells, tuple(vals))


@dataclass
class Verdict:
    code: str
    surjective: Optional[bool] = None
    preinjective: Optional[bool] = None
    injective_on_periodic: Optional[bool] = None
    bounds: Dict[str, int] = field(default_factory=dict)
    witnesses: List[dict] = field(default_factory=list)
    consistency: Optional[str] = None

    def to_json(self) -> dict:
        return {"code": self.code, "surjective": self.surjective, "preinjective": self.preinjective,
                "injective_on_periodic": self.injective_on_periodic, "bounds": dict(sorted(self.bounds.items())),
                "witnesses": self.witnesses, "consistency": self.consistency}


def _period_vectors(d: int, p_max: int):
    return sorted(itertools.product(range(1, p_max + 1), repeat=d), key=lambda v: (sum(v), v))


def surjunctivity_check(c: BlockCode, p_max: int, budget: Budget | None = None) -> Verdict:
    """Apply ``c`` to every ``Fix(H)`` with periods up to ``p_max``.

    A collision is a ``NotInjective`` witness (one per period vector, smallest pair
    first). Where ``c`` is injective on ``Fix(H)`` the image must be all of
    ``Fix(H)``; that is asserted.
    """
    if c.source != c.target:
        raise ValueError("surjunctivity concerns self-maps (source = target)")
    if c.dim not in (1, 2):
        raise DimensionError("surjunctivity check supports dimensions 1 and 2")
    verdict = Verdict(c.name, bounds={"p_max": p_max})
    injective = True
    for periods in _period_vectors(c.dim, p_max):
        fixed = periodic_points(c.source, periods, budget)
        images: Dict[Pattern, Pattern] = {}
        collision = None
        for p in sorted(fixed):
            img = apply_periodic(c, p, periods)
            if img in images:
                pair = (images[img], p, img)
                if collision is None or pair[:2] < collision[:2]:
                    collision = pair
            else:
                images[img] = p
        if collision is not None:
            injective = False
            a, b, img = collision
            verdict.witnesses.append({"kind": "NotInjective", "periods": list(periods),
                                      "p": a.to_json(), "q": b.to_json(), "image": img.to_json()})
        else:
            fixed_set = set(fixed)
            if set(images) != fixed_set:
                raise AssertionError(f"injective on Fix{periods} but not onto it")
    verdict.injective_on_periodic = injective
    if injective:
        verdict.witnesses.append({"kind": "SurjectiveOnPeriodic", "p_max": p_max})
    return verdict


def collision_witness(v: Verdict, periods: Sequence[int]) -> Optional[Tuple[tuple, tuple]]:
    """The value tuples of the collision recorded for ``periods``, if any."""
    for w in v.witnesses:
        if w["kind"] == "NotInjective" and w["periods"] == list(periods):
            return tuple(w["p"]["values"]), tuple(w["q"]["values"])
    return None


# ---------------------------------------------------------------- bounded 2-D surjectivity


def bounded_orphan_search(c: BlockCode, max_radius: int, budget: Budget | None = None):
    """Look for a target pattern on ``box(r)``, ``r <= max_radius``, with no source preimage.

    Preimages are taken among locally admissible source patterns on the window
    ``box(r) - S`` (the inputs that determine ``box(r)``); this is exact for the
    full shift and for systems where local admissibility on rectangles is global.
    """
    budget = budget or default_budget()
    (lo, hi) = c.neighborhood.bounding_box()
    try:
        for r in range(max_radius + 1):
            out = box(r, c.dim)
            src_lo = tuple(-r + l for l in lo)
            src_hi = tuple(r + h for h in hi)
            images = {apply_to_pattern(c, p, out) for p in locally_admissible(c.source, rect(src_lo, src_hi), budget)}
            for q in locally_admissible(c.target, out, budget):
                if q not in images:
                    return q
    except BudgetExceeded as exc:
        return Inconclusive(str(exc))
    return NotFoundUpTo(max_radius)


# ---------------------------------------------------------------- consistency suite


def _hypotheses_1d(s: Subshift) -> bool:
    """Bounded strong-irreducibility test (radius at most 3, shapes up to length 6)."""
    if isinstance(s, Full):
        return True
    return smallest_irreducibility_radius(s, 6, 3) is not None


def decide(c: BlockCode, scope: str = "exact", bound: int = 2, budget: Budget | None = None,
           hypotheses: Optional[bool] = None) -> Verdict:
    """Both sides of the Garden of Eden equivalence for one code, with consistency flag.

    ``hypotheses`` states whether the source satisfies the Myhill hypotheses
    (strong irreducibility or a factor of one); it is tested when omitted in d=1.
    """
    v = Verdict(c.name)
    if c.dim == 1 and scope == "exact":
        s = is_surjective_1d(c)
        p = is_preinjective_1d(c)
        v.surjective, v.preinjective = s.surjective, p.preinjective
        if s.orphan is not None:
            v.witnesses.append({"kind": "orphan", "pattern": s.orphan.to_json()})
        if p.witness is not None:
            v.witnesses.append({"kind": "mutually-erasable", "p": p.witness[0].to_json(), "q": p.witness[1].to_json()})
    else:
        orphan = bounded_orphan_search(c, bound, budget)
        me = bounded_me_search(c, bound, budget)
        v.bounds = {"orphan_radius": bound, "me_support": bound}
        if isinstance(orphan, Pattern):
            v.surjective = False
            v.witnesses.append({"kind": "orphan", "pattern": orphan.to_json()})
        if isinstance(me, MEWitness):
            v.preinjective = False
            v.witnesses.append({"kind": "mutually-erasable", "p": me.p.to_json(), "q": me.q.to_json()})
        if isinstance(orphan, Inconclusive) or isinstance(me, Inconclusive):
            v.witnesses.append({"kind": "inconclusive"})
    v.consistency = _consistency(c, v, hypotheses)
    return v


def _consistency(c: BlockCode, v: Verdict, hypotheses: Optional[bool]) -> str:
    """Exact scope: both sides decided. Bounded scope: only refutations are known,
    so a missing ME pair next to an orphan is consistent up to the bound unless the
    source is known to fail the Myhill hypotheses."""
    exact = not v.bounds
    if v.surjective is False and v.preinjective is not False:
        if hypotheses is None:
            hypotheses = _hypotheses_1d(c.source) if c.dim == 1 else True
        if not hypotheses:
            return "MYHILL-FAILURE-EXHIBIT"
        return "VIOLATION" if exact else "GOE-OK"
    if exact and v.surjective and not v.preinjective:
        return "VIOLATION" if isinstance(c.source, Full) else "MOORE-FAILURE-EXHIBIT"
    return "GOE-OK"


def goe_consistency_suite(codes: Sequence[BlockCode], scope: str = "exact", bound: int = 2,
                          hypotheses: Optional[Dict[str, bool]] = None) -> dict:
    hypotheses = hypotheses or {}
    verdicts = [decide(c, scope, bound, hypotheses=hypotheses.get(c.name)) for c in codes]
    counts: Dict[str, int] = {}
    for v in verdicts:
        counts[v.consistency] = counts.get(v.consistency, 0) + 1
    return {"scope": scope, "count": len(verdicts), "violations": counts.get("VIOLATION", 0),
            "consistency_counts": dict(sorted(counts.items())), "verdicts": [v.to_json() for v in verdicts]}


def eca_codes() -> List[BlockCode]:
    from .blockcode import eca_rule
    from .subshift import full_shift

    full = full_shift(2)
    return [block_code(eca_rule(r), full, full, f"eca:{r}", check=False) for r in range(256)]


# ---------------------------------------------------------------- even shift endomorphisms


def even_shift_moore_search(max_width: int = 4, budget: Budget | None = None) -> dict:
    """Search binary rules on windows ``[0, m)``, ``m <= max_width``, that map the even
    shift into itself, for a surjective code that is not pre-injective.

    Stops at the first find (smallest window, then lowest table index).
    """
    from .blockcode import image_presentation_1d
    from .pattern import Alphabet
    from .subshift import even_shift

    even = even_shift()
    target = even.presentation()
    examined = 0
    endomorphisms = 0
    budget = budget or default_budget()
    for m in range(1, max_width + 1):
        nb = interval(0, m - 1)
        for index in range(2 ** (2 ** m)):
            outputs = tuple((index >> i) & 1 for i in range(2 ** m))
            rule = LocalRule(nb, Alphabet((0, 1)), Alphabet((0, 1)), outputs)
            code = BlockCode(rule, even, even, f"even-endo:{m}:{index}")
            examined += 1
            if automata.difference_word(image_presentation_1d(code), target, (0, 1)) is not None:
                continue
            endomorphisms += 1
            if is_surjective_1d(code) and not is_preinjective_1d(code):
                wit = is_preinjective_1d(code).witness
                return {"found": True, "width": m, "table": list(outputs), "examined": examined,
                        "endomorphisms": endomorphisms, "code": code.name,
                        "witness": [wit[0].to_json(), wit[1].to_json()], "consistency": "MOORE-FAILURE-EXHIBIT"}
            budget.tick()
    return {"found": False, "max_width": max_width, "examined": examined, "endomorphisms": endomorphisms}
