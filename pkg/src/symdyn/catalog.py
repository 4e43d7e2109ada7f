"""Named systems and codes available offline, with self-checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Dict, List

from . import automata
from .automata import LabeledGraph
from .blockcode import (BlockCode, block_code, constant_code, eca_rule, golden_mean_to_even, identity_code,
                        is_preinjective_1d, is_surjective_1d, ledrappier_xor_code, majority_code, shift_code,
                        xor_code)
from .entropy import entropy_exact_1d
from .lattice import box, cube, interval
from .pattern import Alphabet
from .subshift import (Ledrappier, Sft, Sofic1d, Subshift, even_shift, full_shift, globally_admissible_1d,
                       golden_mean, locally_admissible, pattern_count, sft_from_words)


def constant_subshift(k: int = 2) -> Sft:
    """The ``k`` constant configurations: neighbors must be equal."""
    symbols = tuple(range(k))
    forbidden = [(a, b) for a in symbols for b in symbols if a != b]
    return sft_from_words(symbols, forbidden, f"constant-{k}")


def at_most_one_one() -> Sofic1d:
    """Binary configurations with at most one symbol 1."""
    g = LabeledGraph.of([("before", "before", 0), ("before", "after", 1), ("after", "after", 0)])
    return Sofic1d(g, Alphabet((0, 1)), "at-most-one-1")


def zero_point() -> Sft:
    """The single configuration of zeros inside the binary full shift."""
    return sft_from_words((0, 1), [(1,)], "zero-point")


def aa_ab() -> Sft:
    return sft_from_words(("a", "b"), [("a", "a"), ("a", "b")], "aa-ab")


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    kind: str
    build: Callable
    note: str


_SYSTEMS: List[CatalogEntry] = [
    CatalogEntry("full-binary", "system", lambda: full_shift(2, name="full-binary"), "all binary sequences"),
    CatalogEntry("full-ternary", "system", lambda: full_shift(3, name="full-ternary"), "all ternary sequences"),
    CatalogEntry("full-binary-2d", "system", lambda: full_shift(2, dim=2, name="full-binary-2d"), "all binary arrays on Z^2"),
    CatalogEntry("golden-mean", "system", golden_mean, "binary sequences without 11; strongly irreducible SFT"),
    CatalogEntry("even-shift", "system", even_shift, "runs of 1s between 0s have even length; sofic, not of finite type"),
    CatalogEntry("constant-2", "system", lambda: constant_subshift(2), "the two constant sequences"),
    CatalogEntry("constant-3", "system", lambda: constant_subshift(3), "the three constant sequences"),
    CatalogEntry("at-most-one-1", "system", at_most_one_one, "at most one 1; one homoclinic class, not mixing"),
    CatalogEntry("ledrappier", "system", Ledrappier, "x(m,n)+x(m+1,n)+x(m,n+1)=0 mod 2 on Z^2"),
    CatalogEntry("zero-point", "system", zero_point, "only the all-zero sequence"),
    CatalogEntry("aa-ab", "system", aa_ab, "forbids aa and ab; locally admissible 'a' never extends"),
]

_CODES: List[CatalogEntry] = [
    CatalogEntry("identity-full-binary", "code", lambda: identity_code(full_shift(2, name="full-binary")), "identity"),
    CatalogEntry("identity-golden-mean", "code", lambda: identity_code(golden_mean()), "identity"),
    CatalogEntry("identity-even-shift", "code", lambda: identity_code(even_shift()), "identity"),
    CatalogEntry("identity-ledrappier", "code", lambda: identity_code(Ledrappier()), "identity"),
    CatalogEntry("shift-golden-mean", "code", lambda: shift_code(golden_mean()), "x -> x(1)"),
    CatalogEntry("xor", "code", xor_code, "x -> x(0)+x(1) mod 2 on the binary full shift"),
    CatalogEntry("majority", "code", majority_code, "majority of three neighbors; neither surjective nor pre-injective"),
    CatalogEntry("golden-mean-to-even", "code", golden_mean_to_even, "x -> x(0)+x(1) mod 2, two-to-one factor onto the even shift"),
    CatalogEntry("constant-zero-full", "code", lambda: constant_code(full_shift(2, name="full-binary"), 0), "everything to zero"),
    CatalogEntry("constant-zero-constant", "code", lambda: constant_code(constant_subshift(2), 0),
                 "pre-injective and not surjective: the constant system lacks the Myhill property"),
    CatalogEntry("constant-zero-ledrappier", "code", lambda: constant_code(Ledrappier(), 0),
                 "pre-injective (trivial classes) and not surjective on a mixing SFT"),
    CatalogEntry("ledrappier-xor", "code", ledrappier_xor_code, "x -> x(0,0)+x(1,0)+x(0,1) on the binary full shift of Z^2"),
]

# sources known to fail the hypotheses of the Myhill direction
MYHILL_HYPOTHESES = {"constant-zero-constant": False, "constant-zero-ledrappier": False}

SYSTEMS: Dict[str, CatalogEntry] = {e.id: e for e in _SYSTEMS}
CODES: Dict[str, CatalogEntry] = {e.id: e for e in _CODES}


class UnknownEntry(KeyError):
    pass


def system(name: str) -> Subshift:
    try:
        return SYSTEMS[name].build()
    except KeyError:
        raise UnknownEntry(f"unknown system id {name!r}") from None


def code(name: str) -> BlockCode:
    if name.startswith("eca:"):
        n = int(name[4:])
        full = full_shift(2, name="full-binary")
        return block_code(eca_rule(n), full, full, name, check=False)
    try:
        entry = CODES[name]
    except KeyError:
        raise UnknownEntry(f"unknown code id {name!r}") from None
    return replace(entry.build(), name=name)


def listing() -> List[dict]:
    out = [{"id": e.id, "kind": e.kind, "note": e.note} for e in _SYSTEMS + _CODES]
    out.append({"id": "eca:<0-255>", "kind": "code", "note": "elementary cellular automaton, Wolfram numbering"})
    return out


def describe(name: str) -> dict:
    if name in SYSTEMS:
        s = system(name)
        out = {"id": name, "kind": "system", "note": SYSTEMS[name].note, "dimension": s.dim,
               "alphabet": list(s.alphabet.symbols), "type": type(s).__name__}
        if isinstance(s, Sft):
            out["window"] = s.spec.window.to_json()
            out["allowed"] = [list(a) for a in sorted(s.spec.allowed, key=repr)]
        if s.dim == 1:
            g = s.presentation()
            out["presentation"] = {"vertices": [repr(v) for v in g.vertices],
                                   "edges": [[repr(a), repr(b), lab] for a, b, lab in g.edges]}
        return out
    c = code(name)
    return {"id": name, "kind": "code", "note": CODES[name].note if name in CODES else "elementary rule",
            "source": c.source.name, "target": c.target.name, "neighborhood": c.neighborhood.to_json(),
            "table": list(c.rule.outputs)}


def _verify_system(s: Subshift) -> List[str]:
    problems = []
    if s.dim == 1:
        g = s.presentation()
        if not g.is_essential():
            problems.append("presentation not essential")
        for n in range(1, 7):
            words = globally_admissible_1d(s, n)
            if len(words) != pattern_count(s, interval(0, n - 1), "global1d"):
                problems.append(f"global count mismatch at n={n}")
        h = entropy_exact_1d(s)
        rows = [math.log(max(pattern_count(s, box(n), "global1d"), 1)) / (2 * n + 1) for n in (4, 8)]
        if not isinstance(h, float) or any(r < h - 1e-9 for r in rows):
            problems.append("finite-window estimate below the exact entropy")
    else:
        for n in (1, 2, 3):
            f = cube(n, s.dim)
            if len(locally_admissible(s, f)) != pattern_count(s, f, "local"):
                problems.append(f"local count mismatch on cube({n})")
    return problems


def _verify_code(c: BlockCode) -> List[str]:
    problems = []
    try:
        block_code(c.rule, c.source, c.target, c.name, check=True)
    except ValueError as exc:
        problems.append(str(exc))
    if c.dim == 1:
        s = is_surjective_1d(c)
        p = is_preinjective_1d(c)
        if s.orphan is not None and automata.SubsetDFA(c.target.presentation()).accepts(s.orphan.values) is False:
            problems.append("orphan is not a target word")
        if p.witness is not None and p.witness[0] == p.witness[1]:
            problems.append("pre-injectivity witness is not a pair of distinct patterns")
    return problems


def verify_all() -> dict:
    results = []
    for e in _SYSTEMS:
        results.append({"id": e.id, "problems": _verify_system(e.build())})
    for e in _CODES:
        results.append({"id": e.id, "problems": _verify_code(code(e.id))})
    failures = sum(1 for r in results if r["problems"])
    return {"entries": results, "failures": failures}
