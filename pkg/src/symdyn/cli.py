"""Command-line front end: ``symdyn <command> ...`` writes a JSON report.

The report body is deterministic; wall time lives in a separate ``envelope``
field. Exit status is 0 whenever a verdict was reached (negative ones included),
2 for usage and input errors, 3 when a budget ran out.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Any, List, Optional

from . import __version__, catalog
from .blockcode import BlockCode, block_code, bounded_to_one_check, eca_rule
from .budget import Budget, BudgetExceeded, PROFILES, default_budget
from .entropy import MODES, SCHEDULES, entropy_estimate, factor_entropy_check
from .goe import (decide, eca_codes, even_shift_moore_search, goe_consistency_suite, periodic_points,
                  surjunctivity_check)
from .homoclinic import (DescribedConfig, class_census, ledrappier_finite_support_kernel, phi_n_family,
                         wz_family)
from .io import ingest_rule, ingest_system
from .lattice import Shape, box, interval, rect
from .pattern import Pattern
from .subshift import (Inconclusive, Sft, Subshift, check_delta_irreducible,
                       smallest_irreducibility_radius)

SCHEMA_VERSION = 1


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- argument parsing helpers


def parse_shape(text: str, dim: int = 1) -> Shape:
    """``a:b`` (interval), ``box:n``, ``rect:x0,y0:x1,y1`` or points separated by ``;``
    (coordinates by ``,``); in dimension 1 ``0,1`` lists the points 0 and 1."""
    text = text.strip()
    try:
        if text.startswith("box:"):
            return box(int(text[4:]), dim)
        if text.startswith("rect:"):
            lo, hi = text[5:].split(":")
            return rect(tuple(int(x) for x in lo.split(",")), tuple(int(x) for x in hi.split(",")))
        if dim == 1 and ":" in text:
            a, b = text.split(":")
            return interval(int(a), int(b))
        if dim == 1:
            return Shape.of([(int(x),) for x in text.replace(";", ",").split(",")], 1)
        pts = [tuple(int(x) for x in p.split(",")) for p in text.split(";")]
    except ValueError:
        raise UsageError(f"cannot parse shape {text!r}") from None
    if any(len(p) != dim for p in pts):
        raise UsageError(f"shape {text!r} does not have dimension {dim}")
    return Shape.of(pts, dim)


def parse_symbols(text: str) -> tuple:
    items = [x for x in text.replace(",", " ").split()] if ("," in text or " " in text) else list(text)
    return tuple(int(x) if x.lstrip("-").isdigit() else x for x in items)


def load_system(name: str) -> Subshift:
    if Path(name).suffix == ".json" or Path(name).exists():
        return ingest_system(name)
    return catalog.system(name)


def load_code(rule: Optional[str], code_id: Optional[str], source: Optional[str], target: Optional[str]) -> BlockCode:
    if code_id:
        return catalog.code(code_id)
    if not rule:
        raise UsageError("give --code or --rule")
    src = load_system(source or "full-binary")
    tgt = load_system(target) if target else src
    if rule.startswith("eca:"):
        n = int(rule[4:])
        r = eca_rule(n)
        name = rule
    elif rule in catalog.CODES:
        c = catalog.code(rule)
        r, name = c.rule, rule
    else:
        r, name = ingest_rule(rule), Path(rule).stem
    return block_code(r, src, tgt, name)


def base_config(args, dim: int) -> DescribedConfig:
    word = parse_symbols(args.base)
    if dim == 1:
        return DescribedConfig.periodic(word)
    if len(word) != 1:
        raise UsageError("in dimension 2 the base must be a single constant symbol")
    return DescribedConfig.constant(word[0], dim)


def _json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=str)


# ---------------------------------------------------------------- commands


def cmd_catalog(args, budget):
    if args.action == "list":
        return {"entries": catalog.listing()}
    if args.action == "show":
        if not args.id:
            raise UsageError("catalog show needs an id")
        return catalog.describe(args.id)
    return catalog.verify_all()


def cmd_entropy(args, budget):
    s = load_system(args.system)
    table = entropy_estimate(s, args.n, args.mode, args.schedule, budget)
    out = table.to_json()
    if args.format == "csv":
        return {"_text": table.to_csv(), "_truncated": table.truncated}
    if args.format == "plot":
        return {"_text": table.plot_data(), "_truncated": table.truncated}
    out["_truncated"] = table.truncated
    return out


def cmd_irreducible(args, budget):
    s = load_system(args.system)
    out = {"system": s.name, "bound": args.bound}
    if args.delta:
        delta = parse_shape(args.delta, s.dim)
        verdict = check_delta_irreducible(s, delta, args.bound, budget)
        out.update({"delta": delta.to_json(), "verdict": verdict.to_json()})
        out["_inconclusive"] = isinstance(verdict, Inconclusive)
    else:
        out["smallest_radius"] = smallest_irreducibility_radius(s, args.bound, args.max_radius, budget)
        out["max_radius"] = args.max_radius
    return out


def cmd_decide(args, budget):
    c = load_code(args.rule, args.code, args.source, args.target)
    scope = "exact" if c.dim == 1 else "bounded"
    v = decide(c, scope, args.bound, budget, hypotheses=catalog.MYHILL_HYPOTHESES.get(c.name))
    out = v.to_json()
    if c.dim == 1 and args.bounded_to_one:
        out["bounded_to_one"] = bounded_to_one_check(c, args.bounded_to_one).to_json()
    if c.dim == 1 and args.factor_entropy:
        out["factor_entropy"] = factor_entropy_check(c, args.factor_entropy).to_json()
    out["_inconclusive"] = any(w.get("kind") == "inconclusive" for w in v.witnesses)
    return out


def cmd_homoclinic(args, budget):
    if args.action == "ledrappier-kernel":
        rows = [{"n": n, "dimension": ledrappier_finite_support_kernel(n),
                 "without_relations": ledrappier_finite_support_kernel(n, relations=False)}
                for n in range(1, args.n + 1)]
        return {"rows": rows}
    s = load_system(args.system)
    base = base_config(args, s.dim)
    if args.action == "census":
        f = parse_shape(args.window, s.dim)
        delta = parse_shape(args.delta, s.dim)
        return class_census(s, base, f, delta, budget=budget).to_json()
    if args.action == "phi":
        delta = parse_shape(args.delta, s.dim)
        return phi_n_family(s, base, args.n, delta, budget=budget).to_json()
    # wz
    if not isinstance(s, Sft):
        raise UsageError("the tiling family needs a subshift of finite type")
    e = parse_shape(args.support, s.dim)
    u0 = Pattern.on(e, parse_symbols(args.u0))
    u1 = Pattern.on(e, parse_symbols(args.u1))
    f = parse_shape(args.window, s.dim)
    return wz_family(s, u0, u1, base, f, budget).to_json()


def cmd_periodic(args, budget):
    s = load_system(args.system)
    periods = tuple(int(x) for x in args.periods.split(","))
    pts = periodic_points(s, periods, budget)
    return {"system": s.name, "periods": list(periods), "count": len(pts),
            "points": [list(p.values) for p in pts]}


def cmd_surjunctive(args, budget):
    c = load_code(args.rule, args.code, args.source, args.target)
    return surjunctivity_check(c, args.p_max, budget).to_json()


def cmd_goe_suite(args, budget):
    if args.family == "eca":
        return goe_consistency_suite(eca_codes(), "exact")
    if args.family == "even-shift":
        return even_shift_moore_search(args.max_width, budget)
    codes = [catalog.code(e.id) for e in catalog._CODES]
    if args.scope == "exact":
        codes = [c for c in codes if c.dim == 1]
    return goe_consistency_suite(codes, args.scope, args.bound, catalog.MYHILL_HYPOTHESES)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symdyn", description="Finite probes of subshifts and the block codes between them.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--budget", choices=sorted(PROFILES), help="budget profile (default from SYMDYN_BUDGET or 'default')")
    p.add_argument("--max-seconds", type=float, help="override the wall-clock cap")
    p.add_argument("--no-envelope", action="store_true", help="omit the timing envelope")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list, show or verify catalog entries")
    c.add_argument("action", choices=["list", "show", "verify"])
    c.add_argument("id", nargs="?")
    c.set_defaults(func=cmd_catalog)

    e = sub.add_parser("entropy", help="entropy table by pattern counting")
    e.add_argument("--system", required=True)
    e.add_argument("--mode", choices=MODES, default="local")
    e.add_argument("--schedule", choices=SCHEDULES, default="box")
    e.add_argument("--n", type=int, default=8)
    e.add_argument("--format", choices=["json", "csv", "plot"], default="json")
    e.set_defaults(func=cmd_entropy)

    i = sub.add_parser("irreducible", help="bounded Delta-irreducibility check")
    i.add_argument("--system", required=True)
    i.add_argument("--delta", help="shape, e.g. '0,1' or 'box:1'; omit to search the smallest box radius")
    i.add_argument("--bound", type=int, default=4)
    i.add_argument("--max-radius", type=int, default=3)
    i.set_defaults(func=cmd_irreducible)

    for name, func, helptext in (("decide", cmd_decide, "surjectivity and pre-injectivity of a code"),
                                 ("surjunctive", cmd_surjunctive, "injectivity on periodic points")):
        d = sub.add_parser(name, help=helptext)
        d.add_argument("--code", help="catalog code id or eca:<n>")
        d.add_argument("--rule", help="eca:<n>, catalog code id or rule file")
        d.add_argument("--source", help="system id or file (default full-binary)")
        d.add_argument("--target", help="system id or file (default: the source)")
        if name == "decide":
            d.add_argument("--bound", type=int, default=1, help="search bound for dimension 2")
            d.add_argument("--bounded-to-one", type=int, metavar="P", help="also count preimages of periodic points up to period P")
            d.add_argument("--factor-entropy", type=int, metavar="N", help="also compare word counts up to length N")
        else:
            d.add_argument("--p-max", type=int, default=4)
        d.set_defaults(func=func)

    h = sub.add_parser("homoclinic", help="homoclinic class probes")
    h.add_argument("action", choices=["census", "ledrappier-kernel", "wz", "phi"])
    h.add_argument("--system", default="golden-mean")
    h.add_argument("--base", default="0", help="periodic background word (dimension 1) or constant symbol")
    h.add_argument("--window", default="0:3")
    h.add_argument("--delta", default="0")
    h.add_argument("--n", type=int, default=2)
    h.add_argument("--support", default="0", help="support E of the tiles (wz)")
    h.add_argument("--u0", default="0")
    h.add_argument("--u1", default="1")
    h.set_defaults(func=cmd_homoclinic)

    r = sub.add_parser("periodic", help="points fixed by a period lattice")
    r.add_argument("--system", required=True)
    r.add_argument("--periods", required=True, help="comma separated, one per dimension")
    r.set_defaults(func=cmd_periodic)

    g = sub.add_parser("goe-suite", help="Myhill/Moore consistency over a family of codes")
    g.add_argument("--family", choices=["eca", "catalog", "even-shift"], default="eca")
    g.add_argument("--scope", choices=["exact", "bounded"], default="exact")
    g.add_argument("--bound", type=int, default=1)
    g.add_argument("--max-width", type=int, default=4)
    g.set_defaults(func=cmd_goe_suite)
    return p


def _inputs(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "no_envelope")}


def run(argv: Optional[List[str]] = None) -> tuple:
    """Returns ``(exit status, output text)``."""
    return _run(build_parser().parse_args(argv))


def _run(args) -> tuple:
    budget = Budget.profile(args.budget) if args.budget else default_budget()
    if args.max_seconds is not None:
        budget.max_seconds = args.max_seconds
    started = time.perf_counter()
    status = 0
    try:
        outputs = args.func(args, budget)
    except BudgetExceeded as exc:
        return 3, _json({"error": "budget exceeded", "detail": str(exc)}) + "\n"
    except (ValueError, catalog.UnknownEntry, FileNotFoundError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return 2, _json({"error": type(exc).__name__, "detail": msg}) + "\n"
    inconclusive = outputs.pop("_inconclusive", False)
    truncated = outputs.pop("_truncated", False)
    if inconclusive or truncated:
        status = 3
    if "_text" in outputs:
        return status, outputs["_text"]
    report = {"experiment": args.command, "inputs": _inputs(args), "outputs": outputs,
              "version": __version__, "schema": SCHEMA_VERSION, "seed": None}
    body = _json(report)
    doc = {"report": report}
    if not args.no_envelope:
        doc["envelope"] = {"wall_time_seconds": round(time.perf_counter() - started, 3),
                           "report_sha256": hashlib.sha256(body.encode()).hexdigest()}
    return status, _json(doc) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    status, text = _run(args)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
