"""Topological entropy of subshifts by pattern counting on Følner windows."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import List

from . import automata
from .blockcode import BlockCode, image_presentation_1d
from .budget import Budget, BudgetExceeded, default_budget
from .lattice import DimensionError, Shape, box, cube
from .subshift import (PreconditionError, Sofic1d, Subshift, check_delta_irreducible,
                       pattern_count)

MODES = ("local", "global1d", "toroidal")
SCHEDULES = ("box", "cube")


class Empty:
    """Entropy of the empty subshift (minus infinity)."""

    value = float("-inf")

    def __repr__(self) -> str:
        return "Empty"

    def to_json(self):
        return "Empty"


EMPTY = Empty()


def _log_ratio(count: int, size: int) -> float:
    """``ln(count) / size``, exact when ``count`` is a perfect ``size``-th power."""
    if count <= 0:
        return float("-inf")
    root = round(count ** (1.0 / size)) if count < 2 ** 1000 else None
    if root is not None and root ** size == count:
        return math.log(root)
    return math.log(count) / size


@dataclass
class EntropyRow:
    n: int
    size: int
    count: int

    @property
    def estimate(self) -> float:
        return _log_ratio(self.count, self.size)


@dataclass
class EntropyTable:
    system: str
    mode: str
    schedule: str
    rows: List[EntropyRow] = field(default_factory=list)
    tag: str = "exact"
    truncated: bool = False
    note: str = ""

    @property
    def estimates(self) -> List[float]:
        return [r.estimate for r in self.rows]

    def to_json(self) -> dict:
        return {
            "system": self.system, "mode": self.mode, "schedule": self.schedule, "tag": self.tag,
            "truncated": self.truncated, "note": self.note,
            "rows": [{"n": r.n, "size": r.size, "count": str(r.count), "estimate": round(r.estimate, 6)}
                     for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "size", "count", "estimate"])
        for r in self.rows:
            w.writerow([r.n, r.size, r.count, f"{r.estimate:.6f}"])
        return buf.getvalue()

    def plot_data(self) -> str:
        return "".join(f"{r.n} {r.estimate:.6f}\n" for r in self.rows)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _window(schedule: str, n: int, d: int) -> Shape:
    return box(n, d) if schedule == "box" else cube(n, d)


def _torus_count(s: Subshift, periods, budget: Budget) -> int:
    from .goe import periodic_point_count

    return periodic_point_count(s, periods, budget)


def entropy_estimate(s: Subshift, n_max: int, mode: str = "local", schedule: str = "box",
                     budget: Budget | None = None) -> EntropyTable:
    """Rows ``ln(count(window_n)) / |window_n|`` for ``n = 1..n_max``.

    ``schedule`` is ``box`` (``[-n, n]^d``) or ``cube`` (``[0, n)^d``). Mode
    ``toroidal`` counts points with period the window side in every direction.
    Counts that may exceed the true pattern count are tagged ``upper-bound``.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if mode == "global1d" and s.dim != 1:
        raise DimensionError("global1d mode requires dimension 1")
    budget = budget or default_budget()
    if mode == "toroidal":
        tag = "periodic"
    elif mode == "global1d" or isinstance(s, Sofic1d) or s.local_is_global_on_rectangles:
        tag = "exact"
    else:
        tag = "upper-bound"
    table = EntropyTable(s.name, mode, schedule, tag=tag)
    for n in range(1, n_max + 1):
        f = _window(schedule, n, s.dim)
        try:
            if mode == "toroidal":
                side = 2 * n + 1 if schedule == "box" else n
                count = _torus_count(s, (side,) * s.dim, budget)
            else:
                count = pattern_count(s, f, mode, budget)
        except BudgetExceeded as exc:
            table.truncated = True
            table.note = str(exc)
            break
        table.rows.append(EntropyRow(n, len(f), count))
    return table


def entropy_exact_1d(s: Subshift):
    """ln of the Perron root of a right-resolving presentation; ``EMPTY`` if empty."""
    if s.dim != 1:
        raise DimensionError("exact entropy is computed in dimension 1")
    g = s.presentation()
    if not g.vertices:
        return EMPTY
    rho = automata.spectral_radius(automata.adjacency_matrix(automata.deterministic_graph(g)))
    return math.log(rho)


@dataclass
class MonotonicityReport:
    sigma: EntropyTable
    psi: EntropyTable
    gaps: List[float]
    irreducibility: object

    @property
    def holds(self) -> bool:
        return all(g > 0 for g in self.gaps)

    def to_json(self):
        return {"sigma": self.sigma.to_json(), "psi": self.psi.to_json(),
                "gaps": [round(g, 6) for g in self.gaps], "holds": self.holds,
                "irreducibility": self.irreducibility.to_json()}


def strict_monotonicity_probe(sigma: Subshift, psi: Subshift, n: int, delta: Shape | None = None,
                              irreducibility_bound: int = 4) -> MonotonicityReport:
    """Compare entropy tables of a system and a proper subsystem (dimension 1).

    Containment is checked exactly on languages; equal languages are rejected.
    """
    if sigma.dim != 1 or psi.dim != 1:
        raise DimensionError("the monotonicity probe runs in dimension 1")
    g_sigma, g_psi = sigma.presentation(), psi.presentation()
    syms = sigma.alphabet.symbols
    outside = automata.difference_word(g_psi, g_sigma, tuple(dict.fromkeys(syms + psi.alphabet.symbols)))
    if outside is not None:
        raise PreconditionError(f"{psi.name} is not a subsystem of {sigma.name}: word {outside}")
    if automata.difference_word(g_sigma, g_psi, syms) is None:
        raise PreconditionError(f"{psi.name} equals {sigma.name}; containment is not strict")
    delta = delta if delta is not None else box(1)
    irr = check_delta_irreducible(sigma, delta, irreducibility_bound)
    t_sigma = entropy_estimate(sigma, n, "global1d")
    t_psi = entropy_estimate(psi, n, "global1d")
    gaps = [a - b for a, b in zip(t_sigma.estimates, t_psi.estimates)]
    return MonotonicityReport(t_sigma, t_psi, gaps, irr)


@dataclass
class FactorEntropyReport:
    rows: List[dict]
    source_entropy: float
    image_entropy: float

    @property
    def holds(self) -> bool:
        return all(r["ok"] for r in self.rows) and self.image_entropy <= self.source_entropy + 1e-9

    def to_json(self):
        return {"rows": self.rows, "source_entropy": round(self.source_entropy, 6),
                "image_entropy": round(self.image_entropy, 6), "holds": self.holds}


def factor_entropy_check(c: BlockCode, n: int) -> FactorEntropyReport:
    """Image word counts against source word counts on the enlarged window.

    A length-``k`` image word is determined by a source word of length
    ``k + width - 1``, so that is the count it is compared with.
    """
    if c.dim != 1:
        raise DimensionError("factor entropy check runs in dimension 1")
    (lo,), (hi,) = c.neighborhood.bounding_box()
    width = hi - lo + 1
    img = image_presentation_1d(c)
    src = c.source.presentation()
    rows = []
    for k in range(1, n + 1):
        ci = automata.count_words(img, k)
        cs = automata.count_words(src, k + width - 1)
        rows.append({"k": k, "image_count": ci, "source_count": cs, "ok": ci <= cs})
    h_src = entropy_exact_1d(c.source)
    h_img = entropy_exact_1d(Sofic1d(img, c.target.alphabet, "image"))
    h_src = h_src.value if isinstance(h_src, Empty) else h_src
    h_img = h_img.value if isinstance(h_img, Empty) else h_img
    return FactorEntropyReport(rows, h_src, h_img)
