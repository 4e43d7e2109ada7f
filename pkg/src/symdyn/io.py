"""Reading subshift and rule files (JSON).

SFT file::

    {"dimension": 1, "alphabet": [0, 1], "window": [[0], [1]], "forbidden": [[1, 1]]}

``forbidden``/``allowed`` entries are value lists in the window's sorted point
order, or ``{"support": [[...]], "values": [...]}`` objects (forbidden only).

Sofic file: ``{"alphabet": [...], "edges": [[from, to, label], ...]}``.

Rule file: ``{"neighborhood": [[...]], "table": [...], "alphabet": [...]}`` with an
optional ``"target_alphabet"``; the table follows the lexicographic input order.
"""
from __future__ import annotations

import itertools
import json
import warnings
from pathlib import Path
from typing import Any, List, Sequence

from .automata import LabeledGraph
from .blockcode import LocalRule
from .lattice import Shape
from .pattern import Alphabet, Pattern
from .subshift import Sft, SftSpec, Sofic1d, Subshift


class SpecError(ValueError):
    """Malformed input file; the message names the offending field."""


def _load(path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise SpecError(f"{path}: top level must be an object")
    return data


def _field(data: dict, name: str, kind, where: str):
    if name not in data:
        raise SpecError(f"{where}: missing field '{name}'")
    value = data[name]
    if not isinstance(value, kind):
        raise SpecError(f"{where}: field '{name}' has the wrong type")
    return value


def _symbol(v):
    return tuple(v) if isinstance(v, list) else v


def _points(raw, dim: int, where: str) -> List[tuple]:
    pts = []
    for i, p in enumerate(raw):
        if isinstance(p, int) and dim == 1:
            p = [p]
        if not isinstance(p, list) or len(p) != dim or not all(isinstance(x, int) for x in p):
            raise SpecError(f"{where}[{i}]: expected a point with {dim} integer coordinates")
        pts.append(tuple(p))
    return pts


def _alphabet(data: dict, where: str, name: str = "alphabet") -> Alphabet:
    raw = _field(data, name, list, where)
    try:
        return Alphabet(tuple(_symbol(a) for a in raw))
    except ValueError as exc:
        raise SpecError(f"{where}: field '{name}': {exc}") from None


def sft_from_dict(data: dict, where: str = "sft", name: str | None = None) -> Sft:
    dim = _field(data, "dimension", int, where)
    if dim < 1:
        raise SpecError(f"{where}: field 'dimension' must be positive")
    alphabet = _alphabet(data, where)
    if ("forbidden" in data) == ("allowed" in data):
        raise SpecError(f"{where}: give exactly one of 'forbidden' or 'allowed'")
    window = None
    if "window" in data:
        window = Shape.of(_points(_field(data, "window", list, where), dim, f"{where}: window"), dim)
        if not window:
            raise SpecError(f"{where}: field 'window' is empty")
    name = name or data.get("name", "sft")
    if "allowed" in data:
        if window is None:
            raise SpecError(f"{where}: 'allowed' needs a 'window'")
        rows = _field(data, "allowed", list, where)
        for i, row in enumerate(rows):
            _check_row(row, window, alphabet, f"{where}: allowed[{i}]")
        spec = SftSpec.from_allowed(alphabet, window, [tuple(_symbol(v) for v in r) for r in rows])
        return Sft(spec, name)
    pats = []
    for i, entry in enumerate(_field(data, "forbidden", list, where)):
        loc = f"{where}: forbidden[{i}]"
        if isinstance(entry, dict):
            support = _points(_field(entry, "support", list, loc), dim, f"{loc}.support")
            values = _field(entry, "values", list, loc)
            if len(values) != len(support):
                raise SpecError(f"{loc}: support and values differ in length")
            _check_symbols(values, alphabet, loc)
            pats.append(Pattern.from_mapping(dict(zip(support, (_symbol(v) for v in values)))))
        else:
            if window is None:
                raise SpecError(f"{loc}: value lists need a 'window'")
            _check_row(entry, window, alphabet, loc)
            pats.append(Pattern.on(window, [_symbol(v) for v in entry]))
    if window is not None and (0,) * dim not in window:
        warnings.warn(f"{where}: window does not contain the origin; enlarged to a symmetric window", stacklevel=2)
    spec = SftSpec.from_forbidden(alphabet, pats, dim=dim)
    return Sft(spec, name)


def _check_symbols(values: Sequence[Any], alphabet: Alphabet, where: str):
    for v in values:
        if _symbol(v) not in alphabet:
            raise SpecError(f"{where}: symbol {v!r} is not in the alphabet")


def _check_row(row, window: Shape, alphabet: Alphabet, where: str):
    if not isinstance(row, list) or len(row) != len(window):
        raise SpecError(f"{where}: expected {len(window)} values (one per window point)")
    _check_symbols(row, alphabet, where)


def ingest_sft(path) -> Sft:
    """Read an SFT file; windows are normalized and a warning is issued when the
    given window misses the origin."""
    return sft_from_dict(_load(path), str(path), Path(path).stem)


def sofic_from_dict(data: dict, where: str = "sofic", name: str | None = None) -> Sofic1d:
    alphabet = _alphabet(data, where)
    edges = []
    for i, e in enumerate(_field(data, "edges", list, where)):
        if not isinstance(e, list) or len(e) != 3:
            raise SpecError(f"{where}: edges[{i}]: expected [from, to, label]")
        label = _symbol(e[2])
        if label not in alphabet:
            raise SpecError(f"{where}: edges[{i}]: label {e[2]!r} is not in the alphabet")
        edges.append((_symbol(e[0]), _symbol(e[1]), label))
    return Sofic1d(LabeledGraph.of(edges), alphabet, name or data.get("name", "sofic"))


def ingest_sofic(path) -> Sofic1d:
    return sofic_from_dict(_load(path), str(path), Path(path).stem)


def rule_from_dict(data: dict, where: str = "rule") -> LocalRule:
    alphabet = _alphabet(data, where)
    target = _alphabet(data, where, "target_alphabet") if "target_alphabet" in data else alphabet
    raw = _field(data, "neighborhood", list, where)
    if not raw:
        raise SpecError(f"{where}: field 'neighborhood' is empty")
    dim = len(raw[0]) if isinstance(raw[0], list) else 1
    nb = Shape.of(_points(raw, dim, f"{where}: neighborhood"), dim)
    table = _field(data, "table", list, where)
    if len(table) != len(alphabet) ** len(nb):
        raise SpecError(f"{where}: field 'table' needs {len(alphabet) ** len(nb)} entries, got {len(table)}")
    _check_symbols(table, target, f"{where}: table")
    outputs = tuple(_symbol(v) for v in table)
    if (0,) * dim in nb:
        return LocalRule(nb, alphabet, target, outputs)
    order = list(nb.points)
    lookup = dict(zip(_inputs(alphabet, len(order)), outputs))
    return LocalRule.from_function(nb, lambda x: lookup[x], alphabet, target)


def _inputs(alphabet: Alphabet, k: int):
    return itertools.product(alphabet.symbols, repeat=k)


def ingest_rule(path) -> LocalRule:
    return rule_from_dict(_load(path), str(path))


def ingest_system(path) -> Subshift:
    """SFT or sofic file, told apart by the presence of ``edges``."""
    data = _load(path)
    if "edges" in data:
        return sofic_from_dict(data, str(path), Path(path).stem)
    return sft_from_dict(data, str(path), Path(path).stem)
