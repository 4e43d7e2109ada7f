"""Edge-labeled graphs presenting one-dimensional sofic shifts.

A bi-infinite word belongs to the presented shift iff it labels a bi-infinite path.
After trimming to the essential subgraph every finite path extends to a bi-infinite
one, so the finite-word language is exactly the set of path labels. Word questions
are answered on the subset (Rabin-Scott) automaton whose start state is the set of
all vertices; distinct words then correspond to distinct paths from the start.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, FrozenSet, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

Edge = Tuple[Hashable, Hashable, Any]


@dataclass(frozen=True)
class LabeledGraph:
    vertices: Tuple[Hashable, ...]
    edges: Tuple[Edge, ...]

    @classmethod
    def of(cls, edges: Iterable[Sequence], vertices: Iterable[Hashable] | None = None) -> "LabeledGraph":
        edges = tuple(dict.fromkeys((e[0], e[1], e[2]) for e in edges))
        vs = dict.fromkeys(vertices or ())
        for s, t, _ in edges:
            vs.setdefault(s)
            vs.setdefault(t)
        return cls(tuple(vs), edges)

    @cached_property
    def out(self) -> Dict[Hashable, List[Edge]]:
        out: Dict[Hashable, List[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e[0]].append(e)
        return out

    @cached_property
    def labels(self) -> Tuple[Any, ...]:
        return tuple(dict.fromkeys(e[2] for e in self.edges))

    def is_essential(self) -> bool:
        ins = {e[1] for e in self.edges}
        outs = {e[0] for e in self.edges}
        return all(v in ins and v in outs for v in self.vertices)

    def is_deterministic(self) -> bool:
        """Right-resolving: out-edges of each vertex carry distinct labels."""
        for v, es in self.out.items():
            labs = [e[2] for e in es]
            if len(labs) != len(set(labs)):
                return False
        return True

    def step(self, states: Iterable[Hashable], symbol) -> FrozenSet[Hashable]:
        return frozenset(e[1] for v in states for e in self.out[v] if e[2] == symbol)

    def __len__(self) -> int:
        return len(self.vertices)


def trim(g: LabeledGraph) -> LabeledGraph:
    """Essential subgraph: repeatedly drop vertices without in- or out-edges."""
    alive = set(g.vertices)
    edges = list(g.edges)
    while True:
        edges = [e for e in edges if e[0] in alive and e[1] in alive]
        ins = {e[1] for e in edges}
        outs = {e[0] for e in edges}
        keep = alive & ins & outs
        if keep == alive:
            break
        alive = keep
    return LabeledGraph(tuple(v for v in g.vertices if v in alive), tuple(edges))


class SubsetDFA:
    """Lazy subset construction over a fixed symbol order; the empty set is dead."""

    def __init__(self, g: LabeledGraph, symbols: Sequence[Any] | None = None):
        self.graph = g
        self.symbols = tuple(symbols) if symbols is not None else g.labels
        self.start = frozenset(g.vertices)
        self._trans: Dict[FrozenSet, Dict[Any, FrozenSet]] = {}

    def delta(self, state: FrozenSet, symbol) -> FrozenSet:
        row = self._trans.get(state)
        if row is None:
            row = {a: self.graph.step(state, a) for a in self.symbols}
            self._trans[state] = row
        return row[symbol]

    def reachable(self) -> List[FrozenSet]:
        seen = {self.start} if self.start else set()
        order = list(seen)
        queue = deque(order)
        while queue:
            s = queue.popleft()
            for a in self.symbols:
                t = self.delta(s, a)
                if t and t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def accepts(self, word: Sequence[Any]) -> bool:
        s = self.start
        for a in word:
            if not s:
                return False
            if a not in self.symbols:
                return False
            s = self.delta(s, a)
        return bool(s)


def count_words(g: LabeledGraph, n: int, mask: Sequence[bool] | None = None) -> int:
    """Number of length-``n`` words labeling paths; exact big-integer count.

    With ``mask``, positions where ``mask[i]`` is False are projected away, so the
    result counts distinct restrictions to the masked positions.
    """
    dfa = SubsetDFA(g)
    layer: Dict[FrozenSet, int] = {dfa.start: 1} if dfa.start else {}
    for i in range(n):
        nxt: Dict[FrozenSet, int] = {}
        keep = mask is None or mask[i]
        for s, c in layer.items():
            if keep:
                for a in dfa.symbols:
                    t = dfa.delta(s, a)
                    if t:
                        nxt[t] = nxt.get(t, 0) + c
            else:
                t = frozenset().union(*(dfa.delta(s, a) for a in dfa.symbols))
                if t:
                    nxt[t] = nxt.get(t, 0) + c
        layer = nxt
    return sum(layer.values())


def words(g: LabeledGraph, n: int, symbols: Sequence[Any] | None = None) -> Iterator[Tuple[Any, ...]]:
    """Length-``n`` words of the language in lexicographic order of ``symbols``."""
    dfa = SubsetDFA(g, symbols)
    if not dfa.start:
        return
    word: List[Any] = []

    def rec(s, k):
        if k == 0:
            yield tuple(word)
            return
        for a in dfa.symbols:
            t = dfa.delta(s, a)
            if t:
                word.append(a)
                yield from rec(t, k - 1)
                word.pop()

    yield from rec(dfa.start, n)


def difference_word(g1: LabeledGraph, g2: LabeledGraph, symbols: Sequence[Any] | None = None) -> Optional[Tuple[Any, ...]]:
    """Shortest (then lexicographically least) word in L(g1) but not in L(g2)."""
    if symbols is None:
        symbols = tuple(dict.fromkeys(g1.labels + g2.labels))
    d1, d2 = SubsetDFA(g1, symbols), SubsetDFA(g2, symbols)
    if not d1.start:
        return None
    start = (d1.start, d2.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        s1, s2 = key = queue.popleft()
        for a in symbols:
            t1 = d1.delta(s1, a)
            if not t1:
                continue
            t2 = d2.delta(s2, a) if s2 else frozenset()
            nk = (t1, t2)
            if nk in parent:
                continue
            parent[nk] = (key, a)
            if not t2:
                out = []
                k = nk
                while parent[k] is not None:
                    k, b = parent[k]
                    out.append(b)
                return tuple(reversed(out))
            queue.append(nk)
    return None


def languages_equal(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    return difference_word(g1, g2) is None and difference_word(g2, g1) is None


def periodic_words(g: LabeledGraph, p: int, symbols: Sequence[Any] | None = None) -> List[Tuple[Any, ...]]:
    """Words ``w`` of length ``p`` with ``w^inf`` presented by ``g``, in lexicographic order.

    ``w^inf`` labels a bi-infinite path iff the relation "reads ``w`` from u to v"
    has a cycle; the closed walk may need several copies of ``w``.
    """
    out = []
    for w in words(g, p, symbols):
        rel = {v: g.step((v,), w[0]) for v in g.vertices}
        for a in w[1:]:
            rel = {v: g.step(ts, a) for v, ts in rel.items()}
        if _has_cycle(rel):
            out.append(w)
    return out


def _has_cycle(rel: Dict[Hashable, FrozenSet]) -> bool:
    """Cycle detection in a finite relation by repeatedly removing sinks."""
    alive = {v for v, ts in rel.items() if ts}
    while True:
        keep = {v for v in alive if rel[v] & alive}
        if keep == alive:
            return bool(alive)
        alive = keep


def adjacency_matrix(g: LabeledGraph) -> np.ndarray:
    index = {v: i for i, v in enumerate(g.vertices)}
    m = np.zeros((len(index), len(index)))
    for s, t, _ in g.edges:
        m[index[s], index[t]] += 1
    return m


def spectral_radius(m: np.ndarray) -> float:
    if m.size == 0:
        return 0.0
    return float(max(abs(np.linalg.eigvals(m))))


def deterministic_graph(g: LabeledGraph) -> LabeledGraph:
    """The reachable non-empty part of the subset automaton, as a labeled graph.

    It presents the same language and is right-resolving, so its adjacency spectral
    radius gives the entropy of the presented shift.
    """
    dfa = SubsetDFA(g)
    states = dfa.reachable()
    edges = []
    for s in states:
        for a in dfa.symbols:
            t = dfa.delta(s, a)
            if t:
                edges.append((s, t, a))
    return LabeledGraph(tuple(states), tuple(edges))
