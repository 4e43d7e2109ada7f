"""Finite constraint regions, solved by a frontier dynamic program.

A region lists cells (processed in the given order), each with a domain of values,
together with local constraints over tuples of cells. Each constraint is checked at the
moment its last cell is assigned. Counting and existence run a dynamic program over
the "frontier" (cells still needed by a pending constraint), so their cost is
governed by the frontier width rather than the region size.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Tuple, Union

from .budget import Budget, BudgetExceeded, default_budget

Check = Union[frozenset, set, Callable[[tuple], bool]]


@dataclass
class Region:
    cells: List[Any]
    domains: List[Tuple[Any, ...]]
    constraints: List[Tuple[Tuple[Any, ...], Check]] = field(default_factory=list)
    marker: Optional[Callable[[int, Any], bool]] = None

    def __post_init__(self):
        self.index = {c: i for i, c in enumerate(self.cells)}
        n = len(self.cells)
        self._at: List[list] = [[] for _ in range(n)]
        last_use = list(range(n))
        for cells, check in self.constraints:
            idx = tuple(self.index[c] for c in cells)
            if not idx:
                continue
            last = max(idx)
            self._at[last].append((idx, check))
            for j in idx:
                last_use[j] = max(last_use[j], last)
        # frontier[i]: indices <= i whose values are still needed after step i
        self._frontier = []
        for i in range(n):
            self._frontier.append(tuple(j for j in range(i + 1) if last_use[j] > i))

    def __len__(self) -> int:
        return len(self.cells)

    def _ok(self, i: int, lookup) -> bool:
        for idx, check in self._at[i]:
            vals = tuple(lookup[j] for j in idx)
            if callable(check):
                if not check(vals):
                    return False
            elif vals not in check:
                return False
        return True

    def _step(self, i, prev_frontier, state, value):
        lookup = dict(zip(prev_frontier, state))
        lookup[i] = value
        if not self._ok(i, lookup):
            return None
        return tuple(lookup[j] for j in self._frontier[i])

    def count(self, budget: Budget | None = None) -> int:
        """Number of complete assignments satisfying every constraint."""
        budget = budget or default_budget()
        layer: Dict[tuple, int] = {(): 1}
        prev: tuple = ()
        for i in range(len(self.cells)):
            nxt: Dict[tuple, int] = {}
            for state, mult in layer.items():
                for v in self.domains[i]:
                    new = self._step(i, prev, state, v)
                    if new is not None:
                        nxt[new] = nxt.get(new, 0) + mult
            if len(nxt) > budget.max_states:
                raise BudgetExceeded(f"frontier states exceeded {budget.max_states}")
            budget.tick()
            layer, prev = nxt, self._frontier[i]
        return sum(layer.values())

    def solutions(self, limit: int | None = None) -> Iterator[tuple]:
        """All satisfying assignments in lexicographic order of the domain orders."""
        n = len(self.cells)
        values: List[Any] = [None] * n
        produced = 0

        def rec(i):
            nonlocal produced
            if i == n:
                produced += 1
                yield tuple(values)
                return
            for v in self.domains[i]:
                values[i] = v
                if self._ok(i, values):
                    yield from rec(i + 1)
                    if limit is not None and produced >= limit:
                        return

        if n == 0:
            yield ()
            return
        yield from rec(0)

    def find(self, require_mark: bool = False, budget: Budget | None = None) -> Optional[tuple]:
        """One satisfying assignment (with a marked cell if requested), or None.

        The returned witness is the first one reached when states and values are
        explored in sorted/domain order, so results are deterministic.
        """
        budget = budget or default_budget()
        n = len(self.cells)
        start = ((), False)
        layers: List[Dict[tuple, tuple]] = []
        current = {start: None}
        prev: tuple = ()
        for i in range(n):
            nxt: Dict[tuple, tuple] = {}
            for key in current:
                state, flag = key
                for v in self.domains[i]:
                    new = self._step(i, prev, state, v)
                    if new is None:
                        continue
                    nflag = flag or (self.marker is not None and self.marker(i, v))
                    nkey = (new, nflag)
                    if nkey not in nxt:
                        nxt[nkey] = (key, v)
            if len(nxt) > budget.max_states:
                raise BudgetExceeded(f"frontier states exceeded {budget.max_states}")
            budget.tick()
            layers.append(nxt)
            current, prev = nxt, self._frontier[i]
        goal = None
        for key in current:
            if key[1] or not require_mark:
                goal = key
                break
        if goal is None:
            return None
        out = []
        key = goal
        for i in range(n - 1, -1, -1):
            parent, v = layers[i][key]
            out.append(v)
            key = parent
        return tuple(reversed(out))

