"""Linear algebra over GF(2) with rows stored as Python int bitmasks."""
from __future__ import annotations

from typing import Iterable, Iterator, List, Sequence, Tuple


def row_reduce(rows: Iterable[int]) -> Tuple[List[int], List[int]]:
    """Reduced echelon basis of the row space and the pivot bit of each basis row."""
    basis: List[int] = []
    pivots: List[int] = []
    for r in rows:
        for b, p in zip(basis, pivots):
            if r >> p & 1:
                r ^= b
        if r:
            p = r.bit_length() - 1
            for k, b in enumerate(basis):
                if b >> p & 1:
                    basis[k] = b ^ r
            basis.append(r)
            pivots.append(p)
    return basis, pivots


def rank(rows: Iterable[int]) -> int:
    return len(row_reduce(rows)[0])


def nullity(rows: Iterable[int], nvars: int) -> int:
    return nvars - rank(rows)


def kernel_basis(rows: Sequence[int], nvars: int) -> List[int]:
    """Basis of ``{x : popcount(row & x) even for every row}``."""
    basis, pivots = row_reduce(rows)
    pivot_set = set(pivots)
    out = []
    for free in range(nvars):
        if free in pivot_set:
            continue
        x = 1 << free
        for b, p in zip(basis, pivots):
            if b >> free & 1:
                x |= 1 << p
        out.append(x)
    return out


def span(basis: Sequence[int]) -> Iterator[int]:
    """All vectors in the span, in Gray-code order starting from 0."""
    x = 0
    yield x
    for k in range(1, 1 << len(basis)):
        x ^= basis[(k & -k).bit_length() - 1]
        yield x


def bits(x: int, n: int) -> Tuple[int, ...]:
    return tuple(x >> i & 1 for i in range(n))
