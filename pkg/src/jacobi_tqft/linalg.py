"""Sparse exact row reduction over the rationals.

Rows are ``{column: Fraction}`` dicts with integer columns; the column order
is the integer order.  Each stored row is monic at its pivot (its smallest
column).  Reduction sweeps columns in increasing order with a heap, so a
vector reduced against the rows lands in the span of the non-pivot columns,
which makes the reduced form unique regardless of insertion order.
"""
from __future__ import annotations

import heapq
from fractions import Fraction


class Echelon:
    def __init__(self):
        self.rows: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> set[int]:
        return set(self.rows)

    def reduce(self, vec: dict[int, Fraction]) -> dict[int, Fraction]:
        v = {c: Fraction(x) for c, x in vec.items() if x}
        heap = list(v)
        heapq.heapify(heap)
        done = set()
        while heap:
            c = heapq.heappop(heap)
            if c in done:
                continue
            done.add(c)
            x = v.get(c)
            if not x:
                continue
            row = self.rows.get(c)
            if row is None:
                continue
            for cc, y in row.items():
                nv = v.get(cc, 0) - x * y
                if nv:
                    if cc not in v:
                        heapq.heappush(heap, cc)
                    v[cc] = nv
                else:
                    v.pop(cc, None)
        return v

    def add(self, vec: dict[int, Fraction]) -> bool:
        """Insert a row; returns True if it raised the rank."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        inv = 1 / v[p]
        self.rows[p] = {c: x * inv for c, x in v.items()}
        return True


def solve(columns: list[dict[int, Fraction]], target: dict[int, Fraction]):
    """Find rational ``y`` with ``sum_j y_j * columns[j] == target``.

    Returns a dict ``{j: y_j}`` or ``None`` if there is no solution.
    Implemented by reducing the augmented vectors: each column is tagged with
    an identity marker in extra coordinates that track the combination.
    """
    big = 1 + max([max(c) for c in columns if c] + [max(target) if target else 0, 0])
    ech = Echelon()
    for j, col in enumerate(columns):
        aug = dict(col)
        aug[big + j] = Fraction(1)
        ech.add(aug)
    res = ech.reduce(dict(target))
    if any(c < big for c in res):
        return None
    # target - sum_j y_j col_j reduces to res; res = -(combination markers)
    # reduce(target) = target - sum r_k row_k, rows are combos of aug columns
    return {c - big: -x for c, x in res.items()}
