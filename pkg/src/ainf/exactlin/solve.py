"""Deterministic sparse row reduction over an exact field.

Rows are dicts ``{column: coefficient}``.  Reduction always picks the
leftmost available pivot column and, among rows, the first one (in input
order) that reaches it; particular solutions set free variables to zero.
Since the reduced row-echelon form is unique, every result here is
reproducible.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Row = dict


class Echelon:
    """Incremental row echelon form keyed by leading column."""

    __slots__ = ("pivots",)

    def __init__(self) -> None:
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        while True:
            hits = [c for c in row if c in pivots]
            if not hits:
                return row
            c = min(hits)
            coef = row[c]
            for j, v in pivots[c].items():
                nv = row.get(j, 0) - coef * v
                if nv:
                    row[j] = nv
                else:
                    row.pop(j, None)

    def add(self, row: Row) -> bool:
        """Insert a row; return False if it was already in the span."""
        red = self.reduce(row)
        if not red:
            return False
        lead = min(red)
        pivot = red[lead]
        inv = Fraction(1, pivot) if isinstance(pivot, int) else 1 / pivot
        self.pivots[lead] = {j: v * inv for j, v in red.items()}
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced(self) -> list[tuple[int, Row]]:
        """Fully reduced rows as ``(pivot column, row)`` sorted by column."""
        rows = {c: dict(r) for c, r in self.pivots.items()}
        cols = sorted(rows)
        for c in reversed(cols):
            prow = rows[c]
            for other_c in cols:
                if other_c == c:
                    continue
                r = rows[other_c]
                coef = r.get(c)
                if not coef:
                    continue
                for j, v in prow.items():
                    nv = r.get(j, 0) - coef * v
                    if nv:
                        r[j] = nv
                    else:
                        r.pop(j, None)
        return [(c, rows[c]) for c in cols]


def rref(rows: Iterable[Row]) -> list[tuple[int, Row]]:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.reduced()


def rank(rows: Iterable[Row]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


def solve(equations: Sequence[Row], rhs: Sequence, nvars: int) -> dict | None:
    """Solve ``sum_j eq[j] x_j = rhs`` for every equation; None if inconsistent."""
    ech = Echelon()
    for eq, b in zip(equations, rhs):
        row = dict(eq)
        if b:
            row[nvars] = b
        ech.add(row)
    if nvars in ech.pivots:
        return None
    sol = {}
    for c, r in ech.reduced():
        v = r.get(nvars)
        if v:
            sol[c] = v
    return sol


def nullspace(equations: Sequence[Row], nvars: int) -> list[Row]:
    """Basis of solutions of the homogeneous system, one per free column."""
    red = rref(equations)
    pivot_cols = {c for c, _ in red}
    basis = []
    for free in range(nvars):
        if free in pivot_cols:
            continue
        vec = {free: 1}
        for c, r in red:
            v = r.get(free)
            if v:
                vec[c] = -v
        basis.append(vec)
    return basis


def inverse(rows: Sequence[Row], n: int) -> list[Row]:
    """Inverse of an invertible n-by-n matrix given by rows."""
    ech = Echelon()
    for i, r in enumerate(rows):
        aug = dict(r)
        aug[n + i] = 1
        ech.add(aug)
    red = ech.reduced()
    if len(red) != n or any(c >= n for c, _ in red):
        raise ValueError("matrix is singular")
    return [{j - n: v for j, v in r.items() if j >= n} for _, r in red]


def transpose(rows: Sequence[Row]) -> dict[int, Row]:
    cols: dict[int, Row] = {}
    for i, r in enumerate(rows):
        for j, v in r.items():
            cols.setdefault(j, {})[i] = v
    return cols
