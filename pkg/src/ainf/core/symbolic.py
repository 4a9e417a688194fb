"""Coderivations with unknown entries, for turning linear operators into matrices.

A :class:`LinForm` is a sparse linear combination of variables.  It mixes
with field scalars under ``+`` and ``*``, so the ordinary map arithmetic
(tensor, composition, sums) runs unchanged on families whose entries are
linear forms.  Running an operator once on such a family yields its whole
matrix.
"""

from __future__ import annotations

from typing import Iterable

from ..exactlin import GradedMap
from .families import AInfFunctor, Coderivation


class LinForm:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None) -> None:
        self.terms = terms or {}

    @classmethod
    def var(cls, v: int, one=1) -> "LinForm":
        return cls({v: one})

    def _combine(self, other, sign: int):
        if isinstance(other, LinForm):
            out = dict(self.terms)
            for v, c in other.terms.items():
                x = out.get(v, 0) + c if sign > 0 else out.get(v, 0) - c
                if x:
                    out[v] = x
                else:
                    out.pop(v, None)
            return LinForm(out)
        if other == 0:
            return self
        raise TypeError("a constant cannot be added to a linear form")

    def __add__(self, other):
        return self._combine(other, 1)

    def __radd__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return LinForm({v: -c for v, c in self.terms.items()})

    def __mul__(self, c):
        if isinstance(c, LinForm):
            raise TypeError("product of two linear forms is not linear")
        if not c:
            return LinForm()
        return LinForm({v: x * c for v, x in self.terms.items()})

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LinForm):
            return self.terms == other.terms
        return not self.terms and other == 0

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LinForm({self.terms})"


def entry_slots(f: AInfFunctor, g: AInfFunctor, degree: int, upto: int, start: int = 0):
    """Index every matrix entry of an (f, g)-coderivation of the given degree.

    Returns a list of ``(seq, row, col)`` in a fixed order: arity, then
    path order, then row, then column.
    """
    src_cat, tgt_cat = f.source, f.target
    slots = []
    for n in range(upto + 1):
        for seq in src_cat.quiver.paths(n):
            src = src_cat.tensor(seq)
            tgt = tgt_cat.hom(f.obj(seq[0]), g.obj(seq[-1]))
            if not tgt.dim:
                continue
            for i in range(src.dim):
                for j in tgt.indices(src.degree(i) + degree):
                    slots.append((seq, i, j))
    return slots


def symbolic_coderivation(
    f: AInfFunctor,
    g: AInfFunctor,
    degree: int,
    upto: int,
    slots: list | None = None,
    offset: int = 0,
) -> tuple[Coderivation, list]:
    """The coderivation whose entry number ``v`` is the variable ``offset + v``.

    The result is truncated at ``upto``: every component through that
    arity is unknown, nothing beyond it is known.
    """
    if slots is None:
        slots = entry_slots(f, g, degree, upto)
    one = f.source.field.one
    rows: dict = {}
    for v, (seq, i, j) in enumerate(slots):
        rows.setdefault(seq, {}).setdefault(i, {})[j] = LinForm.var(offset + v, one)
    comps = {}
    for seq, rmap in rows.items():
        src = f.source.tensor(seq)
        tgt = f.target.hom(f.obj(seq[0]), g.obj(seq[-1]))
        comps[seq] = GradedMap._trusted(
            src, tgt, degree, [rmap.get(i, {}) for i in range(src.dim)]
        )
    r = Coderivation.__new__(Coderivation)
    r.f, r.g, r.name = f, g, "symbolic"
    r.degree = degree
    r.max_arity = upto
    r.maps = comps
    r._support = frozenset(len(s) - 1 for s in comps)
    return r, slots


def entry_rows(r: Coderivation, slots: Iterable) -> list:
    """Entries of ``r`` at the given slots (scalars or linear forms)."""
    out = []
    for seq, i, j in slots:
        m = r.maps.get(seq)
        out.append(m.rows[i].get(j, 0) if m is not None else 0)
    return out


def coderivation_from_vector(
    f: AInfFunctor, g: AInfFunctor, degree: int, upto: int, slots: list, vec: dict
) -> Coderivation:
    rows: dict = {}
    for v, c in vec.items():
        seq, i, j = slots[v]
        rows.setdefault(seq, {}).setdefault(i, {})[j] = c
    comps = {}
    for seq, rmap in rows.items():
        src = f.source.tensor(seq)
        tgt = f.target.hom(f.obj(seq[0]), g.obj(seq[-1]))
        comps[seq] = GradedMap(src, tgt, degree, [rmap.get(i, {}) for i in range(src.dim)])
    return Coderivation(f, g, degree, comps, upto)


def vector_of(r: Coderivation, slots: list) -> dict:
    out = {}
    for v, x in enumerate(entry_rows(r, slots)):
        if x:
            out[v] = x
    return out
