"""Graded quivers with shifted hom modules and their tensor paths."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from ..exactlin import QQ, GradedModule, ground_module, tensor_modules, zero_module

Obj = Hashable
Seq = tuple  # object sequence (X_0, ..., X_n)


class Quiver:
    """Objects in a fixed order and a graded module ``sA(X, Y)`` per pair.

    Missing pairs are zero modules.  Hom modules carry the shifted grading.
    """

    def __init__(
        self,
        objects: Sequence[Obj],
        homs: Mapping[tuple[Obj, Obj], GradedModule],
        field=QQ,
    ) -> None:
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("object labels must be unique")
        self.field = field
        self._zero = zero_module(field)
        self.homs: dict[tuple, GradedModule] = {}
        for (x, y), m in homs.items():
            if x not in self.objects or y not in self.objects:
                raise ValueError(f"hom ({x}, {y}) names an unknown object")
            if m.field != field:
                raise ValueError("hom modules over a different field")
            if m.dim:
                self.homs[(x, y)] = m
        self._paths: dict[int, tuple] = {}
        self._tensor = lru_cache(maxsize=None)(self._tensor_uncached)

    def hom(self, x: Obj, y: Obj) -> GradedModule:
        return self.homs.get((x, y), self._zero)

    def tensor(self, seq: Seq) -> GradedModule:
        """``sA(X_0,X_1) (x) ... (x) sA(X_{n-1},X_n)``; the ground field for n = 0."""
        return self._tensor(tuple(seq))

    def _tensor_uncached(self, seq: Seq) -> GradedModule:
        if len(seq) == 1:
            return ground_module(self.field)
        return tensor_modules(
            *(self.hom(a, b) for a, b in zip(seq, seq[1:])), field=self.field
        )

    def paths(self, n: int) -> tuple[Seq, ...]:
        """Object sequences of arity n whose consecutive homs are all nonzero."""
        if n not in self._paths:
            if n == 0:
                out = tuple((x,) for x in self.objects)
            else:
                out = tuple(
                    p + (y,)
                    for p in self.paths(n - 1)
                    for y in self.objects
                    if (p[-1], y) in self.homs
                )
            self._paths[n] = out
        return self._paths[n]

    def same_as(self, other: "Quiver") -> bool:
        return self is other or (
            self.objects == other.objects
            and self.field == other.field
            and self.homs == other.homs
        )

    def __repr__(self) -> str:
        return f"Quiver({list(self.objects)}, {len(self.homs)} nonzero homs)"


def arity(seq: Seq) -> int:
    return len(seq) - 1


def all_sequences(objects: Iterable[Obj], n: int) -> Iterable[Seq]:
    return itertools.product(tuple(objects), repeat=n + 1)
