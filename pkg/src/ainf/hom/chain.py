"""Composable chains ``f^0 -r^1-> f^1 -> ... -r^n-> f^n`` of coderivations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..core.engine import Theta
from ..core.families import AInfFunctor, Coderivation


def _same_functor(a: AInfFunctor, b: AInfFunctor) -> bool:
    if a is b:
        return True
    return (
        a.source is b.source
        and a.target is b.target
        and a.obj_map == b.obj_map
        and a.max_arity == b.max_arity
        and a.maps.keys() == b.maps.keys()
        and all(a.maps[s] == b.maps[s] for s in a.maps)
    )


@dataclass(frozen=True)
class TransformationChain:
    functors: tuple
    coders: tuple

    def __post_init__(self) -> None:
        if len(self.functors) != len(self.coders) + 1:
            raise ValueError("a chain of n coderivations has n + 1 functors")
        for p, r in enumerate(self.coders):
            if not _same_functor(r.f, self.functors[p]) or not _same_functor(
                r.g, self.functors[p + 1]
            ):
                raise ValueError(f"coderivation {p + 1} does not connect its functors")

    @classmethod
    def of(cls, *coders: Coderivation) -> "TransformationChain":
        if not coders:
            raise ValueError("use TransformationChain.functor for an empty chain")
        functors = [coders[0].f] + [r.g for r in coders]
        return cls(tuple(functors), tuple(coders))

    @classmethod
    def functor(cls, f: AInfFunctor) -> "TransformationChain":
        return cls((f,), ())

    @property
    def n(self) -> int:
        return len(self.coders)

    @property
    def degree(self) -> int:
        return sum(r.degree for r in self.coders)

    @property
    def source(self):
        return self.functors[0].source

    @property
    def target(self):
        return self.functors[0].target

    def theta(self) -> Theta:
        return Theta(self.functors, self.coders)

    def sub(self, start: int, stop: int) -> "TransformationChain":
        """Coderivations ``start+1 .. stop`` with the functors between them."""
        return TransformationChain(self.functors[start : stop + 1], self.coders[start:stop])

    def replace(self, start: int, stop: int, r: Coderivation) -> "TransformationChain":
        """Replace coderivations ``start+1 .. stop`` by a single one."""
        return TransformationChain(
            self.functors[: start + 1] + self.functors[stop:],
            self.coders[:start] + (r,) + self.coders[stop:],
        )

    def degrees_after(self, stop: int) -> int:
        return sum(r.degree for r in self.coders[stop:])


def as_chain(x) -> TransformationChain:
    if isinstance(x, TransformationChain):
        return x
    if isinstance(x, AInfFunctor):
        return TransformationChain.functor(x)
    if isinstance(x, Coderivation):
        return TransformationChain.of(x)
    if isinstance(x, Sequence):
        return TransformationChain.of(*x)
    raise TypeError(f"cannot make a chain from {type(x).__name__}")
