"""A-infinity categories, functors and coderivations as component families.

A family stores maps keyed by object sequences.  ``max_arity`` is the
truncation: ``None`` means the family is complete (every component not
stored is zero), an integer N means components of arity above N are
unknown and asking for one raises :class:`TruncationError`.
"""

from __future__ import annotations

from typing import Mapping

from ..exactlin import GradedMap, ShapeError, identity_map
from .quiver import Quiver, Seq


class TruncationError(LookupError):
    """A component beyond the stored truncation was requested."""


class Family:
    """Shared storage and lookup for b, f and r components."""

    kind = "family"
    min_arity = 0

    def _init_components(self, components, degree, max_arity):
        self.degree = int(degree)
        self.max_arity = max_arity
        if max_arity is not None and max_arity < 0:
            raise ValueError("truncation must be non-negative")
        maps = {}
        for seq, m in components.items():
            seq = tuple(seq)
            n = len(seq) - 1
            if n < self.min_arity:
                raise ValueError(
                    f"{self.kind} component of arity {n} must vanish"
                )
            if max_arity is not None and n > max_arity:
                raise ValueError(f"component of arity {n} beyond truncation {max_arity}")
            src, tgt = self.expected_shape(seq)
            if m.source != src:
                raise ShapeError(f"{self.kind} component at {seq}: wrong source module")
            if m.target != tgt:
                raise ShapeError(f"{self.kind} component at {seq}: wrong target module")
            if m.is_zero():
                continue
            if m.degree != self.degree:
                raise ShapeError(
                    f"{self.kind} component at {seq} has degree {m.degree}, "
                    f"expected {self.degree}"
                )
            maps[seq] = m
        self.maps: dict[Seq, GradedMap] = maps
        self._support = frozenset(len(s) - 1 for s in maps)

    def expected_shape(self, seq: Seq):
        raise NotImplementedError

    def component(self, seq: Seq) -> GradedMap | None:
        """The component at ``seq``; None when it vanishes."""
        if self.max_arity is not None and len(seq) - 1 > self.max_arity:
            raise TruncationError(
                f"{self.kind} {self.name or ''} known only through arity "
                f"{self.max_arity}, arity {len(seq) - 1} requested".replace("  ", " ")
            )
        return self.maps.get(tuple(seq))

    def component_or_zero(self, seq: Seq) -> GradedMap:
        m = self.component(seq)
        if m is not None:
            return m
        from ..exactlin import zero_map

        src, tgt = self.expected_shape(seq)
        return zero_map(src, tgt, self.degree)

    @property
    def support(self) -> frozenset | None:
        """Arities that may be nonzero, or None if unbounded by the data."""
        if self.max_arity is None:
            return self._support
        return None

    def may_have(self, n: int) -> bool:
        if n < self.min_arity:
            return False
        if self.max_arity is None:
            return n in self._support
        return True

    @property
    def top_arity(self) -> int:
        """Largest arity that may be nonzero (for complete families)."""
        if self.max_arity is not None:
            return self.max_arity
        return max(self._support, default=self.min_arity)

    def is_complete(self) -> bool:
        return self.max_arity is None

    def arity_components(self, n: int) -> dict[Seq, GradedMap]:
        return {s: m for s, m in self.maps.items() if len(s) - 1 == n}


class AInfCategory(Family):
    """A quiver sA with differential components ``b_n`` of degree 1, n >= 1."""

    kind = "b"
    min_arity = 1

    def __init__(
        self,
        quiver: Quiver,
        components: Mapping[Seq, GradedMap],
        max_arity: int | None = None,
        name: str = "",
    ) -> None:
        self.quiver = quiver
        self.name = name
        self._init_components(components, 1, max_arity)
        self._id = None

    def expected_shape(self, seq):
        return self.quiver.tensor(seq), self.quiver.hom(seq[0], seq[-1])

    @property
    def objects(self):
        return self.quiver.objects

    @property
    def field(self):
        return self.quiver.field

    def hom(self, x, y):
        return self.quiver.hom(x, y)

    def tensor(self, seq):
        return self.quiver.tensor(seq)

    def b(self, seq) -> GradedMap:
        return self.component_or_zero(seq)

    def identity(self) -> "AInfFunctor":
        if self._id is None:
            self._id = identity_functor(self)
        return self._id

    def truncated(self, n: int) -> "AInfCategory":
        keep = {s: m for s, m in self.maps.items() if len(s) - 1 <= n}
        return AInfCategory(self.quiver, keep, n, self.name)

    def __repr__(self) -> str:
        return f"AInfCategory({self.name or '?'}, objects={list(self.objects)})"


class AInfFunctor(Family):
    """Object map plus components ``f_n: T^n sA -> sB`` of degree 0, n >= 1."""

    kind = "f"
    min_arity = 1

    def __init__(
        self,
        source: AInfCategory,
        target: AInfCategory,
        obj_map: Mapping,
        components: Mapping[Seq, GradedMap],
        max_arity: int | None = None,
        name: str = "",
    ) -> None:
        self.source = source
        self.target = target
        self.name = name
        missing = [x for x in source.objects if x not in obj_map]
        if missing:
            raise ValueError(f"object map misses {missing}")
        bad = [y for y in obj_map.values() if y not in target.objects]
        if bad:
            raise ValueError(f"object map hits unknown objects {bad}")
        self.obj_map = {x: obj_map[x] for x in source.objects}
        self._init_components(components, 0, max_arity)

    def obj(self, x):
        return self.obj_map[x]

    def expected_shape(self, seq):
        return self.source.tensor(seq), self.target.hom(self.obj(seq[0]), self.obj(seq[-1]))

    def __repr__(self) -> str:
        return f"AInfFunctor({self.name or '?'})"


class Coderivation(Family):
    """An (f, g)-coderivation of a given degree with components ``r_n``, n >= 0."""

    kind = "r"
    min_arity = 0

    def __init__(
        self,
        f: AInfFunctor,
        g: AInfFunctor,
        degree: int,
        components: Mapping[Seq, GradedMap],
        max_arity: int | None = None,
        name: str = "",
    ) -> None:
        if f.source is not g.source and not f.source.quiver.same_as(g.source.quiver):
            raise ValueError("functors of a coderivation must share the source")
        if f.target is not g.target and not f.target.quiver.same_as(g.target.quiver):
            raise ValueError("functors of a coderivation must share the target")
        self.f = f
        self.g = g
        self.name = name
        self._init_components(components, degree, max_arity)

    @property
    def source(self) -> AInfCategory:
        return self.f.source

    @property
    def target(self) -> AInfCategory:
        return self.f.target

    def expected_shape(self, seq):
        return (
            self.f.source.tensor(seq),
            self.f.target.hom(self.f.obj(seq[0]), self.g.obj(seq[-1])),
        )

    def truncated(self, n: int) -> "Coderivation":
        keep = {s: m for s, m in self.maps.items() if len(s) - 1 <= n}
        top = n if self.max_arity is None else min(n, self.max_arity)
        return Coderivation(self.f, self.g, self.degree, keep, top, self.name)

    def scaled(self, c) -> "Coderivation":
        return Coderivation(
            self.f, self.g, self.degree,
            {s: m.scale(c) for s, m in self.maps.items()}, self.max_arity, self.name,
        )

    def __repr__(self) -> str:
        return f"Coderivation({self.name or '?'}, degree {self.degree})"


def identity_functor(cat: AInfCategory) -> AInfFunctor:
    comps = {
        (x, y): identity_map(cat.hom(x, y)) for (x, y) in cat.quiver.homs
    }
    return AInfFunctor(cat, cat, {x: x for x in cat.objects}, comps, None, f"id_{cat.name}")


def combine(
    terms: list[tuple[object, Coderivation]],
    f: AInfFunctor | None = None,
    g: AInfFunctor | None = None,
    degree: int | None = None,
    max_arity: int | None = None,
    name: str = "",
) -> Coderivation:
    """Linear combination ``sum c_i r_i`` of coderivations between the same functors."""
    if not terms:
        if f is None or g is None or degree is None:
            raise ValueError("empty combination needs functors and a degree")
        return Coderivation(f, g, degree, {}, max_arity, name)
    f = f or terms[0][1].f
    g = g or terms[0][1].g
    if degree is None:
        degree = terms[0][1].degree
    tops = [r.max_arity for _, r in terms if r.max_arity is not None]
    if max_arity is None and tops:
        max_arity = min(tops)
    acc: dict = {}
    for c, r in terms:
        if not c:
            continue
        for s, m in r.maps.items():
            if max_arity is not None and len(s) - 1 > max_arity:
                continue
            term = m.scale(c) if c != 1 else m
            acc[s] = acc[s] + term if s in acc else term
    return Coderivation(f, g, degree, acc, max_arity, name)


def zero_coderivation(f: AInfFunctor, g: AInfFunctor, degree: int, max_arity=None) -> Coderivation:
    return Coderivation(f, g, degree, {}, max_arity)


def coderivation_difference(r: Coderivation, t: Coderivation, upto: int) -> dict:
    """Nonzero components of ``r - t`` through arity ``upto``."""
    out = {}
    for n in range(upto + 1):
        for seq in r.source.quiver.paths(n):
            a, b = r.component(seq), t.component(seq)
            if a is None and b is None:
                continue
            d = (a if a is not None else r.component_or_zero(seq)) - (
                b if b is not None else t.component_or_zero(seq)
            )
            if d:
                out[seq] = d
    return out
