"""The interleaving expansion theta of a chain of coderivations.

For functors ``f^0, ..., f^n`` and coderivations ``r^p: f^{p-1} -> f^p`` the
block ``theta_{kl}`` is a sum over *schedules*: ordered lists of segments
``(slot, length)`` covering the k inputs, where slot ``2p`` is a component
of ``f^p`` (length >= 1) and slot ``2p+1`` a component of ``r^{p+1}``
(length >= 0).  Each coderivation appears exactly once, in order.  A
schedule evaluates to the Koszul tensor of its components, so every
coderivation picks up the sign of passing all later inputs.

The same routine gives functor expansions (n = 0), coderivation
expansions (n = 1) and the expansion of b itself (the chain id, b, id).
"""

from __future__ import annotations

from collections import OrderedDict
from functools import lru_cache
from typing import Iterable, Sequence

from ..exactlin import GradedMap, compose_maps, identity_map, tensor_maps
from .quiver import Seq

Schedule = tuple  # tuple of (slot, length)


def _allows(support, n: int) -> bool:
    return support is None or n in support


@lru_cache(maxsize=4096)
def schedules(
    k: int,
    f_supports: tuple,
    r_supports: tuple,
    lmin: int = 0,
    lmax: int | None = None,
) -> tuple[Schedule, ...]:
    """All schedules on k inputs whose number of outputs lies in [lmin, lmax].

    ``f_supports[p]`` / ``r_supports[p]`` are frozensets of arities that may
    be nonzero, or None for "any".
    """
    n = len(r_supports)
    if lmax is None:
        lmax = k + n
    out: list[Schedule] = []
    segs: list[tuple[int, int]] = []

    def rec(a: int, p: int, nout: int) -> None:
        rest = k - a
        left = n - p
        hi = nout + rest + left
        lo = nout + left if left else nout + (1 if rest else 0)
        if hi < lmin or lo > lmax:
            return
        if rest == 0 and left == 0:
            out.append(tuple(segs))
            return
        for i in range(1, rest + 1):
            if _allows(f_supports[p], i):
                segs.append((2 * p, i))
                rec(a + i, p, nout + 1)
                segs.pop()
        if left:
            for j in range(0, rest + 1):
                if _allows(r_supports[p], j):
                    segs.append((2 * p + 1, j))
                    rec(a + j, p + 1, nout + 1)
                    segs.pop()

    rec(0, 0, 0)
    return tuple(out)


def _support_key(fam):
    s = fam.support
    return None if s is None else frozenset(s)


class Theta:
    """Evaluator of ``(r^1 (x) ... (x) r^n) theta`` for fixed functors and coderivations."""

    _cache: "OrderedDict" = OrderedDict()
    _cache_size = 4096

    def __init__(self, functors: Sequence, coders: Sequence) -> None:
        if len(functors) != len(coders) + 1:
            raise ValueError("a chain of n coderivations needs n + 1 functors")
        self.functors = tuple(functors)
        self.coders = tuple(coders)
        self.degree = sum(r.degree for r in coders)
        self._f_sup = tuple(_support_key(f) for f in self.functors)
        self._r_sup = tuple(_support_key(r) for r in self.coders)
        self._ident = tuple(id(x) for x in self.functors + self.coders)

    @property
    def n(self) -> int:
        return len(self.coders)

    def schedules(self, k: int, lmin: int = 0, lmax: int | None = None):
        return schedules(k, self._f_sup, self._r_sup, lmin, lmax)

    def term(self, seq: Seq, sched: Schedule) -> tuple[Seq, GradedMap | None]:
        """Output object sequence and map of one schedule (None if it vanishes)."""
        a = 0
        outs = [self.functors[0].obj(seq[0])]
        comps = []
        for slot, length in sched:
            p, is_r = divmod(slot, 2)
            sub = seq[a : a + length + 1]
            if is_r:
                comp = self.coders[p].component(sub)
                outs.append(self.functors[p + 1].obj(seq[a + length]))
            else:
                comp = self.functors[p].component(sub)
                outs.append(self.functors[p].obj(seq[a + length]))
            comps.append(comp)
            a += length
        out = tuple(outs)
        if any(c is None for c in comps):
            return out, None
        if not comps:
            return out, identity_map(self.functors[0].source.tensor(seq))
        return out, tensor_maps(*comps)

    def __call__(
        self, seq: Seq, lengths: Iterable[int] | None = None
    ) -> dict[Seq, GradedMap]:
        """Nonzero blocks of theta on ``T(seq)``, keyed by output object sequence.

        ``lengths`` restricts the output arities that are computed.
        """
        seq = tuple(seq)
        k = len(seq) - 1
        if lengths is None:
            lmin, lmax, allowed = 0, None, None
        else:
            allowed = frozenset(lengths)
            if not allowed:
                return {}
            lmin, lmax = min(allowed), max(allowed)
        key = (self._ident, seq, allowed)
        hit = Theta._cache.get(key)
        if hit is not None and hit[0] == self.functors + self.coders:
            Theta._cache.move_to_end(key)
            return hit[1]
        acc: dict[Seq, GradedMap] = {}
        for sched in self.schedules(k, lmin, lmax):
            if allowed is not None and len(sched) not in allowed:
                continue
            out, m = self.term(seq, sched)
            if m is None:
                continue
            acc[out] = acc[out] + m if out in acc else m
        acc = {o: m for o, m in acc.items() if m}
        Theta._cache[key] = (self.functors + self.coders, acc)
        if len(Theta._cache) > Theta._cache_size:
            Theta._cache.popitem(last=False)
        return acc

    def block(self, seq: Seq, l: int) -> dict[Seq, GradedMap]:
        return self(seq, (l,))

    def then(self, seq: Seq, outer) -> GradedMap | None:
        """``sum_l theta_{kl} outer_l`` on ``T(seq)``; None when it vanishes.

        ``outer`` is any family with ``component`` and ``may_have`` (b, a
        functor or a coderivation of the target side).
        """
        k = len(seq) - 1
        sup = outer.support
        hi = k + self.n
        if sup is None:
            # lengths past a truncation raise only if a nonzero block needs them
            lengths = range(outer.min_arity, hi + 1)
        else:
            lengths = [l for l in sup if l <= hi]
        total = None
        for out, m in self(seq, lengths).items():
            o = outer.component(out)
            if o is None:
                continue
            term = compose_maps(m, o)
            total = term if total is None else total + term
        return total


def clear_cache() -> None:
    Theta._cache.clear()
