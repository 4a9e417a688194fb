"""Block expansions of b, f, r and the Stasheff and functor identities."""

from __future__ import annotations

from ..exactlin import GradedMap
from .engine import Theta
from .families import AInfCategory, AInfFunctor, Coderivation, TruncationError
from .report import Report


def b_theta(cat: AInfCategory) -> Theta:
    """``b`` as the coderivation ``id -> id``: its theta is the full expansion."""
    ident = cat.identity()
    return Theta((ident, ident), (cat,))


def f_theta(f: AInfFunctor) -> Theta:
    return Theta((f,), ())


def r_theta(r: Coderivation) -> Theta:
    return Theta((r.f, r.g), (r,))


def _blocks(theta: Theta, quiver, k: int, l: int) -> dict:
    out = {}
    for seq in quiver.paths(k):
        for o, m in theta.block(seq, l).items():
            out[(seq, o)] = m
    return out


def expand_b(cat: AInfCategory, k: int, l: int) -> dict:
    """``b_{kl} = sum 1^r (x) b_n (x) 1^t`` keyed by (input, output) object sequences."""
    if l == 0 or k < l:
        return {}
    return _blocks(b_theta(cat), cat.quiver, k, l)


def expand_f(f: AInfFunctor, k: int, l: int) -> dict:
    """``f_{kl} = sum f_{i_1} (x) ... (x) f_{i_l}``; ``f_{00}`` is the identity of the ground field."""
    if k < l:
        return {}
    return _blocks(f_theta(f), f.source.quiver, k, l)


def expand_r(r: Coderivation, k: int, l: int) -> dict:
    if not 1 <= l <= k + 1:
        return {}
    return _blocks(r_theta(r), r.source.quiver, k, l)


def _add(a: GradedMap | None, b: GradedMap | None, sign: int = 1) -> GradedMap | None:
    if b is None:
        return a
    if sign < 0:
        b = -b
    return b if a is None else a + b


def check_stasheff(cat: AInfCategory, N: int) -> Report:
    """``sum (1^r (x) b_n (x) 1^t) b_{r+1+t} = 0`` on every path of arity k <= N."""
    rep = Report("stasheff", N)
    th = b_theta(cat)
    for k in range(1, N + 1):
        for seq in cat.quiver.paths(k):
            rep.checked += 1
            try:
                d = th.then(seq, cat)
            except TruncationError as exc:
                rep.fail(k, seq, None, str(exc))
                continue
            if d is not None and d:
                rep.fail(k, seq, d)
    return rep


def check_functor(f: AInfFunctor, N: int) -> Report:
    """``sum_l f_{kl} b_l = sum_l b_{kl} f_l`` for k <= N."""
    rep = Report("functor", N)
    fth = f_theta(f)
    bth = b_theta(f.source)
    for k in range(1, N + 1):
        for seq in f.source.quiver.paths(k):
            rep.checked += 1
            try:
                d = _add(fth.then(seq, f.target), bth.then(seq, f), -1)
            except TruncationError as exc:
                rep.fail(k, seq, None, str(exc))
                continue
            if d is not None and d:
                rep.fail(k, seq, d)
    return rep


def compose_functors(f: AInfFunctor, g: AInfFunctor, N: int | None = None) -> AInfFunctor:
    """The composite ``fg`` with ``(fg)_k = sum_l f_{kl} g_l``.

    Complete inputs give a complete result; otherwise the result is
    truncated at N (default: the smaller truncation of the two).
    """
    if f.target is not g.source and not f.target.quiver.same_as(g.source.quiver):
        raise ValueError("functors are not composable")
    if f.is_complete() and g.is_complete():
        top = f.top_arity * g.top_arity
        limit = top if N is None else max(N, top)
        max_arity = None
    else:
        tops = [x.max_arity for x in (f, g) if x.max_arity is not None]
        limit = min(tops) if N is None else N
        max_arity = limit
    th = f_theta(f)
    comps = {}
    for k in range(1, limit + 1):
        for seq in f.source.quiver.paths(k):
            m = th.then(seq, g)
            if m is not None and m:
                comps[seq] = m
    obj = {x: g.obj(f.obj(x)) for x in f.source.objects}
    name = f"{f.name}{g.name}" if f.name and g.name else ""
    return AInfFunctor(f.source, g.target, obj, comps, max_arity, name)


def functors_equal(f: AInfFunctor, g: AInfFunctor, N: int) -> bool:
    if f.obj_map != g.obj_map:
        return False
    for k in range(1, N + 1):
        for seq in f.source.quiver.paths(k):
            if f.component_or_zero(seq) != g.component_or_zero(seq):
                return False
    return True
