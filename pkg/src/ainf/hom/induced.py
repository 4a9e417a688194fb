"""The strict functor ``A_inf(A, _)``.

A functor ``g: B -> C`` induces ``(1 (x) g)M: A_inf(A, B) -> A_inf(A, C)``
whose k-th component sends a chain ``p^1 .. p^k`` to ``(p|g)M_{k0}``; a
coderivation ``t: g -> h`` induces ``(1 (x) t)M`` with components
``(p|t)M_{k1}``.  These act on chains of coderivations, so the functor
category's own theta and B appear one level up: ``theta_tilde`` expands a
chain of induced maps on a chain of items, and B of ``A_inf(A, C)`` plays
the role of b.
"""

from __future__ import annotations

from ..core.engine import schedules
from ..core.families import AInfFunctor, Coderivation
from ..core.report import Report
from .chain import TransformationChain, as_chain
from .composition import _compare, apply_M, block_splittings, composite, expand_M_block
from .differential import _sign, _sum_report, apply_B, inner_B_terms


class InducedFunctor:
    """``(1 (x) g)M`` for a functor g of the target side."""

    def __init__(self, g: AInfFunctor) -> None:
        self.g = g

    def obj(self, f: AInfFunctor) -> AInfFunctor:
        return composite(f, self.g)

    def component(self, ps, N: int):
        ps = as_chain(ps)
        if ps.n == 0:
            return self.obj(ps.functors[0])
        return apply_M(ps, self.g, N)


class InducedTransformation:
    """``(1 (x) t)M`` for a coderivation t of the target side."""

    def __init__(self, t: Coderivation) -> None:
        self.t = t
        self.degree = t.degree
        self.source = InducedFunctor(t.f)
        self.target = InducedFunctor(t.g)

    def component(self, ps, N: int) -> Coderivation:
        return apply_M(as_chain(ps), self.t, N)


def induced(x):
    """``A_inf(A, _)`` applied to a functor or a coderivation."""
    if isinstance(x, AInfFunctor):
        return InducedFunctor(x)
    if isinstance(x, Coderivation):
        return InducedTransformation(x)
    raise TypeError(f"nothing is induced by {type(x).__name__}")


def _theta_tilde_terms(ts, ps, N: int):
    ts, ps = as_chain(ts), as_chain(ps)
    m, k = ts.n, ps.n
    for sched in schedules(k, (None,) * (m + 1), (None,) * m):
        a = 0
        sign_exp = 0
        items = []
        blocks = []
        for slot, length in sched:
            p, is_t = divmod(slot, 2)
            block = ps.sub(a, a + length)
            a += length
            blocks.append((length, is_t))
            if is_t:
                items.append(apply_M(block, ts.coders[p], N))
                sign_exp += ts.coders[p].degree * ps.degrees_after(a)
            else:
                items.append(apply_M(block, ts.functors[p], N))
        if items:
            chain = TransformationChain.of(*items)
        else:
            chain = TransformationChain.functor(composite(ps.functors[0], ts.functors[0]))
        yield tuple(blocks), _sign(sign_exp), chain


def theta_tilde(ts, ps, N: int) -> list[tuple[int, TransformationChain]]:
    """``(p^1..p^k).[(1 (x) t^1)M (x) ... (x) (1 (x) t^m)M]theta`` as signed chains.

    Every schedule interleaves components of the induced functors (on
    nonempty blocks of p's) with components of the induced transformations
    (on possibly empty blocks); each induced transformation passes the
    p's after its block.
    """
    return [(s, c) for _, s, c in _theta_tilde_terms(ts, ps, N)]


def check_theta_tilde(ts, ps, N: int) -> Report:
    """The expansion through induced maps reproduces ``(p (x) t)M`` term by term.

    Terms are matched by their block structure; each pair must agree in
    sign and in every coderivation through arity N.
    """
    ts, ps = as_chain(ts), as_chain(ps)
    rep = Report(f"theta-tilde(n={ps.n},m={ts.n})", N)
    ours = {blocks: (s, c) for blocks, s, c in _theta_tilde_terms(ts, ps, N)}
    if ps.n == 0 and ts.n == 0:
        fg = composite(ps.functors[0], ts.functors[0])
        theirs = {(): (1, TransformationChain.functor(fg))}
    else:
        theirs = {b: expand_M_block(ps, ts, b, N) for b in block_splittings(ps.n, ts.n)}
    if ours.keys() != theirs.keys():
        rep.fail(N, (), None, "the two expansions have different block structures")
        return rep
    for blocks, (s1, c1) in ours.items():
        s2, c2 = theirs[blocks]
        if s1 != s2:
            rep.fail(N, (), None, f"sign differs on blocks {blocks}")
        for a, b in zip(c1.coders, c2.coders):
            _sum_report(rep, [(1, a), (-1, b)], N, ps.source.quiver)
    return rep


def check_induced_differential(ts, ps, N: int) -> Report:
    """``[(1 (x) t^1)M (x) .. (x) (1 (x) t^m)M]B~_m = [1 (x) (t^1..t^m)B_m]M`` on ``ps``.

    For m = 0 this is the functor equation of ``(1 (x) g)M`` and for m = 1 the
    tilde differential is the commutator with B.
    """
    ts, ps = as_chain(ts), as_chain(ps)
    m = ts.n
    rep = Report(f"induced-differential(m={m},k={ps.n})", N)
    wide = N + ps.n
    terms = [(s, apply_B(c, N)) for s, c in theta_tilde(ts, ps, N) if c.n > 0]
    if m <= 1:
        outer = ts.coders[0] if m else ts.functors[0]
        inner_sign = -_sign(ts.degree)
        for s, c in inner_B_terms(ps, N) if ps.n else []:
            terms.append((inner_sign * s, apply_M(c, outer, N)))
    if m >= 1:
        terms.append((-1, apply_M(ps, apply_B(ts, wide), N)))
    return _sum_report(rep, terms, N, ps.source.quiver)


def check_induced_composition(first, second, ps, N: int) -> Report:
    """``(1 (x) x)M (1 (x) y)M = (1 (x) xy)M`` on ``ps``, x and y not both coderivations."""
    ps = as_chain(ps)
    if isinstance(first, Coderivation) and isinstance(second, Coderivation):
        raise ValueError("at most one of the two may be a coderivation")
    rep = Report(f"induced-composition(k={ps.n})", N)
    wide = N + ps.n
    joined = apply_M(as_chain(first), as_chain(second), wide)
    rhs = apply_M(ps, joined, N)
    lhs = []
    for s, c in theta_tilde(first, ps, N):
        if c.n == 0 and isinstance(second, AInfFunctor):
            lhs.append((s, composite(c.functors[0], second)))
        else:
            lhs.append((s, apply_M(c, second, N)))
    if isinstance(rhs, AInfFunctor):
        return _compare(rep, lhs, [(1, rhs)], N, ps.source.quiver)
    return _sum_report(rep, lhs + [(-1, rhs)], N, ps.source.quiver)
