"""The composition M of functor categories and its identities.

``[(r^1..r^n | g)M_{n0}]_k = sum_l theta_{kl} g_l``,
``[(r^1..r^n (x) t)M_{n1}]_k = sum_l theta_{kl} t_l`` and ``M_{nm} = 0``
for m > 1.  A tensor of chains expands through M block by block, with the
sign of every t-block passing the p's of later blocks.
"""

from __future__ import annotations

from ..core.checks import compose_functors
from ..core.families import AInfFunctor, Coderivation
from ..core.report import Report
from ..exactlin import compose_maps
from .chain import TransformationChain, as_chain
from .differential import _acc, _sign, _sum_report, apply_B, inner_B_terms

_composites: dict = {}


def composite(f: AInfFunctor, g: AInfFunctor) -> AInfFunctor:
    """``fg``, memoised so that equal inputs give the identical functor object."""
    key = (id(f), id(g))
    hit = _composites.get(key)
    if hit is not None and hit[0] is f and hit[1] is g:
        return hit[2]
    fg = compose_functors(f, g)
    _composites[key] = (f, g, fg)
    return fg


def apply_M(ps, ts, N: int):
    """``(p^1..p^n (x) t^1..t^m)M_{nm}``: a functor when n = m = 0, else a coderivation."""
    ps, ts = as_chain(ps), as_chain(ts)
    B = ps.target
    if ts.source is not B and not ts.source.quiver.same_as(B.quiver):
        raise ValueError("chains are not composable: target and source categories differ")
    n, m = ps.n, ts.n
    f0, fn = ps.functors[0], ps.functors[-1]
    g0, gm = ts.functors[0], ts.functors[-1]
    if n == 0 and m == 0:
        return composite(f0, g0)
    src_f, tgt_f = composite(f0, g0), composite(fn, gm)
    degree = ps.degree + ts.degree
    if m > 1:
        return Coderivation(src_f, tgt_f, degree, {}, N)
    outer = g0 if m == 0 else ts.coders[0]
    th = ps.theta()
    comps = {}
    for k in range(N + 1):
        for seq in ps.source.quiver.paths(k):
            mp = th.then(seq, outer)
            if mp is not None and mp:
                comps[seq] = mp
    return Coderivation(src_f, tgt_f, degree, comps, N)


def M_component(ps, ts, seq):
    """``[(ps (x) ts)M]`` on ``T(seq)`` alone for a coderivation side with m <= 1."""
    ps, ts = as_chain(ps), as_chain(ts)
    if ts.n > 1:
        return None
    if ps.n == 0 and ts.n == 0:
        raise ValueError("M_{00} is the composite functor, not a component")
    outer = ts.functors[0] if ts.n == 0 else ts.coders[0]
    m = ps.theta().then(tuple(seq), outer)
    return m if m is not None and m else None


def block_splittings(n: int, m: int):
    """Sequences of blocks ``(i_a, j_a)`` with j_a in {0, 1}, no (0, 0), summing to (n, m)."""
    out = []
    cur: list = []

    def rec(i: int, j: int) -> None:
        if i == n and j == m:
            out.append(tuple(cur))
            return
        for dj in (0, 1):
            if j + dj > m:
                continue
            for di in range(0, n - i + 1):
                if di == 0 and dj == 0:
                    continue
                cur.append((di, dj))
                rec(i + di, j + dj)
                cur.pop()

    if n == 0 and m == 0:
        return [()]
    rec(0, 0)
    return out


def splitting_sign(ps: TransformationChain, ts: TransformationChain, blocks) -> int:
    """``(-1)^sigma`` with sigma summing (t-degrees of a block) x (p-degrees of later blocks)."""
    pdeg, tdeg = [], []
    i = j = 0
    for di, dj in blocks:
        pdeg.append(sum(r.degree for r in ps.coders[i : i + di]))
        tdeg.append(sum(r.degree for r in ts.coders[j : j + dj]))
        i, j = i + di, j + dj
    sigma = 0
    later = sum(pdeg)
    for a in range(len(blocks)):
        later -= pdeg[a]
        sigma += tdeg[a] * later
    return _sign(sigma)


def expand_M(ps, ts, N: int) -> list[tuple[int, TransformationChain]]:
    """``(p (x) t)M`` as a signed list of chains of M-blocks in the composite category."""
    ps, ts = as_chain(ps), as_chain(ts)
    n, m = ps.n, ts.n
    if n == 0 and m == 0:
        return [(1, TransformationChain.functor(composite(ps.functors[0], ts.functors[0])))]
    out = []
    for blocks in block_splittings(n, m):
        coders = []
        i = j = 0
        for di, dj in blocks:
            coders.append(apply_M(ps.sub(i, i + di), ts.sub(j, j + dj), N))
            i, j = i + di, j + dj
        out.append((splitting_sign(ps, ts, blocks), TransformationChain.of(*coders)))
    return out


def expand_M_block(ps, ts, blocks, N: int) -> tuple[int, TransformationChain]:
    """One splitting's signed chain of blocks ``M_{i_a j_a}``."""
    ps, ts = as_chain(ps), as_chain(ts)
    coders = []
    i = j = 0
    for di, dj in blocks:
        if dj > 1:
            raise ValueError("blocks M_{ij} with j > 1 vanish")
        coders.append(apply_M(ps.sub(i, i + di), ts.sub(j, j + dj), N))
        i, j = i + di, j + dj
    if (i, j) != (ps.n, ts.n):
        raise ValueError("blocks do not cover both chains")
    return splitting_sign(ps, ts, blocks), TransformationChain.of(*coders)


def check_theta_theta(ps, ts, N: int) -> Report:
    """``(p)theta (t)theta = sum (-1)^sigma (M-blocks)theta`` on every block through N."""
    ps, ts = as_chain(ps), as_chain(ts)
    rep = Report(f"theta-theta(n={ps.n},m={ts.n})", N)
    pth, tth = ps.theta(), ts.theta()
    rhs = [(s, c.theta()) for s, c in expand_M(ps, ts, N)]
    for k in range(N + 1):
        for seq in ps.source.quiver.paths(k):
            rep.checked += 1
            acc: dict = {}
            for out, m in pth(seq).items():
                for out2, m2 in tth(out).items():
                    _acc(acc, out2, compose_maps(m, m2))
            for s, th in rhs:
                for out2, m in th(seq).items():
                    _acc(acc, out2, m, -s)
            for o, m in acc.items():
                if m:
                    rep.fail(k, seq, m, f"output {o}")
    return rep


def _compare(rep: Report, lhs: list, rhs: list, N: int, quiver) -> Report:
    terms = list(lhs) + [(-s, r) for s, r in rhs]
    funcs = [r for _, r in terms if isinstance(r, AInfFunctor)]
    if funcs:
        # functor outputs: compare components directly
        a, b = lhs[0][1], rhs[0][1]
        if a.obj_map != b.obj_map:
            rep.fail(0, (), None, "object maps differ")
        for k in range(1, N + 1):
            for seq in quiver.paths(k):
                rep.checked += 1
                d = a.component_or_zero(seq) - b.component_or_zero(seq)
                if d:
                    rep.fail(k, seq, d)
        return rep
    return _sum_report(rep, terms, N, quiver)


def check_M_associativity(ps, ts, us, N: int) -> Report:
    """``(p (x) t (x) u)(M (x) 1)M = (p (x) t (x) u)(1 (x) M)M`` through arity N."""
    ps, ts, us = as_chain(ps), as_chain(ts), as_chain(us)
    rep = Report(f"M-associativity(n={ps.n},m={ts.n},l={us.n})", N)
    lhs = [(s, apply_M(c, us, N)) for s, c in expand_M(ps, ts, N)]
    rhs = [(s, apply_M(ps, c, N)) for s, c in expand_M(ts, us, N + ps.n)]
    return _compare(rep, lhs, rhs, N, ps.source.quiver)


def check_M_unit(ps, N: int) -> Report:
    """Identity functors are two-sided units: ``(p | id)M = p`` and ``(id_f | p)M = p``."""
    ps = as_chain(ps)
    rep = Report(f"M-unit(n={ps.n})", N)
    idB = ps.target.identity()
    idA = ps.source.identity()
    if ps.n == 0:
        f = ps.functors[0]
        for other in (apply_M(ps, idB, N), apply_M(idA, ps, N)):
            _compare(rep, [(1, other)], [(1, f)], N, ps.source.quiver)
        return rep
    if ps.n != 1:
        raise ValueError("the unit law is stated for a functor or a single coderivation")
    p = ps.coders[0]
    left = apply_M(ps, idB, N)
    right = apply_M(idA, ps, N)
    _sum_report(rep, [(1, left), (-1, p)], N, ps.source.quiver)
    _sum_report(rep, [(1, right), (-1, p)], N, ps.source.quiver)
    return rep


def check_M_chain(ps, ts, N: int) -> Report:
    """``(1 (x) B + B (x) 1)M = MB`` evaluated on ``p (x) t`` through arity N."""
    ps, ts = as_chain(ps), as_chain(ts)
    rep = Report(f"M-chain(n={ps.n},m={ts.n})", N)
    tdeg = ts.degree
    lhs = []
    for s, c in inner_B_terms(ps, N):
        lhs.append((s * _sign(tdeg), apply_M(c, ts, N)))
    for s, c in inner_B_terms(ts, N + ps.n):
        lhs.append((s, apply_M(ps, c, N)))
    rhs = [(s, apply_B(c, N)) for s, c in expand_M(ps, ts, N) if c.n > 0]
    terms = [(s, r) for s, r in lhs if isinstance(r, Coderivation)] + [
        (-s, r) for s, r in rhs
    ]
    return _sum_report(rep, terms, N, ps.source.quiver)


def check_M_identities(samples, N: int) -> Report:
    """Associativity on triples and the chain rule on pairs, for every sample.

    ``samples`` is an iterable of ``(ps, ts)`` pairs or ``(ps, ts, us)`` triples.
    """
    rep = Report("M-identities", N)
    for sample in samples:
        if len(sample) == 3:
            rep.merge(check_M_associativity(*sample, N))
            rep.merge(check_M_chain(sample[0], sample[1], N))
            rep.merge(check_M_chain(sample[1], sample[2], N))
        else:
            rep.merge(check_M_chain(*sample, N))
    return rep
