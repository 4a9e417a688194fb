"""The differential B of the functor category and its defining identities.

``(r)B_1 = rb - (-1)^r br`` and, for n > 1,
``[(r^1 (x) ... (x) r^n)B_n]_k = sum_l theta_{kl} b_l``.
"""

from __future__ import annotations

from typing import Iterable

from ..core.checks import b_theta
from ..core.families import Coderivation, TruncationError
from ..core.report import Report
from ..exactlin import GradedMap, compose_maps
from .chain import TransformationChain, as_chain


def _sign(exp: int) -> int:
    return -1 if exp % 2 else 1


def _acc(target: dict, key, m: GradedMap | None, sign: int = 1) -> None:
    if m is None:
        return
    if sign < 0:
        m = -m
    target[key] = target[key] + m if key in target else m


def B_component(chain, seq) -> GradedMap | None:
    """``[(r^1 (x) ... (x) r^n)B_n]`` on ``T(seq)`` alone; None when it vanishes."""
    chain = as_chain(chain)
    if chain.n == 0:
        raise ValueError("B_0 vanishes; give at least one coderivation")
    m = chain.theta().then(seq, chain.target)
    if chain.n == 1:
        r = chain.coders[0]
        other = b_theta(chain.source).then(seq, r)
        if other is not None:
            other = other if r.degree % 2 else -other
            m = other if m is None else m + other
    return m if m is not None and m else None


def apply_B(chain, N: int, name: str = "") -> Coderivation:
    """``(r^1 (x) ... (x) r^n)B_n`` through arity N, as an ``(f^0, f^n)``-coderivation."""
    chain = as_chain(chain)
    if chain.n == 0:
        raise ValueError("B_0 vanishes; give at least one coderivation")
    comps = {}
    for k in range(N + 1):
        for seq in chain.source.quiver.paths(k):
            m = B_component(chain, seq)
            if m is not None:
                comps[seq] = m
    return Coderivation(
        chain.functors[0], chain.functors[-1], chain.degree + 1, comps, N, name
    )


def inner_B_terms(chain: TransformationChain, N: int):
    """``(chain)(1^q (x) B_j (x) 1^t)`` for all q + j + t = n, j >= 1, with Koszul signs.

    B_j passes the coderivations after its block, giving the sign
    ``(-1)^{sum of their degrees}``.
    """
    out = []
    n = chain.n
    for q in range(n):
        for j in range(1, n - q + 1):
            inner = apply_B(chain.sub(q, q + j), N)
            out.append((_sign(chain.degrees_after(q + j)), chain.replace(q, q + j, inner)))
    return out


def _sum_report(rep: Report, terms, N: int, quiver) -> Report:
    for k in range(N + 1):
        for seq in quiver.paths(k):
            total = None
            for sign, r in terms:
                m = r.component(seq)
                if m is None:
                    continue
                m = m if sign > 0 else -m
                total = m if total is None else total + m
            rep.checked += 1
            if total is not None and total:
                rep.fail(k, seq, total)
    return rep


def check_B_squared(chain, N: int) -> Report:
    """``sum (1^q (x) B_j (x) 1^t) B_{q+1+t} = 0`` on the chain through arity N."""
    chain = as_chain(chain)
    rep = Report(f"B-squared(n={chain.n})", N)
    try:
        terms = [(s, apply_B(c, N)) for s, c in inner_B_terms(chain, N)]
    except TruncationError as exc:
        rep.fail(N, (), None, str(exc))
        return rep
    return _sum_report(rep, terms, N, chain.source.quiver)


def check_theta_b(chain, N: int) -> Report:
    """``theta b = (chain B) theta + (-1)^{sum deg} b theta`` on every block through N.

    Uses the closed-form components of B on the right-hand side, so this
    cross-checks them against the recursion defining B.
    """
    chain = as_chain(chain)
    rep = Report(f"theta-b(n={chain.n})", N)
    A, B = chain.source, chain.target
    th = chain.theta()
    bA, bB = b_theta(A), b_theta(B)
    rhs_chains = inner_B_terms(chain, N) if chain.n else []
    outer = _sign(chain.degree)
    for k in range(N + 1):
        for seq in A.quiver.paths(k):
            rep.checked += 1
            acc: dict = {}
            for out, m in th(seq).items():
                for out2, bm in bB(out).items():
                    _acc(acc, out2, compose_maps(m, bm))
            for sign, c in rhs_chains:
                for out2, m in c.theta()(seq).items():
                    _acc(acc, out2, m, -sign)
            for out, m in bA(seq).items():
                for out2, tm in th(out).items():
                    _acc(acc, out2, compose_maps(m, tm), -outer)
            bad = [(o, m) for o, m in acc.items() if m]
            for o, m in bad:
                rep.fail(k, seq, m, f"output {o}")
    return rep


def is_natural(r: Coderivation, N: int) -> bool:
    """Degree -1 and ``rB_1 = 0`` through arity N."""
    if r.degree != -1:
        return False
    return not apply_B(r, N).maps


def check_natural(r: Coderivation, N: int) -> Report:
    rep = Report("natural", N)
    if r.degree != -1:
        rep.fail(0, (), None, f"degree {r.degree}, expected -1")
        return rep
    return _sum_report(rep, [(1, apply_B(r, N))], N, r.source.quiver)


def coderivation_sum_report(identity: str, terms: Iterable, N: int, quiver) -> Report:
    return _sum_report(Report(identity, N), list(terms), N, quiver)
