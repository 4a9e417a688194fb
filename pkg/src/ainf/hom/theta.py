"""Blocks of theta and its compatibility with the comultiplication."""

from __future__ import annotations

from ..core.families import TruncationError
from ..core.report import Report
from ..exactlin import GradedMap, tensor_maps
from .chain import as_chain
from .differential import _acc


def theta_block(chain, seq, l: int) -> dict:
    """``theta_{kl}`` on ``T(seq)``, keyed by output object sequence.

    Raises TruncationError if a needed component lies past a truncation.
    """
    chain = as_chain(chain)
    return chain.theta().block(tuple(seq), l)


def check_theta_support(chain, N: int) -> Report:
    """``theta_{kl}`` vanishes unless ``n <= l <= k + n``, for every k <= N."""
    chain = as_chain(chain)
    n = chain.n
    rep = Report(f"theta-support(n={n})", N)
    th = chain.theta()
    for k in range(N + 1):
        for seq in chain.source.quiver.paths(k):
            rep.checked += 1
            for out, m in th(seq).items():
                l = len(out) - 1
                if not n <= l <= k + n:
                    rep.fail(k, seq, m, f"nonzero block with l = {l}")
    return rep


def _flat(m: GradedMap, like: GradedMap) -> GradedMap:
    # a Koszul tensor of blocks acts on the same flattened basis as the full block
    return GradedMap._trusted(like.source, like.target, m.degree, m.rows)


def check_theta_comultiplicativity(chain, N: int) -> Report:
    """``theta Delta = Delta sum_k (r^1..r^k)theta (x) (r^{k+1}..r^n)theta`` blockwise.

    For every input of length x <= N and every split (y, z) of every output,
    the block of the left side is compared with the sum over input splits
    and chain splits on the right.
    """
    chain = as_chain(chain)
    n = chain.n
    rep = Report(f"theta-comultiplicativity(n={n})", N)
    whole = chain.theta()
    parts = [(chain.sub(0, k).theta(), chain.sub(k, n).theta()) for k in range(n + 1)]
    for x in range(N + 1):
        for seq in chain.source.quiver.paths(x):
            rep.checked += 1
            try:
                lhs = whole(seq)
                acc: dict = {}
                for out, m in lhs.items():
                    for y in range(len(out)):
                        _acc(acc, (out, y), m)
                for x1 in range(x + 1):
                    left_in, right_in = seq[: x1 + 1], seq[x1:]
                    for left, right in parts:
                        for o1, m1 in left(left_in).items():
                            for o2, m2 in right(right_in).items():
                                if o1[-1] != o2[0]:
                                    continue
                                out = o1 + o2[1:]
                                like = lhs.get(out)
                                m = tensor_maps(m1, m2)
                                if like is not None:
                                    m = _flat(m, like)
                                _acc(acc, (out, len(o1) - 1), m, -1)
            except TruncationError as exc:
                rep.fail(x, seq, None, str(exc))
                continue
            for (out, y), m in acc.items():
                if m:
                    rep.fail(x, seq, m, f"output {out} split at {y}")
    return rep
