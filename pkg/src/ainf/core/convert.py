"""Translation between the shifted components b_n and the unshifted m_n.

With ``|x|`` the unshifted degree,
``m_n(x_1, ..., x_n) = (-1)^{sum_j (j-1)|x_j|} b_n(sx_1, ..., sx_n)``.
Matrices are identical up to a sign on each source basis tensor; the
module bases are the same labels with degrees moved by one.
"""

from __future__ import annotations

from typing import Mapping

from ..exactlin import GradedMap, GradedModule, compose_maps, identity_map, tensor_maps
from ..exactlin.graded import tensor_modules
from .families import AInfCategory
from .quiver import Quiver
from .report import Report


def desuspend(m: GradedModule) -> GradedModule:
    """``s^{-1}M``: degrees raised by one."""
    return m.shifted(-1)


def suspend(m: GradedModule) -> GradedModule:
    return m.shifted(1)


def _source_signs(factors_unshifted: list[GradedModule]) -> list[int]:
    """Sign ``(-1)^{sum_j (j-1)|x_j|}`` for every basis tensor, in flat order."""
    signs = [0]
    for j, m in enumerate(factors_unshifted):
        signs = [s + j * d for s in signs for _, d in m.basis]
    return [-1 if s % 2 else 1 for s in signs]


def unshifted_quiver(q: Quiver) -> dict[tuple, GradedModule]:
    return {pair: desuspend(m) for pair, m in q.homs.items()}


def _tensor(homs, seq, field):
    return tensor_modules(*(homs[(a, b)] for a, b in zip(seq, seq[1:])), field=field)


def b_to_m(cat: AInfCategory) -> dict[tuple, GradedMap]:
    """Unshifted components ``m_n`` (degree 2 - n) keyed by object sequence."""
    homs = unshifted_quiver(cat.quiver)
    out = {}
    for seq, b in cat.maps.items():
        factors = [homs[(a, c)] for a, c in zip(seq, seq[1:])]
        src = tensor_modules(*factors, field=cat.field)
        tgt = homs[(seq[0], seq[-1])]
        signs = _source_signs(factors)
        rows = [{j: s * v for j, v in r.items()} for s, r in zip(signs, b.rows)]
        out[seq] = GradedMap(src, tgt, 2 - (len(seq) - 1), rows)
    return out


def m_to_b(
    quiver: Quiver, m: Mapping[tuple, GradedMap], max_arity: int | None = None, name: str = ""
) -> AInfCategory:
    """Build the shifted category from unshifted ``m_n`` on the desuspended homs of ``quiver``."""
    homs = unshifted_quiver(quiver)
    comps = {}
    for seq, mm in m.items():
        seq = tuple(seq)
        factors = [homs[(a, c)] for a, c in zip(seq, seq[1:])]
        signs = _source_signs(factors)
        rows = [{j: s * v for j, v in r.items()} for s, r in zip(signs, mm.rows)]
        comps[seq] = GradedMap(
            quiver.tensor(seq), quiver.hom(seq[0], seq[-1]), 1, rows
        )
    return AInfCategory(quiver, comps, max_arity, name)


def check_m_identities(
    objects, homs: Mapping[tuple, GradedModule], m: Mapping[tuple, GradedMap], N: int, field
) -> Report:
    """``sum (-1)^{t + rn} (1^r (x) m_n (x) 1^t) m_{r+1+t} = 0`` by direct summation.

    Independent of the shifted engine: every summand is built from
    identities and m-components with the Koszul tensor in unshifted degrees.
    """
    rep = Report("m-identities", N)
    homs = {p: h for p, h in homs.items() if h.dim}
    paths = [(x,) for x in objects]
    for k in range(1, N + 1):
        paths = [p + (y,) for p in paths for y in objects if (p[-1], y) in homs]
        for seq in paths:
            rep.checked += 1
            total = None
            for n in range(1, k + 1):
                for r in range(0, k - n + 1):
                    t = k - n - r
                    mid = m.get(seq[r : r + n + 1])
                    outer_seq = seq[: r + 1] + seq[r + n :]
                    outer = m.get(outer_seq)
                    if mid is None or outer is None:
                        continue
                    parts = [identity_map(homs[(a, b)]) for a, b in zip(seq[:r], seq[1 : r + 1])]
                    parts.append(mid)
                    parts += [
                        identity_map(homs[(a, b)])
                        for a, b in zip(seq[r + n : -1], seq[r + n + 1 :])
                    ]
                    term = compose_maps(tensor_maps(*parts), outer)
                    if (t + r * n) % 2:
                        term = -term
                    total = term if total is None else total + term
            if total is not None and total:
                rep.fail(k, seq, total)
    return rep
