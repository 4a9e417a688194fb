"""Extending a unit element to a unit transformation ``i: id -> id``.

Components are found arity by arity.  With ``i~`` and ``v~`` the
transformations known below arity n, the defects

    ``lam = [i~ B_1]_n``  and  ``nu = [(i~ (x) i~)B_2 - v~ B_1]_n``

form a cycle of ``Cone(Hom(T^n, u'))`` where
``u' = (i0 (x) 1)b_2 - (1 (x) i0)b_2 + 1`` acts on ``sC(X_0, X_n)``, and its
preimage is ``(v_n, i_n)``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core.families import AInfCategory, Coderivation
from ..core.report import Report
from ..exactlin import ChainMap, GradedMap, compose_maps, identity_map
from ..hom.chain import TransformationChain
from ..hom.differential import B_component, _sum_report, apply_B
from .lift import LiftError, contraction_for, lift_at
from .units import (
    UnitAssignment,
    act_left,
    act_right,
    hom_chain_complex,
    idempotence_witness,
    unit_element_data,
)


class UnitError(ValueError):
    """A precondition of a unit construction fails."""


@dataclass
class UnitTransformation:
    """``i: id -> id`` of degree -1 and ``v`` of degree -2 with ``(i (x) i)B_2 - i = vB_1``."""

    i: Coderivation
    v: Coderivation

    @property
    def max_arity(self) -> int:
        return self.i.max_arity


def unit_chain_map(cat: AInfCategory, i0: UnitAssignment, a, b) -> ChainMap:
    """``u' = (i0 (x) 1)b_2 - (1 (x) i0)b_2 + 1`` on ``sC(A, B)``."""
    cx = hom_chain_complex(cat, a, b)
    m = act_left(cat, i0[a], a, a, b) - act_right(cat, i0[b], b, b, a) + identity_map(cx.module)
    return ChainMap(cx, cx, m)


def _with(comps: dict, f, g, degree: int) -> Coderivation:
    return Coderivation(f, g, degree, comps, None)


def build_unit_transformation(
    cat: AInfCategory, i0: UnitAssignment, v0: dict | None, N: int
) -> UnitTransformation:
    """Components ``i_n, v_n`` for ``n <= N`` with ``iB_1 = 0`` and ``(i (x) i)B_2 - i = vB_1``.

    ``v0`` maps each object to an element of degree -2 with
    ``(i0 (x) i0)b_2 - i0 = v0 b_1``; missing entries are solved for.
    """
    data = unit_element_data(cat, i0)
    if not data.report.passed:
        raise UnitError(f"unit element check fails: {data.report.summary()}")
    ident = cat.identity()
    i_comps = dict(i0.components())
    v_comps: dict = {}
    for x in cat.objects:
        w = (v0 or {}).get(x)
        if w is None:
            w = idempotence_witness(cat, i0, x)
        elif not _idempotence_holds(cat, i0, x, w):
            raise UnitError(f"(i0 (x) i0)b_2 - i0 = v0 b_1 fails at object {x!r}")
        if w is not None and w:
            v_comps[(x,)] = w
    contractions: dict = {}
    for n in range(1, N + 1):
        i_t = _with(i_comps, ident, ident, -1)
        v_t = _with(v_comps, ident, ident, -2)
        ii = TransformationChain.of(i_t, i_t)
        new_i, new_v = {}, {}
        for seq in cat.quiver.paths(n):
            pair = (seq[0], seq[-1])
            if not cat.hom(*pair).dim or not cat.tensor(seq).dim:
                continue
            lam = B_component(i_t, seq)
            nu = B_component(ii, seq)
            vb = B_component(v_t, seq)
            if vb is not None:
                nu = -vb if nu is None else nu - vb
            if lam is None and (nu is None or not nu):
                continue
            if pair not in contractions:
                try:
                    contractions[pair] = contraction_for(unit_chain_map(cat, i0, *pair))
                except LiftError as exc:
                    raise UnitError(f"u' on {pair} is not homotopy invertible") from exc
            vn, i_n = lift_at(cat, seq, nu, lam, contractions[pair], -1)
            if i_n:
                new_i[seq] = i_n
            if vn:
                new_v[seq] = vn
        i_comps.update(new_i)
        v_comps.update(new_v)
    i = Coderivation(ident, ident, -1, i_comps, N, "i")
    v = Coderivation(ident, ident, -2, v_comps, N, "v")
    return UnitTransformation(i, v)


def _idempotence_holds(cat: AInfCategory, i0: UnitAssignment, x, w: GradedMap) -> bool:
    e = i0[x]
    unit = Coderivation(cat.identity(), cat.identity(), -1, {(x,): e}, 0)
    sq = B_component(TransformationChain.of(unit, unit), (x,))
    total = -e if sq is None else sq - e
    b1 = cat.component((x, x))
    if b1 is not None:
        total = total - compose_maps(w, b1)
    return not total


def check_unit_transformation(ut: UnitTransformation, N: int | None = None) -> Report:
    """``iB_1 = 0`` and ``(i (x) i)B_2 - i - vB_1 = 0`` through arity N."""
    i, v = ut.i, ut.v
    N = i.max_arity if N is None else N
    quiver = i.source.quiver
    rep = Report("unit-transformation", N)
    _sum_report(rep, [(1, apply_B(i, N))], N, quiver)
    rep2 = Report("unit-idempotence", N)
    _sum_report(
        rep2,
        [(1, apply_B(TransformationChain.of(i, i), N)), (-1, i), (-1, apply_B(v, N))],
        N,
        quiver,
    )
    return rep.merge(rep2)
