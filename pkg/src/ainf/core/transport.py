"""Transport of an A-infinity structure along a functor with invertible first component.

Given a category B and maps ``phi_n: T^n sB -> sB`` of degree 0 on the
same quiver with every ``phi_1`` invertible, there is a unique b^C on the
quiver making phi an A-infinity functor ``C -> B``:

    ``b^C_k = (sum_l phi_{kl} b^B_l - sum_{j >= 2} b^C_{kj} phi_j) phi_1^{-1}``.

The right side only involves ``b^C_i`` with i < k, so the components are
found arity by arity.  Nonzero higher ``phi_n`` give structures whose units
are no longer strict.
"""

from __future__ import annotations

from typing import Mapping

from ..exactlin import GradedMap, compose_maps, tensor_maps
from ..exactlin.solve import inverse
from .checks import b_theta
from .engine import Theta
from .families import AInfCategory, AInfFunctor


def _inverse_map(m: GradedMap) -> GradedMap:
    n = m.source.dim
    if m.target.dim != n:
        raise ValueError("first component is not square")
    inv = inverse([dict(r) for r in m.rows], n)
    if inv is None:
        raise ValueError("first component is not invertible")
    return GradedMap(m.target, m.source, -m.degree, inv)


def _linear_component(B: AInfCategory, phi, inv1, seq) -> GradedMap | None:
    b = B.component(seq)
    if b is None:
        return None
    parts = [phi.component((seq[j], seq[j + 1])) for j in range(len(seq) - 1)]
    m = compose_maps(compose_maps(tensor_maps(*parts), b), inv1[(seq[0], seq[-1])])
    return m if m else None


def pullback_category(
    B: AInfCategory,
    phi_components: Mapping[tuple, GradedMap],
    N: int,
    name: str = "",
) -> tuple[AInfCategory, AInfFunctor]:
    """The category C through arity N and the functor ``phi: C -> B``.

    ``phi_components`` are keyed by object sequences of B's quiver; every
    hom pair must have an invertible ``phi_1``.  The objects map identically.
    """
    quiver = B.quiver
    ident = {x: x for x in quiver.objects}
    draft_phi = AInfFunctor(B, B, ident, dict(phi_components), None, "phi")
    inv1 = {}
    for pair, mod in quiver.homs.items():
        if not mod.dim:
            continue
        p1 = draft_phi.component(pair)
        if p1 is None:
            raise ValueError(f"phi_1 vanishes on {pair}")
        inv1[pair] = _inverse_map(p1)
    phi_th = Theta((draft_phi,), ())
    comps: dict = {}
    for k in range(1, N + 1):
        partial = AInfCategory(quiver, dict(comps), k - 1, name)
        bth = b_theta(partial)
        for seq in quiver.paths(k):
            total = phi_th.then(seq, B)
            for out, m in bth(seq, range(2, k + 1)).items():
                pj = draft_phi.component(out)
                if pj is None:
                    continue
                term = -compose_maps(m, pj)
                total = term if total is None else total + term
            if total is None or not total:
                continue
            bk = compose_maps(total, inv1[(seq[0], seq[-1])])
            if bk:
                comps[seq] = bk
    # a functor with only first components and a complete B give a complete C
    linear = all(len(seq) == 2 for seq in phi_components) and B.is_complete()
    top = B.top_arity if linear else N
    if linear:
        for k in range(N + 1, top + 1):
            for seq in quiver.paths(k):
                bk = _linear_component(B, draft_phi, inv1, seq)
                if bk is not None:
                    comps[seq] = bk
    C = AInfCategory(quiver, comps, None if linear else N, name)
    phi = AInfFunctor(C, B, ident, dict(phi_components), None, "phi")
    return C, phi
