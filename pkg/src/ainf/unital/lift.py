"""Lifting cycles of ``Cone(Hom(N, u'))`` one arity at a time.

Every inductive construction has the same shape: at arity n the defects
``nu_n`` (into the target of u') and ``lam_n`` (into its source) form a
cycle of the cone of ``Hom(N, u')`` for ``N = T(seq)``, and a preimage
``(first, second)`` gives the new components.  The cone is contracted
once per chain map u', and a cycle of the hom cone is lifted by
post-composition with the contraction.
"""

from __future__ import annotations

from functools import lru_cache

from ..core.families import AInfCategory
from ..exactlin import (
    ChainMap,
    Complex,
    ConeContraction,
    GradedMap,
    build_cone_contraction,
    contract_hom_cycle,
    homotopy_inverse,
    zero_map,
)
from ..hom.homcomplex import _b1_on_tensor


class LiftError(ValueError):
    pass


def tensor_complex(cat: AInfCategory, seq) -> Complex:
    """``T(seq)`` with the differential ``sum (1 .. b_1 .. 1)``."""
    return Complex(cat.tensor(seq), tensor_differential(cat, seq), check=False)


@lru_cache(maxsize=2048)
def tensor_differential(cat: AInfCategory, seq) -> GradedMap:
    return _b1_on_tensor(cat, tuple(seq))


def contraction_for(u: ChainMap) -> ConeContraction:
    """Contract ``Cone(u)`` from a computed homotopy inverse of u."""
    eq = homotopy_inverse(u)
    if eq is None:
        raise LiftError("the chain map is not homotopy invertible, so its cone is not contractible")
    return build_cone_contraction(u, eq.v, eq.h_prime, eq.h_double_prime)


def lift_pair(
    nu: GradedMap | None,
    lam: GradedMap | None,
    contraction: ConeContraction,
    d_source: GradedMap,
    degree: int,
) -> tuple[GradedMap, GradedMap]:
    """Split a preimage of the cycle ``(nu, lam)`` of ``Cone(Hom(N, u'))``.

    ``nu`` maps N to the target of u' with the given degree and ``lam`` maps
    N to the source of u' with degree + 1.  Returns ``(first, second)`` of
    degrees ``degree - 1`` and ``degree`` with ``first d + second u' = nu``
    and ``-second d = lam``.
    """
    u = contraction.u
    src_mod, tgt_mod = u.source.module, u.target.module
    n_mod = d_source.source
    if nu is None:
        nu = zero_map(n_mod, tgt_mod, degree)
    if lam is None:
        lam = zero_map(n_mod, src_mod, degree + 1)
    cone_mod = contraction.cone.module
    nc = tgt_mod.dim
    rows = []
    for i in range(n_mod.dim):
        row = dict(nu.rows[i])
        for j, c in lam.rows[i].items():
            row[nc + j] = c
        rows.append(row)
    z = GradedMap(n_mod, cone_mod, degree, rows)
    w = contract_hom_cycle(z, contraction, d_source)
    first = GradedMap(
        n_mod, tgt_mod, degree - 1, [{j: c for j, c in r.items() if j < nc} for r in w.rows]
    )
    second = GradedMap(
        n_mod, src_mod, degree, [{j - nc: c for j, c in r.items() if j >= nc} for r in w.rows]
    )
    return first, second


def lift_at(cat: AInfCategory, seq, nu, lam, contraction: ConeContraction, degree: int):
    """:func:`lift_pair` on ``N = T(seq)`` of the source category ``cat``."""
    return lift_pair(nu, lam, contraction, tensor_differential(cat, tuple(seq)), degree)
