"""Differential graded categories and strict functors between them.

Data are given unshifted (``m_1``, ``m_2`` in ordinary degrees) and turned
into shifted components b_1, b_2 through :func:`m_to_b`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from ..exactlin import QQ, GradedMap, GradedModule
from ..exactlin.graded import tensor_modules
from .convert import m_to_b, unshifted_quiver
from .families import AInfCategory, AInfFunctor
from .quiver import Quiver


def dg_category(
    objects: Sequence,
    basis: Mapping[tuple, Sequence[tuple[str, int]]],
    differential: Mapping[tuple, Mapping[str, Mapping[str, object]]],
    product: Mapping[tuple[str, str], Mapping[str, object]],
    field=QQ,
    name: str = "",
) -> AInfCategory:
    """A DG category from unshifted data.

    ``basis[(X, Y)]`` lists ``(label, degree)``; labels are unique across
    the category.  ``differential[(X, Y)][a]`` is ``m_1(a)`` as a
    ``{label: coeff}`` dict, and ``product[(a, b)]`` is ``m_2(a, b)``
    (a first, then b).
    """
    homs_shifted = {
        pair: GradedModule(((lab, d - 1) for lab, d in bs), field)
        for pair, bs in basis.items()
        if bs
    }
    quiver = Quiver(objects, homs_shifted, field)
    homs = unshifted_quiver(quiver)
    where = {lab: pair for pair, bs in basis.items() for lab, _ in bs}
    m: dict[tuple, GradedMap] = {}
    for (x, y), mod in homs.items():
        rows = []
        for lab, _ in mod.basis:
            img = differential.get((x, y), {}).get(lab, {})
            rows.append({mod.index(t): c for t, c in img.items()})
        mp = GradedMap(mod, mod, 1, rows)
        if mp:
            m[(x, y)] = mp
    prod_rows: dict[tuple, dict] = {}
    for (a, b), img in product.items():
        if not img:
            continue
        (x, y), (y2, z) = where[a], where[b]
        if y != y2:
            raise ValueError(f"product of non-composable {a}, {b}")
        prod_rows.setdefault((x, y, z), {})[(a, b)] = img
    for (x, y, z), table in prod_rows.items():
        src_u = homs[(x, y)], homs[(y, z)]
        src_un = tensor_modules(*src_u, field=field)
        tgt = homs[(x, z)]
        rows = []
        for (a, b), _ in src_un.basis:
            img = table.get((a, b), {})
            rows.append({tgt.index(t): c for t, c in img.items()})
        m[(x, y, z)] = GradedMap(src_un, tgt, 0, rows)
    return m_to_b(quiver, m, None, name)


def complexes_category(
    complexes: Mapping[str, Sequence[tuple[str, int]]],
    differentials: Mapping[str, Mapping[str, Mapping[str, object]]],
    field=QQ,
    name: str = "",
) -> AInfCategory:
    """The DG category whose objects are the given finite complexes.

    ``complexes[X]`` lists basis vectors ``(label, degree)``, and
    ``differentials[X][v]`` is ``v d`` as ``{label: coeff}``.  The hom
    ``X -> Y`` has basis ``"u>v"`` (sending u to v, degree deg v - deg u);
    ``m_1(phi) = phi d_Y - (-1)^{|phi|} d_X phi`` and ``m_2`` is composition.
    """
    objs = list(complexes)
    basis = {}
    for X in objs:
        for Y in objs:
            basis[(X, Y)] = [
                (f"{u}>{v}", dv - du) for u, du in complexes[X] for v, dv in complexes[Y]
            ]
    differential: dict = {}
    for X in objs:
        dX = differentials.get(X, {})
        for Y in objs:
            dY = differentials.get(Y, {})
            table = {}
            for u, du in complexes[X]:
                for v, dv in complexes[Y]:
                    p = dv - du
                    img: dict = {}
                    # phi d_Y: u -> v -> v d
                    for w, c in dY.get(v, {}).items():
                        key = f"{u}>{w}"
                        img[key] = img.get(key, 0) + c
                    # d_X phi: u' -> u' d contains u with coefficient c
                    for u2, _ in complexes[X]:
                        c = dX.get(u2, {}).get(u)
                        if c:
                            key = f"{u2}>{v}"
                            img[key] = img.get(key, 0) - (-1) ** (p % 2) * c
                    table[f"{u}>{v}"] = {k: c for k, c in img.items() if c}
            differential[(X, Y)] = table
    product = {}
    for X in objs:
        for Y in objs:
            for Z in objs:
                for u, _ in complexes[X]:
                    for v, _ in complexes[Y]:
                        for w, _ in complexes[Z]:
                            product[(f"{u}>{v}", f"{v}>{w}")] = {f"{u}>{w}": 1}
    # labels must be unique across pairs, so complexes must have distinct basis labels
    labels = [lab for X in objs for lab, _ in complexes[X]]
    if len(set(labels)) != len(labels):
        raise ValueError("basis labels of the complexes must be distinct")
    return dg_category(objs, basis, differential, product, field, name)


def strict_functor(
    source: AInfCategory,
    target: AInfCategory,
    obj_map: Mapping,
    images: Mapping[str, Mapping[str, object]],
    name: str = "",
) -> AInfFunctor:
    """A functor with only ``f_1``, given on basis labels: ``images[a] = {label: coeff}``.

    On shifted homs a degree-0 map carries no suspension sign, so the
    matrices are those of the underlying DG functor.
    """
    comps = {}
    for (x, y), mod in source.quiver.homs.items():
        tgt = target.hom(obj_map[x], obj_map[y])
        rows = []
        for lab, _ in mod.basis:
            img = images.get(lab, {})
            rows.append({tgt.index(t): c for t, c in img.items()})
        comps[(x, y)] = GradedMap(mod, tgt, 0, rows)
    return AInfFunctor(source, target, obj_map, comps, None, name)


def scaling_functor(cat: AInfCategory, weights: Mapping, name: str = "") -> AInfFunctor:
    """The strict automorphism ``phi -> w_X^{-1} w_Y phi`` on ``Hom(X, Y)``."""
    images = {}
    for (x, y), mod in cat.quiver.homs.items():
        c = cat.field(Fraction(weights[y]) / Fraction(weights[x])) if cat.field == QQ else (
            cat.field(weights[y]) / cat.field(weights[x])
        )
        for lab, _ in mod.basis:
            images[lab] = {lab: c}
    return strict_functor(cat, cat, {x: x for x in cat.objects}, images, name)
