"""Unit elements of an A-infinity category.

A unit element of X is a degree -1 cycle ``i0`` of ``sC(X, X)``, idempotent
up to a boundary, whose insertions ``(1 (x) i0)b_2`` and ``(i0 (x) 1)b_2``
are homotopy invertible.  Elements are stored as maps from the ground
field, exactly like arity-0 components of a coderivation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.families import AInfCategory
from ..core.report import Report
from ..exactlin import (
    ChainMap,
    Complex,
    GradedMap,
    cohomology,
    compose_maps,
    find_chain_homotopy,
    identity_map,
    is_homotopy_invertible,
    tensor_maps,
    zero_map,
)
from ..exactlin.graded import element_map
from ..exactlin.solve import solve


@dataclass
class UnitAssignment:
    """A chosen element ``i0(X)`` of ``(sC)^{-1}(X, X)`` for every object X."""

    cat: AInfCategory
    elements: dict

    def __getitem__(self, x) -> GradedMap:
        return self.elements[x]

    def vector(self, x) -> dict:
        return dict(self.elements[x].rows[0])

    def components(self) -> dict:
        """The arity-0 components ``{(X,): i0(X)}`` of a unit transformation."""
        return {(x,): m for x, m in self.elements.items() if m}


def hom_chain_complex(cat: AInfCategory, x, y) -> Complex:
    """``(sC(X, Y), b_1)``."""
    mod = cat.hom(x, y)
    b1 = cat.component((x, y))
    return Complex(mod, b1 if b1 is not None else zero_map(mod, mod, 1))


def _b(cat: AInfCategory, seq) -> GradedMap | None:
    return cat.component(tuple(seq))


def act_right(cat: AInfCategory, elem: GradedMap, a, b, x) -> GradedMap:
    """``z -> (z (x) e)b_2`` on ``sC(X, A)`` for ``e`` an element of ``sC(A, B)``."""
    src = cat.hom(x, a)
    tgt = cat.hom(x, b)
    b2 = _b(cat, (x, a, b))
    if b2 is None or not src.dim:
        return zero_map(src, tgt, elem.degree + 1)
    m = compose_maps(tensor_maps(identity_map(src), elem), b2)
    return GradedMap._trusted(src, tgt, m.degree, m.rows)


def act_left(cat: AInfCategory, elem: GradedMap, a, b, y) -> GradedMap:
    """``z -> (e (x) z)b_2`` on ``sC(B, Y)`` for ``e`` an element of ``sC(A, B)``."""
    src = cat.hom(b, y)
    tgt = cat.hom(a, y)
    b2 = _b(cat, (a, b, y))
    if b2 is None or not src.dim:
        return zero_map(src, tgt, elem.degree + 1)
    m = compose_maps(tensor_maps(elem, identity_map(src)), b2)
    return GradedMap._trusted(src, tgt, m.degree, m.rows)


def element(cat: AInfCategory, x, y, vector: dict, degree: int) -> GradedMap:
    return element_map(cat.hom(x, y), vector, degree)


def _insertion_terms(cat: AInfCategory, x, elem: GradedMap):
    """Every ``b_n`` with ``elem`` placed in one ``(X, X)`` slot, for n >= 3.

    Yields ``(seq, map)`` where map acts on the tensor of the other slots.
    """
    sup = cat.support
    top = cat.max_arity if sup is None else max(sup, default=0)
    if top is None:
        raise ValueError("cannot bound the arities of a complete category without support")
    for n in range(3, top + 1):
        if sup is not None and n not in sup:
            continue
        for seq in cat.quiver.paths(n):
            bn = _b(cat, seq)
            if bn is None:
                continue
            for pos in range(n):
                if seq[pos] != x or seq[pos + 1] != x:
                    continue
                parts = [identity_map(cat.hom(seq[j], seq[j + 1])) for j in range(n)]
                parts[pos] = elem
                yield seq, compose_maps(tensor_maps(*parts), bn)


def _strict_equations(cat: AInfCategory, x, basis_elems: list):
    """Rows of the linear system for a strict unit of X in the given basis."""
    blocks = []  # (maps per basis element, target map)
    for (a, b), mod in cat.quiver.homs.items():
        if not mod.dim:
            continue
        if b == x:
            one = identity_map(mod)
            blocks.append(([act_right(cat, e, x, x, a) for e in basis_elems], one))
        if a == x:
            one = identity_map(mod)
            blocks.append(([act_left(cat, e, x, x, b) for e in basis_elems], -one))
    b1 = _b(cat, (x, x))
    if b1 is not None and basis_elems:
        ms = [compose_maps(e, b1) for e in basis_elems]
        blocks.append((ms, zero_map(ms[0].source, ms[0].target, 0)))
    if basis_elems:
        higher: dict = {}
        for j, e in enumerate(basis_elems):
            for seq, m in _insertion_terms(cat, x, e):
                key = (seq, m.source)
                higher.setdefault(key, [None] * len(basis_elems))[j] = m
        for (seq, src), ms in higher.items():
            like = next(m for m in ms if m is not None)
            ms = [m if m is not None else zero_map(like.source, like.target, like.degree) for m in ms]
            blocks.append((ms, zero_map(like.source, like.target, like.degree)))
    eqs, rhs = [], []
    for ms, target in blocks:
        for i in range(target.source.dim):
            cols = set(target.rows[i])
            for m in ms:
                cols |= set(m.rows[i])
            for j in sorted(cols):
                eqs.append({v: m.rows[i][j] for v, m in enumerate(ms) if j in m.rows[i]})
                rhs.append(target.rows[i].get(j, 0))
    return eqs, rhs


def strict_units(cat: AInfCategory) -> UnitAssignment | None:
    """The strict unit assignment, or None if some object has no strict unit.

    Strict means ``(1 (x) i0)b_2 = 1``, ``(i0 (x) 1)b_2 = -1``, ``i0 b_1 = 0``
    and every higher ``b_n`` with ``i0`` inserted vanishes.
    """
    elements = {}
    for x in cat.objects:
        mod = cat.hom(x, x)
        idx = mod.indices(-1)
        basis_elems = [element_map(mod, {i: cat.field.one}, -1) for i in idx]
        eqs, rhs = _strict_equations(cat, x, basis_elems)
        sol = solve(eqs, rhs, len(idx))
        if sol is None:
            return None
        elements[x] = element_map(mod, {idx[v]: c for v, c in sol.items()}, -1)
    return UnitAssignment(cat, elements)


@dataclass
class UnitCheck:
    report: Report
    v0: dict = field(default_factory=dict)  # X -> element of degree -2
    right_homotopies: dict = field(default_factory=dict)  # (X, Y) -> h with (1 (x) i0)b_2 - 1 = hd + dh
    left_homotopies: dict = field(default_factory=dict)  # (X, Y) -> h with (i0 (x) 1)b_2 + 1 = hd + dh


def idempotence_witness(cat: AInfCategory, i0: UnitAssignment, x) -> GradedMap | None:
    """``v0`` with ``(i0 (x) i0)b_2 - i0 = v0 b_1``, or None."""
    e = i0[x]
    mod = cat.hom(x, x)
    b2 = _b(cat, (x, x, x))
    sq = compose_maps(tensor_maps(e, e), b2) if b2 is not None else None
    target = dict(e.rows[0])
    target = {j: -c for j, c in target.items()}
    if sq is not None:
        for j, c in sq.rows[0].items():
            target[j] = target.get(j, 0) + c
    target = {j: c for j, c in target.items() if c}
    idx = mod.indices(-2)
    b1 = _b(cat, (x, x))
    cols: dict = {}
    if b1 is not None:
        for v, i in enumerate(idx):
            for j, c in b1.rows[i].items():
                cols.setdefault(j, {})[v] = c
    keys = sorted(set(cols) | set(target))
    sol = solve([cols.get(j, {}) for j in keys], [target.get(j, 0) for j in keys], len(idx))
    if sol is None:
        return None
    return element_map(mod, {idx[v]: c for v, c in sol.items()}, -2)


def unit_element_data(cat: AInfCategory, i0: UnitAssignment) -> UnitCheck:
    """Check every unit axiom and keep the witnesses that the later constructions use."""
    rep = Report("unit-element", 2)
    out = UnitCheck(rep)
    for x in cat.objects:
        e = i0[x]
        rep.checked += 1
        b1 = _b(cat, (x, x))
        if b1 is not None and compose_maps(e, b1):
            rep.fail(0, (x,), compose_maps(e, b1), "unit element is not a cycle")
            continue
        v0 = idempotence_witness(cat, i0, x)
        if v0 is None:
            rep.fail(2, (x, x, x), None, "(i0 (x) i0)b_2 - i0 is not a boundary")
        else:
            out.v0[x] = v0
    for (a, b), mod in cat.quiver.homs.items():
        if not mod.dim:
            continue
        rep.checked += 1
        cx = hom_chain_complex(cat, a, b)
        one = identity_map(mod)
        right = act_right(cat, i0[b], b, b, a)
        left = act_left(cat, i0[a], a, a, b)
        for name, m, sign, store in (
            ("(1 (x) i0)b_2", right, 1, out.right_homotopies),
            ("(i0 (x) 1)b_2", left, -1, out.left_homotopies),
        ):
            try:
                u = ChainMap(cx, cx, m)
            except Exception as exc:  # not a chain map
                rep.fail(2, (a, b), None, f"{name} is not a chain map: {exc}")
                continue
            if not is_homotopy_invertible(u):
                rep.fail(2, (a, b), m, f"{name} is not homotopy invertible")
                continue
            h = find_chain_homotopy(m, one if sign > 0 else -one, cx, cx)
            if h is None:
                rep.fail(2, (a, b), m, f"{name} is not homotopic to {'+1' if sign > 0 else '-1'}")
            else:
                store[(a, b)] = h
    return out


def check_unit_element(cat: AInfCategory, i0: UnitAssignment) -> Report:
    return unit_element_data(cat, i0).report


def find_unit_elements(cat: AInfCategory) -> UnitAssignment | None:
    """A unit assignment passing :func:`check_unit_element`, or None.

    Strict units are preferred.  Otherwise, for each X the unit class is the
    class in ``H^{-1}(sC(X, X))`` acting by +1 from the right and by -1 from
    the left on the cohomology of every hom complex; these conditions are
    linear, so one solve per object decides existence.
    """
    strict = strict_units(cat)
    if strict is not None and check_unit_element(cat, strict).passed:
        return strict
    elements = {}
    coh = {}
    for (a, b), mod in cat.quiver.homs.items():
        if mod.dim:
            coh[(a, b)] = cohomology(hom_chain_complex(cat, a, b))
    for x in cat.objects:
        mod = cat.hom(x, x)
        hx = coh.get((x, x))
        if hx is None:
            elements[x] = element_map(mod, {}, -1)
            continue
        reps = [element_map(mod, hx.include.rows[i], -1) for i in hx.module.indices(-1)]
        blocks = []
        for (a, b), h in coh.items():
            if not h.module.dim:
                continue
            one = identity_map(h.module)
            if b == x:
                ms = [compose_maps(compose_maps(h.include, act_right(cat, e, x, x, a)), h.project) for e in reps]
                blocks.append((ms, one))
            if a == x:
                ms = [compose_maps(compose_maps(h.include, act_left(cat, e, x, x, b)), h.project) for e in reps]
                blocks.append((ms, -one))
        eqs, rhs = [], []
        for ms, target in blocks:
            for i in range(target.source.dim):
                cols = set(target.rows[i])
                for m in ms:
                    cols |= set(m.rows[i])
                for j in sorted(cols):
                    eqs.append({v: m.rows[i][j] for v, m in enumerate(ms) if j in m.rows[i]})
                    rhs.append(target.rows[i].get(j, 0))
        sol = solve(eqs, rhs, len(reps))
        if sol is None:
            return None
        vec: dict = {}
        for v, c in sol.items():
            for j, r in reps[v].rows[0].items():
                vec[j] = vec.get(j, 0) + c * r
        elements[x] = element_map(mod, {j: c for j, c in vec.items() if c}, -1)
    found = UnitAssignment(cat, elements)
    return found if check_unit_element(cat, found).passed else None


__all__ = [
    "UnitAssignment",
    "UnitCheck",
    "act_left",
    "act_right",
    "check_unit_element",
    "element",
    "find_unit_elements",
    "hom_chain_complex",
    "idempotence_witness",
    "strict_units",
    "unit_element_data",
]
