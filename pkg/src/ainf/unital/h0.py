"""The ordinary category ``H^0`` of a unital A-infinity category.

Homs are degree-0 cohomology of the unshifted homs, which is degree -1 of
``(sC(X, Y), b_1)``.  For degree-0 elements the suspension signs vanish, so
``m_2(a, b) = b_2(as, bs) s^{-1}`` and classes compose by ``b_2`` of their
representatives.  Identities are the classes of the unit elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from ..core.families import AInfCategory, AInfFunctor, Coderivation
from ..core.report import Report
from ..exactlin import apply_map, cohomology
from ..exactlin.graded import vector_add
from .transform import UnitError
from .units import UnitAssignment, check_unit_element, hom_chain_complex


@dataclass
class FiniteLinearCategory:
    """Objects, finite-dimensional homs and composition tables.

    ``composition[(X, Y, Z)][(i, j)]`` is the vector of ``e_i e_j`` (first
    ``e_i: X -> Y``, then ``e_j: Y -> Z``) in the basis of ``Hom(X, Z)``.
    """

    objects: list
    homs: dict  # (X, Y) -> list of basis labels
    composition: dict
    identities: dict  # X -> vector
    field: object = None
    representatives: dict = dc_field(default_factory=dict)  # (X, Y) -> list of vectors in sC(X, Y)

    def dim(self, x, y) -> int:
        return len(self.homs[(x, y)])

    def compose(self, x, y, z, a: dict, b: dict) -> dict:
        table = self.composition[(x, y, z)]
        out: dict = {}
        for i, c in a.items():
            for j, e in b.items():
                for k, v in table.get((i, j), {}).items():
                    w = out.get(k, 0) + c * e * v
                    if w:
                        out[k] = w
                    else:
                        out.pop(k, None)
        return out

    def check(self) -> Report:
        """Associativity and both unit laws on basis elements."""
        rep = Report("linear-category", 3)
        obs = self.objects
        for x in obs:
            for y in obs:
                for i in range(self.dim(x, y)):
                    e = {i: 1}
                    rep.checked += 1
                    if self.compose(x, x, y, self.identities[x], e) != e:
                        rep.fail(2, (x, x, y), None, f"identity of {x!r} is not a left unit")
                    if self.compose(x, y, y, e, self.identities[y]) != e:
                        rep.fail(2, (x, y, y), None, f"identity of {y!r} is not a right unit")
        for x in obs:
            for y in obs:
                for z in obs:
                    for w in obs:
                        for i in range(self.dim(x, y)):
                            for j in range(self.dim(y, z)):
                                for k in range(self.dim(z, w)):
                                    rep.checked += 1
                                    a, b, c = {i: 1}, {j: 1}, {k: 1}
                                    left = self.compose(x, z, w, self.compose(x, y, z, a, b), c)
                                    right = self.compose(x, y, w, a, self.compose(y, z, w, b, c))
                                    if left != right:
                                        rep.fail(3, (x, y, z, w), None, "composition is not associative")
        return rep


def _label(mod, vec: dict) -> str:
    parts = []
    for j in sorted(vec):
        c = vec[j]
        lab = str(mod.basis[j][0])
        if c == 1:
            parts.append(lab)
        elif c == -1:
            parts.append(f"-{lab}")
        else:
            parts.append(f"{c}*{lab}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


def _product(cat: AInfCategory, seq, a: dict, b: dict) -> dict:
    """``b_2(a, b)`` for degree -1 vectors a in ``sC(X, Y)``, b in ``sC(Y, Z)``."""
    b2 = cat.component(tuple(seq))
    if b2 is None:
        return {}
    d2 = cat.hom(seq[1], seq[2]).dim
    out: dict = {}
    for i, c in a.items():
        for j, e in b.items():
            out = vector_add(out, {k: c * e * v for k, v in b2.rows[i * d2 + j].items()})
    return out


def h0(cat: AInfCategory, i0: UnitAssignment) -> FiniteLinearCategory:
    """``H^0`` of a unital category, with representative independence asserted."""
    rep = check_unit_element(cat, i0)
    if not rep.passed:
        raise UnitError(f"unit element check fails: {rep.summary()}")
    coh = {}
    homs, reps = {}, {}
    for (x, y) in cat.quiver.homs:
        cx = hom_chain_complex(cat, x, y)
        h = cohomology(cx)
        coh[(x, y)] = h
        _, vecs, _ = h.degree(-1)
        reps[(x, y)] = [dict(v) for v in vecs]
        homs[(x, y)] = [f"[{_label(cx.module, v)}]" for v in vecs]
    boundaries = {pair: _boundaries(cat, *pair) for pair in cat.quiver.homs}
    composition = {}
    for x in cat.objects:
        for y in cat.objects:
            for z in cat.objects:
                seq = (x, y, z)
                table = {}
                hz = coh[(x, z)]
                for i, a in enumerate(reps[(x, y)]):
                    for j, b in enumerate(reps[(y, z)]):
                        prod = _product(cat, seq, a, b)
                        cls = _class(hz, prod, seq)
                        if cls:
                            table[(i, j)] = cls
                # representative independence: boundaries multiply to boundaries
                for a in reps[(x, y)]:
                    for beta in boundaries[(y, z)]:
                        if _class(hz, _product(cat, seq, a, beta), seq):
                            raise AssertionError(f"composition on {seq} depends on representatives")
                for beta in boundaries[(x, y)]:
                    for b in reps[(y, z)]:
                        if _class(hz, _product(cat, seq, beta, b), seq):
                            raise AssertionError(f"composition on {seq} depends on representatives")
                composition[seq] = table
    identities = {x: _class(coh[(x, x)], i0.vector(x), (x, x)) for x in cat.objects}
    return FiniteLinearCategory(
        list(cat.objects), homs, composition, identities, cat.field, reps
    )


def _class(h, vec: dict, where) -> dict:
    """The class of a degree -1 cycle in the basis of ``H^{-1}``; raises if it is not a cycle."""
    d = h.complex.differential
    if apply_map(vec, d):
        raise AssertionError(f"product on {where} is not a cycle")
    pos = {j: k for k, j in enumerate(h.module.indices(-1))}
    return {pos[j]: c for j, c in apply_map(vec, h.project).items()}


def _boundaries(cat: AInfCategory, x, y) -> list[dict]:
    """Images under b_1 of the degree -2 basis of ``sC(X, Y)``."""
    mod = cat.hom(x, y)
    b1 = cat.component((x, y))
    if b1 is None:
        return []
    return [dict(b1.rows[i]) for i in mod.indices(-2) if b1.rows[i]]


def h0_functor(f: AInfFunctor, HA: FiniteLinearCategory, HB: FiniteLinearCategory) -> dict:
    """Matrices of ``H^0(f_1)`` on every hom: ``{(X, Y): [class vectors]}``."""
    out = {}
    B = f.target
    for (x, y), vecs in HA.representatives.items():
        xf, yf = f.obj(x), f.obj(y)
        h = cohomology(hom_chain_complex(B, xf, yf))
        f1 = f.component((x, y)) if vecs else None
        rows = []
        for v in vecs:
            img = apply_map(v, f1) if f1 is not None else {}
            rows.append(_class(h, img, (xf, yf)))
        out[(x, y)] = rows
    return out


def h0_transformation(r: Coderivation) -> dict:
    """The class of ``r_0`` in ``H^0(Xf, Xg)`` for every object X."""
    B = r.target
    out = {}
    for x in r.source.objects:
        a, b = r.f.obj(x), r.g.obj(x)
        h = cohomology(hom_chain_complex(B, a, b))
        r0 = r.component((x,))
        out[x] = _class(h, dict(r0.rows[0]) if r0 is not None else {}, (a, b))
    return out
