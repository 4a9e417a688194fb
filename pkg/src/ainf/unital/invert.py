"""Inverting a natural transformation ``r: f -> g`` up to equivalence.

Given ``p0``, ``w0`` and ``v0`` per object with

    ``(r0 (x) p0)b_2 - i0 = w0 b_1``  and  ``(p0 (x) r0)b_2 - i0 = v0 b_1``,

the components of ``p: g -> f`` and ``w`` come from lifting

    ``lam = [p~ B_1]_n``,  ``nu = [(r (x) p~)B_2 - (f|i)M_{01} - w~ B_1]_n``

through the cone of ``x -> (r0 (x) x)b_2``.  The other composite is then
a boundary, and ``t`` with ``(p (x) r)B_2 - g i = tB_1`` is found by one
joint solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.families import AInfCategory, Coderivation
from ..core.report import Report
from ..exactlin import (
    ChainMap,
    GradedMap,
    compose_maps,
    find_chain_homotopy,
    identity_map,
    is_homotopy_invertible,
)
from ..exactlin.graded import element_map
from ..exactlin.solve import solve
from ..hom.chain import TransformationChain
from ..hom.composition import M_component, apply_M
from ..hom.differential import B_component, _sum_report, apply_B
from ..hom.homcomplex import solve_B1
from .lift import LiftError, contraction_for, lift_at
from .transform import UnitTransformation
from .units import act_left, act_right, hom_chain_complex


class InversionError(ValueError):
    """A precondition of the inversion fails."""


@dataclass
class InvertibilityWitness:
    """Per source object X: ``p0`` in ``sB(Xg, Xf)``, ``w0`` and ``v0`` of degree -2."""

    p0: dict
    w0: dict
    v0: dict


@dataclass
class Inverse:
    p: Coderivation
    w: Coderivation
    t: Coderivation


@dataclass
class CompositeCheck:
    report: Report
    signs: dict = field(default_factory=dict)  # (name, X, Y) -> +1, -1 or 0 when homotopic to neither


def witness_defects(r: Coderivation, i0, witness: InvertibilityWitness) -> list[str]:
    """Objects at which one of the two witness equations fails."""
    f, g, B = r.f, r.g, r.target
    bad = []
    for x in r.source.objects:
        xf, xg = f.obj(x), g.obj(x)
        r0 = r.component_or_zero((x,))
        p0 = witness.p0[x]
        for name, a, b, base, w in (
            ("(r0 (x) p0)b_2 - i0 = w0 b_1", r0, p0, xf, witness.w0.get(x)),
            ("(p0 (x) r0)b_2 - i0 = v0 b_1", p0, r0, xg, witness.v0.get(x)),
        ):
            other = xg if base == xf else xf
            sq = compose_maps(a, act_right(B, b, other, base, base))
            total = sq - i0[base]
            b1 = B.component((base, base))
            if w is not None and b1 is not None:
                total = total - compose_maps(w, b1)
            if total:
                bad.append(f"{name} at {x!r}")
    return bad


def find_invertibility_witness(r: Coderivation, i0) -> InvertibilityWitness | None:
    """Solve ``(r0 (x) p0)b_2 - w0 b_1 = i0`` jointly for ``(p0, w0)``, then for v0."""
    f, g, B = r.f, r.g, r.target
    p0s, w0s, v0s = {}, {}, {}
    for x in r.source.objects:
        xf, xg = f.obj(x), g.obj(x)
        r0 = r.component_or_zero((x,))
        back = B.hom(xg, xf)
        p_idx = back.indices(-1)
        home = B.hom(xf, xf)
        w_idx = home.indices(-2)
        cols = []
        for a in p_idx:
            e = element_map(back, {a: B.field.one}, -1)
            cols.append(compose_maps(r0, act_right(B, e, xg, xf, xf)).rows[0])
        b1 = B.component((xf, xf))
        for c in w_idx:
            cols.append({j: -e for j, e in (b1.rows[c] if b1 is not None else {}).items()})
        target = i0[xf].rows[0]
        keys = sorted(set(target).union(*[set(c) for c in cols]) if cols else set(target))
        eqs = [{v: col[j] for v, col in enumerate(cols) if j in col} for j in keys]
        sol = solve(eqs, [target.get(j, 0) for j in keys], len(cols))
        if sol is None:
            return None
        p0s[x] = element_map(back, {p_idx[v]: c for v, c in sol.items() if v < len(p_idx)}, -1)
        w0s[x] = element_map(
            home, {w_idx[v - len(p_idx)]: c for v, c in sol.items() if v >= len(p_idx)}, -2
        )
        v0 = _boundary_preimage(
            B, xg, compose_maps(p0s[x], act_right(B, r0, xf, xg, xg)) - i0[xg]
        )
        if v0 is None:
            return None
        v0s[x] = v0
    return InvertibilityWitness(p0s, w0s, v0s)


def _boundary_preimage(B: AInfCategory, x, z: GradedMap) -> GradedMap | None:
    """Some ``w`` of degree ``deg z - 1`` in ``sB(X, X)`` with ``w b_1 = z``."""
    mod = B.hom(x, x)
    idx = mod.indices(z.degree - 1)
    b1 = B.component((x, x))
    target = z.rows[0]
    cols = [dict(b1.rows[i]) if b1 is not None else {} for i in idx]
    keys = sorted(set(target).union(*[set(c) for c in cols]) if cols else set(target))
    eqs = [{v: col[j] for v, col in enumerate(cols) if j in col} for j in keys]
    sol = solve(eqs, [target.get(j, 0) for j in keys], len(idx))
    if sol is None:
        return None
    return element_map(mod, {idx[v]: c for v, c in sol.items()}, z.degree - 1)


def insertion_composites(r: Coderivation, witness: InvertibilityWitness) -> CompositeCheck:
    """The composites of ``(r0 (x) 1)b_2`` with ``(p0 (x) 1)b_2`` and of ``(1 (x) r0)b_2`` with
    ``(1 (x) p0)b_2`` on every hom complex are homotopy invertible.

    Each composite is also compared with +1 and -1 up to homotopy; the sign
    found is recorded.
    """
    f, g, B = r.f, r.g, r.target
    rep = Report("insertion-composites", 2)
    out = CompositeCheck(rep)
    for x in r.source.objects:
        xf, xg = f.obj(x), g.obj(x)
        r0 = r.component_or_zero((x,))
        p0 = witness.p0[x]
        for y in B.objects:
            pairs = [
                # z in sB(Xg, Y): (r0 (x) z)b_2 in sB(Xf, Y), then (p0 (x) _)b_2
                ("(r0 (x) 1)b_2 (p0 (x) 1)b_2", (xg, y),
                 act_left(B, r0, xf, xg, y), act_left(B, p0, xg, xf, y)),
                ("(p0 (x) 1)b_2 (r0 (x) 1)b_2", (xf, y),
                 act_left(B, p0, xg, xf, y), act_left(B, r0, xf, xg, y)),
                # z in sB(Y, Xf): (z (x) r0)b_2 in sB(Y, Xg), then (_ (x) p0)b_2
                ("(1 (x) r0)b_2 (1 (x) p0)b_2", (y, xf),
                 act_right(B, r0, xf, xg, y), act_right(B, p0, xg, xf, y)),
                ("(1 (x) p0)b_2 (1 (x) r0)b_2", (y, xg),
                 act_right(B, p0, xg, xf, y), act_right(B, r0, xf, xg, y)),
            ]
            for name, pair, first, second in pairs:
                mod = B.hom(*pair)
                if not mod.dim:
                    continue
                rep.checked += 1
                cx = hom_chain_complex(B, *pair)
                comp = compose_maps(first, second)
                try:
                    u = ChainMap(cx, cx, comp)
                except Exception as exc:
                    rep.fail(2, pair, None, f"{name} is not a chain map: {exc}")
                    continue
                if not is_homotopy_invertible(u):
                    rep.fail(2, pair, comp, f"{name} is not homotopy invertible")
                    continue
                one = identity_map(mod)
                sign = 0
                if find_chain_homotopy(comp, one, cx, cx) is not None:
                    sign = 1
                elif find_chain_homotopy(comp, -one, cx, cx) is not None:
                    sign = -1
                out.signs[(name, x, y)] = sign
    return out


def invert_transformation(
    r: Coderivation, witness: InvertibilityWitness, unit: UnitTransformation, N: int
) -> Inverse:
    """Natural ``p: g -> f`` with witnesses w and t through arity N.

    ``(r (x) p)B_2 - f i = wB_1`` and ``(p (x) r)B_2 - g i = tB_1``, where i
    is the unit transformation of the target category.
    """
    f, g = r.f, r.g
    A, B = r.source, r.target
    iB = unit.i
    if r.degree != -1 or apply_B(r, N).maps:
        raise InversionError("r is not natural through the requested arity")
    i0 = {x: iB.component_or_zero((x,)) for x in B.objects}
    bad = witness_defects(r, i0, witness)
    if bad:
        raise InversionError("witness equation fails: " + "; ".join(bad))
    composites = insertion_composites(r, witness)
    if not composites.report.passed:
        raise InversionError(composites.report.summary())
    p_comps = {(x,): witness.p0[x] for x in A.objects if witness.p0[x]}
    w_comps = {(x,): witness.w0[x] for x in A.objects if witness.w0[x]}
    contractions: dict = {}
    for n in range(1, N + 1):
        p_t = Coderivation(g, f, -1, p_comps, None)
        w_t = Coderivation(f, f, -2, w_comps, None)
        rp = TransformationChain.of(r, p_t)
        new_p, new_w = {}, {}
        for seq in A.quiver.paths(n):
            x0, xn = seq[0], seq[-1]
            if not A.tensor(seq).dim:
                continue
            if not B.hom(f.obj(x0), f.obj(xn)).dim and not B.hom(g.obj(x0), f.obj(xn)).dim:
                continue
            lam = B_component(p_t, seq)
            nu = None
            for sign, m in (
                (1, B_component(rp, seq)),
                (-1, M_component(f, iB, seq)),
                (-1, B_component(w_t, seq)),
            ):
                if m is None:
                    continue
                m = m if sign > 0 else -m
                nu = m if nu is None else nu + m
            if lam is None and (nu is None or not nu):
                continue
            key = (x0, xn)
            if key not in contractions:
                a, b, y = f.obj(x0), g.obj(x0), f.obj(xn)
                cx_src = hom_chain_complex(B, b, y)
                cx_tgt = hom_chain_complex(B, a, y)
                try:
                    u = ChainMap(cx_src, cx_tgt, act_left(B, r.component_or_zero((x0,)), a, b, y))
                    contractions[key] = contraction_for(u)
                except LiftError as exc:
                    raise InversionError(f"(r0 (x) 1)b_2 is not invertible on {key}") from exc
            wn, pn = lift_at(A, seq, nu, lam, contractions[key], -1)
            if pn:
                new_p[seq] = pn
            if wn:
                new_w[seq] = wn
        p_comps.update(new_p)
        w_comps.update(new_w)
    p = Coderivation(g, f, -1, p_comps, N, "p")
    w = Coderivation(f, f, -2, w_comps, N, "w")
    target = _other_composite(r, p, iB, N)
    t = solve_B1(target, -2, N)
    if t is None:
        raise InversionError("(p (x) r)B_2 - g i is not a boundary through the requested arity")
    return Inverse(p, w, t)


def _other_composite(r: Coderivation, p: Coderivation, iB: Coderivation, N: int) -> Coderivation:
    pr = apply_B(TransformationChain.of(p, r), N)
    gi = apply_M(r.g, iB, N)
    comps = {}
    for seq in set(pr.maps) | set(gi.maps):
        m = pr.component_or_zero(seq) - gi.component_or_zero(seq)
        if m:
            comps[seq] = m
    return Coderivation(r.g, r.g, -1, comps, N)


def check_inverse(r: Coderivation, inv: Inverse, unit: UnitTransformation, N: int) -> Report:
    """``pB_1 = 0`` and both witness equations through arity N."""
    iB = unit.i
    quiver = r.source.quiver
    rep = _sum_report(Report("inverse-natural", N), [(1, apply_B(inv.p, N))], N, quiver)
    rep.merge(
        _sum_report(
            Report("inverse-right", N),
            [
                (1, apply_B(TransformationChain.of(r, inv.p), N)),
                (-1, apply_M(r.f, iB, N)),
                (-1, apply_B(inv.w, N)),
            ],
            N,
            quiver,
        )
    )
    rep.merge(
        _sum_report(
            Report("inverse-left", N),
            [
                (1, apply_B(TransformationChain.of(inv.p, r), N)),
                (-1, apply_M(r.g, iB, N)),
                (-1, apply_B(inv.t, N)),
            ],
            N,
            quiver,
        )
    )
    return rep
