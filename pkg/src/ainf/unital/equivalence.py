"""Cancelling a functor, quasi-inverses and unital functors.

``cancel_functor`` finds t with ``t phi = y`` up to a boundary by lifting

    ``lam = [t~ B_1]_n``,  ``nu = [y - (t~|phi)M_{10} - v~ B_1]_n``

through the cone of ``phi_1``.  ``build_quasi_inverse`` builds a functor
``psi: B -> C`` together with ``r: id -> psi phi``, lifting

    ``lam = [psi~ b - b psi~]_n``  and  ``nu = -[r~ B_1]_n``

through the cone of ``z -> (r0 (x) z phi_1)b_2``, and then assembles the
unit of C from the cancelled transformations.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core.checks import b_theta, check_functor
from ..core.engine import Theta
from ..core.families import AInfFunctor, Coderivation
from ..core.report import Report
from ..exactlin import ChainMap, compose_maps
from ..hom.chain import TransformationChain
from ..hom.composition import M_component, apply_M, composite
from ..hom.differential import B_component, _sum_report, apply_B
from ..hom.homcomplex import equivalent_transformations, solve_B1
from .invert import (
    Inverse,
    InvertibilityWitness,
    _boundary_preimage,
    check_inverse,
    invert_transformation,
    witness_defects,
)
from .lift import LiftError, contraction_for, lift_at
from .transform import UnitTransformation, check_unit_transformation
from .units import UnitAssignment, act_left, check_unit_element, hom_chain_complex


class EquivalenceError(ValueError):
    """A precondition of cancellation or of the quasi-inverse construction fails."""


def _add(a, b, sign=1):
    if b is None:
        return a
    b = b if sign > 0 else -b
    return b if a is None else a + b


def _phi_contraction(phi: AInfFunctor, a, b):
    C, B = phi.source, phi.target
    src = hom_chain_complex(C, a, b)
    tgt = hom_chain_complex(B, phi.obj(a), phi.obj(b))
    try:
        return contraction_for(ChainMap(src, tgt, phi.component_or_zero((a, b))))
    except LiftError as exc:
        raise EquivalenceError(f"phi_1 is not homotopy invertible on {(a, b)}") from exc


def cancel_functor(
    phi: AInfFunctor, y: Coderivation, f: AInfFunctor, g: AInfFunctor, N: int
) -> tuple[Coderivation, Coderivation]:
    """``(t, v)`` with ``t: f -> g`` natural and ``(t|phi)M_{10} + vB_1 = y`` through N.

    ``f, g: A -> C`` are the functors that ``y: f phi -> g phi`` factors
    through; t has the degree of y and v one less.
    """
    A = f.source
    deg = y.degree
    if apply_B(y, N).maps:
        raise EquivalenceError("y is not closed under B_1 through the requested arity")
    t_comps: dict = {}
    v_comps: dict = {}
    contractions: dict = {}
    for n in range(0, N + 1):
        t_t = Coderivation(f, g, deg, t_comps, None)
        v_t = Coderivation(y.f, y.g, deg - 1, v_comps, None)
        new_t, new_v = {}, {}
        for seq in A.quiver.paths(n):
            pair = (f.obj(seq[0]), g.obj(seq[-1]))
            if not A.tensor(seq).dim:
                continue
            lam = B_component(t_t, seq) if n else None
            nu = y.component(seq)
            nu = _add(nu, M_component(t_t, phi, seq) if t_comps else None, -1)
            nu = _add(nu, B_component(v_t, seq) if v_comps else None, -1)
            if lam is None and (nu is None or not nu):
                continue
            if pair not in contractions:
                contractions[pair] = _phi_contraction(phi, *pair)
            vn, tn = lift_at(A, seq, nu, lam, contractions[pair], deg)
            if tn:
                new_t[seq] = tn
            if vn:
                new_v[seq] = vn
        t_comps.update(new_t)
        v_comps.update(new_v)
    t = Coderivation(f, g, deg, t_comps, N, "t")
    v = Coderivation(y.f, y.g, deg - 1, v_comps, N, "v")
    return t, v


def check_cancellation(
    phi: AInfFunctor, y: Coderivation, t: Coderivation, v: Coderivation, N: int
) -> Report:
    """``tB_1 = 0`` and ``(t|phi)M_{10} + vB_1 - y = 0`` through N."""
    quiver = t.source.quiver
    rep = _sum_report(Report("cancel-closed", N), [(1, apply_B(t, N))], N, quiver)
    return rep.merge(
        _sum_report(
            Report("cancel-factor", N),
            [(1, apply_M(t, phi, N)), (1, apply_B(v, N)), (-1, y)],
            N,
            quiver,
        )
    )


def unit_elements_of(i: Coderivation) -> UnitAssignment:
    cat = i.source
    return UnitAssignment(cat, {x: i.component_or_zero((x,)) for x in cat.objects})


def unit_from_transformation(i: Coderivation, N: int) -> UnitTransformation:
    """Pair i with a solved witness ``v`` of ``(i (x) i)B_2 - i = vB_1``."""
    sq = apply_B(TransformationChain.of(i, i), N)
    comps = {}
    for n in range(N + 1):
        for seq in i.source.quiver.paths(n):
            m = sq.component_or_zero(seq) - i.component_or_zero(seq)
            if m:
                comps[seq] = m
    v = solve_B1(Coderivation(i.f, i.g, -1, comps, N), -2, N)
    if v is None:
        raise EquivalenceError("(i (x) i)B_2 - i is not a boundary")
    return UnitTransformation(i, Coderivation(i.f, i.g, -2, v.maps, N, "v"))


def unital_functor_witness(
    f: AInfFunctor, iA: Coderivation, iB: Coderivation, N: int
) -> Coderivation | None:
    """Some v with ``vB_1 = (iA|f)M_{10} - (f|iB)M_{01}`` through N, or None."""
    left = apply_M(iA, f, N)
    right = apply_M(f, iB, N)
    comps = {}
    for n in range(N + 1):
        for seq in f.source.quiver.paths(n):
            m = left.component_or_zero(seq) - right.component_or_zero(seq)
            if m:
                comps[seq] = m
    return solve_B1(Coderivation(left.f, left.g, -1, comps, N), -2, N)


def check_unital_functor(f: AInfFunctor, iA: Coderivation, iB: Coderivation, N: int) -> Report:
    """``i^A f`` and ``f i^B`` are equivalent: at arity 0 per object and through N jointly.

    ``(i^A|f)M_{10}`` at arity k needs ``f_{k+1}``, so a functor known
    through arity n is checked through ``n - 1`` at most.
    """
    A, B = f.source, f.target
    if f.max_arity is not None and f.max_arity - 1 < N:
        N = f.max_arity - 1
    rep = Report("unital-functor", N)
    for x in A.objects:
        rep.checked += 1
        xf = f.obj(x)
        mod = A.hom(x, x)
        a0 = iA.component_or_zero((x,))
        f1 = f.component((x, x)) if mod.dim else None
        lhs = compose_maps(a0, f1) if f1 is not None else None
        diff = _add(lhs, iB.component_or_zero((xf,)), -1)
        if diff is None or not diff:
            continue
        if _boundary_preimage(B, xf, diff) is None:
            rep.fail(0, (x,), diff, "i0 f_1 - i0 is not a boundary")
    if rep.passed:
        rep.checked += 1
        if unital_functor_witness(f, iA, iB, N) is None:
            rep.fail(N, (), None, "(i|f)M_{10} - (f|i)M_{01} is not a boundary through N")
    return rep


@dataclass
class QuasiInverse:
    psi: AInfFunctor
    r: Coderivation
    p: Coderivation
    t: Coderivation
    q: Coderivation
    unit: UnitTransformation
    inverse: Inverse


def build_quasi_inverse(
    phi: AInfFunctor,
    h: dict,
    witness: InvertibilityWitness,
    r0: dict,
    unit_B: UnitTransformation,
    N: int,
) -> QuasiInverse:
    """A quasi-inverse ``psi: B -> C`` of ``phi: C -> B`` with object map h.

    ``r0[X]`` lies in ``sB(X, X h phi)`` and ``witness`` inverts it:
    ``(r0 (x) p0)b_2 - i0 = w0 b_1`` and ``(p0 (x) r0)b_2 - i0 = v0 b_1``.
    """
    C, B = phi.source, phi.target
    iB = unit_B.i
    missing = [x for x in B.objects if x not in h]
    if missing:
        raise EquivalenceError(f"object map misses {missing}")
    ident = B.identity()
    r_comps = {(x,): r0[x] for x in B.objects if r0[x]}
    psi_comps: dict = {}
    contractions: dict = {}
    for n in range(1, N + 1):
        psi_t = AInfFunctor(B, C, h, psi_comps, None)
        pp = composite(psi_t, phi)
        r_t = Coderivation(ident, pp, -1, r_comps, None)
        psi_th = Theta((psi_t,), ())
        bB = b_theta(B)
        new_psi, new_r = {}, {}
        for seq in B.quiver.paths(n):
            if not B.tensor(seq).dim:
                continue
            x0, xn = seq[0], seq[-1]
            lam = psi_th.then(seq, C)
            lam = _add(lam, bB.then(seq, psi_t), -1)
            nu = B_component(r_t, seq)
            nu = -nu if nu is not None else None
            if (lam is None or not lam) and (nu is None or not nu):
                continue
            key = (x0, xn)
            if key not in contractions:
                contractions[key] = _psi_contraction(phi, h, r0, key)
            rn, psin = lift_at(B, seq, nu, lam, contractions[key], 0)
            if psin:
                new_psi[seq] = psin
            if rn:
                new_r[seq] = rn
        psi_comps.update(new_psi)
        r_comps.update(new_r)
    psi = AInfFunctor(B, C, h, psi_comps, N, "psi")
    pp = composite(psi, phi)
    r = Coderivation(ident, pp, -1, r_comps, N, "r")
    i0 = {x: iB.component_or_zero((x,)) for x in B.objects}
    bad = witness_defects(r, i0, witness)
    if bad:
        raise EquivalenceError("witness equation fails: " + "; ".join(bad))
    inv = invert_transformation(r, witness, unit_B, N)
    idC = C.identity()
    phipsi = composite(phi, psi)
    t, _ = cancel_functor(phi, apply_M(phi, r, N), idC, phipsi, N)
    q, _ = cancel_functor(phi, apply_M(phi, inv.p, N), phipsi, idC, N)
    iC = apply_B(TransformationChain.of(t, q), N, "i")
    unit_C = unit_from_transformation(iC, N)
    return QuasiInverse(psi, r, inv.p, t, q, unit_C, inv)


def _psi_contraction(phi: AInfFunctor, h: dict, r0: dict, key):
    """Contraction of the cone of ``z -> (r0 (x) z phi_1)b_2`` on ``sC(X0 h, Xn h)``."""
    C, B = phi.source, phi.target
    x0, xn = key
    a, b = h[x0], h[xn]
    src = hom_chain_complex(C, a, b)
    ya, yb = phi.obj(a), phi.obj(b)
    tgt = hom_chain_complex(B, x0, yb)
    m = compose_maps(phi.component_or_zero((a, b)), act_left(B, r0[x0], x0, ya, yb))
    try:
        return contraction_for(ChainMap(src, tgt, m))
    except LiftError as exc:
        raise EquivalenceError(f"phi_1 (r0 (x) 1)b_2 is not homotopy invertible on {key}") from exc


def check_quasi_inverse(phi: AInfFunctor, qi: QuasiInverse, unit_B: UnitTransformation, N: int) -> Report:
    """Every defining equation of the quasi-inverse data through N."""
    C, B = phi.source, phi.target
    iB, iC = unit_B.i, qi.unit.i
    rep = Report("quasi-inverse", N)
    rep.merge(check_functor(qi.psi, N))
    quiver = B.quiver
    rep.merge(_sum_report(Report("r-natural", N), [(1, apply_B(qi.r, N))], N, quiver))
    rep.merge(check_inverse(qi.r, qi.inverse, unit_B, N))
    rep.merge(_sum_report(Report("t-natural", N), [(1, apply_B(qi.t, N))], N, C.quiver))
    rep.merge(_sum_report(Report("q-natural", N), [(1, apply_B(qi.q, N))], N, C.quiver))
    rep.merge(check_unit_transformation(qi.unit, N))
    rep.merge(check_unit_element(C, unit_elements_of(iC)))
    rep.merge(check_unital_functor(phi, iC, iB, N))
    rep.merge(check_unital_functor(qi.psi, iB, iC, N))
    return rep


def check_unit_absorption(r: Coderivation, unit: UnitTransformation, N: int) -> Report:
    """``(r (x) g i)B_2`` and ``(f i (x) r)B_2`` are both equivalent to r through N."""
    i = unit.i
    rep = Report("unit-absorption", N)
    for name, chain in (
        ("(r (x) g i)B_2", (r, apply_M(r.g, i, N))),
        ("(f i (x) r)B_2", (apply_M(r.f, i, N), r)),
    ):
        rep.checked += 1
        lhs = apply_B(TransformationChain.of(*chain), N)
        if equivalent_transformations(lhs, r, N) is None:
            rep.fail(N, (), None, f"{name} is not equivalent to r")
    return rep
