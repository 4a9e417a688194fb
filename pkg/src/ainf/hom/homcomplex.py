"""Truncated hom complexes ``((f, g), B_1)`` and linear solves against B_1.

The complex has a basis vector for every matrix entry of every component
``r_n`` (n <= N) of an (f, g)-coderivation; its degree is the degree of
that entry.  Since ``[rB_1]_k`` only involves ``r_j`` with j <= k,
discarding arities above N gives a quotient complex.  Its differential is
obtained by applying B_1 once to a coderivation with symbolic entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.families import AInfFunctor, Coderivation, coderivation_difference
from ..core.report import Report
from ..core.symbolic import (
    LinForm,
    coderivation_from_vector,
    entry_rows,
    entry_slots,
    symbolic_coderivation,
    vector_of,
)
from ..exactlin import (
    Complex,
    GradedMap,
    GradedModule,
    compose_maps,
    identity_map,
    tensor_maps,
    zero_map,
)
from ..exactlin.solve import solve
from .differential import _sign, apply_B


def _degree_range(f: AInfFunctor, g: AInfFunctor, N: int) -> range:
    src_degs, tgt_degs = set(), set()
    for n in range(N + 1):
        for seq in f.source.quiver.paths(n):
            src_degs.update(f.source.tensor(seq).support)
            tgt_degs.update(f.target.hom(f.obj(seq[0]), g.obj(seq[-1])).support)
    if not src_degs or not tgt_degs:
        return range(0)
    return range(min(tgt_degs) - max(src_degs), max(tgt_degs) - min(src_degs) + 1)


def b1_matrix(f: AInfFunctor, g: AInfFunctor, degree: int, N: int, slots_in=None, slots_out=None):
    """Matrix of ``r -> rB_1`` from degree ``degree`` to ``degree + 1`` through arity N.

    Rows are indexed by ``slots_in``, columns by ``slots_out``.
    """
    if slots_in is None:
        slots_in = entry_slots(f, g, degree, N)
    if slots_out is None:
        slots_out = entry_slots(f, g, degree + 1, N)
    rows: list[dict] = [{} for _ in slots_in]
    if not slots_in:
        return rows, slots_in, slots_out
    R, _ = symbolic_coderivation(f, g, degree, N, slots_in)
    D = apply_B(R, N)
    for w, form in enumerate(entry_rows(D, slots_out)):
        if isinstance(form, LinForm):
            for v, c in form.terms.items():
                rows[v][w] = c
    return rows, slots_in, slots_out


@dataclass
class HomComplex:
    f: AInfFunctor
    g: AInfFunctor
    N: int
    complex: Complex
    slots: dict = field(default_factory=dict)  # degree -> list of (seq, row, col)
    offsets: dict = field(default_factory=dict)  # degree -> first basis index

    @property
    def module(self) -> GradedModule:
        return self.complex.module

    @property
    def differential(self) -> GradedMap:
        return self.complex.differential

    def vector(self, r: Coderivation) -> dict:
        off = self.offsets.get(r.degree)
        if off is None:
            return {}
        return {off + v: c for v, c in vector_of(r, self.slots[r.degree]).items()}

    def coderivation(self, vec: dict, degree: int) -> Coderivation:
        off = self.offsets.get(degree, 0)
        n = len(self.slots.get(degree, ()))
        local = {i - off: c for i, c in vec.items() if off <= i < off + n}
        return coderivation_from_vector(
            self.f, self.g, degree, self.N, self.slots.get(degree, []), local
        )


def hom_complex(f: AInfFunctor, g: AInfFunctor, N: int) -> HomComplex:
    degrees = list(_degree_range(f, g, N))
    slots = {d: entry_slots(f, g, d, N) for d in degrees}
    slots = {d: s for d, s in slots.items() if s}
    basis = []
    offsets = {}
    for d in sorted(slots):
        offsets[d] = len(basis)
        basis.extend(((d,) + s, d) for s in slots[d])
    module = GradedModule(basis, f.source.field)
    rows: list[dict] = [{} for _ in basis]
    for d in sorted(slots):
        if d + 1 not in slots:
            continue
        local, _, _ = b1_matrix(f, g, d, N, slots[d], slots[d + 1])
        off_in, off_out = offsets[d], offsets[d + 1]
        for v, row in enumerate(local):
            rows[off_in + v] = {off_out + w: c for w, c in row.items()}
    diff = GradedMap(module, module, 1, rows)
    return HomComplex(f, g, N, Complex(module, diff), slots, offsets)


def solve_B1(target: Coderivation, degree: int, N: int) -> Coderivation | None:
    """Some ``lam`` of the given degree with ``lam B_1 = target`` through arity N, or None.

    ``target`` must have degree ``degree + 1``.  One joint linear solve over
    all components; free variables are set to zero.
    """
    f, g = target.f, target.g
    slots_in = entry_slots(f, g, degree, N)
    slots_out = entry_slots(f, g, degree + 1, N)
    rhs_vec = vector_of(target, slots_out)
    if not slots_in:
        return None if rhs_vec else Coderivation(f, g, degree, {}, N)
    rows, _, _ = b1_matrix(f, g, degree, N, slots_in, slots_out)
    eqs: list[dict] = [{} for _ in slots_out]
    for v, row in enumerate(rows):
        for w, c in row.items():
            eqs[w][v] = c
    rhs = [rhs_vec.get(w, 0) for w in range(len(slots_out))]
    sol = solve(eqs, rhs, len(slots_in))
    if sol is None:
        return None
    return coderivation_from_vector(f, g, degree, N, slots_in, sol)


def equivalent_transformations(r: Coderivation, t: Coderivation, N: int) -> Coderivation | None:
    """A witness ``lam`` with ``r - t = lam B_1`` through arity N, or None."""
    if r.degree != t.degree:
        raise ValueError("equivalent transformations have equal degrees")
    diff = Coderivation(r.f, r.g, r.degree, coderivation_difference(r, t, N), N)
    return solve_B1(diff, r.degree - 1, N)


def _b1_on_tensor(cat, seq) -> GradedMap:
    # sum of (1 (x) .. b_1 .. (x) 1) on T(seq); each b_1 passes the later factors
    src = cat.tensor(seq)
    total = zero_map(src, src, 1)
    for i in range(len(seq) - 1):
        parts = [identity_map(cat.hom(seq[j], seq[j + 1])) for j in range(len(seq) - 1)]
        b1 = cat.component((seq[i], seq[i + 1]))
        if b1 is None:
            continue
        parts[i] = b1
        total = total + tensor_maps(*parts)
    return total


def check_hom_complex(H: HomComplex) -> Report:
    """``d^2 = 0`` and the arity-diagonal blocks are ``r_n b_1 - (-1)^r sum (1..b_1..1) r_n``."""
    rep = Report("hom-complex", H.N)
    d = H.differential
    if compose_maps(d, d):
        rep.fail(H.N, (), compose_maps(d, d), "the differential does not square to zero")
    f, g = H.f, H.g
    A, B = f.source, f.target
    for deg, slots in H.slots.items():
        if deg + 1 not in H.slots:
            continue
        out_index = {s: H.offsets[deg + 1] + w for w, s in enumerate(H.slots[deg + 1])}
        arity_of = {H.offsets[deg + 1] + w: len(s[0]) - 1 for w, s in enumerate(H.slots[deg + 1])}
        for v, (seq, i, j) in enumerate(slots):
            rep.checked += 1
            n = len(seq) - 1
            src, tgt = A.tensor(seq), B.hom(f.obj(seq[0]), g.obj(seq[-1]))
            e = GradedMap(src, tgt, deg, [{j: A.field.one} if a == i else {} for a in range(src.dim)])
            want = compose_maps(_b1_on_tensor(A, seq), e)
            if _sign(deg) > 0:
                want = -want
            b1 = B.component((f.obj(seq[0]), g.obj(seq[-1])))
            if b1 is not None:
                want = want + compose_maps(e, b1)
            row = H.differential.rows[H.offsets[deg] + v]
            got = {w: c for w, c in row.items() if arity_of[w] == n}
            expect = {}
            for a, r_ in enumerate(want.rows):
                for b, c in r_.items():
                    expect[out_index[(seq, a, b)]] = c
            if got != expect:
                rep.fail(n, seq, None, f"diagonal block differs at basis entry ({i}, {j})")
    return rep
