"""Seeded random instances: graded modules, maps, families and DG categories."""

from __future__ import annotations

import random

from ainf.core import AInfCategory, AInfFunctor, Coderivation, Quiver, complexes_category
from ainf.core.transport import pullback_category
from ainf.exactlin import QQ, ChainMap, Complex, GradedMap, GradedModule


def rng(seed):
    return random.Random(seed)


def module(r, prefix, dims, field=QQ):
    """``dims = {degree: dimension}``; labels ``prefix + index``."""
    basis = []
    for d in sorted(dims):
        basis.extend((f"{prefix}{d}_{i}", d) for i in range(dims[d]))
    return GradedModule(basis, field)


def random_map(r, source, target, degree, density=0.6, lo=-2, hi=2):
    rows = []
    for i in range(source.dim):
        want = source.degree(i) + degree
        row = {}
        for j in target.indices(want):
            if r.random() < density:
                c = r.choice([v for v in range(lo, hi + 1) if v])
                row[j] = c
        rows.append(row)
    return GradedMap(source, target, degree, rows)


def random_quiver(r, objects, pair_dims, field=QQ):
    """``pair_dims[(X, Y)] = {degree: dim}`` for the shifted homs."""
    homs = {}
    for (x, y), dims in pair_dims.items():
        homs[(x, y)] = module(r, f"{x}{y}.", dims, field)
    return Quiver(objects, homs, field)


def random_family_maps(r, quiver_src, shape, degree, arities, density=0.6):
    comps = {}
    for n in arities:
        for seq in quiver_src.paths(n):
            src, tgt = shape(seq)
            if src.dim and tgt.dim:
                m = random_map(r, src, tgt, degree, density)
                if m:
                    comps[seq] = m
    return comps


def random_category(r, quiver, top, name="R", density=0.6):
    """Random components b_1..b_top; no identity is imposed."""
    comps = random_family_maps(
        r, quiver, lambda s: (quiver.tensor(s), quiver.hom(s[0], s[-1])), 1, range(1, top + 1),
        density,
    )
    return AInfCategory(quiver, comps, top, name)


def random_functor(r, A, B, obj, top, name="F", density=0.6):
    comps = random_family_maps(
        r, A.quiver, lambda s: (A.tensor(s), B.hom(obj[s[0]], obj[s[-1]])), 0, range(1, top + 1),
        density,
    )
    return AInfFunctor(A, B, obj, comps, top, name)


def random_coderivation(r, f, g, degree, top, name="r", density=0.6, complete=False):
    """Random components through arity ``top``; ``complete`` declares all higher ones zero."""
    A, B = f.source, f.target
    comps = random_family_maps(
        r,
        A.quiver,
        lambda s: (A.tensor(s), B.hom(f.obj(s[0]), g.obj(s[-1]))),
        degree,
        range(0, top + 1),
        density,
    )
    return Coderivation(f, g, degree, comps, None if complete else top, name)


# ------------------------------------------------------------ DG instances


def random_complex_data(r, prefix, length=None, max_basis=4):
    """A small complex as (basis, differential) for complexes_category."""
    length = length or r.randint(1, 2)
    lo = r.randint(-1, 0)
    basis = []
    for k in range(length):
        for i in range(r.randint(1, 2)):
            if len(basis) < max_basis:
                basis.append((f"{prefix}{k}{'abc'[i]}", lo + k))
    diff = {}
    by_deg = {}
    for lab, d in basis:
        by_deg.setdefault(d, []).append(lab)
    degs = sorted(by_deg)
    # a differential that is zero or a single matching, so d^2 = 0 automatically
    used = set()
    for d in degs:
        nxt = by_deg.get(d + 1, [])
        for lab in by_deg[d]:
            if lab in used:
                continue
            cands = [t for t in nxt if t not in used]
            if cands and r.random() < 0.6:
                t = r.choice(cands)
                diff[lab] = {t: r.choice([1, -1, 2])}
                used.add(t)
                used.add(lab)
    return basis, diff


def random_dg_category(r, objects=("P", "Q"), name="RandDG", max_basis=4):
    complexes, diffs = {}, {}
    for x in objects:
        basis, d = random_complex_data(r, x.lower(), max_basis=max_basis)
        complexes[x] = basis
        diffs[x] = d
    return complexes_category(complexes, diffs, QQ, name)


def random_twist(r, B, N, name="Twisted"):
    """Pull B back along a random functor with phi_1 invertible and phi_2 random."""
    comps = {}
    for pair, mod in B.quiver.homs.items():
        rows = []
        for i in range(mod.dim):
            row = {i: 1}
            for j in mod.indices(mod.degree(i)):
                if j > i and r.random() < 0.5:
                    row[j] = r.randint(-1, 1)
            rows.append({j: c for j, c in row.items() if c})
        comps[pair] = GradedMap(mod, mod, 0, rows)
    for seq in B.quiver.paths(2):
        src, tgt = B.tensor(seq), B.hom(seq[0], seq[-1])
        if src.dim and tgt.dim and r.random() < 0.7:
            m = random_map(r, src, tgt, 0, 0.3, -1, 1)
            if m:
                comps[seq] = m
    return pullback_category(B, comps, N, name)


# --------------------------------------------------------- chain complexes


def random_complex(r, dims, prefix="v", zero_d=False):
    """A complex whose differential is a partial matching between adjacent degrees."""
    mod = module(r, prefix, dims)
    rows = [dict() for _ in range(mod.dim)]
    if not zero_d:
        degs = sorted(dims)
        for d in degs:
            src, tgt = mod.indices(d), mod.indices(d + 1)
            if not src or not tgt:
                continue
            for a, b in zip(src, tgt):
                if r.random() < 0.7:
                    rows[a][b] = r.choice([1, -1, 2])
        # d^2 = 0 is not automatic for chained pairs; drop the second of any chain
        for d in degs:
            for a in mod.indices(d):
                for b in list(rows[a]):
                    if rows[b]:
                        rows[b] = {}
    return Complex(mod, GradedMap(mod, mod, 1, rows))


def planted_equivalence(r, prefix="p"):
    """``u: A -> C`` where C is A plus an acyclic pair ``e0 -> e1``.

    u includes A and may add a multiple of the boundary e1 to cycles of A
    that are not boundaries, so u is a homotopy equivalence but not a split
    inclusion.
    """
    dims = {d: r.randint(0, 2) for d in (-1, 0, 1)}
    dims = {d: n for d, n in dims.items() if n} or {0: 1}
    A = random_complex(r, dims, prefix + "a")
    k = r.choice(sorted(dims))
    extra = [((prefix, "e0"), k - 1), ((prefix, "e1"), k)]
    basis = list(A.module.basis) + extra
    C_mod = GradedModule(basis, QQ)
    n = A.module.dim
    rows = [dict(row) for row in A.differential.rows] + [{n + 1: 1}, {}]
    C = Complex(C_mod, GradedMap(C_mod, C_mod, 1, rows))
    hit = {j for row in A.differential.rows for j in row}
    urows = []
    for i in range(n):
        row = {i: 1}
        free = not A.differential.rows[i] and i not in hit
        if A.module.degree(i) == k and free and r.random() < 0.5:
            row[n + 1] = r.choice([1, -1])
        urows.append(row)
    u = ChainMap(A, C, GradedMap(A.module, C_mod, 0, urows))
    return u


# ------------------------------------------------------- functor categories


def dg_world(r, N):
    """A random DG category B, a random twist C -> B and a few functors between them."""
    from ainf.core import compose_functors, identity_functor, scaling_functor

    B = random_dg_category(r, max_basis=3)
    C, phi = random_twist(r, B, N)
    s = scaling_functor(B, {x: r.choice([1, 2, -1, 3]) for x in B.objects}, "s")
    return {
        "B": B,
        "C": C,
        "CB": [phi, compose_functors(phi, s)],
        "BB": [identity_functor(B), s],
    }


def random_chain(r, functors, length, top=2, density=0.4):
    """Complete random coderivations (zero above arity ``top``) between chosen functors."""
    fs = [r.choice(functors) for _ in range(length + 1)]
    return [
        random_coderivation(r, fs[p], fs[p + 1], r.randint(-1, 1), top, f"c{p}", density, True)
        for p in range(length)
    ]


def dg_sample(seed, N=3):
    """One random sample: a chain for B^2 and a pair or triple of chains for M.

    An empty chain stands for the functor it would start from.
    """
    from ainf.hom import TransformationChain

    def chain(cs, functors):
        return TransformationChain.of(*cs) if cs else TransformationChain.functor(r.choice(functors))

    r = rng(seed)
    w = dg_world(r, N)
    ps = chain(random_chain(r, w["CB"], r.randint(1, 3)), w["CB"])
    if seed % 2:
        sample = (
            chain(random_chain(r, w["CB"], r.randint(1, 2)), w["CB"]),
            chain(random_chain(r, w["BB"], r.randint(0, 1)), w["BB"]),
        )
    else:
        sample = (
            chain(random_chain(r, w["CB"], 1), w["CB"]),
            chain(random_chain(r, w["BB"], 1), w["BB"]),
            chain(random_chain(r, w["BB"], r.randint(0, 1)), w["BB"]),
        )
    return w, ps, sample
