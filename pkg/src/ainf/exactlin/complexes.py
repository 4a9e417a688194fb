"""Cochain complexes, cohomology, homotopies and the contraction of a cone.

Differentials have degree +1 and act from the right, so a homotopy ``h``
between chain maps ``f, g: A -> C`` satisfies ``f - g = h d_C + d_A h``
where ``h d_C`` means h first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .graded import (
    GradedMap,
    GradedModule,
    ShapeError,
    apply_map,
    compose_maps,
    identity_map,
    vector_add,
    zero_map,
)
from .solve import Echelon, inverse, nullspace, solve


class ComplexError(ValueError):
    """A differential does not square to zero or a map is not a chain map."""


class NotACycleError(ValueError):
    """The element handed to a contraction is not a cycle."""


def _first_bad_degree(m: GradedMap) -> int | None:
    for i, r in enumerate(m.rows):
        if r:
            return m.source.degree(i)
    return None


class Complex:
    __slots__ = ("module", "differential")

    def __init__(self, module: GradedModule, differential: GradedMap, *, check: bool = True):
        if differential.source != module or differential.target != module:
            raise ShapeError("differential must be an endomorphism of the module")
        if differential.degree != 1 and not differential.is_zero():
            raise ShapeError(f"differential has degree {differential.degree}, expected 1")
        if check:
            sq = compose_maps(differential, differential)
            if sq:
                raise ComplexError(f"d^2 != 0 starting in degree {_first_bad_degree(sq)}")
        self.module = module
        self.differential = differential

    @classmethod
    def zero(cls, module: GradedModule) -> "Complex":
        return cls(module, zero_map(module, module, 1), check=False)

    @property
    def field(self):
        return self.module.field

    def __repr__(self) -> str:
        return f"Complex({self.module!r})"


class ChainMap:
    __slots__ = ("source", "target", "map")

    def __init__(self, source: Complex, target: Complex, map: GradedMap, *, check: bool = True):
        if map.source != source.module or map.target != target.module:
            raise ShapeError("chain map does not match its complexes")
        if map.degree != 0 and not map.is_zero():
            raise ShapeError(f"chain map has degree {map.degree}, expected 0")
        if check:
            defect = compose_maps(map, target.differential) - compose_maps(
                source.differential, map
            )
            if defect:
                raise ComplexError(
                    f"map does not commute with differentials in degree "
                    f"{_first_bad_degree(defect)}"
                )
        self.source = source
        self.target = target
        self.map = map

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, identity_map(c.module), check=False)

    def then(self, other: "ChainMap") -> "ChainMap":
        return ChainMap(self.source, other.target, compose_maps(self.map, other.map), check=False)


def boundary_defect(f: GradedMap, g: GradedMap, h: GradedMap, source: Complex, target: Complex) -> GradedMap:
    """``f - g - (h d + d h)``; zero exactly when h is a homotopy from f to g."""
    return f - g - compose_maps(h, target.differential) - compose_maps(source.differential, h)


# -- cohomology -------------------------------------------------------------


@dataclass(frozen=True)
class Cohomology:
    """Cohomology with chosen cocycle representatives.

    ``include`` sends each class to its representative and ``project`` sends
    a vector to the class of its cycle part, killing coboundaries and a fixed
    complement of the cycles.  Both are chain maps for the zero differential
    on ``module``.
    """

    complex: Complex
    module: GradedModule
    include: GradedMap
    project: GradedMap

    @property
    def dims(self) -> dict[int, int]:
        return {d: n for d, (n, _) in self.module.degrees.items()}

    def dim(self, degree: int) -> int:
        return len(self.module.indices(degree))

    def degree(self, k: int) -> tuple[int, list[dict], GradedMap]:
        """(dimension, representatives, projection) in one degree."""
        reps = [self.include.rows[i] for i in self.module.indices(k)]
        return len(reps), reps, self.project

    def is_zero(self) -> bool:
        return self.module.dim == 0

    def class_of(self, vector: Mapping[int, object]) -> dict:
        return apply_map(vector, self.project)


def _localize(vec: Mapping[int, object], pos: Mapping[int, int]) -> dict:
    return {pos[j]: c for j, c in vec.items()}


def cohomology(c: Complex) -> Cohomology:
    m = c.module
    d = c.differential
    field = m.field
    h_basis = []
    rep_rows: list[dict] = []
    proj_rows: list[dict] = [{} for _ in range(m.dim)]
    for k in m.support:
        idx = m.indices(k)
        pos = {g: l for l, g in enumerate(idx)}
        n = len(idx)
        # boundaries landing in degree k
        ech = Echelon()
        basis_vecs: list[dict] = []
        for i in m.indices(k - 1):
            v = _localize(d.rows[i], pos)
            if ech.add(v):
                basis_vecs.append(v)
        nb = len(basis_vecs)
        # cycles in degree k: x with x d = 0
        cols: dict[int, dict] = {}
        for l, g in enumerate(idx):
            for j, v in d.rows[g].items():
                cols.setdefault(j, {})[l] = v
        eqs = [cols[j] for j in sorted(cols)]
        reps_local = []
        for z in nullspace(eqs, n):
            if ech.add(z):
                basis_vecs.append(z)
                reps_local.append(z)
        for l in range(n):
            e = {l: 1}
            if ech.add(e):
                basis_vecs.append(e)
        if not reps_local:
            continue
        inv = inverse(basis_vecs, n)
        base = len(h_basis)
        for r, z in enumerate(reps_local):
            h_basis.append((("H", k, r), k))
            rep_rows.append({idx[l]: field(v) for l, v in z.items()})
        for l, g in enumerate(idx):
            row = {}
            for r in range(len(reps_local)):
                v = inv[l].get(nb + r)
                if v:
                    row[base + r] = v
            proj_rows[g] = row
    hmod = GradedModule(h_basis, field)
    include = GradedMap(hmod, m, 0, rep_rows)
    project = GradedMap(m, hmod, 0, proj_rows)
    return Cohomology(c, hmod, include, project)


def cohomology_map(u: ChainMap, hs: Cohomology | None = None, ht: Cohomology | None = None) -> GradedMap:
    """The induced map ``H(u)`` in the chosen bases."""
    hs = hs or cohomology(u.source)
    ht = ht or cohomology(u.target)
    return compose_maps(compose_maps(hs.include, u.map), ht.project)


def _is_iso(m: GradedMap) -> bool:
    if m.source.degrees.keys() != m.target.degrees.keys():
        return False
    for k, (n, _) in m.source.degrees.items():
        if len(m.target.indices(k)) != n:
            return False
        ech = Echelon()
        for i in m.source.indices(k):
            ech.add(m.rows[i])
        if ech.rank != n:
            return False
    return True


def is_homotopy_invertible(u: ChainMap) -> bool:
    """Over a field this is the same as being a quasi-isomorphism."""
    return _is_iso(cohomology_map(u))


# -- homotopies -------------------------------------------------------------


def find_chain_homotopy(
    f: GradedMap | ChainMap,
    g: GradedMap | ChainMap,
    source: Complex | None = None,
    target: Complex | None = None,
) -> GradedMap | None:
    """A degree -1 map h with ``f - g = h d + d h``, or None if none exists."""
    if isinstance(f, ChainMap):
        source = source or f.source
        target = target or f.target
        f = f.map
    if isinstance(g, ChainMap):
        g = g.map
    if source is None or target is None:
        raise ValueError("complexes must be given for plain maps")
    if f.source != g.source or f.target != g.target:
        raise ShapeError("f and g must share source and target")
    if f.source != source.module or f.target != target.module:
        raise ShapeError("maps do not match the complexes")
    a, c = source.module, target.module
    dA, dC = source.differential.rows, target.differential.rows
    diff = f - g
    # unknowns h[i][j] with deg j = deg i - 1
    var: dict[tuple[int, int], int] = {}
    for i in range(a.dim):
        for j in c.indices(a.degree(i) - 1):
            var[(i, j)] = len(var)
    eqs: dict[tuple[int, int], dict] = {}

    def bump(key, v, coef):
        row = eqs.setdefault(key, {})
        nv = row.get(v, 0) + coef
        if nv:
            row[v] = nv
        else:
            row.pop(v, None)

    for i in range(a.dim):
        for j in c.indices(a.degree(i) - 1):
            v = var[(i, j)]
            for k, e in dC[j].items():
                bump((i, k), v, e)
    for i in range(a.dim):
        for l, e in dA[i].items():
            for k in c.indices(a.degree(l) - 1):
                bump((i, k), var[(l, k)], e)
    for i, row in enumerate(diff.rows):
        for k in row:
            eqs.setdefault((i, k), {})
    keys = sorted(eqs)
    rhs = [diff.rows[i].get(k, 0) for i, k in keys]
    sol = solve([eqs[k] for k in keys], rhs, len(var))
    if sol is None:
        return None
    rows: list[dict] = [{} for _ in range(a.dim)]
    for (i, j), v in var.items():
        x = sol.get(v)
        if x:
            rows[i][j] = x
    h = GradedMap(a, c, -1, rows)
    if boundary_defect(f, g, h, source, target):
        raise AssertionError("homotopy solver returned an invalid solution")
    return h


@dataclass(frozen=True)
class HomotopyEquivalence:
    """``u: A -> C`` with inverse ``v`` and ``uv - 1 = h'd + dh'``, ``vu - 1 = h''d + dh''``."""

    u: ChainMap
    v: ChainMap
    h_prime: GradedMap
    h_double_prime: GradedMap


def homotopy_inverse(u: ChainMap) -> HomotopyEquivalence | None:
    """Invert ``u`` up to homotopy by inverting it on cohomology; None if impossible."""
    ha, hc = cohomology(u.source), cohomology(u.target)
    hu = cohomology_map(u, ha, hc)
    if not _is_iso(hu):
        return None
    n = ha.module.dim
    # hu is square in matching bases degree by degree; invert the whole matrix
    # after reindexing target classes onto source positions
    order = []
    for k in ha.module.support:
        order.extend(hc.module.indices(k))
    perm = {j: p for p, j in enumerate(order)}
    sq = [{perm[j]: c for j, c in r.items()} for r in hu.rows]
    inv = inverse(sq, n) if n else []
    hinv = GradedMap(hc.module, ha.module, 0, [inv[perm[j]] for j in range(n)])
    vmap = compose_maps(compose_maps(hc.project, hinv), ha.include)
    v = ChainMap(u.target, u.source, vmap)
    uv = compose_maps(u.map, vmap)
    vu = compose_maps(vmap, u.map)
    hp = find_chain_homotopy(uv, identity_map(u.source.module), u.source, u.source)
    hpp = find_chain_homotopy(vu, identity_map(u.target.module), u.target, u.target)
    if hp is None or hpp is None:
        raise AssertionError("quasi-isomorphism over a field failed to invert")
    return HomotopyEquivalence(u, v, hp, hpp)


# -- cones ------------------------------------------------------------------


def cone_module(u: ChainMap) -> GradedModule:
    """``Cone^k = C^k (+) A^{k+1}``: target basis first, then shifted source basis."""
    c, a = u.target.module, u.source.module
    basis = [(("c", lab), d) for lab, d in c.basis]
    basis += [(("a", lab), d - 1) for lab, d in a.basis]
    return GradedModule(basis, c.field)


def cone(u: ChainMap) -> Complex:
    """``(c, a) d = (c d^C + a u, -a d^A)``."""
    mod = cone_module(u)
    nc = u.target.module.dim
    dC, dA = u.target.differential.rows, u.source.differential.rows
    rows = [dict(r) for r in dC]
    for i in range(u.source.module.dim):
        row = dict(u.map.rows[i])
        for j, e in dA[i].items():
            row[nc + j] = -e
        rows.append(row)
    return Complex(mod, GradedMap(mod, mod, 1, rows))


def _block_map(mod: GradedModule, nc: int, cc, ca, ac, aa, degree: int) -> GradedMap:
    """Assemble an endomorphism of the cone from its four blocks (None means zero)."""
    rows: list[dict] = []
    na = mod.dim - nc
    for i in range(nc):
        row = {}
        if cc is not None:
            row.update(cc.rows[i])
        if ca is not None:
            row.update({nc + j: v for j, v in ca.rows[i].items()})
        rows.append(row)
    for i in range(na):
        row = {}
        if ac is not None:
            row.update(ac.rows[i])
        if aa is not None:
            row.update({nc + j: v for j, v in aa.rows[i].items()})
        rows.append(row)
    return GradedMap(mod, mod, degree, rows)


@dataclass(frozen=True)
class ConeContraction:
    u: ChainMap
    v: ChainMap
    h_prime: GradedMap
    h_double_prime: GradedMap
    cone: Complex
    h: GradedMap
    defect: GradedMap
    h_bar: GradedMap

    @property
    def hPrime(self) -> GradedMap:
        return self.h_prime

    @property
    def hDoublePrime(self) -> GradedMap:
        return self.h_double_prime

    @property
    def hBar(self) -> GradedMap:
        return self.h_bar


def build_cone_contraction(
    u: ChainMap, v: ChainMap, h_prime: GradedMap, h_double_prime: GradedMap
) -> ConeContraction:
    """Contract ``Cone(u)`` given a homotopy inverse of u.

    With ``(c,a)h = (-c h'', c v + a h')`` and ``(c,a)f = (a u h'' - a h' u, 0)``,
    the map ``h_bar = h + h f`` satisfies ``h_bar d + d h_bar = 1``.
    """
    A, C = u.source, u.target
    one_a, one_c = identity_map(A.module), identity_map(C.module)
    uv = compose_maps(u.map, v.map)
    vu = compose_maps(v.map, u.map)
    bad = boundary_defect(uv, one_a, h_prime, A, A)
    if bad:
        raise ComplexError(f"uv != 1 + h'd + dh' in degree {_first_bad_degree(bad)}")
    bad = boundary_defect(vu, one_c, h_double_prime, C, C)
    if bad:
        raise ComplexError(f"vu != 1 + h''d + dh'' in degree {_first_bad_degree(bad)}")
    cn = cone(u)
    mod = cn.module
    nc = C.module.dim
    h = _block_map(mod, nc, -h_double_prime, v.map, None, h_prime, -1)
    f_ac = compose_maps(u.map, h_double_prime) - compose_maps(h_prime, u.map)
    f = _block_map(mod, nc, None, None, f_ac, None, 0)
    h_bar = h + compose_maps(h, f)
    check = compose_maps(h_bar, cn.differential) + compose_maps(cn.differential, h_bar)
    bad = check - identity_map(mod)
    if bad:
        raise AssertionError(
            f"cone contraction identity fails in degree {_first_bad_degree(bad)}"
        )
    return ConeContraction(u, v, h_prime, h_double_prime, cn, h, f, h_bar)


def contract_cycle(z: Mapping[int, object], contraction: ConeContraction) -> dict:
    """A preimage ``w = z h_bar`` with ``w d = z`` of a cycle z of the cone."""
    d = contraction.cone.differential
    if apply_map(z, d):
        raise NotACycleError("element is not a cycle of the cone")
    w = apply_map(z, contraction.h_bar)
    if vector_add(apply_map(w, d), z, -1):
        raise AssertionError("contraction failed to produce a preimage")
    return w


def hom_differential(phi: GradedMap, d_source: GradedMap, d_target: GradedMap) -> GradedMap:
    """Differential of the hom complex: ``phi d - (-1)^{deg phi} d phi``."""
    a = compose_maps(phi, d_target)
    b = compose_maps(d_source, phi)
    return a - b if phi.degree % 2 == 0 else a + b


def contract_hom_cycle(
    z: GradedMap, contraction: ConeContraction, d_source: GradedMap
) -> GradedMap:
    """Lift a cycle of ``Hom(N, Cone(u))`` through post-composition with h_bar.

    ``z`` maps a complex N (differential ``d_source``) into the cone; the
    result w satisfies ``D(w) = z`` for the hom differential D.
    """
    d = contraction.cone.differential
    if hom_differential(z, d_source, d):
        raise NotACycleError("map into the cone is not a cycle of the hom complex")
    w = compose_maps(z, contraction.h_bar)
    if hom_differential(w, d_source, d) != z:
        raise AssertionError("hom contraction failed to produce a preimage")
    return w
