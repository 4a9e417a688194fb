import itertools
from fractions import Fraction

import pytest

import oracle
import randomdata as rd
from ainf.exactlin import (
    QQ,
    ChainMap,
    Complex,
    ComplexError,
    GradedMap,
    GradedModule,
    GradingError,
    NotACycleError,
    PrimeField,
    ShapeError,
    build_cone_contraction,
    cohomology,
    compose_maps,
    cone,
    contract_cycle,
    contract_hom_cycle,
    element_map,
    field_from_env,
    field_from_name,
    find_chain_homotopy,
    hom_differential,
    homotopy_inverse,
    identity_map,
    is_homotopy_invertible,
    tensor_maps,
    tensor_modules,
)
from ainf.exactlin.solve import inverse, nullspace, rank, solve

F7 = PrimeField(7)


# ------------------------------------------------------------------ fields


def test_rational_parse_and_format():
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert QQ.format(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        QQ.parse("0.5")
    with pytest.raises(TypeError):
        QQ(0.5)


def test_prime_field_arithmetic():
    a, b = F7(3), F7(5)
    assert a + b == F7(1)
    assert a * b == F7(1)
    assert F7("1/3") * 3 == F7.one
    assert F7.format(F7(-1)) == "6"
    assert F7.characteristic == 7
    with pytest.raises(ZeroDivisionError):
        F7(Fraction(1, 7))
    with pytest.raises(ValueError):
        PrimeField(9)


def test_field_names(monkeypatch):
    assert field_from_name("Q") == QQ
    assert field_from_name("11") == PrimeField(11)
    with pytest.raises(ValueError):
        field_from_name("R")
    monkeypatch.setenv("AINF_FIELD", "5")
    assert field_from_env() == PrimeField(5)
    monkeypatch.delenv("AINF_FIELD")
    assert field_from_env() == QQ


# ------------------------------------------------------------------ solver


@pytest.mark.parametrize("seed", range(10))
def test_solve_random_consistent(seed):
    r = rd.rng(seed)
    n, m = r.randint(1, 6), r.randint(1, 6)
    eqs = [{j: Fraction(r.randint(-3, 3)) for j in range(n) if r.random() < 0.6} for _ in range(m)]
    x = [Fraction(r.randint(-4, 4)) for _ in range(n)]
    rhs = [sum(c * x[j] for j, c in e.items()) for e in eqs]
    sol = solve(eqs, rhs, n)
    assert sol is not None
    for e, b in zip(eqs, rhs):
        assert sum(c * sol.get(j, 0) for j, c in e.items()) == b
    dense = [[e.get(j, 0) for j in range(n)] for e in eqs]
    assert rank(eqs) == oracle.rank(dense)
    ker = nullspace(eqs, n)
    assert len(ker) == n - oracle.rank(dense)
    for v in ker:
        assert all(sum(c * v.get(j, 0) for j, c in e.items()) == 0 for e in eqs)


def test_solve_inconsistent():
    assert solve([{0: 1}, {0: 1}], [1, 2], 1) is None


def test_inverse():
    rows = [{0: 2, 1: 1}, {1: 3}]
    inv = inverse(rows, 2)
    prod = oracle.matmul([[2, 1], [0, 3]], [[inv[i].get(j, 0) for j in range(2)] for i in range(2)])
    assert prod == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        inverse([{0: 1}, {0: 2}], 2)


# ------------------------------------------------------------------ graded


def test_map_rejects_bad_degree_and_shape():
    m = GradedModule([("a", 0), ("b", 1)])
    with pytest.raises(GradingError):
        GradedMap(m, m, 0, [{1: 1}, {}])
    with pytest.raises(ShapeError):
        GradedMap(m, m, 0, [{}])


def test_tensor_labels_row_major():
    a = GradedModule([("a0", 0), ("a1", 1)])
    b = GradedModule([("b0", -1), ("b1", 2)])
    t = tensor_modules(a, b)
    assert [lab for lab, _ in t.basis] == [("a0", "b0"), ("a0", "b1"), ("a1", "b0"), ("a1", "b1")]
    assert [d for _, d in t.basis] == [-1, 2, 0, 3]
    # nested tensors flatten
    assert tensor_modules(t, a) == tensor_modules(a, b, a)


@pytest.mark.parametrize("seed", range(12))
def test_tensor_maps_against_elementwise_koszul(seed):
    r = rd.rng(seed)
    mods = [rd.module(r, f"m{i}_", {d: r.randint(0, 2) for d in (-1, 0, 1)}) for i in range(3)]
    tgts = [rd.module(r, f"n{i}_", {d: r.randint(0, 2) for d in (-2, -1, 0, 1, 2)}) for i in range(3)]
    maps = [rd.random_map(r, s, t, r.randint(-1, 1)) for s, t in zip(mods, tgts)]
    tm = tensor_maps(*maps)
    for xs in itertools.product(*(m.basis for m in mods)):
        got = tm.rows[tm.source.index(tuple(lab for lab, _ in xs))]
        got = {tm.target.basis[j][0]: c for j, c in got.items()}
        want = oracle.evaluate(maps, [1, 1, 1], list(xs))
        assert got == want


@pytest.mark.parametrize("seed", range(8))
def test_interchange_law(seed):
    """(f (x) g)(f' (x) g') = (-1)^{|g||f'|} ff' (x) gg'."""
    r = rd.rng(seed)
    A = rd.module(r, "a", {0: 1, 1: 2})
    B = rd.module(r, "b", {-1: 1, 0: 1, 1: 1, 2: 1})
    C = rd.module(r, "c", {-2: 1, -1: 2, 0: 1, 1: 1, 2: 1, 3: 1})
    f = rd.random_map(r, A, B, 1)
    fp = rd.random_map(r, B, C, r.choice([0, 1]))
    g = rd.random_map(r, A, B, r.choice([-1, 1]))
    gp = rd.random_map(r, B, C, 1)
    lhs = compose_maps(tensor_maps(f, g), tensor_maps(fp, gp))
    rhs = tensor_maps(compose_maps(f, fp), compose_maps(g, gp))
    if (g.degree * fp.degree) % 2:
        rhs = -rhs
    assert lhs == rhs


def test_compose_matches_dense_product():
    r = rd.rng(3)
    A = rd.module(r, "a", {0: 2, 1: 2})
    B = rd.module(r, "b", {0: 2, 1: 3})
    f = rd.random_map(r, A, B, 0)
    g = rd.random_map(r, B, A, 0)
    assert compose_maps(f, g).dense() == oracle.matmul(oracle.dense(f), oracle.dense(g))


def test_blocks_round_trip():
    r = rd.rng(5)
    A = rd.module(r, "a", {0: 2, 1: 1})
    B = rd.module(r, "b", {1: 1, 2: 3})
    f = rd.random_map(r, A, B, 1)
    assert GradedMap.from_blocks(A, B, 1, f.blocks) == f


def test_element_map():
    m = GradedModule([("x", 0), ("y", 0)])
    e = element_map(m, {1: 3}, 0)
    assert e.source.dim == 1 and e.rows[0] == {1: 3}


# ----------------------------------------------------------------- complexes


def _dense_cohomology_dims(c):
    mod = c.module
    D = oracle.dense(c.differential)
    out = {}
    for k in mod.support:
        out_rows = [D[i] for i in mod.indices(k)]
        in_rows = [D[i] for i in mod.indices(k - 1)]
        dim = len(mod.indices(k)) - oracle.rank(out_rows) - oracle.rank(in_rows)
        if dim:
            out[k] = dim
    return out


@pytest.mark.parametrize("seed", range(15))
def test_cohomology_dims_against_ranks(seed):
    r = rd.rng(seed)
    c = rd.random_complex(r, {d: r.randint(0, 3) for d in (-1, 0, 1, 2)})
    h = cohomology(c)
    assert h.dims == _dense_cohomology_dims(c)
    # representatives are cycles, and project(include) is the identity
    assert not compose_maps(h.include, c.differential)
    assert compose_maps(h.include, h.project) == identity_map(h.module)
    # boundaries have zero class
    for i in range(c.module.dim):
        assert not h.class_of(c.differential.rows[i])


def test_cohomology_degree_accessor():
    m = GradedModule([("x", 0), ("y", 1), ("z", 1)])
    c = Complex(m, GradedMap(m, m, 1, [{1: 1}, {}, {}]))
    n, reps, _ = cohomology(c).degree(1)
    assert n == 1 and len(reps) == 1
    assert cohomology(c).dim(0) == 0


def test_complex_requires_square_zero():
    m = GradedModule([("x", 0), ("y", 1), ("z", 2)])
    with pytest.raises(ComplexError):
        Complex(m, GradedMap(m, m, 1, [{1: 1}, {2: 1}, {}]))


@pytest.mark.parametrize("seed", range(10))
def test_chain_homotopy_found_for_planted_difference(seed):
    r = rd.rng(seed)
    A = rd.random_complex(r, {-1: 2, 0: 2, 1: 2}, "s")
    C = rd.random_complex(r, {-1: 2, 0: 2, 1: 2}, "t")
    h = rd.random_map(r, A.module, C.module, -1)
    f = compose_maps(h, C.differential) + compose_maps(A.differential, h)
    zero = f - f
    found = find_chain_homotopy(f, zero, A, C)
    assert found is not None
    assert compose_maps(found, C.differential) + compose_maps(A.differential, found) == f


def test_no_homotopy_between_distinct_classes():
    m = GradedModule([("x", 0)])
    c = Complex.zero(m)
    one = identity_map(m)
    assert find_chain_homotopy(one, one - one, c, c) is None


@pytest.mark.parametrize("seed", range(20))
def test_planted_cone_contractions(seed):
    r = rd.rng(1000 + seed)
    u = rd.planted_equivalence(r)
    assert is_homotopy_invertible(u)
    he = homotopy_inverse(u)
    k = build_cone_contraction(he.u, he.v, he.h_prime, he.h_double_prime)
    D = oracle.dense(k.cone.differential)
    H = oracle.dense(k.h_bar)
    n = k.cone.module.dim
    total = [
        [a + b for a, b in zip(r1, r2)]
        for r1, r2 in zip(oracle.matmul(H, D), oracle.matmul(D, H))
    ]
    assert total == [[int(i == j) for j in range(n)] for i in range(n)]
    # every cycle of the cone is hit
    for i in range(n):
        z = {j: c for j, c in enumerate(D[i]) if c}
        if z:
            w = contract_cycle(z, k)
            assert {j: c for j, c in enumerate(oracle.matmul([[w.get(t, 0) for t in range(n)]], D)[0]) if c} == z


def test_cone_basis_order_and_differential():
    a = GradedModule([("a", 0)])
    c = GradedModule([("c", 0)])
    u = ChainMap(Complex.zero(a), Complex.zero(c), GradedMap(a, c, 0, [{0: 1}]))
    cn = cone(u)
    assert cn.module.basis == ((("c", "c"), 0), (("a", "a"), -1))
    assert cn.differential.rows == ({}, {0: 1})


def test_contraction_rejects_wrong_homotopies():
    a = GradedModule([("x", 0), ("y", 1)])
    A = Complex(a, GradedMap(a, a, 1, [{1: 1}, {}]))
    u = ChainMap(A, A, identity_map(a))
    he = homotopy_inverse(u)
    bad = he.h_prime + GradedMap(a, a, -1, [{}, {0: 1}])
    with pytest.raises(ComplexError):
        build_cone_contraction(he.u, he.v, bad, he.h_double_prime)


def test_non_equivalence_has_no_inverse():
    a = GradedModule([("x", 0)])
    A = Complex.zero(a)
    u = ChainMap(A, A, identity_map(a) - identity_map(a))
    assert not is_homotopy_invertible(u)
    assert homotopy_inverse(u) is None


def test_contract_cycle_rejects_non_cycle():
    a = GradedModule([("x", 0)])
    A = Complex.zero(a)
    he = homotopy_inverse(ChainMap(A, A, identity_map(a)))
    k = build_cone_contraction(he.u, he.v, he.h_prime, he.h_double_prime)
    with pytest.raises(NotACycleError):
        contract_cycle({1: 1}, k)


@pytest.mark.parametrize("seed", range(5))
def test_hom_cycle_lift(seed):
    r = rd.rng(2000 + seed)
    u = rd.planted_equivalence(r)
    he = homotopy_inverse(u)
    k = build_cone_contraction(he.u, he.v, he.h_prime, he.h_double_prime)
    N = rd.random_complex(r, {0: 1, 1: 1}, "n")
    d = k.cone.differential
    # boundaries of random maps are cycles of the hom complex
    phi = rd.random_map(r, N.module, k.cone.module, 0)
    z = hom_differential(phi, N.differential, d)
    w = contract_hom_cycle(z, k, N.differential)
    assert hom_differential(w, N.differential, d) == z
