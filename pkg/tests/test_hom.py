import pytest

import oracle
import randomdata as rd
from ainf.core import Coderivation, compose_functors, identity_functor, scaling_functor, strict_functor
from ainf.core import engine
from ainf.exactlin import GradedMap
from ainf.fixtures import FIXTURES, twisted_complexes
from ainf.unital import build_unit_transformation, strict_units
from ainf.hom import (
    TransformationChain,
    apply_B,
    apply_M,
    check_B_squared,
    check_hom_complex,
    check_induced_composition,
    check_induced_differential,
    check_M_associativity,
    check_M_chain,
    check_M_identities,
    check_M_unit,
    check_natural,
    check_theta_b,
    check_theta_comultiplicativity,
    check_theta_support,
    check_theta_theta,
    check_theta_tilde,
    composite,
    equivalent_transformations,
    expand_M,
    hom_complex,
    induced,
    solve_B1,
    theta_block,
)


def two_obj_chain(seed, length, top=2):
    """Random complete coderivations on TwoObjDG between identity and a scaling."""
    r = rd.rng(seed)
    cat = FIXTURES["TwoObjDG"]()
    fs = [identity_functor(cat), scaling_functor(cat, {"X": 1, "Y": 2}, "s")]
    if length == 0:
        return TransformationChain.functor(r.choice(fs))
    return TransformationChain.of(*rd.random_chain(r, fs, length, top, 0.7))


def unit_coderivation(cat, labels):
    """The degree -1 coderivation id -> id whose only component is a chosen element per object."""
    ident = identity_functor(cat)
    comps = {}
    for x, lab in labels.items():
        h = cat.hom(x, x)
        comps[(x,)] = GradedMap(cat.tensor((x,)), h, -1, [{h.index(lab): 1}])
    return Coderivation(ident, ident, -1, comps, None, "i")


# ------------------------------------------------------------------- theta


@pytest.mark.parametrize("length", [0, 1, 2, 3])
@pytest.mark.parametrize("seed", range(3))
def test_theta_comultiplicative_on_two_obj(length, seed):
    chain = two_obj_chain(seed, length)
    rep = check_theta_comultiplicativity(chain, 3)
    assert rep.passed, rep.summary()
    assert check_theta_support(chain, 3).passed


def test_theta_comultiplicativity_detects_a_sign_error(monkeypatch):
    chain = two_obj_chain(1, 2)
    real = engine.Theta.term

    def flipped(self, seq, sched):
        out, m = real(self, seq, sched)
        # corrupt every term where a coderivation sees no input after position 0
        if m is not None and any(s % 2 and a == 0 for s, a in sched[1:]):
            m = -m
        return out, m

    engine.clear_cache()
    monkeypatch.setattr(engine.Theta, "term", flipped)
    try:
        assert not check_theta_comultiplicativity(chain, 3).passed
    finally:
        engine.clear_cache()


def test_theta_block_shape():
    chain = two_obj_chain(0, 2)
    for seq in chain.source.quiver.paths(2):
        for l in range(0, 6):
            blocks = theta_block(chain, seq, l)
            if not 2 <= l <= 4:
                assert blocks == {}
            for out in blocks:
                assert len(out) == l + 1


@pytest.mark.parametrize("length", [1, 2, 3])
def test_theta_b_relation(length):
    chain = two_obj_chain(7, length)
    assert check_theta_b(chain, 3).passed


@pytest.mark.parametrize("lengths", [(1, 1), (2, 1), (1, 0), (0, 1), (2, 0)])
def test_theta_theta_relation(lengths):
    w, _, _ = rd.dg_sample(4)
    r = rd.rng(sum(lengths))
    ps = rd.random_chain(r, w["CB"], lengths[0]) or None
    ts = rd.random_chain(r, w["BB"], lengths[1]) or None
    ps = TransformationChain.of(*ps) if ps else TransformationChain.functor(w["CB"][0])
    ts = TransformationChain.of(*ts) if ts else TransformationChain.functor(w["BB"][1])
    assert check_theta_theta(ps, ts, 3).passed


# ----------------------------------------------------------------------- B


def test_B1_matches_oracle_on_fixture():
    chain = two_obj_chain(2, 1)
    r = chain.coders[0]
    rb = apply_B(r, 3)
    for k in range(4):
        for seq in r.source.quiver.paths(k):
            m = rb.component(seq)
            for xs in oracle.inputs_of(r.source, seq):
                got = {} if m is None else {
                    m.target.basis[j][0]: c
                    for j, c in m.rows[oracle.label_index(m.source, [a for a, _ in xs])].items()
                }
                assert got == oracle.B1_oracle(r, list(seq), xs)


@pytest.mark.parametrize("seed", range(20))
def test_B_squared_on_random_dg_samples(seed):
    _, ps, _ = rd.dg_sample(seed)
    rep = check_B_squared(ps, 3)
    assert rep.passed, rep.summary()


def test_B_squared_fails_without_stasheff():
    cat = FIXTURES["BrokenDual"]()
    ident = identity_functor(cat)
    r = rd.rng(0)
    c = rd.random_coderivation(r, ident, ident, 0, 1, "c", 1.0, True)
    assert not check_B_squared(c, 3).passed


def test_B_squared_fails_for_a_non_functor():
    # a DG target has no b_3, which is where a non-functor shows up in B_1^2
    cat, _ = twisted_complexes(4)
    bad = strict_functor(cat, cat, {"X": "X", "Y": "Y"}, {"y0b>y0b": {"y0b>y0b": 2}}, "bad")
    r = rd.rng(1)
    c = rd.random_coderivation(r, bad, bad, 0, 1, "c", 1.0, True)
    assert not check_B_squared(c, 3).passed


def unit_of(cat, N):
    return build_unit_transformation(cat, strict_units(cat), None, N).i


def test_naturality():
    cat = FIXTURES["TwoComplexes"]()
    assert check_natural(unit_of(cat, 3), 3).passed
    # the bare unit elements need higher components to be natural
    bare = unit_coderivation(cat, {"X": "x0>x0", "Y": "y0b>y0b"})
    assert not check_natural(bare, 1).passed
    # a non-cycle element fails already in arity 0
    j = unit_coderivation(cat, {"X": "x0>x0", "Y": "y0a>y0a"})
    assert check_natural(j, 2).failing_arities[0] == 0


# ----------------------------------------------------------------------- M


@pytest.mark.parametrize("seed", range(20))
def test_M_identities_on_random_dg_samples(seed):
    _, _, sample = rd.dg_sample(seed)
    rep = check_M_identities([sample], 3)
    assert rep.passed, rep.summary()


def test_M_chain_fails_with_a_broken_target():
    cat = FIXTURES["TwoComplexes"]()
    bad = strict_functor(cat, cat, {"X": "X", "Y": "Y"}, {"x0>x0": {"x0>x0": 2}}, "bad")
    r = rd.rng(3)
    ident = identity_functor(cat)
    p = rd.random_coderivation(r, ident, ident, 0, 1, "p", 1.0, True)
    assert not check_M_chain(p, bad, 2).passed


@pytest.mark.parametrize("seed", range(4))
def test_M_unit_laws(seed):
    w, ps, _ = rd.dg_sample(seed)
    single = TransformationChain.of(ps.coders[0])
    assert check_M_unit(single, 3).passed
    assert check_M_unit(TransformationChain.functor(w["CB"][1]), 3).passed


def test_M00_is_composite_functor():
    w, _, _ = rd.dg_sample(2)
    f, g = w["CB"][0], w["BB"][1]
    fg = apply_M(f, g, 3)
    assert fg is composite(f, g)
    ref = compose_functors(f, g)
    for k in range(1, 4):
        for seq in f.source.quiver.paths(k):
            assert fg.component_or_zero(seq) == ref.component_or_zero(seq)


def test_M_nm_vanishes_for_two_or_more_t():
    w, _, _ = rd.dg_sample(6)
    r = rd.rng(0)
    ps = rd.random_chain(r, w["CB"], 1)
    ts = rd.random_chain(r, w["BB"], 2)
    z = apply_M(ps, ts, 3)
    assert z.maps == {}


def test_expand_M_sign_bookkeeping():
    w, _, _ = rd.dg_sample(8)
    r = rd.rng(5)
    ps = rd.random_chain(r, w["CB"], 2)
    ts = rd.random_chain(r, w["BB"], 1)
    terms = expand_M(ps, ts, 3)
    # (2,1) splits as: the t-block alone in one of five arrangements of the
    # p's ((0,1)(2,0), (0,1)(1,0)(1,0), (1,0)(0,1)(1,0), (2,0)(0,1),
    # (1,0)(1,0)(0,1)), or merged as (2,1), (1,1)(1,0) or (1,0)(1,1)
    assert len(terms) == 8
    assert all(s in (1, -1) for s, _ in terms)


@pytest.mark.parametrize("seed", [0, 2])
def test_M_associativity_with_three_coderivations(seed):
    _, _, (p, t, u) = rd.dg_sample(seed)
    assert check_M_associativity(p, t, u, 3).passed


# ------------------------------------------------------------- hom complex


def test_hom_complex_squares_to_zero():
    cat = FIXTURES["TwoObjDG"]()
    ident = identity_functor(cat)
    H = hom_complex(ident, ident, 2)
    assert check_hom_complex(H).passed


def test_solve_B1_recovers_planted_boundary():
    cat = FIXTURES["TwoComplexes"]()
    ident = identity_functor(cat)
    s = scaling_functor(cat, {"X": 1, "Y": 2}, "s")
    r = rd.rng(4)
    lam = rd.random_coderivation(r, ident, s, -2, 1, "lam", 0.8)
    target = apply_B(lam, 1)
    found = solve_B1(target, -2, 1)
    assert found is not None
    again = apply_B(found, 1)
    assert again.maps == target.maps


def test_unit_is_not_a_boundary():
    cat = FIXTURES["TwoComplexes"]()
    assert solve_B1(unit_of(cat, 2), -2, 2) is None


def test_equivalent_transformations():
    cat = FIXTURES["TwoComplexes"]()
    ident = identity_functor(cat)
    i = unit_of(cat, 2)
    r = rd.rng(9)
    lam = rd.random_coderivation(r, ident, ident, -2, 2, "lam", 0.8)
    lb = apply_B(lam, 2)
    keys = set(i.maps) | set(lb.maps)
    j = Coderivation(ident, ident, -1, {s: i.component_or_zero(s) + lb.component_or_zero(s) for s in keys}, 2)
    w = equivalent_transformations(j, i, 2)
    assert w is not None
    wb = apply_B(w, 2)
    for k in range(3):
        for seq in cat.quiver.paths(k):
            assert wb.component_or_zero(seq) == lb.component_or_zero(seq)
    # twice the unit is not homotopic to the unit
    assert equivalent_transformations(i.scaled(2), i, 2) is None


# ----------------------------------------------------------------- induced


@pytest.mark.parametrize("seed", [1, 3, 5])
def test_induced_maps(seed):
    w, ps, (qs, ts) = rd.dg_sample(seed)
    assert check_theta_tilde(ts, qs, 3).passed
    assert check_induced_differential(ts, qs, 3).passed


def test_induced_composition():
    w, _, _ = rd.dg_sample(3)
    r = rd.rng(11)
    ps = TransformationChain.of(*rd.random_chain(r, w["CB"], 2))
    s = w["BB"][1]
    t = rd.random_chain(r, [identity_functor(w["B"]), s], 1)[0]
    assert check_induced_composition(s, s, ps, 3).passed
    assert check_induced_composition(t.f, t, ps, 3).passed
    assert check_induced_composition(t, s, ps, 3).passed
    with pytest.raises(ValueError):
        check_induced_composition(t, t, ps, 3)


def test_induced_objects():
    w, _, _ = rd.dg_sample(1)
    g = w["BB"][1]
    F = induced(g)
    assert F.obj(w["CB"][0]) is composite(w["CB"][0], g)
    with pytest.raises(TypeError):
        induced(3)
