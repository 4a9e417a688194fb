"""Term-for-term comparison of B and M with their low-arity closed forms.

Each closed-form term is written as a pattern such as ``"f1 r0|b2"``: the
pieces tensored left to right, then the outer map after the bar.  A trailing
``-s`` marks the terms carrying ``-(-1)^r``.  Patterns are evaluated on
random basis inputs by the elementwise oracle; the implementation's own
schedules are translated to the same patterns and compared as multisets.
"""

from collections import Counter

import pytest

import oracle
import randomdata as rd
from ainf.core import Theta, b_theta
from ainf.exactlin import compose_maps
from ainf.hom import B_component, M_component

# ---------------------------------------------------------------- formulas

B1 = {
    0: ["r0|b1"],
    1: ["r1|b1", "f1 r0|b2", "r0 g1|b2", "b1|r1 -s"],
    2: [
        "r2|b1", "f2 r0|b2", "f1 r1|b2", "r1 g1|b2", "r0 g2|b2",
        "f1 f1 r0|b3", "f1 r0 g1|b3", "r0 g1 g1|b3",
        "b2|r1 -s", "1 b1|r2 -s", "b1 1|r2 -s",
    ],
}

B2 = {
    0: ["r0 p0|b2"],
    1: ["r1 p0|b2", "r0 p1|b2", "r0 p0 h1|b3", "r0 g1 p0|b3", "f1 r0 p0|b3"],
    2: [
        "r2 p0|b2", "r1 p1|b2", "r0 p2|b2",
        "r1 p0 h1|b3", "r0 p1 h1|b3", "r1 g1 p0|b3", "r0 g1 p1|b3",
        "f1 r1 p0|b3", "f1 r0 p1|b3", "r0 p0 h2|b3", "r0 g2 p0|b3", "f2 r0 p0|b3",
        "r0 p0 h1 h1|b4", "r0 g1 g1 p0|b4", "r0 g1 p0 h1|b4",
        "f1 r0 p0 h1|b4", "f1 r0 g1 p0|b4", "f1 f1 r0 p0|b4",
    ],
}

B3 = {
    0: ["r0 p0 t0|b3"],
    1: [
        "r1 p0 t0|b3", "r0 p1 t0|b3", "r0 p0 t1|b3",
        "r0 p0 t0 k1|b4", "r0 p0 h1 t0|b4", "r0 g1 p0 t0|b4", "f1 r0 p0 t0|b4",
    ],
}

M11 = {0: ["r0|p1"], 1: ["r1|p1", "f1 r0|p2", "r0 g1|p2"]}

M20 = {
    0: ["r0 p0|k2"],
    1: ["r1 p0|k2", "r0 p1|k2", "r0 p0 h1|k3", "r0 g1 p0|k3", "f1 r0 p0|k3"],
}

M21 = {k: [s.replace("|k", "|t") for s in v] for k, v in M20.items()}


# ----------------------------------------------------------------- fixture


def small_quiver(r):
    pairs = {}
    for x in ("U", "V"):
        for y in ("U", "V"):
            if (x, y) != ("V", "U") or r.random() < 0.5:
                pairs[(x, y)] = {d: 1 for d in (-1, 0, 1) if r.random() < 0.8} or {0: 1}
    return rd.random_quiver(r, ("U", "V"), pairs)


class World:
    """Random truncated data: nothing here satisfies any identity."""

    def __init__(self, seed):
        r = rd.rng(seed)
        q = small_quiver(r)
        self.A = rd.random_category(r, q, 4, "A", 0.9)
        self.B = rd.random_category(r, q, 4, "B", 0.9)
        self.C = rd.random_category(r, q, 4, "C", 0.9)
        swap = {"U": "V", "V": "U"} if seed % 2 else {"U": "U", "V": "V"}
        ident = {"U": "U", "V": "V"}
        A, B, C = self.A, self.B, self.C
        self.f, self.g, self.h, self.k = (
            rd.random_functor(r, A, B, swap, 3, n, 0.9) for n in "fghk"
        )
        deg = lambda: r.randint(-1, 1)  # noqa: E731
        self.r = rd.random_coderivation(r, self.f, self.g, deg(), 2, "r", 0.9)
        self.p = rd.random_coderivation(r, self.g, self.h, deg(), 2, "p", 0.9)
        self.t = rd.random_coderivation(r, self.h, self.k, deg(), 2, "t", 0.9)
        # a second composable layer B -> C for M
        self.f2, self.g2 = (rd.random_functor(r, B, C, ident, 3, n, 0.9) for n in ("h'", "k'"))
        self.p2 = rd.random_coderivation(r, self.f2, self.g2, deg(), 3, "p'", 0.9)
        self.t2 = rd.random_coderivation(r, self.f2, self.g2, deg(), 3, "t'", 0.9)


# --------------------------------------------------------- pattern oracle


def parse(pattern):
    body, sign = (pattern[:-3], "-s") if pattern.endswith(" -s") else (pattern, "")
    inner, outer = body.split("|")
    pieces = [(tok[:-1], int(tok[-1])) if tok != "1" else ("1", 1) for tok in inner.split()]
    return pieces, (outer[:-1], int(outer[-1])), sign


def evaluate_pattern(pattern, fams, seq, xs):
    """One closed-form term on one basis tensor, signs included."""
    pieces, (oname, oarity), sign = parse(pattern)
    maps, arities = [], []
    pos = 0
    outs = [fams["_start"](seq[0])]
    for name, a in pieces:
        fam, objfn = fams[name]
        if name == "1":
            maps.append(oracle.ID)
        else:
            m = fam.maps.get(tuple(seq[pos : pos + a + 1]))
            if m is None:
                return {}
            maps.append(m)
        arities.append(a)
        pos += a
        outs.append(objfn(seq[pos]))
    assert pos == len(xs)
    outer = fams[oname][0].maps.get(tuple(outs))
    assert len(outs) - 1 == oarity
    if outer is None:
        return {}
    val = oracle.then(outer, oracle.evaluate(maps, arities, xs))
    if sign == "-s":
        s = -1 if fams["_degree"] % 2 == 0 else 1
        val = {k: s * v for k, v in val.items()}
    return val


def pattern_sum(patterns, fams, seq, xs):
    acc = {}
    for p in patterns:
        oracle.add_into(acc, evaluate_pattern(p, fams, seq, xs))
    return oracle.clean(acc)


# ---------------------------------------------------- implementation side


def schedule_patterns(th, names, k, outer_name, min_arity, suffix=""):
    """Translate the engine's schedules into patterns, dropping components that vanish by definition."""
    out = []
    for sched in th.schedules(k):
        toks = []
        skip = False
        for slot, length in sched:
            name = names[slot]
            if length < min_arity.get(name, 0):
                skip = True
            toks.append("1" if name == "1" else f"{name}{length}")
        if skip or len(sched) < min_arity.get(outer_name, 0):
            continue
        out.append(" ".join(toks) + f"|{outer_name}{len(sched)}" + suffix)
    return out


MIN = {"b": 1, "f": 1, "g": 1, "h": 1, "k": 1, "h'": 1, "k'": 1}


def B1_patterns(w, k):
    th = Theta((w.f, w.g), (w.r,))
    main = schedule_patterns(th, ["f", "r", "g"], k, "b", MIN)
    inner = schedule_patterns(b_theta(w.A), ["1", "b", "1"], k, "r", MIN, " -s")
    return main + inner


def B2_patterns(w, k):
    th = Theta((w.f, w.g, w.h), (w.r, w.p))
    return schedule_patterns(th, ["f", "r", "g", "p", "h"], k, "b", MIN)


def B3_patterns(w, k):
    th = Theta((w.f, w.g, w.h, w.k), (w.r, w.p, w.t))
    return schedule_patterns(th, ["f", "r", "g", "p", "h", "t", "k"], k, "b", MIN)


def fams_for(w, **extra):
    base = {
        "f": (w.f, w.f.obj), "g": (w.g, w.g.obj), "h": (w.h, w.h.obj), "k": (w.k, w.k.obj),
        "r": (w.r, w.g.obj), "p": (w.p, w.h.obj), "t": (w.t, w.k.obj),
        "b": (w.B, lambda x: x), "1": (None, lambda x: x),
        "_start": w.f.obj, "_degree": w.r.degree,
    }
    base.update(extra)
    return base


SEEDS = range(10)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("k", [0, 1, 2])
def test_B1_terms(seed, k):
    w = World(seed)
    assert Counter(B1_patterns(w, k)) == Counter(B1[k])
    fams = fams_for(w)
    inner = fams_for(w, b=(w.A, lambda x: x), r=(w.r, w.g.obj), _start=lambda x: x)
    for seq in w.A.quiver.paths(k):
        got = B_component(w.r, seq)
        for xs in oracle.inputs_of(w.A, seq):
            want = {}
            for p in B1[k]:
                # terms with b inside use A's b and apply r last
                oracle.add_into(want, evaluate_pattern(p, inner if p.endswith("-s") else fams, seq, xs))
            want = oracle.clean(want)
            assert _row(got, xs) == want
            assert want == oracle.B1_oracle(w.r, list(seq), xs)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("k", [0, 1, 2])
def test_B2_terms(seed, k):
    w = World(seed)
    assert Counter(B2_patterns(w, k)) == Counter(B2[k])
    fams = fams_for(w)
    th = Theta((w.f, w.g, w.h), (w.r, w.p))
    for seq in w.A.quiver.paths(k):
        got = B_component((w.r, w.p), seq)
        for xs in oracle.inputs_of(w.A, seq):
            want = pattern_sum(B2[k], fams, seq, xs)
            assert _row(got, xs) == want
        _term_for_term(th, ["f", "r", "g", "p", "h"], w.B, fams, seq)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("k", [0, 1])
def test_B3_terms(seed, k):
    w = World(seed)
    assert Counter(B3_patterns(w, k)) == Counter(B3[k])
    fams = fams_for(w)
    th = Theta((w.f, w.g, w.h, w.k), (w.r, w.p, w.t))
    for seq in w.A.quiver.paths(k):
        got = B_component((w.r, w.p, w.t), seq)
        for xs in oracle.inputs_of(w.A, seq):
            assert _row(got, xs) == pattern_sum(B3[k], fams, seq, xs)
        _term_for_term(th, ["f", "r", "g", "p", "h", "t", "k"], w.B, fams, seq)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("k", [0, 1])
def test_M11_terms(seed, k):
    w = World(seed)
    th = Theta((w.f, w.g), (w.r,))
    pats = schedule_patterns(th, ["f", "r", "g"], k, "p", MIN)
    assert Counter(pats) == Counter(M11[k])
    fams = fams_for(w, p=(w.p2, w.g2.obj))
    for seq in w.A.quiver.paths(k):
        got = M_component(w.r, w.p2, seq)
        for xs in oracle.inputs_of(w.A, seq):
            assert _row(got, xs) == pattern_sum(M11[k], fams, seq, xs)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("k", [0, 1])
def test_M20_terms(seed, k):
    w = World(seed)
    th = Theta((w.f, w.g, w.h), (w.r, w.p))
    pats = schedule_patterns(th, ["f", "r", "g", "p", "h"], k, "k", MIN)
    assert Counter(pats) == Counter(M20[k])
    fams = fams_for(w, k=(w.f2, w.f2.obj))
    for seq in w.A.quiver.paths(k):
        got = M_component((w.r, w.p), w.f2, seq)
        for xs in oracle.inputs_of(w.A, seq):
            assert _row(got, xs) == pattern_sum(M20[k], fams, seq, xs)


@pytest.mark.parametrize("seed", SEEDS)
@pytest.mark.parametrize("k", [0, 1])
def test_M21_terms(seed, k):
    w = World(seed)
    th = Theta((w.f, w.g, w.h), (w.r, w.p))
    pats = schedule_patterns(th, ["f", "r", "g", "p", "h"], k, "t", MIN)
    assert Counter(pats) == Counter(M21[k])
    fams = fams_for(w, t=(w.t2, w.g2.obj))
    for seq in w.A.quiver.paths(k):
        got = M_component((w.r, w.p), w.t2, seq)
        for xs in oracle.inputs_of(w.A, seq):
            assert _row(got, xs) == pattern_sum(M21[k], fams, seq, xs)


def test_B1_sign_depends_on_degree():
    """The inner terms flip with the parity of r."""
    w = World(0)
    inner = fams_for(w, b=(w.A, lambda x: x), _start=lambda x: x)
    for seq in w.A.quiver.paths(1):
        for xs in oracle.inputs_of(w.A, seq):
            a = evaluate_pattern("b1|r1 -s", inner, seq, xs)
            b = evaluate_pattern("b1|r1 -s", dict(inner, _degree=w.r.degree + 1), seq, xs)
            assert a == {key: -v for key, v in b.items()}


# ----------------------------------------------------------------- helpers


def _row(m, xs):
    if m is None:
        return {}
    row = m.rows[oracle.label_index(m.source, [lab for lab, _ in xs])]
    return {m.target.basis[j][0]: c for j, c in row.items()}


def _term_for_term(th, names, outer_cat, fams, seq):
    """Every nonvanishing schedule matches the oracle evaluation of its pattern."""
    k = len(seq) - 1
    for sched in th.schedules(k):
        out, m = th.term(seq, sched)
        toks = [f"{names[s]}{a}" for s, a in sched]
        if any(a < MIN.get(names[s], 0) for s, a in sched):
            assert m is None
            continue
        pattern = " ".join(toks) + f"|b{len(sched)}"
        outer = outer_cat.maps.get(out)
        full = compose_maps(m, outer) if m is not None and outer is not None else None
        for xs in oracle.inputs_of(fams["f"][0].source, seq):
            assert _row(full, xs) == evaluate_pattern(pattern, fams, seq, xs)


def test_every_pattern_is_exercised():
    """Across the seeds each closed-form term is nonzero on some input."""
    hit = Counter()
    tables = [(B1, None), (B2, None), (B3, None), (M11, "p"), (M20, "k"), (M21, "t")]
    for seed in SEEDS:
        w = World(seed)
        swaps = {
            None: fams_for(w),
            "p": fams_for(w, p=(w.p2, w.g2.obj)),
            "k": fams_for(w, k=(w.f2, w.f2.obj)),
            "t": fams_for(w, t=(w.t2, w.g2.obj)),
        }
        inner = fams_for(w, b=(w.A, lambda x: x), _start=lambda x: x)
        for table, key in tables:
            for k, pats in table.items():
                for seq in w.A.quiver.paths(k):
                    for xs in oracle.inputs_of(w.A, seq):
                        for p in pats:
                            fams = inner if p.endswith("-s") else swaps[key]
                            if evaluate_pattern(p, fams, seq, xs):
                                hit[(id(table), p)] += 1
    missing = [p for table, _ in tables for pats in table.values() for p in pats if not hit[(id(table), p)]]
    assert missing == []
