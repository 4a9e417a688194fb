"""Small built-in categories used by the command line and the tests."""

from __future__ import annotations

from .core.dg import complexes_category, dg_category
from .core.families import AInfCategory, AInfFunctor
from .core.transport import pullback_category
from .exactlin import QQ, GradedMap


def dual(field=QQ) -> AInfCategory:
    """The dual numbers ``k[e]/(e^2)`` as a one-object category, e in degree 0."""
    return dg_category(
        ["*"],
        {("*", "*"): [("1", 0), ("e", 0)]},
        {},
        {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}},
        field,
        "Dual",
    )


def broken_dual(field=QQ) -> AInfCategory:
    """Dual numbers with ``e.1 = 2e``: b_2 is not associative."""
    return dg_category(
        ["*"],
        {("*", "*"): [("1", 0), ("e", 0)]},
        {},
        {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 2}},
        field,
        "BrokenDual",
    )


def two_obj_dg(field=QQ) -> AInfCategory:
    """Complexes ``X = [x0]`` and ``Y = [y-1 -> y0]`` (an acyclic pair)."""
    return complexes_category(
        {"X": [("x0", 0)], "Y": [("y-1", -1), ("y0", 0)]},
        {"Y": {"y-1": {"y0": 1}}},
        field,
        "TwoObjDG",
    )


def two_complexes(field=QQ) -> AInfCategory:
    """``X = [x0]`` and ``Y = [y-1 -> y0a, y0b]`` with ``d y-1 = y0a``; X and Y are homotopy equivalent."""
    return complexes_category(
        {"X": [("x0", 0)], "Y": [("y-1", -1), ("y0a", 0), ("y0b", 0)]},
        {"Y": {"y-1": {"y0a": 1}}},
        field,
        "TwoComplexes",
    )


def conjugated_dual(field=QQ) -> tuple[AInfCategory, AInfFunctor]:
    """Dual numbers in the basis ``1 + e, e``, with the change of basis as a functor to Dual."""
    B = dual(field)
    mod = B.hom("*", "*")
    one = field.one
    phi1 = GradedMap(mod, mod, 0, [{0: one, 1: one}, {1: one}])
    C, phi = pullback_category(B, {("*", "*"): phi1}, 4, "ConjugatedDual")
    return C, phi


def twisted_complexes(N: int = 4, field=QQ) -> tuple[AInfCategory, AInfFunctor]:
    """TwoComplexes pulled back along a functor with a nonzero second component.

    The second component sends ``y0b>y0b (x) y0b>y0b`` to ``y0b>y-1``.  The
    transported category has b_3 and b_4, its units are not strict, and the
    functor to TwoComplexes is an equivalence by construction.
    """
    B = two_complexes(field)
    one = field.one
    comps = {
        pair: GradedMap(mod, mod, 0, [{i: one} for i in range(mod.dim)])
        for pair, mod in B.quiver.homs.items()
    }
    yy = B.hom("Y", "Y")
    src = B.tensor(("Y", "Y", "Y"))
    a = yy.index("y0b>y0b")
    rows = [{} for _ in range(src.dim)]
    rows[a * yy.dim + a] = {yy.index("y0b>y-1"): one}
    comps[("Y", "Y", "Y")] = GradedMap(src, yy, 0, rows)
    return pullback_category(B, comps, N, "TwistedComplexes")


FIXTURES = {
    "Dual": dual,
    "BrokenDual": broken_dual,
    "TwoObjDG": two_obj_dg,
    "TwoComplexes": two_complexes,
}
