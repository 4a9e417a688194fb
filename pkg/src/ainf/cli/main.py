"""``ainf`` command line: checks, constructions and fixture emission.

Exit status is 0 when every report passes, 1 when an identity or a
construction fails and 2 on usage, parse or name errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from .. import fixtures
from ..core import AInfFunctor, Coderivation, Report, check_functor, check_stasheff
from ..core.families import TruncationError
from ..exactlin import ComplexError, field_from_env
from ..hom import (
    TransformationChain,
    apply_B,
    apply_M,
    check_B_squared,
    check_M_chain,
    check_M_identities,
    composite,
)
from ..unital import (
    EquivalenceError,
    InversionError,
    LiftError,
    UnitAssignment,
    UnitError,
    build_quasi_inverse,
    build_unit_transformation,
    cancel_functor,
    check_cancellation,
    check_inverse,
    check_quasi_inverse,
    check_unit_element,
    check_unit_transformation,
    check_unital_functor,
    find_invertibility_witness,
    find_unit_elements,
    h0,
    invert_transformation,
)
from .workspace import (
    Elements,
    Workspace,
    WorkspaceError,
    coderivation_to_json,
    dumps,
    elements_to_json,
    functor_to_json,
    load,
    pretty,
)

DEFAULT_TRUNCATION = 3

CHECKS = ("stasheff", "functor", "B-squared", "M-identities", "unit-element", "unital-functor")
CONSTRUCTS = ("units", "h0", "compose-B", "compose-M", "invert", "cancel", "quasi-inverse")
CONSTRUCTION_ERRORS = (UnitError, InversionError, EquivalenceError, LiftError, ComplexError)


class UsageError(ValueError):
    pass


@dataclass
class RunResult:
    command: str
    inputs: dict
    truncation: int | None
    reports: list = field(default_factory=list)
    outputs: dict = field(default_factory=dict)
    text: list = field(default_factory=list)  # extra human-readable lines
    error: str = ""

    @property
    def status(self) -> int:
        if self.error:
            return 1
        return 0 if all(r.passed for r in self.reports) else 1

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "truncation": self.truncation,
            "status": self.status,
            "reports": [r.to_dict() for r in self.reports],
        }
        if self.outputs:
            out["outputs"] = self.outputs
        if self.error:
            out["error"] = self.error
        return out

    def render(self) -> str:
        lines = [f"ainf {self.command}"]
        for k, v in self.inputs.items():
            lines.append(f"  {k}: {v}")
        if self.truncation is not None:
            lines.append(f"  truncation: {self.truncation}")
        for r in self.reports:
            lines.append(r.summary())
            for f in r.failures[:5]:
                if f.defect is not None:
                    lines.append(f"  defect at arity {f.arity}, objects ({','.join(map(str, f.objects))}):")
                    for block in f.to_dict()["defect"]:
                        lines.append(f"    source degree {block['source_degree']}:")
                        lines.extend("      [" + " ".join(row) + "]" for row in block["matrix"])
            if len(r.failures) > 5:
                lines.append(f"  ... {len(r.failures) - 5} more failures")
        lines.extend(self.text)
        if self.error:
            lines.append(f"error: {self.error}")
        lines.append(f"status: {self.status}")
        lines.append("--- json ---")
        lines.append(pretty(self.to_dict()))
        return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ helpers


def _names(values) -> list[str]:
    out = []
    for v in values or []:
        out.extend(x for x in v.split(",") if x)
    return out


def _truncation(ws: Workspace, args) -> int:
    if args.max_arity is not None:
        return args.max_arity
    return ws.truncation if ws.truncation is not None else DEFAULT_TRUNCATION


def _chain(ws: Workspace, spec: str):
    """``"r,p"`` names a chain of coderivations; a lone functor name gives a functor."""
    names = [x for x in spec.split(",") if x]
    if not names:
        raise UsageError("empty chain")
    if len(names) == 1 and names[0] not in ws.coderivations:
        return TransformationChain.functor(ws.functor(names[0]))
    try:
        return TransformationChain.of(*(ws.coderivation(n) for n in names))
    except ValueError as exc:
        if isinstance(exc, WorkspaceError):
            raise
        raise UsageError(f"chain {spec!r}: {exc}") from None


def _families(*chains) -> list:
    out = []
    for ch in chains:
        out.extend(ch.functors)
        out.extend(ch.coders)
        out.extend((ch.source, ch.target))
    return out


def _clamp(res: RunResult, N: int, families, slack: int = 0) -> int:
    """Lower N so that no component beyond a stored truncation is needed."""
    tops = [f.max_arity for f in families if f.max_arity is not None]
    if not tops or min(tops) - slack >= N:
        return N
    M = max(min(tops) - slack, 0)
    res.text.append(f"note: inputs known through arity {min(tops)}; checked through {M}")
    res.truncation = M
    return M


def _units(ws: Workspace, cat_name: str, family: str | None) -> UnitAssignment | None:
    cat = ws.category(cat_name)
    if family is None:
        return find_unit_elements(cat)
    e = ws.element_family(family)
    if e.category != cat_name or e.degree != -1:
        raise UsageError(f"element family {family!r} is not a degree -1 family on {cat_name!r}")
    missing = [x for x in cat.objects if x not in e.items]
    wrong = [x for x, (pair, _) in e.items.items() if pair != (x, x)]
    if missing or wrong:
        raise UsageError(f"unit family {family!r} must give an element of ({{X}}, {{X}}) for every object")
    return UnitAssignment(cat, {x: e.items[x][1] for x in cat.objects})


def _one(values, what: str) -> str:
    names = _names(values)
    if len(names) != 1:
        raise UsageError(f"give exactly one {what}")
    return names[0]


def _unit_fragment(ws: Workspace, cat_name: str, i0: UnitAssignment) -> dict:
    items = {x: ((x, x), m) for x, m in i0.elements.items()}
    return elements_to_json(Elements(cat_name, -1, items), ws)


def _emit(ws: Workspace, res: RunResult, kind: str, name: str, obj) -> str:
    if kind == "coderivation":
        name = ws.add_coderivation(name, obj)
        res.outputs.setdefault("coderivations", {})[name] = None
    elif kind == "functor":
        name = ws.add_functor(name, obj)
        res.outputs.setdefault("functors", {})[name] = None
    elif kind == "elements":
        name = ws.add_elements(name, obj)
        res.outputs.setdefault("elements", {})[name] = None
    return name


def _finish_outputs(ws: Workspace, res: RunResult, known) -> None:
    """Serialize emitted entities once every one of them is registered."""
    for n in ws.functors:
        if n not in known:
            res.outputs.setdefault("functors", {})[n] = None
    for section, table, fn in (
        ("functors", ws.functors, functor_to_json),
        ("coderivations", ws.coderivations, coderivation_to_json),
        ("elements", ws.elements, elements_to_json),
    ):
        if section in res.outputs:
            res.outputs[section] = {n: fn(table[n], ws) for n in res.outputs[section]}


# ------------------------------------------------------------------- checks


def run_check(ws: Workspace, name: str, args) -> RunResult:
    N = _truncation(ws, args)
    res = RunResult(f"check {name}", {}, N)
    if name == "stasheff":
        cats = _names(args.cat) or list(ws.categories)
        res.inputs["categories"] = ",".join(cats)
        for c in cats:
            cat = ws.category(c)
            res.reports.append(check_stasheff(cat, _clamp(res, N, [cat])))
    elif name == "functor":
        funs = _names(args.fun) or list(ws.functors)
        res.inputs["functors"] = ",".join(funs)
        for f in funs:
            fun = ws.functor(f)
            res.reports.append(check_functor(fun, _clamp(res, N, [fun, fun.source, fun.target])))
    elif name == "B-squared":
        chains = args.trans
        if not chains:
            raise UsageError("give the chain to check as --trans r,p")
        res.inputs["chains"] = " ".join(chains)
        for spec in chains:
            ch = _chain(ws, spec)
            if ch.n == 0:
                raise UsageError("B-squared needs at least one coderivation")
            res.reports.append(check_B_squared(ch, _clamp(res, N, _families(ch), ch.n)))
    elif name == "M-identities":
        if not args.trans:
            raise UsageError("give samples as --trans 'r,p|t' or 'r|p|t'")
        samples = []
        for spec in args.trans:
            parts = spec.split("|")
            if len(parts) not in (2, 3):
                raise UsageError(f"sample {spec!r} needs two or three chains separated by '|'")
            samples.append(tuple(_chain(ws, p) for p in parts))
        res.inputs["samples"] = " ".join(args.trans)
        slack = max(sum(c.n for c in smp) for smp in samples)
        M = _clamp(res, N, [x for smp in samples for x in _families(*smp)], slack)
        res.reports.append(check_M_identities(samples, M))
    elif name == "unit-element":
        cats = _names(args.cat) or list(ws.categories)
        res.inputs["categories"] = ",".join(cats)
        if args.units:
            res.inputs["units"] = args.units
        for c in cats:
            i0 = _units(ws, c, args.units if len(cats) == 1 else None)
            if i0 is None:
                rep = Report("unit-element", 2)
                rep.fail(0, (), None, f"{c} has no unit elements")
                res.reports.append(rep)
            else:
                res.reports.append(check_unit_element(ws.category(c), i0))
                res.outputs.setdefault("elements", {})[f"i0_{c}"] = _unit_fragment(ws, c, i0)
    elif name == "unital-functor":
        fname = _one(args.fun, "functor (--fun)")
        f = ws.functor(fname)
        res.inputs["functor"] = fname
        if args.trans:
            names = _names(args.trans)
            if len(names) != 2:
                raise UsageError("--trans takes the two unit transformations iA,iB")
            iA, iB = (ws.coderivation(n) for n in names)
            res.inputs["units"] = ",".join(names)
        else:
            iA = _unit_transformation(ws, ws.category_name(f.source), None, N, res).i
            iB = _unit_transformation(ws, ws.category_name(f.target), None, N, res).i
        if res.error:
            return res
        res.reports.append(check_unital_functor(f, iA, iB, N))
    else:
        raise UsageError(f"unknown check {name!r}")
    return res


def _unit_transformation(ws, cat_name, family, N, res):
    i0 = _units(ws, cat_name, family)
    if i0 is None:
        res.error = f"{cat_name} has no unit elements"
        return None
    return build_unit_transformation(ws.category(cat_name), i0, None, N)


# ------------------------------------------------------------ constructions


def run_construct(ws: Workspace, name: str, args) -> RunResult:
    N = _truncation(ws, args)
    res = RunResult(f"construct {name}", {}, N)
    known = set(ws.functors)
    try:
        _construct(ws, name, args, N, res)
    except CONSTRUCTION_ERRORS as exc:
        res.error = str(exc)
    if res.status == 0:
        _finish_outputs(ws, res, known)
    else:
        res.outputs = {}
    return res


def _construct(ws: Workspace, name: str, args, N: int, res: RunResult) -> None:
    if name == "units":
        c = _one(args.cat, "category (--cat)")
        res.inputs["category"] = c
        i0 = _units(ws, c, args.units)
        if i0 is None:
            res.error = f"{c} has no unit elements"
            return
        ut = build_unit_transformation(ws.category(c), i0, None, N)
        res.reports.append(check_unit_transformation(ut, N))
        _emit(ws, res, "coderivation", f"i_{c}", ut.i)
        _emit(ws, res, "coderivation", f"v_{c}", ut.v)
    elif name == "h0":
        c = _one(args.cat, "category (--cat)")
        res.inputs["category"] = c
        i0 = _units(ws, c, args.units)
        if i0 is None:
            res.error = f"{c} has no unit elements"
            return
        H = h0(ws.category(c), i0)
        res.reports.append(H.check())
        res.outputs["h0"] = _h0_json(H)
        res.text.extend(_h0_text(H))
    elif name == "compose-B":
        spec = args.chain
        if not spec:
            raise UsageError("compose-B needs --chain")
        ch = _chain(ws, spec)
        if ch.n == 0:
            raise UsageError("compose-B needs at least one coderivation")
        res.inputs["chain"] = args.chain
        res.reports.append(check_B_squared(ch, _clamp(res, N, _families(ch), ch.n)))
        _emit(ws, res, "coderivation", f"B({spec})", apply_B(ch, N))
    elif name == "compose-M":
        if not args.chain or not getattr(args, "with_", None):
            raise UsageError("compose-M needs --chain and --with")
        ps, ts = _chain(ws, args.chain), _chain(ws, args.with_)
        res.inputs["chain"] = args.chain
        res.inputs["with"] = args.with_
        N = _clamp(res, N, _families(ps, ts), ps.n + ts.n)
        out = apply_M(ps, ts, N)
        if isinstance(out, AInfFunctor):
            res.reports.append(check_functor(out, N))
            _emit(ws, res, "functor", f"M({args.chain}|{args.with_})", out)
        else:
            res.reports.append(check_M_chain(ps, ts, N))
            _emit(ws, res, "coderivation", f"M({args.chain}|{args.with_})", out)
    elif name == "invert":
        rname = _one(args.trans, "transformation (--trans)")
        r = ws.coderivation(rname)
        res.inputs["transformation"] = rname
        cname = ws.category_name(r.target)
        ut = _unit_transformation(ws, cname, args.units, N, res)
        if ut is None:
            return
        i0 = {x: ut.i.component_or_zero((x,)) for x in r.target.objects}
        witness = find_invertibility_witness(r, i0)
        if witness is None:
            res.error = f"{rname} has no inverse up to homotopy at arity 0"
            return
        inv = invert_transformation(r, witness, ut, N)
        res.reports.append(check_inverse(r, inv, ut, N))
        _emit(ws, res, "coderivation", f"{rname}_inv", inv.p)
        _emit(ws, res, "coderivation", f"{rname}_w", inv.w)
        _emit(ws, res, "coderivation", f"{rname}_t", inv.t)
    elif name == "cancel":
        phi_name = _one(args.fun, "functor (--fun)")
        yname = _one(args.trans, "transformation (--trans)")
        if not args.source or not args.target:
            raise UsageError("cancel needs --source f and --target g")
        phi, y = ws.functor(phi_name), ws.coderivation(yname)
        f, g = ws.functor(args.source), ws.functor(args.target)
        res.inputs.update(functor=phi_name, transformation=yname, source=args.source, target=args.target)
        for side, want, got in (("source", composite(f, phi), y.f), ("target", composite(g, phi), y.g)):
            if want.obj_map != got.obj_map:
                raise UsageError(f"--{side} composed with {phi_name} does not match the {side} of {yname}")
        t, v = cancel_functor(phi, y, f, g, N)
        res.reports.append(check_cancellation(phi, y, t, v, N))
        _emit(ws, res, "coderivation", f"{yname}_t", t)
        _emit(ws, res, "coderivation", f"{yname}_v", v)
    elif name == "quasi-inverse":
        _quasi_inverse(ws, args, N, res)
    else:
        raise UsageError(f"unknown construction {name!r}")


def _quasi_inverse(ws: Workspace, args, N: int, res: RunResult) -> None:
    phi_name = _one(args.fun, "functor (--fun)")
    phi = ws.functor(phi_name)
    C, B = phi.source, phi.target
    if not args.object_map or not args.elements:
        raise UsageError("quasi-inverse needs --object-map and --elements")
    h = {}
    for part in args.object_map.split(","):
        key, sep, val = part.partition("=")
        if not sep or key not in B.objects or val not in C.objects:
            raise UsageError(f"bad object map entry {part!r}; use Y=X with Y in the target, X in the source")
        h[key] = val
    missing = [x for x in B.objects if x not in h]
    if missing:
        raise UsageError(f"object map misses {missing}")
    fam = ws.element_family(args.elements)
    r0 = {}
    for x in B.objects:
        want = (x, phi.obj(h[x]))
        if x not in fam.items or fam.items[x][0] != want or fam.degree != -1:
            raise UsageError(f"elements {args.elements!r} must give a degree -1 element of {want} for {x!r}")
        r0[x] = fam.items[x][1]
    res.inputs.update(functor=phi_name, object_map=args.object_map, elements=args.elements)
    bname = ws.category_name(B)
    ut = _unit_transformation(ws, bname, args.units, N, res)
    if ut is None:
        return
    i0 = {x: ut.i.component_or_zero((x,)) for x in B.objects}
    draft = composite(AInfFunctor(B, C, h, {}, None), phi)
    r_draft = Coderivation(B.identity(), draft, -1, {(x,): r0[x] for x in B.objects if r0[x]}, 0)
    witness = find_invertibility_witness(r_draft, i0)
    if witness is None:
        res.error = "the given elements are not invertible up to homotopy"
        return
    qi = build_quasi_inverse(phi, h, witness, r0, ut, N)
    res.reports.append(check_quasi_inverse(phi, qi, ut, N))
    _emit(ws, res, "functor", "psi", qi.psi)
    for nm, r in (("r", qi.r), ("p", qi.p), ("t", qi.t), ("q", qi.q), ("i_C", qi.unit.i), ("v_C", qi.unit.v)):
        _emit(ws, res, "coderivation", nm, r)


def _h0_json(H) -> dict:
    fmt = H.field.format
    homs = {f"{x}->{y}": labels for (x, y), labels in sorted(H.homs.items(), key=lambda kv: (H.objects.index(kv[0][0]), H.objects.index(kv[0][1])))}
    comp = []
    for (x, y, z), table in H.composition.items():
        for (i, j), vec in sorted(table.items()):
            comp.append({
                "objects": [x, y, z],
                "first": H.homs[(x, y)][i],
                "second": H.homs[(y, z)][j],
                "result": {H.homs[(x, z)][k]: fmt(c) for k, c in sorted(vec.items())},
            })
    ident = {x: {H.homs[(x, x)][k]: fmt(c) for k, c in sorted(v.items())} for x, v in H.identities.items()}
    return {"homs": homs, "composition": comp, "identities": ident}


def _h0_text(H) -> list[str]:
    data = _h0_json(H)
    lines = ["H0 homs:"]
    lines.extend(f"  {k}: {', '.join(v) if v else '0'}" for k, v in data["homs"].items())
    lines.append("H0 composition (first, then second):")
    for e in data["composition"]:
        res = " + ".join(f"{c}*{lab}" for lab, c in e["result"].items())
        lines.append(f"  {'->'.join(e['objects'])}: {e['first']} ; {e['second']} = {res}")
    lines.append("H0 identities:")
    for x, v in data["identities"].items():
        lines.append(f"  {x}: " + (" + ".join(f"{c}*{lab}" for lab, c in v.items()) or "0"))
    return lines


# ----------------------------------------------------------------- fixtures


def emit_fixtures(names: list[str], fld=None) -> Workspace:
    fld = field_from_env() if fld is None else fld
    ws = Workspace(fld)
    for n in names:
        if n not in fixtures.FIXTURES:
            raise UsageError(f"unknown fixture {n!r}; choose from {', '.join(fixtures.FIXTURES)}")
        ws.categories[n] = fixtures.FIXTURES[n](fld)
    return ws


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ainf", description="Exact checks and constructions for A-infinity categories.")
    sub = p.add_subparsers(dest="mode", required=True)

    def common(sp):
        sp.add_argument("--max-arity", type=int, default=None, metavar="N")
        sp.add_argument("--cat", action="append", metavar="NAMES")
        sp.add_argument("--fun", action="append", metavar="NAMES")
        sp.add_argument("--trans", action="append", metavar="NAMES")
        sp.add_argument("--units", metavar="ELEMENTS", help="element family holding unit elements")
        sp.add_argument("file")

    c = sub.add_parser("check", help="verify an identity family")
    c.add_argument("name", choices=CHECKS)
    common(c)

    k = sub.add_parser("construct", help="run a construction and re-verify it")
    k.add_argument("name", choices=CONSTRUCTS)
    common(k)
    k.add_argument("--chain", metavar="R,P")
    k.add_argument("--with", dest="with_", metavar="T,...")
    k.add_argument("--source", metavar="FUNCTOR")
    k.add_argument("--target", metavar="FUNCTOR")
    k.add_argument("--object-map", metavar="Y=X,...")
    k.add_argument("--elements", metavar="NAME")
    k.add_argument("--out", metavar="PATH", help="write the workspace with the constructed data")

    f = sub.add_parser("fixtures", help="built-in example categories")
    fsub = f.add_subparsers(dest="action", required=True)
    e = fsub.add_parser("emit")
    e.add_argument("fixture", nargs="+", choices=sorted(fixtures.FIXTURES))
    e.add_argument("--out", metavar="PATH")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        if args.mode == "fixtures":
            text = dumps(emit_fixtures(args.fixture))
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return 0
        ws = load(args.file)
        if args.max_arity is not None and args.max_arity < 0:
            raise UsageError("--max-arity must be non-negative")
        if args.mode == "check":
            res = run_check(ws, args.name, args)
        else:
            res = run_construct(ws, args.name, args)
            if args.out and res.status == 0:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(dumps(ws))
    except (WorkspaceError, UsageError, TruncationError) as exc:
        sys.stderr.write(f"ainf: error: {exc}\n")
        return 2
    out.write(res.render())
    return res.status


if __name__ == "__main__":
    sys.exit(main())
