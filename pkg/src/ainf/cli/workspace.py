"""JSON workspaces: categories, functors, coderivations and element families.

Layout::

    {
      "format": "ainf-workspace", "version": 1,
      "field": "Q", "truncation": 3,
      "categories": {name: {"objects": [...], "max_arity": null,
                            "homs": [{"source": X, "target": Y, "basis": [[label, degree], ...]}],
                            "b": [block, ...]}},
      "functors": {name: {"source": cat, "target": cat, "objects": {X: Y}, "max_arity": null,
                          "components": [block, ...]}},
      "coderivations": {name: {"source": functor, "target": functor, "degree": d,
                               "max_arity": null, "components": [block, ...]}},
      "elements": {name: {"category": cat, "degree": d,
                          "items": {X: {"hom": [X, Y], "vector": {label: value}}}}}
    }

Hom degrees are those of the shifted homs.  A block is
``{"seq": [X0, ..., Xn], "source_degree": d, "target_degree": e, "matrix": rows}``
where the rows run over the source basis tensors of degree d and the
columns over the target basis vectors of degree e.  Scalars are strings
such as ``"-3/4"``.  The name ``id_<cat>`` always denotes the identity
functor of a category.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

from ..core.families import AInfCategory, AInfFunctor, Coderivation
from ..core.quiver import Quiver
from ..exactlin import GradedMap, GradedModule, ShapeError
from ..exactlin.field import QQ, PrimeField, field_from_env, field_from_name
from ..exactlin.graded import element_map

FORMAT = "ainf-workspace"
VERSION = 1


class WorkspaceError(ValueError):
    """A workspace file cannot be parsed or fails validation; names the offending field."""


@dataclass
class Elements:
    """One element of a chosen hom per object, e.g. unit elements."""

    category: str
    degree: int
    items: dict  # X -> (pair, GradedMap from the ground field)


@dataclass
class Workspace:
    field: Any = QQ
    truncation: int | None = None
    categories: dict = dc_field(default_factory=dict)
    functors: dict = dc_field(default_factory=dict)
    coderivations: dict = dc_field(default_factory=dict)
    elements: dict = dc_field(default_factory=dict)

    def category(self, name: str) -> AInfCategory:
        try:
            return self.categories[name]
        except KeyError:
            raise WorkspaceError(f"unknown category {name!r}") from None

    def functor(self, name: str) -> AInfFunctor:
        if name in self.functors:
            return self.functors[name]
        if name.startswith("id_") and name[3:] in self.categories:
            return self.categories[name[3:]].identity()
        raise WorkspaceError(f"unknown functor {name!r}")

    def coderivation(self, name: str) -> Coderivation:
        try:
            return self.coderivations[name]
        except KeyError:
            raise WorkspaceError(f"unknown coderivation {name!r}") from None

    def element_family(self, name: str) -> Elements:
        try:
            return self.elements[name]
        except KeyError:
            raise WorkspaceError(f"unknown element family {name!r}") from None

    def functor_name(self, f: AInfFunctor) -> str:
        """The name of f, registering it under a fresh name when it is new."""
        for name, g in self.functors.items():
            if g is f:
                return name
        for name, c in self.categories.items():
            if c.identity() is f:
                return f"id_{name}"
        return self.add_functor(f.name or "f", f)

    def _fresh(self, base: str, taken) -> str:
        if base.startswith("id_"):
            base = "f_" + base[3:]
        name, k = base, 1
        while name in taken:
            k += 1
            name = f"{base}{k}"
        return name

    def add_functor(self, name: str, f: AInfFunctor) -> str:
        self.category_name(f.source)
        self.category_name(f.target)
        name = self._fresh(name, self.functors)
        self.functors[name] = f
        return name

    def add_coderivation(self, name: str, r: Coderivation) -> str:
        self.functor_name(r.f)
        self.functor_name(r.g)
        name = self._fresh(name, self.coderivations)
        self.coderivations[name] = r
        return name

    def add_elements(self, name: str, e: "Elements") -> str:
        name = self._fresh(name, self.elements)
        self.elements[name] = e
        return name

    def category_name(self, cat: AInfCategory) -> str:
        for name, c in self.categories.items():
            if c is cat:
                return name
        raise WorkspaceError("category is not registered in the workspace")


# ---------------------------------------------------------------- parsing


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise WorkspaceError(f"{where}: {msg}")


def _scalar(fld, value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise WorkspaceError(f"{where}: scalars are strings like \"p/q\" or integers")
    try:
        return fld.parse(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise WorkspaceError(f"{where}: bad scalar {value!r} ({exc})") from None


def _parse_block(fld, block, source: GradedModule, target: GradedModule, degree: int, where: str):
    _expect(isinstance(block, dict), where, "block must be an object")
    for key in ("source_degree", "target_degree", "matrix"):
        _expect(key in block, where, f"missing {key!r}")
    d, e = block["source_degree"], block["target_degree"]
    _expect(isinstance(d, int) and isinstance(e, int), where, "degrees must be integers")
    if e - d != degree:
        raise WorkspaceError(
            f"{where}: block from degree {d} to degree {e} is not homogeneous of degree {degree}"
        )
    src, tgt = source.indices(d), target.indices(e)
    mat = block["matrix"]
    _expect(isinstance(mat, list), where, "matrix must be a list of rows")
    if len(mat) != len(src) or any(not isinstance(r, list) or len(r) != len(tgt) for r in mat):
        raise ShapeError(
            f"{where}: block at source degree {d} must be {len(src)}x{len(tgt)}"
        )
    rows = {}
    for r, i in enumerate(src):
        row = {}
        for c, j in enumerate(tgt):
            v = _scalar(fld, mat[r][c], f"{where}.matrix[{r}][{c}]")
            if v:
                row[j] = v
        rows[i] = row
    return rows


def _parse_components(fld, blocks, shape, degree: int, min_arity: int, where: str) -> dict:
    _expect(isinstance(blocks, list), where, "components must be a list of blocks")
    acc: dict = {}
    for k, block in enumerate(blocks):
        w = f"{where}[{k}]"
        _expect(isinstance(block, dict) and isinstance(block.get("seq"), list), w, "block needs a 'seq' list")
        seq = tuple(block["seq"])
        _expect(len(seq) - 1 >= min_arity, w, f"components of arity below {min_arity} must vanish")
        try:
            source, target = shape(seq)
        except KeyError as exc:
            raise WorkspaceError(f"{w}: unknown object {exc}") from None
        rows = _parse_block(fld, block, source, target, degree, w)
        entry = acc.setdefault(seq, (source, target, {}))
        for i, row in rows.items():
            _expect(i not in entry[2], w, f"source degree {block['source_degree']} given twice")
            entry[2][i] = row
    out = {}
    for seq, (source, target, rows) in acc.items():
        full = [rows.get(i, {}) for i in range(source.dim)]
        out[seq] = GradedMap(source, target, degree, full)
    return out


def _parse_category(fld, name: str, data, where: str) -> AInfCategory:
    _expect(isinstance(data, dict), where, "category must be an object")
    objects = data.get("objects")
    _expect(isinstance(objects, list) and objects, where, "needs a nonempty 'objects' list")
    _expect(all(isinstance(o, str) for o in objects), where, "object names must be strings")
    homs = {}
    for k, h in enumerate(data.get("homs", [])):
        w = f"{where}.homs[{k}]"
        _expect(isinstance(h, dict), w, "hom must be an object")
        x, y = h.get("source"), h.get("target")
        _expect(x in objects and y in objects, w, "source and target must be listed objects")
        _expect((x, y) not in homs, w, f"hom ({x}, {y}) given twice")
        basis = h.get("basis", [])
        _expect(
            isinstance(basis, list)
            and all(isinstance(b, list) and len(b) == 2 and isinstance(b[1], int) for b in basis),
            w,
            "basis must be a list of [label, degree] pairs",
        )
        try:
            homs[(x, y)] = GradedModule([(str(lab), deg) for lab, deg in basis], fld)
        except ValueError as exc:
            raise WorkspaceError(f"{w}: {exc}") from None
    quiver = Quiver(objects, homs, fld)
    max_arity = data.get("max_arity")
    _expect(max_arity is None or isinstance(max_arity, int), where, "max_arity must be an integer or null")

    def shape(seq):
        for o in seq:
            if o not in objects:
                raise KeyError(o)
        return quiver.tensor(seq), quiver.hom(seq[0], seq[-1])

    try:
        comps = _parse_components(fld, data.get("b", []), shape, 1, 1, f"{where}.b")
        return AInfCategory(quiver, comps, max_arity, name)
    except (ValueError, ShapeError) as exc:
        if isinstance(exc, WorkspaceError):
            raise
        raise WorkspaceError(f"{where}: {exc}") from None


def _parse_functor(fld, ws: Workspace, name: str, data, where: str) -> AInfFunctor:
    _expect(isinstance(data, dict), where, "functor must be an object")
    src = ws.category(data.get("source", ""))
    tgt = ws.category(data.get("target", ""))
    obj = data.get("objects", {})
    _expect(isinstance(obj, dict), where, "'objects' must map source objects to target objects")
    max_arity = data.get("max_arity")

    def shape(seq):
        for o in seq:
            if o not in src.objects:
                raise KeyError(o)
        return src.tensor(seq), tgt.hom(obj[seq[0]], obj[seq[-1]])

    try:
        comps = _parse_components(fld, data.get("components", []), shape, 0, 1, f"{where}.components")
        return AInfFunctor(src, tgt, obj, comps, max_arity, name)
    except (ValueError, ShapeError) as exc:
        if isinstance(exc, WorkspaceError):
            raise
        raise WorkspaceError(f"{where}: {exc}") from None


def _parse_coderivation(fld, ws: Workspace, name: str, data, where: str) -> Coderivation:
    _expect(isinstance(data, dict), where, "coderivation must be an object")
    f = ws.functor(data.get("source", ""))
    g = ws.functor(data.get("target", ""))
    degree = data.get("degree")
    _expect(isinstance(degree, int), where, "'degree' must be an integer")
    max_arity = data.get("max_arity")

    def shape(seq):
        for o in seq:
            if o not in f.source.objects:
                raise KeyError(o)
        return f.source.tensor(seq), f.target.hom(f.obj(seq[0]), g.obj(seq[-1]))

    try:
        comps = _parse_components(fld, data.get("components", []), shape, degree, 0, f"{where}.components")
        return Coderivation(f, g, degree, comps, max_arity, name)
    except (ValueError, ShapeError) as exc:
        if isinstance(exc, WorkspaceError):
            raise
        raise WorkspaceError(f"{where}: {exc}") from None


def _parse_elements(fld, ws: Workspace, data, where: str) -> Elements:
    _expect(isinstance(data, dict), where, "element family must be an object")
    cname = data.get("category", "")
    cat = ws.category(cname)
    degree = data.get("degree")
    _expect(isinstance(degree, int), where, "'degree' must be an integer")
    items = {}
    for x, item in (data.get("items") or {}).items():
        w = f"{where}.items.{x}"
        _expect(x in cat.objects, w, "unknown object")
        pair = item.get("hom")
        _expect(isinstance(pair, list) and len(pair) == 2 and all(p in cat.objects for p in pair), w, "'hom' must name two objects")
        mod = cat.hom(*pair)
        vec = {}
        for lab, v in (item.get("vector") or {}).items():
            try:
                j = mod.index(lab)
            except KeyError:
                raise WorkspaceError(f"{w}.vector: no basis vector {lab!r}") from None
            _expect(mod.degree(j) == degree, w, f"basis vector {lab!r} does not have degree {degree}")
            c = _scalar(fld, v, f"{w}.vector.{lab}")
            if c:
                vec[j] = c
        items[x] = (tuple(pair), element_map(mod, vec, degree))
    return Elements(cname, degree, items)


def loads(text: str) -> Workspace:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _expect(isinstance(data, dict), "workspace", "top level must be an object")
    _expect(data.get("format") == FORMAT, "format", f"expected {FORMAT!r}")
    _expect(data.get("version") == VERSION, "version", f"expected {VERSION}")
    try:
        fld = field_from_name(str(data["field"])) if "field" in data else field_from_env()
    except ValueError as exc:
        raise WorkspaceError(f"field: {exc}") from None
    trunc = data.get("truncation")
    _expect(trunc is None or (isinstance(trunc, int) and trunc >= 0), "truncation", "must be a non-negative integer")
    ws = Workspace(fld, trunc)
    for section in ("categories", "functors", "coderivations", "elements"):
        _expect(isinstance(data.get(section, {}), dict), section, "must be an object")
    for name, c in data.get("categories", {}).items():
        ws.categories[name] = _parse_category(fld, name, c, f"categories.{name}")
    for name, f in data.get("functors", {}).items():
        ws.functors[name] = _parse_functor(fld, ws, name, f, f"functors.{name}")
    for name, r in data.get("coderivations", {}).items():
        ws.coderivations[name] = _parse_coderivation(fld, ws, name, r, f"coderivations.{name}")
    for name, e in data.get("elements", {}).items():
        ws.elements[name] = _parse_elements(fld, ws, e, f"elements.{name}")
    return ws


def load(path: str) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise WorkspaceError(f"{path}: {exc.strerror}") from None
    return loads(text)


# ---------------------------------------------------------- serialization


def _field_name(fld) -> str:
    return str(fld.characteristic) if isinstance(fld, PrimeField) else "Q"


def _blocks(seq, m: GradedMap) -> list[dict]:
    fmt = m.field.format
    out = []
    for d, mat in sorted(m.blocks.items()):
        out.append(
            {
                "seq": list(seq),
                "source_degree": d,
                "target_degree": d + m.degree,
                "matrix": [[fmt(c) for c in row] for row in mat],
            }
        )
    return out


def _component_blocks(family, quiver) -> list[dict]:
    out = []
    order = {}
    for seq in family.maps:
        order.setdefault(len(seq), []).append(seq)
    for n in sorted(order):
        rank = {s: k for k, s in enumerate(quiver.paths(n - 1))}
        for seq in sorted(order[n], key=lambda s: rank.get(s, len(rank))):
            out.extend(_blocks(seq, family.maps[seq]))
    return out


def category_to_json(cat: AInfCategory) -> dict:
    q = cat.quiver
    homs = []
    for x in q.objects:
        for y in q.objects:
            mod = q.hom(x, y)
            if mod.dim:
                homs.append({"source": x, "target": y, "basis": [[lab, d] for lab, d in mod.basis]})
    return {
        "objects": list(q.objects),
        "max_arity": cat.max_arity,
        "homs": homs,
        "b": _component_blocks(cat, q),
    }


def functor_to_json(f: AInfFunctor, ws: Workspace) -> dict:
    return {
        "source": ws.category_name(f.source),
        "target": ws.category_name(f.target),
        "objects": dict(f.obj_map),
        "max_arity": f.max_arity,
        "components": _component_blocks(f, f.source.quiver),
    }


def coderivation_to_json(r: Coderivation, ws: Workspace) -> dict:
    return {
        "source": ws.functor_name(r.f),
        "target": ws.functor_name(r.g),
        "degree": r.degree,
        "max_arity": r.max_arity,
        "components": _component_blocks(r, r.source.quiver),
    }


def elements_to_json(e: Elements, ws: Workspace) -> dict:
    cat = ws.category(e.category)
    items = {}
    for x, (pair, m) in e.items.items():
        mod = cat.hom(*pair)
        fmt = m.field.format
        vec = {mod.basis[j][0]: fmt(c) for j, c in sorted(m.rows[0].items())}
        items[x] = {"hom": list(pair), "vector": vec}
    return {"category": e.category, "degree": e.degree, "items": items}


def to_json(ws: Workspace) -> dict:
    out: dict = {"format": FORMAT, "version": VERSION, "field": _field_name(ws.field)}
    if ws.truncation is not None:
        out["truncation"] = ws.truncation
    out["categories"] = {n: category_to_json(c) for n, c in ws.categories.items()}
    if ws.functors:
        out["functors"] = {n: functor_to_json(f, ws) for n, f in ws.functors.items()}
    if ws.coderivations:
        out["coderivations"] = {n: coderivation_to_json(r, ws) for n, r in ws.coderivations.items()}
    if ws.elements:
        out["elements"] = {n: elements_to_json(e, ws) for n, e in ws.elements.items()}
    return out


def pretty(obj, indent: int = 0) -> str:
    """JSON with one line per flat list, so matrix rows stay on one line."""
    pad, inner = " " * indent, " " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k), ensure_ascii=False)}: {pretty(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(v, (dict, list)) for v in obj):
            return json.dumps(obj, ensure_ascii=False)
        return "[\n" + ",\n".join(inner + pretty(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return json.dumps(obj, ensure_ascii=False)


def dumps(ws: Workspace) -> str:
    return pretty(to_json(ws)) + "\n"


def save(ws: Workspace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(ws))
