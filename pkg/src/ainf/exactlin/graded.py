"""Graded modules with ordered bases, homogeneous maps, and the Koszul tensor.

Maps act on row vectors from the right: ``x f`` is the image of ``x`` and
``compose_maps(f, g)`` is ``fg``, meaning f is applied first.  The tensor of
maps obeys ``(x (x) y)(f (x) g) = (-1)^{deg y deg f} xf (x) yg``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Hashable, Iterable, Mapping, Sequence

from .field import QQ, Field

Label = Hashable
Vector = dict  # {basis index: coefficient}


class ShapeError(ValueError):
    """Modules of composed or combined maps do not match."""


class GradingError(ValueError):
    """A matrix entry violates degree homogeneity."""


class GradedModule:
    """A finite-dimensional graded vector space with an ordered basis.

    ``basis`` is a tuple of ``(label, degree)`` pairs.  Tensor products keep
    their atomic ``factors`` so that nested tensors flatten consistently.
    """

    __slots__ = ("basis", "field", "_factors", "_index", "_hash", "_by_degree")

    def __init__(
        self,
        basis: Iterable[tuple[Label, int]],
        field: Field = QQ,
        *,
        factors: tuple | None = None,
    ) -> None:
        self.basis = tuple((lab, int(deg)) for lab, deg in basis)
        self.field = field
        self._factors = factors
        self._index = {lab: i for i, (lab, _) in enumerate(self.basis)}
        if len(self._index) != len(self.basis):
            raise ValueError("basis labels must be unique")
        self._hash = None
        by_deg: dict[int, list[int]] = {}
        for i, (_, d) in enumerate(self.basis):
            by_deg.setdefault(d, []).append(i)
        self._by_degree = {d: tuple(ix) for d, ix in sorted(by_deg.items())}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def factors(self) -> tuple:
        return (self,) if self._factors is None else self._factors

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def label(self, i: int) -> Label:
        return self.basis[i][0]

    def index(self, label: Label) -> int:
        return self._index[label]

    def indices(self, degree: int) -> tuple[int, ...]:
        return self._by_degree.get(degree, ())

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._by_degree)

    @property
    def degrees(self) -> dict[int, tuple[int, tuple]]:
        """Degree -> (dimension, ordered labels)."""
        return {
            d: (len(ix), tuple(self.basis[i][0] for i in ix))
            for d, ix in self._by_degree.items()
        }

    def shifted(self, n: int) -> "GradedModule":
        """``M[n]`` with ``M[n]^d = M^{d+n}``; suspension is ``shifted(1)``."""
        return GradedModule(((lab, d - n) for lab, d in self.basis), self.field)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, GradedModule)
            and self.field == other.field
            and self.basis == other.basis
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.basis, self.field))
        return self._hash

    def __repr__(self) -> str:
        parts = ", ".join(f"{d}:{n}" for d, (n, _) in self.degrees.items())
        return f"GradedModule({{{parts}}})"


def zero_module(field: Field = QQ) -> GradedModule:
    return GradedModule((), field)


@lru_cache(maxsize=None)
def ground_module(field: Field = QQ) -> GradedModule:
    """The ground field in degree 0, i.e. the empty tensor product."""
    return GradedModule((((), 0),), field, factors=())


@lru_cache(maxsize=None)
def _tensor_of_atoms(atoms: tuple, field: Field) -> GradedModule:
    basis = []
    for combo in itertools.product(*(a.basis for a in atoms)):
        basis.append((tuple(lab for lab, _ in combo), sum(d for _, d in combo)))
    return GradedModule(basis, field, factors=atoms)


def tensor_modules(*modules: GradedModule, field: Field | None = None) -> GradedModule:
    """Flat tensor product; one factor returns itself, none gives the ground field."""
    if field is None:
        if not modules:
            raise ValueError("empty tensor product needs an explicit field")
        field = modules[0].field
    atoms: list = []
    for m in modules:
        if m.field != field:
            raise ShapeError("tensor factors over different fields")
        atoms.extend(m.factors)
    if not atoms:
        return ground_module(field)
    if len(atoms) == 1:
        return atoms[0]
    return _tensor_of_atoms(tuple(atoms), field)


def flat_index(dims: Sequence[int], idxs: Sequence[int]) -> int:
    """Mixed-radix position of a basis tuple in a lexicographic product."""
    flat = 0
    for d, i in zip(dims, idxs):
        flat = flat * d + i
    return flat


class GradedMap:
    """A homogeneous linear map given by sparse rows (one per source basis vector)."""

    __slots__ = ("source", "target", "degree", "rows")

    def __init__(
        self,
        source: GradedModule,
        target: GradedModule,
        degree: int,
        rows: Sequence[Mapping[int, object]],
    ) -> None:
        if source.field != target.field:
            raise ShapeError("source and target over different fields")
        if len(rows) != source.dim:
            raise ShapeError(f"expected {source.dim} rows, got {len(rows)}")
        field = source.field
        clean = []
        for i, row in enumerate(rows):
            want = source.degree(i) + degree
            out = {}
            for j, c in row.items():
                c = field(c)
                if not c:
                    continue
                if not 0 <= j < target.dim:
                    raise ShapeError(f"column {j} outside target of dimension {target.dim}")
                if target.degree(j) != want:
                    raise GradingError(
                        f"entry from source degree {source.degree(i)} lands in "
                        f"degree {target.degree(j)}, expected {want}"
                    )
                out[j] = c
            clean.append(out)
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.rows = tuple(clean)

    @classmethod
    def _trusted(cls, source, target, degree, rows) -> "GradedMap":
        obj = cls.__new__(cls)
        obj.source = source
        obj.target = target
        obj.degree = degree
        obj.rows = tuple(rows)
        return obj

    @classmethod
    def from_blocks(
        cls,
        source: GradedModule,
        target: GradedModule,
        degree: int,
        blocks: Mapping[int, Sequence[Sequence]],
    ) -> "GradedMap":
        """Build from dense blocks ``source degree -> matrix``; absent blocks are zero."""
        rows: list[dict] = [{} for _ in range(source.dim)]
        for d, mat in blocks.items():
            src = source.indices(d)
            tgt = target.indices(d + degree)
            if len(mat) != len(src) or any(len(r) != len(tgt) for r in mat):
                raise ShapeError(
                    f"block at source degree {d} should be {len(src)}x{len(tgt)}"
                )
            for i, r in zip(src, mat):
                for j, c in zip(tgt, r):
                    if c:
                        rows[i][j] = c
        return cls(source, target, degree, rows)

    @classmethod
    def from_dense(cls, source, target, degree, matrix) -> "GradedMap":
        rows = [{j: c for j, c in enumerate(r) if c} for r in matrix]
        return cls(source, target, degree, rows)

    @property
    def field(self) -> Field:
        return self.source.field

    @property
    def blocks(self) -> dict[int, list[list]]:
        """Nonzero dense blocks keyed by source degree."""
        zero = self.field.zero
        out = {}
        for d in self.source.support:
            src = self.source.indices(d)
            tgt = self.target.indices(d + self.degree)
            if not tgt or not any(self.rows[i] for i in src):
                continue
            pos = {j: k for k, j in enumerate(tgt)}
            mat = [[zero] * len(tgt) for _ in src]
            for r, i in enumerate(src):
                for j, c in self.rows[i].items():
                    mat[r][pos[j]] = c
            out[d] = mat
        return out

    def entry(self, i: int, j: int):
        return self.rows[i].get(j, self.field.zero)

    def dense(self) -> list[list]:
        zero = self.field.zero
        return [[r.get(j, zero) for j in range(self.target.dim)] for r in self.rows]

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check_same_shape(self, other: "GradedMap") -> None:
        if self.source != other.source or self.target != other.target:
            raise ShapeError("maps have different source or target")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ShapeError(f"degrees {self.degree} and {other.degree} differ")

    def __add__(self, other: "GradedMap") -> "GradedMap":
        self._check_same_shape(other)
        degree = self.degree if not self.is_zero() else other.degree
        return GradedMap._trusted(
            self.source, self.target, degree,
            [_add_rows(a, b, 1) for a, b in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "GradedMap") -> "GradedMap":
        self._check_same_shape(other)
        degree = self.degree if not self.is_zero() else other.degree
        return GradedMap._trusted(
            self.source, self.target, degree,
            [_add_rows(a, b, -1) for a, b in zip(self.rows, other.rows)],
        )

    def __neg__(self) -> "GradedMap":
        return GradedMap._trusted(
            self.source, self.target, self.degree,
            [{j: -c for j, c in r.items()} for r in self.rows],
        )

    def scale(self, c) -> "GradedMap":
        c = self.field(c)
        if not c:
            return zero_map(self.source, self.target, self.degree)
        return GradedMap._trusted(
            self.source, self.target, self.degree,
            [{j: c * v for j, v in r.items()} for r in self.rows],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        if self.rows != other.rows:
            return False
        return self.degree == other.degree or self.is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        nnz = sum(len(r) for r in self.rows)
        return (
            f"GradedMap({self.source.dim}->{self.target.dim}, degree {self.degree}, "
            f"{nnz} nonzero)"
        )


def _add_rows(a: Mapping, b: Mapping, sign: int) -> dict:
    if not b:
        return dict(a)
    out = dict(a)
    for j, c in b.items():
        if sign < 0:
            c = -c
        if j in out:
            v = out[j] + c
            if v:
                out[j] = v
            else:
                del out[j]
        else:
            out[j] = c
    return out


def _dims(m: GradedModule) -> str:
    inner = ", ".join(f"degree {d}: dim {n}" for d, (n, _) in m.degrees.items())
    return "{" + inner + "}"


def zero_map(source: GradedModule, target: GradedModule, degree: int = 0) -> GradedMap:
    return GradedMap._trusted(source, target, degree, [{} for _ in range(source.dim)])


def identity_map(module: GradedModule) -> GradedMap:
    one = module.field.one
    return GradedMap._trusted(module, module, 0, [{i: one} for i in range(module.dim)])


def compose_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    """The composite ``fg``: apply f, then g."""
    if f.target != g.source:
        raise ShapeError(
            "cannot compose: target of the first map has "
            f"{_dims(f.target)}, source of the second has {_dims(g.source)}"
        )
    grows = g.rows
    rows = []
    for r in f.rows:
        acc: dict = {}
        for j, c in r.items():
            for k, e in grows[j].items():
                v = acc.get(k, 0) + c * e
                if v:
                    acc[k] = v
                else:
                    acc.pop(k, None)
        rows.append(acc)
    return GradedMap._trusted(f.source, g.target, f.degree + g.degree, rows)


def _is_identity(m: GradedMap) -> bool:
    if m.degree or m.source != m.target:
        return False
    one = m.field.one
    return all(len(r) == 1 and r.get(i) == one for i, r in enumerate(m.rows))


def tensor_maps(*maps: GradedMap) -> GradedMap:
    """Koszul tensor product of maps on flat tensor products of their modules.

    Built right to left: ``m (x) rest`` sends ``x (x) y`` to
    ``(-1)^{deg m . deg y} xm (x) y rest``.
    """
    if not maps:
        raise ValueError("tensor_maps needs at least one map")
    field = maps[0].field
    source = tensor_modules(*(m.source for m in maps), field=field)
    target = tensor_modules(*(m.target for m in maps), field=field)
    last = maps[-1]
    rows = [dict(r) for r in last.rows]
    src_deg = [last.source.degree(i) for i in range(last.source.dim)]
    tdim = last.target.dim
    for m in reversed(maps[:-1]):
        odd = m.degree % 2
        neg = [(odd and d % 2) for d in src_deg]
        new_rows = []
        new_deg = []
        ident = _is_identity(m)
        for i, mrow in enumerate(m.rows):
            di = m.source.degree(i)
            for k, row in enumerate(rows):
                new_deg.append(di + src_deg[k])
                if not mrow or not row:
                    new_rows.append({})
                    continue
                if ident:
                    base = i * tdim
                    if neg[k]:
                        new_rows.append({base + l: -c for l, c in row.items()})
                    else:
                        new_rows.append({base + l: c for l, c in row.items()})
                    continue
                out = {}
                for j, a in mrow.items():
                    if neg[k]:
                        a = -a
                    base = j * tdim
                    for l, c in row.items():
                        out[base + l] = a * c
                new_rows.append(out)
        rows = new_rows
        src_deg = new_deg
        tdim *= m.target.dim
    return GradedMap._trusted(source, target, sum(m.degree for m in maps), rows)


def apply_map(vector: Mapping[int, object], f: GradedMap) -> Vector:
    """The image ``x f`` of a sparse vector."""
    out: dict = {}
    for i, c in vector.items():
        for j, e in f.rows[i].items():
            v = out.get(j, 0) + c * e
            if v:
                out[j] = v
            else:
                out.pop(j, None)
    return out


def vector_add(a: Mapping, b: Mapping, sign: int = 1) -> Vector:
    return _add_rows(a, b, sign)


def vector_scale(a: Mapping, c) -> Vector:
    return {j: c * v for j, v in a.items() if c * v}


def element_map(target: GradedModule, vector: Mapping[int, object], degree: int) -> GradedMap:
    """The map from the ground field sending 1 to ``vector`` (all of one degree)."""
    return GradedMap(ground_module(target.field), target, degree, [dict(vector)])
