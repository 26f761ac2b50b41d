"""JSON model documents: parsing, validation and emission.

One document format feeds every command.  Degrees are string keys, matrices
are row-major nested lists, and every rational is a "num/den" string, so a
document survives serialization without losing exactness.  Errors carry a
JSON-pointer-style location of the first offending field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .artin import ArtinAlgebra, truncated_polynomial_algebra
from .dgla import Dgla, SubDgla, abelian_dgla, sub_dgla_span
from .endo import EndDgla, end_dgla
from .graded import Complex, GradedMap, GradedVectorSpace, GVec, StructuralError
from .linalg import Q, Matrix, Vector
from .period import CdgaModel, FiltrationData

SCHEMA_VERSION = 1

_SECTIONS = ("schema", "spaces", "complexes", "dglas", "end_dglas", "cdgas",
             "filtrations", "subdglas", "artin", "maps", "contractions",
             "elements", "defaults")


class ModelError(ValueError):
    """Malformed model document; ``pointer`` locates the first error."""

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        self.message = message
        super().__init__(f"{pointer}: {message}")


def _rational(raw, ptr: str) -> Fraction:
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise ModelError(ptr, f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    raise ModelError(ptr, f"rationals must be strings like \"3/4\", got {type(raw).__name__}")


def _vector(raw, ptr: str) -> Vector:
    if not isinstance(raw, list):
        raise ModelError(ptr, "expected a list of rationals")
    return [_rational(c, f"{ptr}/{i}") for i, c in enumerate(raw)]


def _matrix(raw, ptr: str, rows: int, cols: int) -> Matrix:
    if not isinstance(raw, list):
        raise ModelError(ptr, "expected a row-major matrix")
    if len(raw) != rows:
        raise ModelError(ptr, f"expected {rows} rows, got {len(raw)}")
    out = []
    for r, row in enumerate(raw):
        v = _vector(row, f"{ptr}/{r}")
        if len(v) != cols:
            raise ModelError(f"{ptr}/{r}", f"expected {cols} columns, got {len(v)}")
        out.append(v)
    return out


def _degree(key: str, ptr: str) -> int:
    try:
        return int(key)
    except ValueError:
        raise ModelError(ptr, f"degree keys must be integer strings, got {key!r}")


def _degree_pair(key: str, ptr: str) -> tuple[int, int]:
    parts = key.split(",")
    if len(parts) != 2:
        raise ModelError(ptr, f"expected \"m,n\" degree-pair key, got {key!r}")
    return _degree(parts[0].strip(), ptr), _degree(parts[1].strip(), ptr)


def _section(doc: dict, name: str) -> dict:
    sec = doc.get(name, {})
    if not isinstance(sec, dict):
        raise ModelError(f"/{name}", "expected an object")
    return sec


def _ref(sec: dict, name, ptr: str, kind: str):
    if not isinstance(name, str) or name not in sec:
        raise ModelError(ptr, f"dangling reference: no {kind} named {name!r}")
    return name


@dataclass
class ModelDocument:
    """Parsed, cross-checked model with lazily built runtime objects."""

    raw: dict
    path: str = ""
    _cache: dict = field(default_factory=dict)

    # -- raw sections -------------------------------------------------------
    def section(self, name: str) -> dict:
        return _section(self.raw, name)

    def names(self, section: str) -> list[str]:
        return sorted(self.section(section))

    def default(self, key: str) -> str | None:
        return self.section("defaults").get(key)

    # -- runtime builders ---------------------------------------------------
    def _get(self, kind: str, name: str, builder):
        if (kind, name) not in self._cache:
            self._cache[(kind, name)] = builder()
        return self._cache[(kind, name)]

    def space(self, name: str) -> GradedVectorSpace:
        spec = self.section("spaces")
        _ref(spec, name, "/spaces", "space")
        def build():
            entry = spec[name]
            ptr = f"/spaces/{name}"
            if not isinstance(entry, dict):
                raise ModelError(ptr, "expected an object of degree -> label list")
            components = {}
            for key, labels in entry.items():
                deg = _degree(key, f"{ptr}/{key}")
                if (not isinstance(labels, list)
                        or any(not isinstance(l, str) for l in labels)):
                    raise ModelError(f"{ptr}/{key}", "expected a list of labels")
                components[deg] = tuple(labels)
            return GradedVectorSpace(components)
        return self._get("space", name, build)

    def complex(self, name: str) -> Complex:
        spec = self.section("complexes")
        _ref(spec, name, "/complexes", "complex")
        def build():
            entry = spec[name]
            ptr = f"/complexes/{name}"
            sp = self.space(_ref(self.section("spaces"), entry.get("space"),
                                 f"{ptr}/space", "space"))
            blocks = {}
            for key, raw in (entry.get("differential") or {}).items():
                deg = _degree(key, f"{ptr}/differential/{key}")
                blocks[deg] = _matrix(raw, f"{ptr}/differential/{key}",
                                      sp.dim(deg + 1), sp.dim(deg))
            try:
                return Complex(sp, GradedMap(sp, sp, 1, blocks))
            except StructuralError as exc:
                raise ModelError(ptr, str(exc))
        return self._get("complex", name, build)

    def dgla(self, name: str) -> Dgla:
        dglas = self.section("dglas")
        ends = self.section("end_dglas")
        if name in ends:
            return self.end_dgla(name).dgla
        _ref(dglas, name, "/dglas", "dgla")
        def build():
            entry = dglas[name]
            ptr = f"/dglas/{name}"
            cx = self.complex(_ref(self.section("complexes"), entry.get("complex"),
                                   f"{ptr}/complex", "complex"))
            if entry.get("abelian"):
                return abelian_dgla(cx)
            sp = cx.space
            brackets = {}
            for key, raw in (entry.get("brackets") or {}).items():
                bptr = f"{ptr}/brackets/{key}"
                m, n = _degree_pair(key, bptr)
                if m > n:
                    raise ModelError(bptr, "bracket tables are stored for m <= n only")
                table = []
                if not isinstance(raw, list) or len(raw) != sp.dim(m):
                    raise ModelError(bptr, f"expected {sp.dim(m)} rows of tables")
                for i, row in enumerate(raw):
                    if not isinstance(row, list) or len(row) != sp.dim(n):
                        raise ModelError(f"{bptr}/{i}", f"expected {sp.dim(n)} entries")
                    table.append([_vector(v, f"{bptr}/{i}/{j}") for j, v in enumerate(row)])
                    for j, v in enumerate(table[-1]):
                        if len(v) != sp.dim(m + n):
                            raise ModelError(f"{bptr}/{i}/{j}",
                                             f"expected a degree-{m + n} vector "
                                             f"of length {sp.dim(m + n)}")
                brackets[(m, n)] = table
            try:
                return Dgla(cx, brackets)
            except StructuralError as exc:
                raise ModelError(ptr, str(exc))
        return self._get("dgla", name, build)

    def end_dgla(self, name: str) -> EndDgla:
        ends = self.section("end_dglas")
        _ref(ends, name, "/end_dglas", "end_dgla")
        def build():
            entry = ends[name]
            cx = self.complex(_ref(self.section("complexes"), entry.get("complex"),
                                   f"/end_dglas/{name}/complex", "complex"))
            return end_dgla(cx)
        return self._get("end", name, build)

    def cdga(self, name: str) -> CdgaModel:
        spec = self.section("cdgas")
        _ref(spec, name, "/cdgas", "cdga")
        def build():
            entry = spec[name]
            ptr = f"/cdgas/{name}"
            cx = self.complex(_ref(self.section("complexes"), entry.get("complex"),
                                   f"{ptr}/complex", "complex"))
            sp = cx.space
            products = {}
            for key, raw in (entry.get("products") or {}).items():
                pptr = f"{ptr}/products/{key}"
                m, n = _degree_pair(key, pptr)
                if m > n:
                    raise ModelError(pptr, "product tables are stored for m <= n only")
                if not isinstance(raw, list) or len(raw) != sp.dim(m):
                    raise ModelError(pptr, f"expected {sp.dim(m)} rows")
                table = []
                for i, row in enumerate(raw):
                    if not isinstance(row, list) or len(row) != sp.dim(n):
                        raise ModelError(f"{pptr}/{i}", f"expected {sp.dim(n)} entries")
                    vs = [_vector(v, f"{pptr}/{i}/{j}") for j, v in enumerate(row)]
                    for j, v in enumerate(vs):
                        if len(v) != sp.dim(m + n):
                            raise ModelError(f"{pptr}/{i}/{j}",
                                             f"expected length {sp.dim(m + n)}")
                    table.append(vs)
                products[(m, n)] = table
            return CdgaModel(cx, products)
        return self._get("cdga", name, build)

    def filtration(self, name: str) -> FiltrationData:
        spec = self.section("filtrations")
        _ref(spec, name, "/filtrations", "filtration")
        def build():
            entry = spec[name]
            ptr = f"/filtrations/{name}"
            sp = self.space(_ref(self.section("spaces"), entry.get("space"),
                                 f"{ptr}/space", "space"))
            steps = {}
            for key, degs in (entry.get("steps") or {}).items():
                p = _degree(key, f"{ptr}/steps/{key}")
                level = {}
                for dkey, vecs in (degs or {}).items():
                    deg = _degree(dkey, f"{ptr}/steps/{key}/{dkey}")
                    level[deg] = [_vector(v, f"{ptr}/steps/{key}/{dkey}/{i}")
                                  for i, v in enumerate(vecs)]
                    for i, v in enumerate(level[deg]):
                        if len(v) != sp.dim(deg):
                            raise ModelError(f"{ptr}/steps/{key}/{dkey}/{i}",
                                             f"expected length {sp.dim(deg)}")
                steps[p] = level
            return FiltrationData(sp, steps)
        return self._get("filtration", name, build)

    def sub_dgla(self, name: str) -> SubDgla:
        spec = self.section("subdglas")
        _ref(spec, name, "/subdglas", "subdgla")
        def build():
            entry = spec[name]
            ptr = f"/subdglas/{name}"
            host = entry.get("dgla")
            if not isinstance(host, str) or (host not in self.section("dglas")
                                             and host not in self.section("end_dglas")):
                raise ModelError(f"{ptr}/dgla", f"dangling reference: no dgla named {host!r}")
            g = self.dgla(host)
            span = {}
            for key, vecs in (entry.get("span") or {}).items():
                deg = _degree(key, f"{ptr}/span/{key}")
                span[deg] = [_vector(v, f"{ptr}/span/{key}/{i}")
                             for i, v in enumerate(vecs)]
                for i, v in enumerate(span[deg]):
                    if len(v) != g.space.dim(deg):
                        raise ModelError(f"{ptr}/span/{key}/{i}",
                                         f"expected length {g.space.dim(deg)}")
            try:
                return sub_dgla_span(g, span)
            except StructuralError as exc:
                raise ModelError(ptr, str(exc))
        return self._get("sub", name, build)

    def artin(self, name: str) -> ArtinAlgebra:
        spec = self.section("artin")
        _ref(spec, name, "/artin", "artin algebra")
        def build():
            entry = spec[name]
            ptr = f"/artin/{name}"
            k, order = entry.get("generators"), entry.get("order")
            if not isinstance(k, int) or not isinstance(order, int) or k < 1 or order < 2:
                raise ModelError(ptr, "expected integer fields generators >= 1, order >= 2")
            return truncated_polynomial_algebra(k, order)
        return self._get("artin", name, build)

    def map(self, name: str) -> GradedMap:
        spec = self.section("maps")
        _ref(spec, name, "/maps", "map")
        def build():
            entry = spec[name]
            ptr = f"/maps/{name}"
            src = self.space(_ref(self.section("spaces"), entry.get("source"),
                                  f"{ptr}/source", "space"))
            dst = self.space(_ref(self.section("spaces"), entry.get("target"),
                                  f"{ptr}/target", "space"))
            shift = entry.get("shift", 0)
            if not isinstance(shift, int):
                raise ModelError(f"{ptr}/shift", "expected an integer")
            blocks = {}
            for key, raw in (entry.get("blocks") or {}).items():
                deg = _degree(key, f"{ptr}/blocks/{key}")
                blocks[deg] = _matrix(raw, f"{ptr}/blocks/{key}",
                                      dst.dim(deg + shift), src.dim(deg))
            return GradedMap(src, dst, shift, blocks)
        return self._get("map", name, build)

    def contraction(self, name: str) -> tuple[Dgla, CdgaModel, EndDgla, GradedMap]:
        """A contraction family: (source dgla, cdga, End(cdga), the map i).

        Declared as one degree -1 operator block dict per source basis vector,
        listed in (degree, index) order.
        """
        spec = self.section("contractions")
        _ref(spec, name, "/contractions", "contraction")
        def build():
            entry = spec[name]
            ptr = f"/contractions/{name}"
            source = self.dgla(_ref(self.section("dglas"), entry.get("source"),
                                    f"{ptr}/source", "dgla"))
            omega = self.cdga(_ref(self.section("cdgas"), entry.get("cdga"),
                                   f"{ptr}/cdga", "cdga"))
            end = end_dgla(omega.complex)
            ops = entry.get("operators")
            basis = source.space.basis()
            if not isinstance(ops, list) or len(ops) != len(basis):
                raise ModelError(f"{ptr}/operators",
                                 f"expected {len(basis)} operators (one per source "
                                 "basis vector in degree order)")
            sp = omega.space
            columns: dict[int, list[Vector]] = {}
            for col, ((sdeg, _), op) in enumerate(zip(basis, ops)):
                shift = sdeg - 1
                blocks = {}
                for key, raw in (op or {}).items():
                    deg = _degree(key, f"{ptr}/operators/{col}/{key}")
                    blocks[deg] = _matrix(raw, f"{ptr}/operators/{col}/{key}",
                                          sp.dim(deg + shift), sp.dim(deg))
                gm = GradedMap(sp, sp, shift, blocks)
                try:
                    elem = end.map_to_element(gm)
                except StructuralError as exc:
                    raise ModelError(f"{ptr}/operators/{col}", str(exc))
                columns.setdefault(sdeg, []).append(
                    elem.get(shift, [Q(0)] * end.space.dim(shift)))
            blocks = {}
            for sdeg, cols in columns.items():
                rows = end.space.dim(sdeg - 1)
                if rows:
                    blocks[sdeg] = [[cols[j][r] for j in range(len(cols))]
                                    for r in range(rows)]
            i = GradedMap(source.space, end.space, -1, blocks)
            return source, omega, end, i
        return self._get("contraction", name, build)

    def element(self, name: str) -> tuple[GradedVectorSpace, GVec]:
        spec = self.section("elements")
        _ref(spec, name, "/elements", "element")
        def build():
            entry = spec[name]
            ptr = f"/elements/{name}"
            sp = self.space(_ref(self.section("spaces"), entry.get("space"),
                                 f"{ptr}/space", "space"))
            values: GVec = {}
            for key, raw in (entry.get("values") or {}).items():
                deg = _degree(key, f"{ptr}/values/{key}")
                v = _vector(raw, f"{ptr}/values/{key}")
                if len(v) != sp.dim(deg):
                    raise ModelError(f"{ptr}/values/{key}",
                                     f"expected length {sp.dim(deg)}")
                if any(v):
                    values[deg] = v
            return sp, values
        return self._get("element", name, build)


def parse_model(path: str) -> ModelDocument:
    """Load and cross-check a model document; first error wins."""
    try:
        with open(path, "rb") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ModelError("/", f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ModelError("/", f"malformed JSON: {exc}")
    return parse_model_dict(raw, path)


def parse_model_dict(raw: dict, path: str = "") -> ModelDocument:
    if not isinstance(raw, dict):
        raise ModelError("/", "top level must be an object")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ModelError("/schema", f"expected schema version {SCHEMA_VERSION}")
    for key in raw:
        if key not in _SECTIONS:
            raise ModelError(f"/{key}", "unknown section")
    doc = ModelDocument(raw, path)
    # force every declared object once so dangling references and dimension
    # mismatches surface at parse time, not at command time
    for name in doc.names("spaces"):
        doc.space(name)
    for name in doc.names("complexes"):
        doc.complex(name)
    for name in doc.names("dglas"):
        doc.dgla(name)
    for name in doc.names("end_dglas"):
        doc.end_dgla(name)
    for name in doc.names("cdgas"):
        doc.cdga(name)
    for name in doc.names("filtrations"):
        doc.filtration(name)
    for name in doc.names("subdglas"):
        doc.sub_dgla(name)
    for name in doc.names("artin"):
        doc.artin(name)
    for name in doc.names("maps"):
        doc.map(name)
    for name in doc.names("contractions"):
        doc.contraction(name)
    for name in doc.names("elements"):
        doc.element(name)
    return doc


# ---------------------------------------------------------------------------
# emission helpers (exact rationals as "num/den" strings)

def rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def vector_json(v: Vector) -> list:
    return [rational_str(c) for c in v]


def matrix_json(m: Matrix) -> list:
    return [vector_json(row) for row in m]


def gvec_json(x: GVec) -> dict:
    return {str(d): vector_json(v) for d, v in sorted(x.items()) if any(v)}


def emit_model(doc: ModelDocument) -> bytes:
    """Canonical serialization; parse(emit(parse(f))) == parse(f)."""
    return (json.dumps(doc.raw, sort_keys=True, indent=1) + "\n").encode()
