"""Differential graded Lie algebras: data type, axiom validation, morphisms,
sub-dglas and quotients.

Bracket structure constants are stored only for degree pairs (m, n) with
m <= n; the other order is derived from graded antisymmetry, which removes a
redundancy-consistency failure mode.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .graded import (Complex, GradedMap, GradedVectorSpace, GVec, SubSpaceData,
                     StructuralError, QuotientComplex, is_chain_map,
                     quotient_complex, vec_add, vec_component, vec_is_zero,
                     vec_scale, vec_sub)
from .linalg import Q, Vector


@dataclass
class ValidationReport:
    """List of failed axiom instances; empty report means valid."""

    failures: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, kind: str, witness, residual=None):
        entry = {"kind": kind, "witness": witness}
        if residual is not None:
            entry["residual"] = residual
        self.failures.append(entry)

    def merge(self, other: "ValidationReport"):
        self.failures.extend(other.failures)
        self.notes.update(other.notes)


def _residual_repr(x: GVec) -> dict:
    return {str(d): [str(c) for c in v] for d, v in x.items() if any(v)}


@dataclass(frozen=True)
class Dgla:
    """Complex plus bracket structure constants.

    ``brackets[(m, n)][i][j]`` (only m <= n stored) is the coordinate vector
    of [e_i, e_j] in degree m + n.
    """

    underlying: Complex
    brackets: dict[tuple[int, int], list[list[Vector]]]

    def __post_init__(self):
        sp = self.space
        for (m, n), table in self.brackets.items():
            if m > n:
                raise StructuralError(f"bracket table for ({m},{n}) must be stored as ({n},{m})")
            if len(table) != sp.dim(m):
                raise StructuralError(f"bracket table ({m},{n}) has {len(table)} rows, expected {sp.dim(m)}")
            for row in table:
                if len(row) != sp.dim(n):
                    raise StructuralError(f"bracket table ({m},{n}) row length mismatch")
                for v in row:
                    if len(v) != sp.dim(m + n):
                        raise StructuralError(f"bracket value in ({m},{n}) has wrong length")

    @property
    def space(self) -> GradedVectorSpace:
        return self.underlying.space

    def d(self, x: GVec) -> GVec:
        return self.underlying.d(x)

    def pair_bracket(self, m: int, i: int, n: int, j: int) -> GVec:
        """[e_i, e_j] for basis vectors of degrees m, n."""
        if m <= n:
            table = self.brackets.get((m, n))
            v = table[i][j] if table else None
        else:
            table = self.brackets.get((n, m))
            w = table[j][i] if table else None
            sign = Q(-1) if (m * n) % 2 == 0 else Q(1)  # -(-1)^{mn}
            v = [sign * c for c in w] if w else None
        if v is None or not any(v):
            return {}
        return {m + n: list(v)}

    def bracket(self, x: GVec, y: GVec) -> GVec:
        out: GVec = {}
        for m, xv in x.items():
            for i, xc in enumerate(xv):
                if not xc:
                    continue
                for n, yv in y.items():
                    for j, yc in enumerate(yv):
                        if not yc:
                            continue
                        b = self.pair_bracket(m, i, n, j)
                        if b:
                            out = vec_add(out, vec_scale(xc * yc, b))
        return out

    def basis_element(self, deg: int, idx: int) -> GVec:
        return self.space.basis_element(deg, idx)

    def label(self, deg: int, idx: int) -> str:
        return self.space.label(deg, idx)

    def is_abelian(self) -> bool:
        return all(all(not c for row in t for v in row for c in v)
                   for t in self.brackets.values())


def abelian_dgla(c: Complex) -> Dgla:
    return Dgla(c, {})


def validate_dgla(g: Dgla) -> ValidationReport:
    """Brute-force check of graded antisymmetry, Leibniz and Jacobi on bases."""
    report = ValidationReport()
    sp = g.space
    basis = sp.basis()

    # antisymmetry within equal degrees (mixed degrees are antisymmetric by
    # construction of pair_bracket); [a,a] = 0 for even |a|
    for (m, n) in g.brackets:
        if m != n:
            continue
        dim = sp.dim(m)
        sign = Q(1) if (m * m) % 2 else Q(-1)  # -(-1)^{m^2}
        for i in range(dim):
            for j in range(i, dim):
                lhs = g.pair_bracket(m, i, m, j)
                rhs = vec_scale(sign, g.pair_bracket(m, j, m, i))
                res = vec_sub(lhs, rhs)
                if not vec_is_zero(res):
                    report.fail("antisymmetry", [sp.label(m, i), sp.label(m, j)],
                                _residual_repr(res))

    # graded Leibniz: d[a,b] = [da,b] + (-1)^{|a|}[a,db]
    for (m, i) in basis:
        a = sp.basis_element(m, i)
        da = g.d(a)
        for (n, j) in basis:
            b = sp.basis_element(n, j)
            lhs = g.d(g.pair_bracket(m, i, n, j))
            rhs = vec_add(g.bracket(da, b),
                          vec_scale(Q(-1) ** (m % 2), g.bracket(a, g.d(b))))
            res = vec_sub(lhs, rhs)
            if not vec_is_zero(res):
                report.fail("leibniz", [sp.label(m, i), sp.label(n, j)],
                            _residual_repr(res))

    # graded Jacobi in the symmetric cyclic form; with antisymmetry in hand,
    # unordered triples suffice
    for ai in range(len(basis)):
        m, i = basis[ai]
        a = sp.basis_element(m, i)
        for bi in range(ai, len(basis)):
            n, j = basis[bi]
            b = sp.basis_element(n, j)
            ab = g.pair_bracket(m, i, n, j)
            for ci in range(bi, len(basis)):
                p, k = basis[ci]
                c = sp.basis_element(p, k)
                term1 = vec_scale(Q(-1) ** ((m * p) % 2), g.bracket(ab, c))
                term2 = vec_scale(Q(-1) ** ((n * m) % 2),
                                  g.bracket(g.pair_bracket(n, j, p, k), a))
                term3 = vec_scale(Q(-1) ** ((p * n) % 2),
                                  g.bracket(g.pair_bracket(p, k, m, i), b))
                res = vec_add(vec_add(term1, term2), term3)
                if not vec_is_zero(res):
                    report.fail("jacobi",
                                [sp.label(m, i), sp.label(n, j), sp.label(p, k)],
                                _residual_repr(res))
    return report


@dataclass(frozen=True)
class DglaMorphism:
    source: Dgla
    target: Dgla
    map: GradedMap

    def __post_init__(self):
        if self.map.shift != 0:
            raise StructuralError("dgla morphism must have shift 0")

    def apply(self, x: GVec) -> GVec:
        return self.map.apply(x)


def validate_morphism(f: DglaMorphism) -> ValidationReport:
    report = ValidationReport()
    res = is_chain_map(f.map, f.source.underlying, f.target.underlying)
    for deg in sorted(res.blocks):
        block = res.block(deg)
        if not linalg.is_zero_matrix(block):
            report.fail("chain_map", [f"degree {deg}"],
                        [[str(x) for x in row] for row in block])
    sp = f.source.space
    for (m, i) in sp.basis():
        a = sp.basis_element(m, i)
        fa = f.apply(a)
        for (n, j) in sp.basis():
            b = sp.basis_element(n, j)
            lhs = f.apply(f.source.pair_bracket(m, i, n, j))
            rhs = f.target.bracket(fa, f.apply(b))
            r = vec_sub(lhs, rhs)
            if not vec_is_zero(r):
                report.fail("bracket_compat", [sp.label(m, i), sp.label(n, j)],
                            _residual_repr(r))
    return report


def identity_morphism(g: Dgla) -> DglaMorphism:
    from .graded import identity_map
    return DglaMorphism(g, g, identity_map(g.space))


def zero_morphism(g: Dgla, h: Dgla) -> DglaMorphism:
    from .graded import zero_map
    return DglaMorphism(g, h, zero_map(g.space, h.space))


@dataclass(frozen=True)
class SubDgla:
    parent: Dgla
    span: SubSpaceData

    def __post_init__(self):
        if self.span.parent.components != self.parent.space.components:
            raise StructuralError("sub-dgla span declared on a different space")

    def contains(self, x: GVec) -> bool:
        return self.span.contains(x)

    def dim(self, deg: int) -> int:
        return self.span.dim(deg)


def sub_dgla_span(parent: Dgla, span: dict[int, list[Vector]]) -> SubDgla:
    return SubDgla(parent, SubSpaceData(parent.space, span))


def validate_sub_dgla(n: SubDgla) -> ValidationReport:
    """Closure under d and bracket."""
    report = ValidationReport()
    h = n.parent
    degs = sorted(n.span.span)
    for deg in degs:
        for idx, v in enumerate(n.span.basis_in_degree(deg)):
            img = h.d({deg: v})
            if not n.contains(img):
                report.fail("d_closure", [f"degree {deg} span vector {idx}"],
                            _residual_repr(img))
    for m in degs:
        for i, v in enumerate(n.span.basis_in_degree(m)):
            for p in degs:
                for j, w in enumerate(n.span.basis_in_degree(p)):
                    b = h.bracket({m: v}, {p: w})
                    if not n.contains(b):
                        report.fail("bracket_closure",
                                    [f"degree {m} vector {i}", f"degree {p} vector {j}"],
                                    _residual_repr(b))
    return report


def sub_quotient(h: Dgla, n: SubDgla) -> tuple[ValidationReport, QuotientComplex]:
    """Validate closure of n inside h and return the quotient complex h/n.

    The bracket does not descend to the quotient in general, so only the
    complex is returned.
    """
    report = validate_sub_dgla(n)
    quotient = quotient_complex(h.underlying, n.span)
    return report, quotient


def inclusion_as_morphism(n: SubDgla) -> DglaMorphism:
    """The sub-dgla on its own basis, included into the parent."""
    sub = restrict_to_sub(n)
    blocks = {}
    for deg in sub.space.degrees:
        cols = [list(v) for v in n.span.basis_in_degree(deg)]
        blocks[deg] = linalg.transpose(cols)
    return DglaMorphism(sub, n.parent,
                        GradedMap(sub.space, n.parent.space, 0, blocks))


def restrict_to_sub(n: SubDgla) -> Dgla:
    """The dgla structure induced on a (closed) sub-dgla, on its own basis."""
    h = n.parent
    bases = {deg: n.span.basis_in_degree(deg) for deg in sorted(n.span.span)}
    bases = {deg: bs for deg, bs in bases.items() if bs}
    components = {deg: tuple(f"s{deg}_{i}" for i in range(len(bs)))
                  for deg, bs in bases.items()}
    space = GradedVectorSpace(components)

    def to_sub_coords(x: GVec) -> GVec:
        out: GVec = {}
        for deg, v in x.items():
            if not any(v):
                continue
            basis = bases.get(deg)
            if not basis:
                raise StructuralError(f"element leaves the subspace in degree {deg}")
            sol = linalg.solve(linalg.columns_matrix(basis, len(v)), list(v))
            if sol is None:
                raise StructuralError(f"element leaves the subspace in degree {deg}")
            out[deg] = sol
        return out

    d_blocks = {}
    for deg, bs in bases.items():
        cols = []
        for v in bs:
            img = h.d({deg: v})
            coords = to_sub_coords(img)
            cols.append(vec_component(coords, deg + 1, space.dim(deg + 1)))
        if space.dim(deg + 1) and cols:
            d_blocks[deg] = linalg.transpose(cols)
    cx = Complex(space, GradedMap(space, space, 1, d_blocks))

    brackets = {}
    degs = sorted(bases)
    for m in degs:
        for p in degs:
            if m > p:
                continue
            table = []
            for v in bases[m]:
                row = []
                for w in bases[p]:
                    b = h.bracket({m: v}, {p: w})
                    coords = to_sub_coords(b)
                    row.append(vec_component(coords, m + p, space.dim(m + p)))
                table.append(row)
            if any(any(c for c in cell) for row in table for cell in row):
                brackets[(m, p)] = table
    return Dgla(cx, brackets)
