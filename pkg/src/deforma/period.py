"""Finite filtered cdga models, the endomorphism pair (End, End^{>=0}),
contractions as Cartan homotopies, the end of the flag diagram, and the
period differential.

The pipeline: a finite graded-commutative dg algebra Omega with a decreasing
filtration F stands in for a de Rham complex; End(Omega) with [d,-] and the
commutator is the ambient dgla; the filtration-preserving endomorphisms form
the sub-dgla End^{>=0}; a family of contractions i_a gives a Cartan homotopy
into End(Omega); the induced map on cohomology lands in the end of the flag
diagram integral_p Hom^0(F^p H, H/F^p H), and obstruction classes map into
H^1(End/End^{>=0}).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import linalg
from .cartan import cartan_check, lie_from_cartan
from .dgla import (Dgla, DglaMorphism, SubDgla, ValidationReport,
                   _residual_repr, sub_dgla_span, validate_morphism,
                   validate_sub_dgla)
from .endo import EndDgla, end_dgla
from .graded import (Complex, GradedMap, GradedVectorSpace, GVec,
                     StructuralError, SubSpaceData,
                     cohomology, quotient_complex, vec_add,
                     vec_is_zero, vec_scale, vec_sub, zero_map)
from .linalg import Q, Vector


# ---------------------------------------------------------------------------
# finite cdga models

@dataclass(frozen=True)
class CdgaModel:
    """Complex plus graded-commutative product structure constants.

    ``products[(m, n)][i][j]`` (stored for m <= n) is e_i * e_j in degree
    m + n; the other order is derived from graded commutativity.
    """

    complex: Complex
    products: dict

    @property
    def space(self) -> GradedVectorSpace:
        return self.complex.space

    def d(self, x: GVec) -> GVec:
        return self.complex.d(x)

    def pair_product(self, m: int, i: int, n: int, j: int) -> GVec:
        if m <= n:
            table = self.products.get((m, n))
            v = table[i][j] if table else None
        else:
            table = self.products.get((n, m))
            w = table[j][i] if table else None
            sign = Q(-1) if (m * n) % 2 else Q(1)
            v = [sign * c for c in w] if w else None
        if v is None or not any(v):
            return {}
        return {m + n: list(v)}

    def multiply(self, x: GVec, y: GVec) -> GVec:
        out: GVec = {}
        for m, xv in x.items():
            for i, xc in enumerate(xv):
                if not xc:
                    continue
                for n, yv in y.items():
                    for j, yc in enumerate(yv):
                        if yc:
                            out = vec_add(out, vec_scale(
                                xc * yc, self.pair_product(m, i, n, j)))
        return out


def validate_cdga(omega: CdgaModel) -> ValidationReport:
    """Graded commutativity, associativity and the Leibniz rule on bases.

    Failures are reported, not raised: some useful truncated models satisfy
    everything except Leibniz on their top corner, and the endomorphism
    constructions only need the complex structure.
    """
    report = ValidationReport()
    sp = omega.space
    basis = sp.basis()
    for (m, i) in basis:
        for (n, j) in basis:
            sign = Q(-1) if (m * n) % 2 else Q(1)
            res = vec_sub(omega.pair_product(m, i, n, j),
                          vec_scale(sign, omega.pair_product(n, j, m, i)))
            if not vec_is_zero(res):
                report.fail("commutativity", [sp.label(m, i), sp.label(n, j)],
                            _residual_repr(res))
    for (m, i), (n, j), (p, k) in itertools.product(basis, repeat=3):
        lhs = omega.multiply(omega.pair_product(m, i, n, j),
                             sp.basis_element(p, k))
        rhs = omega.multiply(sp.basis_element(m, i),
                             omega.pair_product(n, j, p, k))
        res = vec_sub(lhs, rhs)
        if not vec_is_zero(res):
            report.fail("associativity",
                        [sp.label(m, i), sp.label(n, j), sp.label(p, k)],
                        _residual_repr(res))
    for (m, i) in basis:
        a = sp.basis_element(m, i)
        for (n, j) in basis:
            b = sp.basis_element(n, j)
            lhs = omega.d(omega.pair_product(m, i, n, j))
            sign = Q(-1) if m % 2 else Q(1)
            rhs = vec_add(omega.multiply(omega.d(a), b),
                          vec_scale(sign, omega.multiply(a, omega.d(b))))
            res = vec_sub(lhs, rhs)
            if not vec_is_zero(res):
                report.fail("leibniz", [sp.label(m, i), sp.label(n, j)],
                            _residual_repr(res))
    return report


# ---------------------------------------------------------------------------
# decreasing filtrations

@dataclass(frozen=True)
class FiltrationData:
    """Decreasing filtration: steps[p] spans F^p degree-wise; outside the
    given range F^p is everything (below) or zero (above)."""

    space: GradedVectorSpace
    steps: dict   # p -> {degree -> list of spanning vectors}

    def levels(self) -> list[int]:
        return sorted(self.steps)

    def step(self, p: int) -> SubSpaceData:
        if not self.steps:
            return SubSpaceData(self.space, {})
        lo, hi = min(self.steps), max(self.steps)
        if p < lo:
            span = {deg: [list(v) for v in linalg.identity(self.space.dim(deg))]
                    for deg in self.space.degrees}
            return SubSpaceData(self.space, span)
        if p > hi:
            return SubSpaceData(self.space, {})
        return SubSpaceData(self.space, self.steps.get(p, {}))


def validate_filtration(c: Complex, f: FiltrationData) -> ValidationReport:
    report = ValidationReport()
    if f.space.components != c.space.components:
        raise StructuralError("filtration declared on a different space")
    levels = f.levels()
    for p in levels:
        sub = f.step(p)
        prev = f.step(p - 1)
        for deg in sorted(sub.span):
            for idx, v in enumerate(sub.basis_in_degree(deg)):
                if not prev.contains({deg: v}):
                    report.fail("decreasing", [f"F^{p} degree {deg} vector {idx}"])
                img = c.d({deg: v})
                if not vec_is_zero(img) and not sub.contains(img):
                    report.fail("d_stability", [f"F^{p} degree {deg} vector {idx}"],
                                _residual_repr(img))
    return report


# ---------------------------------------------------------------------------
# End(Omega) and the filtration-preserving sub-dgla

def build_end_dgla(omega: CdgaModel) -> EndDgla:
    return end_dgla(omega.complex)


def _annihilator_rows(vectors: list[Vector], dim: int) -> list[Vector]:
    """Linear functionals (as rows) vanishing exactly on the span."""
    if not vectors:
        return [list(r) for r in linalg.identity(dim)]
    return linalg.nullspace(vectors)


def filtered_subdgla(omega: CdgaModel, f: FiltrationData,
                     end: EndDgla | None = None) -> SubDgla:
    """End^{>=0}: endomorphisms phi with phi(F^p) inside F^p for every p."""
    end = end or build_end_dgla(omega)
    report = validate_filtration(omega.complex, f)
    if not report.ok:
        raise StructuralError(f"invalid filtration: {report.failures[:3]}")
    sp = omega.space
    span: dict[int, list[Vector]] = {}
    for k in end.space.degrees:
        dim = end.space.dim(k)
        rows: list[Vector] = []
        for p in f.levels():
            sub = f.step(p)
            for deg in sorted(sub.span):
                tdeg = deg + k
                tdim = sp.dim(tdeg)
                target_basis = sub.basis_in_degree(tdeg) if sp.dim(tdeg) else []
                functionals = _annihilator_rows(target_basis, tdim)
                if not functionals:
                    continue
                for v in sub.basis_in_degree(deg):
                    for func in functionals:
                        row = [Q(0)] * dim
                        nonzero = False
                        for pos, (sd, si, di) in enumerate(end.index[k]):
                            if sd != deg or not v[si]:
                                continue
                            if func[di]:
                                row[pos] += v[si] * func[di]
                                nonzero = True
                        if nonzero:
                            rows.append(row)
        kernel = linalg.nullspace(rows) if rows else \
            [list(r) for r in linalg.identity(dim)]
        if kernel:
            span[k] = kernel
    sub = sub_dgla_span(end.dgla, span)
    closure = validate_sub_dgla(sub)
    if not closure.ok:
        raise StructuralError(
            f"filtration-preserving endomorphisms not closed: {closure.failures[:3]}")
    return sub


# ---------------------------------------------------------------------------
# contractions as Cartan homotopies

@dataclass
class ContractionCartan:
    source: Dgla                 # the derivation dgla T
    omega: CdgaModel
    end: EndDgla
    i: GradedMap                 # T.space -> End space, shift -1
    l: GradedMap                 # Lie derivative, shift 0
    report: ValidationReport


def contraction_cartan(omega: CdgaModel, t: Dgla, i: GradedMap,
                       f: FiltrationData | None = None,
                       end: EndDgla | None = None) -> ContractionCartan:
    """Verify that a -> i_a is a family of odd derivations forming a Cartan
    homotopy into End(Omega); reports the derived identities
    l_{[a,b]} = [l_a, l_b] and [d, l_a] = 0, and filtration preservation of l
    when a filtration is supplied."""
    end = end or build_end_dgla(omega)
    if i.shift != -1:
        raise StructuralError("contraction assignment must have degree -1")
    sp = omega.space
    report = ValidationReport()

    for (m, ia) in t.space.basis():
        op = end.element_to_map(i.apply(t.space.basis_element(m, ia)))
        for (du, iu) in sp.basis():
            u = sp.basis_element(du, iu)
            opu = op.apply(u)
            for (dv, iv) in sp.basis():
                v = sp.basis_element(dv, iv)
                lhs = op.apply(omega.pair_product(du, iu, dv, iv))
                sign = Q(-1) if ((m - 1) * du) % 2 else Q(1)
                rhs = vec_add(omega.multiply(opu, v),
                              vec_scale(sign, omega.multiply(u, op.apply(v))))
                res = vec_sub(lhs, rhs)
                if not vec_is_zero(res):
                    raise StructuralError(
                        f"i({t.space.label(m, ia)}) is not a derivation at "
                        f"({sp.label(du, iu)}, {sp.label(dv, iv)})")

    report.merge(cartan_check(t, end.dgla, i))
    l = lie_from_cartan(t, end.dgla, i)

    lmor = DglaMorphism(t, end.dgla, l)
    morph_report = validate_morphism(lmor)
    report.notes["lie_bracket_compatible"] = morph_report.ok
    flat = all(vec_is_zero(end.dgla.d(l.apply(t.space.basis_element(m, ia))))
               for (m, ia) in t.space.basis())
    report.notes["lie_is_closed"] = flat

    if f is not None:
        preserves = True
        for (m, ia) in t.space.basis():
            op = end.element_to_map(l.apply(t.space.basis_element(m, ia)))
            for p in f.levels():
                sub = f.step(p)
                for deg in sorted(sub.span):
                    for v in sub.basis_in_degree(deg):
                        if not sub.contains(op.apply({deg: list(v)})):
                            preserves = False
                            report.fail("filtration_preservation",
                                        [t.space.label(m, ia), f"F^{p}",
                                         f"degree {deg}"])
        report.notes["lie_preserves_filtration"] = preserves
    return ContractionCartan(t, omega, end, i, l, report)


# ---------------------------------------------------------------------------
# the flag side: induced filtration on cohomology and the end of the diagram

@dataclass
class FlagData:
    """Cohomology H of Omega with its induced filtration and, per level p,
    the quotient coordinate systems for H/F^p H."""

    h_space: GradedVectorSpace
    representatives: dict          # degree -> list of cocycle vectors in Omega
    f_h: FiltrationData            # induced filtration, in H coordinates
    f_reps: dict                   # p -> {degree -> list of (class coords, cocycle)}
    quotients: dict                # p -> QuotientComplex of (H, d=0) by F^p H


def flag_data(omega: CdgaModel, f: FiltrationData) -> FlagData:
    hc = cohomology(omega.complex)
    components = {deg: tuple(f"H{deg}_{i}" for i in range(data.rank))
                  for deg, data in hc.by_degree.items() if data.rank}
    h_space = GradedVectorSpace(components)
    reps = {deg: hc.representatives(deg) for deg in components}

    steps: dict[int, dict] = {}
    f_reps: dict[int, dict] = {}
    for p in f.levels():
        sub = f.step(p)
        span: dict[int, list[Vector]] = {}
        pairs: dict[int, list] = {}
        for deg in h_space.degrees:
            dim = omega.space.dim(deg)
            basis = sub.basis_in_degree(deg)
            if not basis:
                continue
            # cocycles inside F^p in this degree
            d_block = omega.complex.differential.block(deg)
            mat = [[sum(d_block[r][t] * v[t] for t in range(dim))
                    for v in basis] for r in range(omega.space.dim(deg + 1))]
            if mat:
                kernel = linalg.nullspace(mat)
            else:
                kernel = [list(r) for r in linalg.identity(len(basis))]
            for coeffs in kernel:
                cocycle = [sum(coeffs[j] * basis[j][t] for j in range(len(basis)))
                           for t in range(dim)]
                if not any(cocycle):
                    continue
                coords = hc.project({deg: cocycle}).get(deg)
                if coords and any(coords):
                    span.setdefault(deg, []).append(coords)
                    pairs.setdefault(deg, []).append((coords, cocycle))
        if span:
            steps[p] = span
            f_reps[p] = pairs
    f_h = FiltrationData(h_space, steps)

    h_complex = Complex(h_space, zero_map(h_space, h_space, 1))
    quotients = {}
    for p in f.levels():
        quotients[p] = quotient_complex(h_complex, f_h.step(p))
    return FlagData(h_space, reps, f_h, f_reps, quotients)


@dataclass
class EndSpace:
    """integral_p Hom^0(F^p H, H/F^p H): compatible families (phi_p).

    ``levels`` lists the p with 0 != F^p != H; a family assigns to each such
    p and degree k a matrix from the F^p H^k basis to H^k/F^p H^k
    coordinates.  ``basis`` spans the solution space of the compatibility
    equations phi_p restricted to F^{p+1} = phi_{p+1} followed by the
    projection H/F^{p+1} -> H/F^p."""

    flag: FlagData
    levels: list
    layout: list                   # (p, degree, rows, cols) unknown blocks
    basis: list                    # list of flat coordinate vectors

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def family_blocks(self, flat: Vector) -> dict:
        out: dict = {}
        offset = 0
        for (p, deg, rows, cols) in self.layout:
            block = [[flat[offset + r * cols + c] for c in range(cols)]
                     for r in range(rows)]
            offset += rows * cols
            out[(p, deg)] = block
        return out

    def coordinates_of(self, blocks: dict) -> Vector | None:
        """Coordinates of a compatible family in the chosen basis."""
        flat = []
        for (p, deg, rows, cols) in self.layout:
            block = blocks.get((p, deg)) or linalg.zeros(rows, cols)
            for r in range(rows):
                flat.extend(block[r])
        if not self.basis:
            return [] if not any(flat) else None
        return linalg.solve(linalg.columns_matrix(self.basis, len(flat)), flat)


def end_of_flag_diagram(flag: FlagData) -> EndSpace:
    f_h = flag.f_h
    h_space = flag.h_space
    levels = []
    for p in f_h.levels():
        sub = f_h.step(p)
        sub_total = sum(sub.dim(d) for d in h_space.degrees)
        if sub_total and any(h_space.dim(d) > sub.dim(d)
                             for d in h_space.degrees):
            levels.append(p)

    layout = []
    offsets = {}
    size = 0
    for p in levels:
        sub = f_h.step(p)
        for deg in h_space.degrees:
            cols = sub.dim(deg)
            rows = flag.quotients[p].complex.space.dim(deg)
            if rows and cols:
                layout.append((p, deg, rows, cols))
                offsets[(p, deg)] = size
                size += rows * cols

    def block_index(p, deg, r, c):
        for (pp, dd, rows, cols) in layout:
            if pp == p and dd == deg:
                return offsets[(p, deg)] + r * cols + c
        return None

    constraints: list[Vector] = []
    for p in levels:
        if (p + 1) not in levels:
            continue
        sub_p = f_h.step(p)
        sub_p1 = f_h.step(p + 1)
        q_p = flag.quotients[p]
        q_p1 = flag.quotients[p + 1]
        # matrix of the projection H/F^{p+1} -> H/F^p per degree
        for deg in h_space.degrees:
            basis_p = sub_p.basis_in_degree(deg)
            basis_p1 = sub_p1.basis_in_degree(deg)
            rows_p = q_p.complex.space.dim(deg)
            rows_p1 = q_p1.complex.space.dim(deg)
            if not basis_p1 or not rows_p:
                continue
            pi_block = []
            for idx in q_p1.section_indices[deg]:
                e = h_space.basis_element(deg, idx)
                pi_block.append(list(q_p.projection.apply(e).get(
                    deg, [Q(0)] * rows_p)))
            # columns indexed by Q_{p+1} coordinates
            for j, w in enumerate(basis_p1):
                w_in_p = linalg.solve(
                    linalg.columns_matrix(basis_p, h_space.dim(deg)), list(w))
                if w_in_p is None:
                    raise StructuralError("induced filtration is not decreasing")
                for r in range(rows_p):
                    row = [Q(0)] * size
                    for c in range(len(basis_p)):
                        if w_in_p[c]:
                            idx = block_index(p, deg, r, c)
                            if idx is not None:
                                row[idx] += w_in_p[c]
                    for rr in range(rows_p1):
                        idx = block_index(p + 1, deg, rr, j)
                        if idx is not None:
                            row[idx] -= pi_block[rr][r]
                    if any(row):
                        constraints.append(row)

    basis = linalg.nullspace(constraints) if constraints else \
        [list(r) for r in linalg.identity(size)]
    return EndSpace(flag, levels, layout, basis)


# ---------------------------------------------------------------------------
# the period differential

@dataclass
class PeriodDifferential:
    contraction: ContractionCartan
    flag: FlagData
    endspace: EndSpace
    source_rank: int
    matrix: list                   # EndSpace coordinates per H^1(g) basis class
    families: list                 # raw (p, degree) -> block dicts, one per class


def period_differential(contraction: ContractionCartan,
                        f: FiltrationData) -> PeriodDifferential:
    """H^1(i) followed by the action on filtered cohomology classes.

    For each class [a] in H^1 of the derivation dgla, each level p and each
    class [w] in F^p H: phi_p([w]) = class of i_a(w) in H(Omega/F^p),
    carried back to H/F^p H through the degeneration isomorphism
    H/F^p H -> H(Omega/F^p) (an error if that map fails to be one)."""
    omega = contraction.omega
    flag = flag_data(omega, f)
    endspace = end_of_flag_diagram(flag)
    t = contraction.source
    hg = cohomology(t.underlying)

    # degeneration isomorphisms per level, degree: H^k/F^p H^k -> H^k(Omega/F^p)
    deg_iso: dict = {}
    quotient_cohomology: dict = {}
    omega_quotients: dict = {}
    for p in endspace.levels:
        oq = quotient_complex(omega.complex, f.step(p))
        omega_quotients[p] = oq
        qc = cohomology(oq.complex)
        quotient_cohomology[p] = qc
        hq = flag.quotients[p]
        for deg in flag.h_space.degrees:
            rows = qc.rank(deg)
            cols = hq.complex.space.dim(deg)
            if not cols:
                continue
            mat = []
            for idx in hq.section_indices[deg]:
                rep = flag.representatives[deg][idx]
                img = oq.projection.apply({deg: list(rep)})
                coords = qc.project(img).get(deg, [Q(0)] * rows)
                mat.append(list(coords))
            iso = linalg.transpose(mat) if rows else linalg.zeros(0, cols)
            if rows != cols or linalg.rank(iso) != cols:
                raise StructuralError(
                    f"degeneration comparison fails to be an isomorphism at "
                    f"level {p}, degree {deg}")
            deg_iso[(p, deg)] = iso

    matrix = []
    families = []
    for rep in hg.representatives(1):
        op = contraction.end.element_to_map(contraction.i.apply({1: list(rep)}))
        blocks: dict = {}
        for (p, deg, rows, cols) in endspace.layout:
            pairs = flag.f_reps.get(p, {}).get(deg, [])
            sub = flag.f_h.step(p)
            basis = sub.basis_in_degree(deg)
            # representative cocycle for each F^p H basis class
            coord_cols = [pair[0] for pair in pairs]
            block_cols = []
            for v in basis:
                sol = linalg.solve(linalg.columns_matrix(
                    coord_cols, flag.h_space.dim(deg)), list(v))
                if sol is None:
                    raise StructuralError("filtered class without a filtered "
                                          "representative")
                cocycle = [Q(0)] * omega.space.dim(deg)
                for coeff, pair in zip(sol, pairs):
                    for tpos, c in enumerate(pair[1]):
                        cocycle[tpos] += coeff * c
                image = op.apply({deg: cocycle})
                oq = omega_quotients[p]
                qc = quotient_cohomology[p]
                cls = qc.project(oq.projection.apply(image)).get(
                    deg, [Q(0)] * qc.rank(deg))
                back = linalg.solve(deg_iso[(p, deg)], list(cls))
                if back is None:
                    raise StructuralError("degeneration isomorphism failed "
                                          "to invert a period class")
                block_cols.append(back)
            blocks[(p, deg)] = [[block_cols[c][r] for c in range(cols)]
                                for r in range(rows)]
        coords = endspace.coordinates_of(blocks)
        if coords is None:
            raise StructuralError("period image violates the end "
                                  "compatibility equations")
        matrix.append(coords)
        families.append(blocks)
    return PeriodDifferential(contraction, flag, endspace,
                              hg.rank(1), matrix, families)


# ---------------------------------------------------------------------------
# obstruction image (ambient cohomology annihilating obstructions)

@dataclass
class ObstructionImage:
    classes: dict                  # monomial label -> coordinates in H^1(End/End^{>=0})

    @property
    def vanishes(self) -> bool:
        return all(not any(v) for v in self.classes.values())


def obstruction_image(g: Dgla, i: GradedMap, end: EndDgla,
                      end_nonneg: SubDgla, obstruction) -> ObstructionImage:
    """Map an obstruction class through H^2 of the induced map
    g -> (End/End^{>=0})[-1]; under the ambient-annihilation principle the
    image vanishes whenever the flag side is unobstructed."""
    from .holim import holim_pair, induced_quotient_map, shifted_quotient
    pair = holim_pair(end.dgla, end_nonneg)
    psi = induced_quotient_map(pair, g, i)
    hq = cohomology(shifted_quotient(pair))
    hg = cohomology(g.underlying)

    classes = {}
    for label, coords in obstruction.classes.items():
        rep = [Q(0)] * g.space.dim(2)
        for coeff, r in zip(coords, hg.representatives(2)):
            for tpos, c in enumerate(r):
                rep[tpos] += coeff * c
        img = psi.apply({2: rep})
        cls = hq.project(img).get(2, [Q(0)] * max(hq.rank(2), 1))
        classes[label] = cls
    return ObstructionImage(classes)
