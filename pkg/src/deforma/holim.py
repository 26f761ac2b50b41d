"""Homotopy limit of the two-arrow diagram n => h (inclusion and zero).

The model is the path object: pairs (x, gamma) with x in the sub-dgla n and
gamma = p(t) + q(t) dt a polynomial path in h (x) K[t, dt] satisfying
p(0) = x and p(1) = 0.  This complex is quasi-isomorphic to (h/n)[-1]; the
quasi-isomorphism integrates the dt-component and reduces mod n.  Cohomology
computations bound the polynomial t-degree by D and report stabilization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .cartan import cartan_check, lie_from_cartan
from .convolution import (BigradedHomElement, TotalHomElement,
                          hom_element_from_linear, total_add, total_bracket,
                          total_d, total_mc_residual, total_scale, total_sub,
                          total_zero)
from .dgla import (Dgla, SubDgla, ValidationReport, _residual_repr,
                   abelian_dgla, restrict_to_sub, sub_dgla_span, sub_quotient)
from .graded import (Complex, GradedMap, GradedVectorSpace, GVec,
                     QuotientComplex, StructuralError,
                     cohomology, induced_map_on_cohomology, is_chain_map,
                     shift_complex, vec_add, vec_degree, vec_is_zero,
                     vec_scale, vec_sub)
from .linalg import Q


# ---------------------------------------------------------------------------
# polynomial paths in h (x) K[t, dt]

@dataclass
class PathElement:
    """p(t) + q(t) dt of total degree ``degree``: the coefficient lists hold
    p_m (degree ``degree``) and q_m (degree ``degree - 1``)."""

    host: Dgla
    degree: int
    p: list = field(default_factory=list)   # p[m]: GVec, coefficient of t^m
    q: list = field(default_factory=list)   # q[m]: GVec, coefficient of t^m dt

    def __post_init__(self):
        for coeff in self.p:
            d = vec_degree(coeff)
            if d is not None and d != self.degree:
                raise StructuralError("p-coefficient of wrong degree")
        for coeff in self.q:
            d = vec_degree(coeff)
            if d is not None and d != self.degree - 1:
                raise StructuralError("q-coefficient of wrong degree")
        while self.p and vec_is_zero(self.p[-1]):
            self.p.pop()
        while self.q and vec_is_zero(self.q[-1]):
            self.q.pop()

    def is_zero(self) -> bool:
        return not self.p and not self.q

    def eval_p(self, t: Fraction) -> GVec:
        out: GVec = {}
        power = Q(1)
        for coeff in self.p:
            out = vec_add(out, vec_scale(power, coeff))
            power *= t
        return out

    def integral_q(self) -> GVec:
        """Integral of the dt-component over [0, 1]."""
        out: GVec = {}
        for m, coeff in enumerate(self.q):
            out = vec_add(out, vec_scale(Q(1, m + 1), coeff))
        return out


def constant_path(host: Dgla, x: GVec) -> PathElement:
    deg = vec_degree(x)
    if deg is None:
        raise StructuralError("constant path needs a homogeneous nonzero element")
    return PathElement(host, deg, [dict(x)], [])


def path_add(a: PathElement, b: PathElement) -> PathElement:
    if a.degree != b.degree:
        raise StructuralError("degree mismatch in path addition")
    p = [vec_add(x, y) for x, y in _zip_pad(a.p, b.p)]
    q = [vec_add(x, y) for x, y in _zip_pad(a.q, b.q)]
    return PathElement(a.host, a.degree, p, q)


def path_scale(c: Fraction, a: PathElement) -> PathElement:
    return PathElement(a.host, a.degree,
                       [vec_scale(c, x) for x in a.p],
                       [vec_scale(c, x) for x in a.q])


def _zip_pad(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return [(a[m] if m < len(a) else {}, b[m] if m < len(b) else {})
            for m in range(n)]


def path_d(gamma: PathElement) -> PathElement:
    """d(p + q dt) = d_h p + ((-1)^k p' + d_h q) dt for degree k."""
    h = gamma.host
    k = gamma.degree
    sign = Q(-1) if k % 2 else Q(1)
    p = [h.d(c) for c in gamma.p]
    q = []
    for m in range(max(len(gamma.p) - 1, len(gamma.q))):
        term: GVec = {}
        if m + 1 < len(gamma.p):
            term = vec_scale(sign * Q(m + 1), gamma.p[m + 1])
        if m < len(gamma.q):
            term = vec_add(term, h.d(gamma.q[m]))
        q.append(term)
    return PathElement(h, k + 1, p, q)


def path_bracket(g1: PathElement, g2: PathElement) -> PathElement:
    """Pointwise-in-t bracket with dt^2 = 0:
    [p1 + q1 dt, p2 + q2 dt] = [p1, p2] + ([p1, q2] + (-1)^{k2} [q1, p2]) dt."""
    if g1.host is not g2.host and g1.host.space.components != g2.host.space.components:
        raise StructuralError("path bracket requires the same host dgla")
    h = g1.host
    p: list[GVec] = []
    q: list[GVec] = []

    def put(coeffs: list, m: int, val: GVec):
        while len(coeffs) <= m:
            coeffs.append({})
        coeffs[m] = vec_add(coeffs[m], val)

    for m1, c1 in enumerate(g1.p):
        for m2, c2 in enumerate(g2.p):
            put(p, m1 + m2, h.bracket(c1, c2))
        for m2, c2 in enumerate(g2.q):
            put(q, m1 + m2, h.bracket(c1, c2))
    sign = Q(-1) if g2.degree % 2 else Q(1)
    for m1, c1 in enumerate(g1.q):
        for m2, c2 in enumerate(g2.p):
            put(q, m1 + m2, vec_scale(sign, h.bracket(c1, c2)))
    return PathElement(h, g1.degree + g2.degree, p, q)


# ---------------------------------------------------------------------------
# the homotopy-limit pair and its elements

@dataclass(frozen=True)
class HolimPair:
    """A dgla h with a closed sub-dgla n and the quotient complex h/n."""

    h: Dgla
    n: SubDgla
    quotient: QuotientComplex


def holim_pair(h: Dgla, n: SubDgla) -> HolimPair:
    report, quotient = sub_quotient(h, n)
    if not report.ok:
        raise StructuralError(f"n is not a closed sub-dgla: {report.failures[:3]}")
    return HolimPair(h, n, quotient)


def holim_pair_from_span(h: Dgla, span: dict) -> HolimPair:
    return holim_pair(h, sub_dgla_span(h, span))


def shifted_quotient(pair: HolimPair) -> Complex:
    """(h/n)[-1], the target of the projection quasi-isomorphism."""
    return shift_complex(pair.quotient.complex, -1)


@dataclass
class HolimElement:
    pair: HolimPair
    x: GVec
    path: PathElement

    @property
    def degree(self) -> int:
        return self.path.degree


def holim_element(pair: HolimPair, x: GVec, path: PathElement) -> HolimElement:
    return HolimElement(pair, x, path)


def holim_validate(e: HolimElement) -> ValidationReport:
    report = ValidationReport()
    xdeg = vec_degree(e.x)
    if xdeg is not None and xdeg != e.degree:
        report.fail("degree", [f"x degree {xdeg}", f"path degree {e.degree}"])
    if not e.pair.n.contains(e.x):
        report.fail("membership", ["x outside the sub-dgla"], _residual_repr(e.x))
    at0 = vec_sub(e.path.eval_p(Q(0)), e.x)
    if not vec_is_zero(at0):
        report.fail("endpoint_zero", ["p(0) != x"], _residual_repr(at0))
    at1 = e.path.eval_p(Q(1))
    if not vec_is_zero(at1):
        report.fail("endpoint_one", ["p(1) != 0"], _residual_repr(at1))
    return report


def holim_d(e: HolimElement) -> HolimElement:
    return HolimElement(e.pair, e.pair.h.d(e.x), path_d(e.path))


def holim_bracket(a: HolimElement, b: HolimElement) -> HolimElement:
    return HolimElement(a.pair, a.pair.h.bracket(a.x, b.x),
                        path_bracket(a.path, b.path))


def holim_project(e: HolimElement) -> GVec:
    """(x, p + q dt) -> (integral of q) mod n, as an element of (h/n)[-1].

    The result is keyed by its degree in the shifted complex (= e.degree);
    with this convention the projection is an exact chain map.
    """
    bar = e.pair.quotient.projection.apply(e.path.integral_q())
    coords = bar.get(e.degree - 1)
    return {e.degree: coords} if coords and any(coords) else {}


# ---------------------------------------------------------------------------
# the path dgla h (x) K[t, dt] truncated in t-degree, as an explicit Dgla

@dataclass(frozen=True)
class PathDgla:
    """Basis entries per total degree k: ('p', m, j) for t^m e_j with e_j of
    host degree k, and ('q', m, j) for t^m e_j dt with e_j of degree k - 1.

    Brackets whose t-degree exceeds ``tmax`` are silently projected away, so
    only use elements whose products stay within the bound (the holim
    constructions below guarantee this by choosing tmax large enough).
    """

    host: Dgla
    tmax: int
    dgla: Dgla
    index: dict          # degree -> tuple of entries
    positions: dict      # degree -> {entry: position}

    @property
    def space(self) -> GradedVectorSpace:
        return self.dgla.space

    def to_coords(self, gamma: PathElement) -> GVec:
        k = gamma.degree
        dim = self.space.dim(k)
        v = [Q(0)] * dim
        pos = self.positions.get(k, {})
        for m, coeff in enumerate(gamma.p):
            if m > self.tmax:
                raise StructuralError("path exceeds the t-degree bound")
            for j, c in enumerate(coeff.get(k, [])):
                if c:
                    v[pos[('p', m, j)]] += c
        for m, coeff in enumerate(gamma.q):
            if m > self.tmax:
                raise StructuralError("path exceeds the t-degree bound")
            for j, c in enumerate(coeff.get(k - 1, [])):
                if c:
                    v[pos[('q', m, j)]] += c
        return {k: v} if any(v) else {}

    def to_path(self, x: GVec, degree: int) -> PathElement:
        h = self.host
        p = [dict() for _ in range(self.tmax + 1)]
        q = [dict() for _ in range(self.tmax + 1)]
        v = x.get(degree, [])
        for posn, c in enumerate(v):
            if not c:
                continue
            kind, m, j = self.index[degree][posn]
            if kind == 'p':
                tgt, hdeg = p, degree
            else:
                tgt, hdeg = q, degree - 1
            vec = tgt[m].setdefault(hdeg, [Q(0)] * h.space.dim(hdeg))
            vec[j] += c
        return PathElement(h, degree,
                           [c if c else {} for c in p],
                           [c if c else {} for c in q])


def path_dgla(host: Dgla, tmax: int) -> PathDgla:
    sp = host.space
    hdegs = sp.degrees
    degs = sorted(set(hdegs) | {k + 1 for k in hdegs})
    index: dict[int, tuple] = {}
    for k in degs:
        entries = []
        for m in range(tmax + 1):
            for j in range(sp.dim(k)):
                entries.append(('p', m, j))
        for m in range(tmax + 1):
            for j in range(sp.dim(k - 1)):
                entries.append(('q', m, j))
        if entries:
            index[k] = tuple(entries)
    positions = {k: {e: i for i, e in enumerate(entries)}
                 for k, entries in index.items()}
    components = {}
    for k, entries in index.items():
        labels = []
        for kind, m, j in entries:
            lbl = sp.label(k if kind == 'p' else k - 1, j)
            labels.append(f"t{m}*{lbl}" + ("*dt" if kind == 'q' else ""))
        components[k] = tuple(labels)
    space = GradedVectorSpace(components)

    def entry_vec(k: int, entry, coeff: Fraction, out: list):
        p = positions[k].get(entry)
        if p is not None:
            out[p] += coeff

    d_blocks = {}
    for k, entries in index.items():
        tdim = space.dim(k + 1)
        if not tdim:
            continue
        cols = []
        for kind, m, j in entries:
            col = [Q(0)] * tdim
            if kind == 'p':
                img = host.d(sp.basis_element(k, j))
                for jj, c in enumerate(img.get(k + 1, [])):
                    if c:
                        entry_vec(k + 1, ('p', m, jj), c, col)
                if m >= 1:
                    sign = Q(-1) if k % 2 else Q(1)
                    entry_vec(k + 1, ('q', m - 1, j), sign * Q(m), col)
            else:
                img = host.d(sp.basis_element(k - 1, j))
                for jj, c in enumerate(img.get(k, [])):
                    if c:
                        entry_vec(k + 1, ('q', m, jj), c, col)
            cols.append(col)
        if any(any(c) for c in cols):
            d_blocks[k] = [[cols[j][i] for j in range(len(cols))]
                           for i in range(tdim)]
    cx = Complex(space, GradedMap(space, space, 1, d_blocks))

    def pair_bracket(k1, e1, k2, e2, out_dim, outk):
        kind1, m1, j1 = e1
        kind2, m2, j2 = e2
        col = [Q(0)] * out_dim
        m = m1 + m2
        if m > tmax or (kind1 == 'q' and kind2 == 'q'):
            return col
        if kind1 == 'p' and kind2 == 'p':
            br = host.pair_bracket(k1, j1, k2, j2)
            for jj, c in enumerate(br.get(k1 + k2, [])):
                if c:
                    entry_vec(outk, ('p', m, jj), c, col)
        elif kind1 == 'p':
            br = host.pair_bracket(k1, j1, k2 - 1, j2)
            for jj, c in enumerate(br.get(k1 + k2 - 1, [])):
                if c:
                    entry_vec(outk, ('q', m, jj), c, col)
        else:
            sign = Q(-1) if k2 % 2 else Q(1)
            br = host.pair_bracket(k1 - 1, j1, k2, j2)
            for jj, c in enumerate(br.get(k1 + k2 - 1, [])):
                if c:
                    entry_vec(outk, ('q', m, jj), sign * c, col)
        return col

    brackets = {}
    for k1 in index:
        for k2 in index:
            if k1 > k2 or (k1 + k2) not in index:
                continue
            outk = k1 + k2
            out_dim = space.dim(outk)
            table = []
            any_nonzero = False
            for e1 in index[k1]:
                row = []
                for e2 in index[k2]:
                    v = pair_bracket(k1, e1, k2, e2, out_dim, outk)
                    if any(v):
                        any_nonzero = True
                    row.append(v)
                table.append(row)
            if any_nonzero:
                brackets[(k1, k2)] = table
    return PathDgla(host, tmax, Dgla(cx, brackets), index, positions)


# ---------------------------------------------------------------------------
# bounded-t-degree holim complex and its cohomology

@dataclass
class HolimBounded:
    pair: HolimPair
    tbound: int
    ambient: PathDgla
    basis: dict                    # degree -> list of ambient coordinate vectors
    complex: Complex               # on its own basis
    projection_map: GradedMap      # complex.space -> shifted quotient space


def holim_bounded(pair: HolimPair, tbound: int) -> HolimBounded:
    """Subcomplex {p(0) in n, p(1) = 0, deg_t p <= D, deg_t q <= D - 1}."""
    if tbound < 1:
        raise StructuralError("t-degree bound must be at least 1")
    ambient = path_dgla(pair.h, tbound)
    hsp = pair.h.space
    span: dict[int, list] = {}
    for k, entries in ambient.index.items():
        dim = len(entries)
        rows = []
        # q-coefficients of t-degree D vanish
        for posn, (kind, m, j) in enumerate(entries):
            if kind == 'q' and m >= tbound:
                row = [Q(0)] * dim
                row[posn] = Q(1)
                rows.append(row)
        # p(1) = 0
        for j in range(hsp.dim(k)):
            row = [Q(0)] * dim
            for m in range(tbound + 1):
                row[ambient.positions[k][('p', m, j)]] = Q(1)
            rows.append(row)
        # p(0) in n: quotient projection of the constant coefficient vanishes
        proj_block = pair.quotient.projection.blocks.get(k)
        if proj_block:
            for prow in proj_block:
                row = [Q(0)] * dim
                for j, c in enumerate(prow):
                    if c:
                        row[ambient.positions[k][('p', 0, j)]] = c
                rows.append(row)
        kernel = linalg.nullspace(rows) if rows else [list(r) for r in linalg.identity(dim)]
        if kernel:
            span[k] = kernel

    sub = sub_dgla_span(abelian_dgla(ambient.dgla.underlying), span)
    restricted = restrict_to_sub(sub)
    basis = {k: sub.span.basis_in_degree(k) for k in sorted(span)}
    basis = {k: bs for k, bs in basis.items() if bs}

    target = shifted_quotient(pair)
    blocks = {}
    for k, bs in basis.items():
        tdim = target.space.dim(k)
        if not tdim:
            continue
        cols = []
        for v in bs:
            gamma = ambient.to_path({k: list(v)}, k)
            bar = pair.quotient.projection.apply(gamma.integral_q())
            cols.append(bar.get(k - 1, [Q(0)] * tdim))
        blocks[k] = [[cols[j][i] for j in range(len(cols))] for i in range(tdim)]
    proj = GradedMap(restricted.space, target.space, 0, blocks)
    return HolimBounded(pair, tbound, ambient, basis, restricted.underlying, proj)


@dataclass
class HolimCohomologyResult:
    tbound: int
    ranks: dict
    quotient_ranks: dict
    projection_ranks: dict

    @property
    def agree(self) -> bool:
        return (self.ranks == self.quotient_ranks
                and self.projection_ranks == self.ranks)


def holim_cohomology_bounded(pair: HolimPair, tbound: int) -> HolimCohomologyResult:
    """Cohomology ranks of the bounded holim complex, compared degree-wise
    with H^{k-1}(h/n), plus the ranks of the projection on cohomology."""
    bounded = holim_bounded(pair, tbound)
    target = shifted_quotient(pair)
    hc = cohomology(bounded.complex)
    qc = cohomology(target)
    induced = induced_map_on_cohomology(bounded.projection_map, bounded.complex,
                                        target, hc, qc)
    proj_ranks = {k: linalg.rank(m) for k, m in induced.items() if linalg.rank(m)}
    return HolimCohomologyResult(tbound, dict(hc.ranks), dict(qc.ranks), proj_ranks)


# ---------------------------------------------------------------------------
# the morphism (l, e^i) into holim

def induced_quotient_map(pair: HolimPair, g: Dgla, i: GradedMap) -> GradedMap:
    """a -> (-1)^{|a|} (i_a mod n), the chain map g -> (h/n)[-1] induced by a
    Cartan homotopy whose l lands in n."""
    if i.shift != -1:
        raise StructuralError("the inducing map must have degree -1")
    target = shifted_quotient(pair)
    blocks = {}
    for k in g.space.degrees:
        pblock = pair.quotient.projection.blocks.get(k - 1)
        iblock = i.blocks.get(k)
        if not pblock or not iblock:
            continue
        sign = Q(-1) if k % 2 else Q(1)
        blocks[k] = linalg.scale(sign, linalg.matmul(pblock, iblock))
    return GradedMap(g.space, target.space, 0, blocks)


@dataclass
class HolimMorphism:
    """The arity-truncated morphism (l, e^i) from g into holim(n => h).

    ``flow_coefficients[m]`` is the t^m coefficient of Phi(t) = e^{t i} * l in
    the convolution dgla Hom(g, h); the dt-component is concentrated in arity
    one with values (-1)^{|a|} i_a.  ``total`` assembles everything into a
    degree-1 element of Hom(g, path dgla); ``residual_slices`` records the
    arity slices of its Maurer-Cartan residual (all zero for a genuine Cartan
    homotopy).
    """

    g: Dgla
    pair: HolimPair
    i: GradedMap
    l: GradedMap
    arity_bound: int
    paths: PathDgla
    flow_coefficients: dict
    total: TotalHomElement
    residual_slices: dict

    def arity_one(self, a: GVec) -> HolimElement:
        """The first Taylor coefficient a -> (l_a, gamma_a)."""
        deg = vec_degree(a)
        if deg is None:
            raise StructuralError("need a homogeneous nonzero argument")
        p = []
        for m in sorted(self.flow_coefficients):
            c = self.flow_coefficients[m].component(0, 1)
            val = c.evaluate_elements([a])
            while len(p) <= m:
                p.append({})
            p[m] = val
        q0 = vec_scale(Q(-1) if deg % 2 else Q(1), self.i.apply(a))
        return HolimElement(self.pair, self.l.apply(a),
                            PathElement(self.pair.h, deg, p, [q0]))

    def projected_linear_part(self) -> GradedMap:
        """holim_project composed with the arity-one component."""
        target = shifted_quotient(self.pair)
        blocks = {}
        for k in self.g.space.degrees:
            tdim = target.space.dim(k)
            sdim = self.g.space.dim(k)
            if not tdim or not sdim:
                continue
            cols = []
            for idx in range(sdim):
                e = self.arity_one(self.g.space.basis_element(k, idx))
                cols.append(holim_project(e).get(k, [Q(0)] * tdim))
            blocks[k] = [[cols[j][r] for j in range(sdim)] for r in range(tdim)]
        return GradedMap(self.g.space, target.space, 0, blocks)


def map_into_holim(g: Dgla, i: GradedMap, pair: HolimPair,
                   arity_bound: int = 4) -> HolimMorphism:
    """Build (l, e^i): g -> holim(n => h) from a Cartan homotopy i whose
    associated morphism l lands in n.  Rejects inputs failing either
    hypothesis; records the Maurer-Cartan residual slices of the result."""
    report = cartan_check(g, pair.h, i)
    if not report.ok:
        raise StructuralError(f"not a Cartan homotopy: {report.failures[:3]}")
    l = lie_from_cartan(g, pair.h, i)
    for (deg, idx) in g.space.basis():
        img = l.apply(g.space.basis_element(deg, idx))
        if not pair.n.contains(img):
            raise StructuralError(
                f"l({g.space.label(deg, idx)}) is not in the sub-dgla")

    itot = total_zero(g, pair.h, arity_bound)
    itot.put(hom_element_from_linear(g, pair.h, i))
    ltot = total_zero(g, pair.h, arity_bound)
    ltot.put(hom_element_from_linear(g, pair.h, l))
    seed = total_sub(total_bracket(itot, ltot), total_d(itot))

    flow = {0: ltot}
    term = seed
    m = 0
    factorial = 1
    while not term.is_zero():
        m += 1
        factorial *= m
        flow[m] = total_scale(Q(1, factorial), term)
        if m > arity_bound + 1:
            raise RuntimeError("gauge flow failed to terminate under truncation")
        term = total_bracket(itot, term)

    at_one = total_zero(g, pair.h, arity_bound)
    for c in flow.values():
        at_one = total_add(at_one, c)
    if not at_one.is_zero():
        raise StructuralError("flow endpoint Phi(1) is nonzero; "
                              "the Cartan identities do not close the series")

    paths = path_dgla(pair.h, arity_bound + 2)
    total = total_zero(g, paths.dgla, arity_bound)
    for m, coeff in flow.items():
        for c in coeff.components.values():
            values = {}
            for keys, val in c.values.items():
                hdeg = sum(k[0] for k in keys) + c.p
                gamma = PathElement(pair.h, hdeg, [{} for _ in range(m)] + [val], [])
                pv = paths.to_coords(gamma)
                if pv:
                    values[keys] = pv
            if values:
                total.put(BigradedHomElement(g, paths.dgla, c.p, c.q, values))
    qvalues = {}
    for (deg, idx) in g.space.basis():
        a = g.space.basis_element(deg, idx)
        val = vec_scale(Q(-1) if deg % 2 else Q(1), i.apply(a))
        if not vec_is_zero(val):
            gamma = PathElement(pair.h, deg, [], [val])
            pv = paths.to_coords(gamma)
            if pv:
                qvalues[((deg, idx),)] = pv
    if qvalues:
        total.put(BigradedHomElement(g, paths.dgla, 0, 1, qvalues))

    residual = total_mc_residual(total)
    slices = {}
    for (p, q), c in sorted(residual.components.items()):
        if not c.is_zero():
            slices[(p, q)] = c
    return HolimMorphism(g, pair, i, l, arity_bound, paths, flow, total, slices)


# ---------------------------------------------------------------------------
# quasi-abelianity witness

@dataclass
class QuasiAbelianWitness:
    pair: HolimPair
    section: GradedMap
    morphism: HolimMorphism
    induced: dict            # degree -> matrix of H(witness map) at the bound
    source_ranks: dict
    holim_ranks: dict

    @property
    def is_isomorphism(self) -> bool:
        degs = set(self.source_ranks) | set(self.holim_ranks)
        for k in degs:
            r = self.source_ranks.get(k, 0)
            if r != self.holim_ranks.get(k, 0):
                return False
            if r and linalg.rank(self.induced.get(k, [])) != r:
                return False
        return True


def quasi_abelian_witness(pair: HolimPair, section: GradedMap,
                          tbound: int = 2) -> QuasiAbelianWitness:
    """Given a degree-wise chain-map section s of h -> h/n, verify that s is
    a Cartan homotopy from the abelian dgla (h/n)[-1] into h with l = 0, and
    that the resulting map (0, e^s) into holim induces an isomorphism on
    bounded cohomology."""
    qcx = pair.quotient.complex
    if section.shift != 0:
        raise StructuralError("the section must be a degree-0 map h/n -> h")
    composite = pair.quotient.projection.compose(section)
    identity_defect = False
    for k in qcx.space.degrees:
        dim = qcx.space.dim(k)
        blk = composite.block(k)
        if any(blk[r][c] != (Q(1) if r == c else Q(0))
               for r in range(dim) for c in range(dim)):
            identity_defect = True
    if identity_defect:
        raise StructuralError("the given map is not a section of the projection")
    res = is_chain_map(section, qcx, pair.h.underlying)
    if not res.is_zero():
        raise StructuralError("the section is not a chain map")

    source = abelian_dgla(shifted_quotient(pair))
    sblocks = {qdeg + 1: blk for qdeg, blk in section.blocks.items()}
    s_shift = GradedMap(source.space, pair.h.space, -1, sblocks)

    morphism = map_into_holim(source, s_shift, pair, arity_bound=2)
    if not morphism.l.is_zero():
        raise StructuralError("quasi-abelian witness expects l = 0")

    bounded = holim_bounded(pair, tbound)
    blocks = {}
    for k in source.space.degrees:
        sdim = source.space.dim(k)
        bs = bounded.basis.get(k, [])
        if not sdim or not bs:
            continue
        cols = []
        ambient_cols = linalg.columns_matrix(bs, len(bs[0]))
        for idx in range(sdim):
            e = morphism.arity_one(source.space.basis_element(k, idx))
            coords = bounded.ambient.to_coords(
                PathElement(pair.h, k, e.path.p, e.path.q))
            vec = coords.get(k, [Q(0)] * len(bs[0]))
            sol = linalg.solve(ambient_cols, list(vec))
            if sol is None:
                raise StructuralError("witness image leaves the bounded subcomplex")
            cols.append(sol)
        blocks[k] = [[cols[j][r] for j in range(sdim)] for r in range(len(bs))]
    wmap = GradedMap(source.space, bounded.complex.space, 0, blocks)

    hs = cohomology(source.underlying)
    ht = cohomology(bounded.complex)
    induced = induced_map_on_cohomology(wmap, source.underlying, bounded.complex,
                                        hs, ht)
    return QuasiAbelianWitness(pair, section, morphism, induced,
                               dict(hs.ranks), dict(ht.ranks))
