"""Maurer-Cartan theory over a nilpotent coefficient ideal.

Everything here lives in g (x) m_A for a dgla g and the maximal ideal m_A of
a local Artin algebra: the Maurer-Cartan equation, the gauge action of the
exponential group exp((g (x) m_A)^0), irrelevant (stabilizer) gauges, a staged
gauge-equivalence solver, order-by-order extension with cohomological
obstruction classes, and the Baker-Campbell-Hausdorff group law.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .artin import NilpotentDgla
from .dgla import Dgla, SubDgla
from .graded import (GVec, StructuralError, cohomology, vec_add, vec_component,
                     vec_degree, vec_is_zero, vec_scale, vec_sub)
from . import linalg
from .linalg import Q


def _require_degree(x: GVec, deg: int, what: str):
    d = vec_degree(x)
    if d is not None and d != deg:
        raise StructuralError(f"{what} must be homogeneous of degree {deg}")


def mc_residue(ng: NilpotentDgla, x: GVec) -> GVec:
    """dx + [x, x]/2 for a degree-1 element of g (x) m_A."""
    _require_degree(x, 1, "Maurer-Cartan candidate")
    return vec_add(ng.d(x), vec_scale(Q(1, 2), ng.bracket(x, x)))


def is_mc(ng: NilpotentDgla, x: GVec) -> bool:
    return vec_is_zero(mc_residue(ng, x))


def gauge_act(ng: NilpotentDgla, alpha: GVec, x: GVec) -> GVec:
    """e^alpha * x = x + sum_n ad_alpha^n / (n+1)! ([alpha, x] - d alpha).

    The series terminates because alpha has positive coefficient weight.
    """
    _require_degree(alpha, 0, "gauge parameter")
    _require_degree(x, 1, "gauge argument")
    seed = vec_sub(ng.bracket(alpha, x), ng.d(alpha))
    out = dict(x)
    term = seed
    n = 0
    factorial = 1
    while not vec_is_zero(term):
        n += 1
        factorial *= n
        out = vec_add(out, vec_scale(Q(1, factorial), term))
        if n > ng.coefficients.order:
            raise RuntimeError("gauge series failed to terminate")
        term = ng.bracket(alpha, term)
    return out


def irrelevant_stabilizer(ng: NilpotentDgla, x: GVec,
                          sub: SubDgla | None = None) -> list[GVec]:
    """Spanning set of the irrelevant stabilizer directions at x:
    {d h + [x, h] : h of degree -1}.

    With ``sub`` given (a sub-dgla of the base, viewed inside g (x) m_A), h
    ranges over degree -1 elements of sub (x) m_A instead.
    """
    _require_degree(x, 1, "Maurer-Cartan point")
    out = []
    deg = -1
    na = ng.coefficients.dim
    if sub is None:
        dim = ng.space.dim(deg)
        hs = [ng.space.basis_element(deg, i) for i in range(dim)]
    else:
        hs = []
        for v in sub.span.basis_in_degree(deg):
            for mon in range(na):
                hs.append(ng.tensor_element({deg: list(v)}, mon))
    for h in hs:
        g = vec_add(ng.d(h), ng.bracket(x, h))
        if not vec_is_zero(g):
            out.append(g)
    return out


@dataclass
class GaugeResult:
    status: str                 # "equivalent" | "not_equivalent" | "inconclusive"
    alpha: GVec | None = None
    detail: str = ""


def _weight_indices(ng: NilpotentDgla, deg: int, weight: int) -> list[int]:
    na = ng.coefficients.dim
    return [t for t in range(ng.space.dim(deg))
            if ng.coefficients.weights[t % na] == weight]


def gauge_equivalent(ng: NilpotentDgla, x: GVec, y: GVec) -> GaugeResult:
    """Search for alpha with e^alpha * x = y, staged by coefficient weight.

    At each weight w the equation linearizes to d(alpha_w) = -(residual at
    weight w).  A failure at weight 1 is a genuine obstruction; so is any
    failure when the bracket vanishes (the action is then affine and the
    stages are independent).  Otherwise a failed stage is inconclusive,
    because earlier stages admitted unexplored solution families.
    """
    _require_degree(x, 1, "gauge argument")
    _require_degree(y, 1, "gauge argument")
    if not (is_mc(ng, x) and is_mc(ng, y)):
        raise StructuralError("gauge equivalence is only tested between "
                              "Maurer-Cartan elements")
    alpha: GVec = {}
    abelian = ng.base.is_abelian()
    dim0 = ng.space.dim(0)
    dim1 = ng.space.dim(1)
    for w in range(1, ng.coefficients.order):
        current = gauge_act(ng, alpha, x) if alpha else dict(x)
        residual = vec_sub(y, current)
        if vec_is_zero(residual):
            break
        r_w = ng.weight_slice(residual, w)
        if vec_is_zero(r_w):
            continue
        rows = _weight_indices(ng, 1, w)
        cols = _weight_indices(ng, 0, w)
        rhs = [vec_component(r_w, 1, dim1)[r] for r in rows]
        if not cols:
            sol = [] if not any(rhs) else None
        else:
            block = ng.dgla.underlying.differential.block(0)
            mat = [[-(block[r][c]) for c in cols] for r in rows]
            sol = linalg.solve(mat, rhs)
        if sol is None:
            if w == 1 or abelian:
                return GaugeResult("not_equivalent", None,
                                   f"unsolvable linear stage at weight {w}")
            return GaugeResult("inconclusive", None,
                               f"staged solver failed at weight {w}")
        beta = [Q(0)] * dim0
        for c, v in zip(cols, sol):
            beta[c] = v
        if any(beta):
            alpha = vec_add(alpha, {0: beta})
    final = gauge_act(ng, alpha, x) if alpha else dict(x)
    if vec_is_zero(vec_sub(y, final)):
        return GaugeResult("equivalent", alpha)
    return GaugeResult("inconclusive", None, "residual survived all stages")


@dataclass
class ObstructionClass:
    """Weight-w obstruction of a partial Maurer-Cartan solution.

    ``classes`` maps each weight-w monomial label to the coordinates of the
    corresponding degree-2 cohomology class of the base dgla.
    """

    weight: int
    classes: dict = field(default_factory=dict)
    representative: GVec = field(default_factory=dict)

    @property
    def vanishes(self) -> bool:
        return all(not any(v) for v in self.classes.values())


def mc_obstruction(ng: NilpotentDgla, x: GVec) -> ObstructionClass | None:
    """Lowest-weight obstruction to x being Maurer-Cartan; None if it is.

    The lowest-weight slice of the residue is a cocycle of the base dgla in
    degree 2, one class per monomial; x can be corrected at that weight iff
    every class vanishes.
    """
    r = mc_residue(ng, x)
    w = ng.min_weight(r)
    if w is None:
        return None
    r_w = ng.weight_slice(r, w)
    base = ng.base
    na = ng.coefficients.dim
    h2 = cohomology(base.underlying)
    classes = {}
    v = vec_component(r_w, 2, ng.space.dim(2))
    for mon in range(na):
        if ng.coefficients.weights[mon] != w:
            continue
        comp = [v[i * na + mon] for i in range(base.space.dim(2))]
        if not any(comp):
            continue
        dv = base.d({2: comp})
        if not vec_is_zero(dv):
            raise StructuralError("obstruction slice is not a cocycle; "
                                  "the input does not solve the equation "
                                  "below its residue weight")
        classes[ng.coefficients.labels[mon]] = h2.project({2: comp}).get(
            2, [Q(0)] * max(h2.rank(2), 1))
    return ObstructionClass(weight=w, classes=classes, representative=r_w)


def mc_correct_step(ng: NilpotentDgla, x: GVec) -> GVec | None:
    """One extension step: kill the lowest-weight residue by a same-weight
    correction, or None if the obstruction class is nonzero."""
    obs = mc_obstruction(ng, x)
    if obs is None:
        return x
    if not obs.vanishes:
        return None
    rows = _weight_indices(ng, 2, obs.weight)
    cols = _weight_indices(ng, 1, obs.weight)
    rhs = [-vec_component(obs.representative, 2, ng.space.dim(2))[r] for r in rows]
    if not cols:
        sol = [] if not any(rhs) else None
    else:
        block = ng.dgla.underlying.differential.block(1)
        mat = [[block[r][c] for c in cols] for r in rows]
        sol = linalg.solve(mat, rhs)
    if sol is None:
        raise StructuralError("vanishing obstruction class with unsolvable "
                              "correction; inconsistent cohomology data")
    xi = [Q(0)] * ng.space.dim(1)
    for c, v in zip(cols, sol):
        xi[c] = v
    return vec_add(x, {1: xi})


@dataclass
class ExtensionResult:
    status: str                 # "solved" | "obstructed"
    element: GVec | None = None
    obstruction: ObstructionClass | None = None


def mc_extend(ng: NilpotentDgla, seed: GVec) -> ExtensionResult:
    """Extend a seed to a full Maurer-Cartan element weight by weight.

    Stops at the first nonvanishing obstruction class.  The correction at
    weight w does not disturb lower weights, so the loop terminates within
    the nilpotency order.
    """
    x = dict(seed)
    _require_degree(x, 1, "seed")
    for _ in range(ng.coefficients.order + 1):
        obs = mc_obstruction(ng, x)
        if obs is None:
            return ExtensionResult("solved", x)
        if not obs.vanishes:
            return ExtensionResult("obstructed", x, obs)
        x = mc_correct_step(ng, x)
    raise RuntimeError("extension failed to terminate")


# ---------------------------------------------------------------------------
# Baker-Campbell-Hausdorff

def _nested_bracket(bracket, word: list[GVec]) -> GVec:
    out = word[-1]
    for letter in reversed(word[:-1]):
        out = bracket(letter, out)
    return out


def bch(bracket, x: GVec, y: GVec, cutoff: int) -> GVec:
    """log(e^x e^y) by the explicit commutator series, with all bracket words
    of length > cutoff treated as zero.

    ``bracket`` is the Lie bracket; x and y should be degree-0 elements of a
    nilpotent Lie algebra whose (cutoff+1)-fold brackets vanish — for
    g (x) m_A take cutoff = order - 1.
    """
    total: GVec = {}
    for n in range(1, cutoff + 1):
        outer = Q(-1) ** (n - 1) / Q(n)
        pair_choices = [(r, s) for r in range(cutoff + 1)
                        for s in range(cutoff + 1) if r + s >= 1]
        for combo in itertools.product(pair_choices, repeat=n):
            length = sum(r + s for r, s in combo)
            if length > cutoff:
                continue
            denom = Q(length)
            for r, s in combo:
                for t in range(2, r + 1):
                    denom *= t
                for t in range(2, s + 1):
                    denom *= t
            word: list[GVec] = []
            for r, s in combo:
                word.extend([x] * r)
                word.extend([y] * s)
            term = _nested_bracket(bracket, word)
            if not vec_is_zero(term):
                total = vec_add(total, vec_scale(outer / denom, term))
    return total


def mc_extend_order(ng: NilpotentDgla, partial: GVec) -> ExtensionResult:
    """One order of the extension problem: correct the lowest-weight residue
    of a partial solution, or report its obstruction class.

    ``mc_extend`` iterates this to a full solution or a genuine obstruction.
    """
    obs = mc_obstruction(ng, partial)
    if obs is None:
        return ExtensionResult("solved", dict(partial))
    if not obs.vanishes:
        return ExtensionResult("obstructed", dict(partial), obs)
    return ExtensionResult("extended", mc_correct_step(ng, partial), obs)


def gauge_path(ng: NilpotentDgla, alpha: GVec, x: GVec):
    """The homotopy p(t) + q(t) dt from x to e^alpha * x inside
    (g (x) m_A) (x) K[t, dt]: p(t) = e^{t alpha} * x and q = -alpha.

    The dt-component sign is frozen by the component equation
    p' = dq + [p, q]; see the regression tests.
    """
    from .holim import PathElement
    _require_degree(alpha, 0, "gauge parameter")
    _require_degree(x, 1, "gauge argument")
    seed = vec_sub(ng.bracket(alpha, x), ng.d(alpha))
    p = [dict(x)]
    term = seed
    m = 0
    factorial = 1
    while not vec_is_zero(term):
        m += 1
        factorial *= m
        p.append(vec_scale(Q(1, factorial), term))
        if m > ng.coefficients.order:
            raise RuntimeError("gauge series failed to terminate")
        term = ng.bracket(alpha, term)
    q = [vec_scale(Q(-1), alpha)] if not vec_is_zero(alpha) else []
    return PathElement(ng.dgla, 1, p, q)


@dataclass
class Pi1Group:
    """exp(h^0 (x) m_A), presented by its Lie algebra with the BCH law."""

    nilpotent: NilpotentDgla
    dimension: int
    stabilizer_trivial: bool

    def identity(self) -> GVec:
        return {}

    def multiply(self, a: GVec, b: GVec) -> GVec:
        return pi1_multiply(self.nilpotent, a, b)

    def inverse(self, a: GVec) -> GVec:
        return pi1_inverse(a)


def pi1_at_zero(h: Dgla, a) -> Pi1Group:
    """The fundamental group at the zero deformation for a dgla with zero
    differential; unsupported (by design) when d is nonzero."""
    from .artin import ArtinAlgebra, tensor_nilpotent
    if not isinstance(a, ArtinAlgebra):
        raise StructuralError("expected an Artin coefficient algebra")
    if not h.underlying.differential.is_zero():
        raise StructuralError("pi1 at zero is only computed for zero "
                              "differential")
    ng = tensor_nilpotent(h, a)
    stab = irrelevant_stabilizer(ng, {})
    return Pi1Group(nilpotent=ng,
                    dimension=h.space.dim(0) * a.dim,
                    stabilizer_trivial=not stab)


def pi1_multiply(ng: NilpotentDgla, a: GVec, b: GVec) -> GVec:
    """Group law of exp((g (x) m_A)^0) on logarithms, by the
    Baker-Campbell-Hausdorff series."""
    _require_degree(a, 0, "group logarithm")
    _require_degree(b, 0, "group logarithm")
    return bch(ng.bracket, a, b, ng.coefficients.order - 1)


def pi1_inverse(a: GVec) -> GVec:
    return vec_scale(Q(-1), a)
