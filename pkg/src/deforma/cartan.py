"""Cartan homotopies and the transport they induce.

A Cartan homotopy is a degree -1 linear map i: g -> h between dglas such
that, writing l_a = d_h i_a + i_{d_g a}:

  (A)  the degree (-1, 2) convolution element  d_{0,1}(i) - [i, l]/2  vanishes
       (equivalently: i_{[a,b]} matches the symmetrization of [i_a, l_b]); and
  (B)  [i_a, [i_b, l_c]] = 0 for all a, b, c.

Then l is a dgla morphism, and gauging the zero Maurer-Cartan element of the
convolution dgla by -i produces a morphism-up-to-arity-N whose linear part
is l and whose higher parts are built from i alone.
"""

from __future__ import annotations


from .convolution import (DEFAULT_ARITY, LinfMorphism, TotalHomElement,
                          extract_taylor, hom_add, hom_bracket, hom_d01,
                          hom_d10, hom_element_from_linear, hom_scale,
                          linear_from_hom_element, total_gauge_act, total_zero)
from .dgla import Dgla, DglaMorphism, ValidationReport, _residual_repr
from .graded import GradedMap, StructuralError, vec_is_zero, vec_sub
from .linalg import Q


def _as_hom_element(g: Dgla, h: Dgla, i: GradedMap):
    if i.shift != -1:
        raise StructuralError("a Cartan homotopy must have degree -1")
    return hom_element_from_linear(g, h, i)


def lie_from_cartan(g: Dgla, h: Dgla, i: GradedMap) -> GradedMap:
    """l_a = d_h i_a + i_{d_g a}; a chain map always, a dgla morphism when i
    satisfies the Cartan conditions."""
    return linear_from_hom_element(hom_d10(_as_hom_element(g, h, i)))


def cartan_check(g: Dgla, h: Dgla, i: GradedMap) -> ValidationReport:
    """Check conditions (A) and (B); the report's notes record whether the
    stronger pointwise identities i_{[a,b]} = [i_a, l_b] and [i_a, i_b] = 0
    hold as well."""
    report = ValidationReport()
    ielem = _as_hom_element(g, h, i)
    lelem = hom_d10(ielem)
    lmap = linear_from_hom_element(lelem)

    condition_a = hom_add(hom_d01(ielem),
                          hom_scale(Q(-1, 2), hom_bracket(ielem, lelem)))
    for keys in condition_a.support():
        labels = [g.space.label(d, t) for d, t in keys]
        report.fail("condition_A", labels, _residual_repr(condition_a.values[keys]))

    sp = g.space
    basis = sp.basis()
    for (m, ia) in basis:
        i_a = i.apply(sp.basis_element(m, ia))
        for (n, ib) in basis:
            i_b = i.apply(sp.basis_element(n, ib))
            for (p, ic) in basis:
                l_c = lmap.apply(sp.basis_element(p, ic))
                res = h.bracket(i_a, h.bracket(i_b, l_c))
                if not vec_is_zero(res):
                    report.fail("condition_B",
                                [sp.label(m, ia), sp.label(n, ib), sp.label(p, ic)],
                                _residual_repr(res))

    stronger_bracket = True
    stronger_square = True
    for (m, ia) in basis:
        a = sp.basis_element(m, ia)
        i_a = i.apply(a)
        for (n, ib) in basis:
            b = sp.basis_element(n, ib)
            lhs = i.apply(g.pair_bracket(m, ia, n, ib))
            rhs = h.bracket(i_a, lmap.apply(b))
            if not vec_is_zero(vec_sub(lhs, rhs)):
                stronger_bracket = False
            if not vec_is_zero(h.bracket(i_a, i.apply(b))):
                stronger_square = False
    report.notes["stronger_bracket_identity"] = stronger_bracket
    report.notes["stronger_square_zero"] = stronger_square
    return report


def lie_morphism_from_cartan(g: Dgla, h: Dgla, i: GradedMap) -> DglaMorphism:
    return DglaMorphism(g, h, lie_from_cartan(g, h, i))


def gauge_zero_transport(g: Dgla, h: Dgla, i: GradedMap,
                         arity_bound: int = DEFAULT_ARITY) -> TotalHomElement:
    """e^{-i} * 0 in the arity-truncated convolution dgla.

    Always a Maurer-Cartan element (it is a gauge transform of zero); for a
    Cartan homotopy its linear part is l and its degree (-1,2) part vanishes.
    """
    ielem = _as_hom_element(g, h, i)
    alpha = total_zero(g, h, arity_bound)
    alpha.put(hom_scale(Q(-1), ielem))
    return total_gauge_act(alpha, total_zero(g, h, arity_bound))


def transport_morphism(g: Dgla, h: Dgla, i: GradedMap,
                       arity_bound: int = DEFAULT_ARITY) -> LinfMorphism:
    """The transport of zero repackaged as Taylor coefficients."""
    return extract_taylor(gauge_zero_transport(g, h, i, arity_bound))
