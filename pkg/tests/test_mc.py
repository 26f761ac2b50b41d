"""Maurer-Cartan theory over Artin coefficients: gauge action, equivalence,
obstructions, the fundamental-group construction and BCH."""

import random
from fractions import Fraction as Q

import pytest

from deforma import fixtures as F
from deforma.artin import tensor_nilpotent, truncated_polynomial_algebra
from deforma.dgla import Dgla
from deforma.graded import Complex, GradedVectorSpace, StructuralError, vec_eq, zero_map
from deforma.holim import path_add, path_bracket, path_d, path_scale
from deforma.mc import (bch, gauge_act, gauge_equivalent, gauge_path,
                        irrelevant_stabilizer, is_mc, mc_extend,
                        mc_extend_order, mc_obstruction,
                        pi1_at_zero, pi1_inverse, pi1_multiply)

rng = random.Random(41)


def sparse(ng, degree, nnz=3):
    dim = ng.space.dim(degree)
    v = [Q(0)] * dim
    for _ in range(min(nnz, dim)):
        v[rng.randrange(dim)] = Q(rng.randint(-3, 3), rng.randint(1, 3))
    return {degree: v} if any(v) else {}


# ---------------------------------------------------------------------------
# gauge action

@pytest.mark.parametrize("name", ["F2", "F3", "F7"])
@pytest.mark.parametrize("order", [2, 3, 4])
def test_gauge_orbit_of_zero_is_mc(name, order):
    ng = tensor_nilpotent(F.fixture_dgla(name), truncated_polynomial_algebra(1, order))
    for _ in range(8):
        x = gauge_act(ng, sparse(ng, 0), {})
        assert is_mc(ng, x)
        y = gauge_act(ng, sparse(ng, 0), x)
        assert is_mc(ng, y)


def test_gauge_act_zero_alpha_is_identity():
    ng = tensor_nilpotent(F.f3_dgla(), truncated_polynomial_algebra(1, 3))
    x = gauge_act(ng, sparse(ng, 0), {})
    assert gauge_act(ng, {}, x) == x


def test_gauge_act_hand_oracle_dual_numbers():
    # abelian base, A1: e^alpha * x = x - d(alpha)
    g = F.f3_dgla()
    ng = tensor_nilpotent(g, truncated_polynomial_algebra(1, 2))
    alpha = sparse(ng, 0)
    got = gauge_act(ng, alpha, {})
    want = {k: [-c for c in v] for k, v in ng.d(alpha).items()}
    # over A1 every bracket of two maximal-ideal elements dies
    assert vec_eq(got, want)


def test_gauge_requires_degree_zero():
    ng = tensor_nilpotent(F.f7_dgla(), truncated_polynomial_algebra(1, 3))
    with pytest.raises(StructuralError):
        gauge_act(ng, ng.tensor_element({1: [Q(1)]}, 0), {})


# ---------------------------------------------------------------------------
# gauge equivalence decision

def test_gauge_equivalent_positive():
    ng = tensor_nilpotent(F.f2_dgla(), truncated_polynomial_algebra(1, 3))
    for _ in range(5):
        x = gauge_act(ng, sparse(ng, 0), {})
        res = gauge_equivalent(ng, {}, x)
        assert res.status == "equivalent"
        assert vec_eq(gauge_act(ng, res.alpha, {}), x)


def test_gauge_not_equivalent_weight_one_certificate():
    # abelian 1-dim degree-1 dgla: nothing is gauge-equivalent to e (x) eps
    ng = tensor_nilpotent(F.f1_dgla(), truncated_polynomial_algebra(1, 2))
    y = ng.tensor_element({1: [Q(1)]}, 0)
    assert gauge_equivalent(ng, {}, y).status == "not_equivalent"


def test_gauge_inconclusive_at_higher_weight():
    # F7 has no degree 0 at all, so the stage-2 failure cannot be certified
    ng = tensor_nilpotent(F.f7_dgla(), truncated_polynomial_algebra(1, 3))
    y = ng.tensor_element({2: [Q(1)]}, 1)   # y (x) eps^2, closed and MC... but
    # gauge equivalence is asked in degree 1; use a degree-1 representative
    y1 = ng.tensor_element({1: [Q(1)]}, 1)  # x (x) eps^2 is MC (eps^4 = 0)
    assert is_mc(ng, y1)
    res = gauge_equivalent(ng, {}, y1)
    assert res.status == "inconclusive"


# ---------------------------------------------------------------------------
# obstruction calculus

def test_f7_obstruction_is_half_y():
    ng = tensor_nilpotent(F.f7_dgla(), truncated_polynomial_algebra(1, 3))
    seed = ng.tensor_element({1: [Q(1)]}, 0)
    result = mc_extend(ng, seed)
    assert result.status == "obstructed"
    ob = result.obstruction
    assert ob.weight == 2
    assert ob.classes == {"e^2": [Q(1, 2)]}
    assert not ob.vanishes


def test_f7_single_step_matches():
    ng = tensor_nilpotent(F.f7_dgla(), truncated_polynomial_algebra(1, 3))
    seed = ng.tensor_element({1: [Q(1)]}, 0)
    step = mc_extend_order(ng, seed)
    assert step.status == "obstructed"
    assert step.obstruction.classes == {"e^2": [Q(1, 2)]}


def test_f6_unobstructed_to_order_four():
    g = F.f6_dgla()
    ng = tensor_nilpotent(g, truncated_polynomial_algebra(1, 5))
    seed = ng.tensor_element({1: [Q(1)]}, 0)
    result = mc_extend(ng, seed)
    assert result.status == "solved"
    assert is_mc(ng, result.element)
    ob = mc_obstruction(ng, result.element)
    assert ob is None or ob.vanishes


def test_obstruction_independent_of_correction_choice():
    # an unobstructed nonabelian case: gl_2 has H^2 = 0, everything extends
    ng = tensor_nilpotent(F.f2_dgla(), truncated_polynomial_algebra(1, 4))
    seed = {}
    result = mc_extend(ng, seed)
    assert result.status == "solved"


# ---------------------------------------------------------------------------
# BCH against an exact matrix oracle

def n3_dgla() -> Dgla:
    """Strictly upper-triangular 3x3 matrices: basis e12, e13, e23."""
    space = GradedVectorSpace({0: ("e12", "e13", "e23")})
    cx = Complex(space, zero_map(space, space, 1))
    z = [Q(0)] * 3
    table = [
        [list(z), list(z), [Q(0), Q(1), Q(0)]],
        [list(z), list(z), list(z)],
        [[Q(0), Q(-1), Q(0)], list(z), list(z)],
    ]
    return Dgla(cx, {(0, 0): table})


def to_matrix(v):
    a, b, c = v
    return [[Q(0), a, b], [Q(0), Q(0), c], [Q(0), Q(0), Q(0)]]


def mat_mul(x, y):
    return [[sum(x[i][k] * y[k][j] for k in range(3)) for j in range(3)]
            for i in range(3)]


def mat_exp(n):
    # n^3 = 0 exactly
    n2 = mat_mul(n, n)
    return [[(Q(1) if i == j else Q(0)) + n[i][j] + n2[i][j] / 2
             for j in range(3)] for i in range(3)]


def mat_log(m):
    n = [[m[i][j] - (Q(1) if i == j else Q(0)) for j in range(3)] for i in range(3)]
    n2 = mat_mul(n, n)
    return [[n[i][j] - n2[i][j] / 2 for j in range(3)] for i in range(3)]


def test_bch_matches_matrix_logarithm():
    g = n3_dgla()
    for _ in range(25):
        xv = [Q(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(3)]
        yv = [Q(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(3)]
        z = bch(g.bracket, {0: xv}, {0: yv}, 4)
        m = mat_log(mat_mul(mat_exp(to_matrix(xv)), mat_exp(to_matrix(yv))))
        expect = [m[0][1], m[0][2], m[1][2]]
        assert z.get(0, [Q(0)] * 3) == expect


# ---------------------------------------------------------------------------
# pi1 at the zero deformation

@pytest.mark.parametrize("order,dim", [(2, 4), (3, 8)])
def test_pi1_gl2(order, dim):
    p = pi1_at_zero(F.f2_dgla(), truncated_polynomial_algebra(1, order))
    assert p.dimension == dim
    assert p.stabilizer_trivial


def test_pi1_group_laws():
    a2 = truncated_polynomial_algebra(1, 3)
    g = F.f2_dgla()
    pi1_at_zero(g, a2)
    ng = tensor_nilpotent(g, a2)
    for _ in range(10):
        a, b, c = sparse(ng, 0), sparse(ng, 0), sparse(ng, 0)
        ab_c = pi1_multiply(ng, pi1_multiply(ng, a, b), c)
        a_bc = pi1_multiply(ng, a, pi1_multiply(ng, b, c))
        assert vec_eq(ab_c, a_bc)
        inv = pi1_inverse(a)
        assert pi1_multiply(ng, a, inv) == {}


def test_pi1_rejects_nonzero_differential():
    with pytest.raises(StructuralError):
        pi1_at_zero(F.f3_dgla(), truncated_polynomial_algebra(1, 2))


def test_f3_irrelevant_stabilizer_nonzero():
    ng = tensor_nilpotent(F.f3_dgla(), truncated_polynomial_algebra(1, 2))
    stab = irrelevant_stabilizer(ng, {})
    assert len(stab) == 1


def test_gl2_irrelevant_stabilizer_zero():
    ng = tensor_nilpotent(F.f2_dgla(), truncated_polynomial_algebra(1, 2))
    assert irrelevant_stabilizer(ng, {}) == []


# ---------------------------------------------------------------------------
# gauge paths

def test_gauge_path_is_mc_in_the_path_dgla():
    ng = tensor_nilpotent(F.f2_dgla(), truncated_polynomial_algebra(1, 3))
    for _ in range(5):
        alpha = sparse(ng, 0)
        x = gauge_act(ng, sparse(ng, 0), {})
        gamma = gauge_path(ng, alpha, x)
        residual = path_add(path_d(gamma),
                            path_scale(Q(1, 2), path_bracket(gamma, gamma)))
        assert residual.is_zero()
        assert vec_eq(gamma.eval_p(Q(0)), x)
        assert vec_eq(gamma.eval_p(Q(1)), gauge_act(ng, alpha, x))
