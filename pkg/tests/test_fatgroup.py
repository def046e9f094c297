from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from artifact import fatgroup as fg
from artifact import matrix as mx
from artifact import sampling as S
from artifact.scalars import JETS, Jet

seeds = st.integers(min_value=0, max_value=10**9)
ONE = fg.CoreAnchorDatum(1, 1, ((F(1),),))


def m1(x):
    return ((F(x),),)


def test_product_without_anchor_is_addition():
    d = fg.CoreAnchorDatum(2, 3, mx.zeros(3, 2))
    rng = S.rng_of(0)
    f1, f2 = S.matrix(rng, 2, 3), S.matrix(rng, 2, 3)
    assert fg.k_mul(d, f1, f2) == mx.add(f1, f2)
    assert fg.k_inv(d, f1) == mx.neg(f1)
    assert fg.ad_b(d, f1) == mx.identity(3) and fg.ad_c(d, f1) == mx.identity(2)
    assert fg.k_bracket(d, f1, f2) == mx.zeros(2, 3)
    tau, z = S.vector(rng, 5), S.vector(rng, 5)
    assert fg.dual_pairing(d, tau, z) == mx.dot(tau[3:], z[:2]) + mx.dot(tau[:3], z[2:])


def test_scalar_worked_values():
    assert fg.k_mul(ONE, m1(1), m1(1)) == m1(3)
    assert fg.ad_b(ONE, m1(3)) == m1(F(1, 4)) == mx.matmul(fg.ad_b(ONE, m1(1)), fg.ad_b(ONE, m1(1)))
    assert fg.k_inv(ONE, m1(1)) == m1(F(-1, 2))
    assert fg.k_mul(ONE, m1(1), m1(F(-1, 2))) == m1(0)
    assert fg.k_inv(ONE, m1(0)) == m1(0)
    z = (F(0), F(1))
    assert fg.left_translate(ONE, m1(1), z) == (F(1, 2), F(1, 2))
    assert fg.source(ONE, fg.left_translate(ONE, m1(1), z)) == fg.source(ONE, z) == (1,)
    assert fg.k_bracket(ONE, m1(1), m1(2)) == m1(0)
    c, b, beta = F(2), F(5), F(3)
    assert fg.dual_pairing(ONE, (beta, F(0)), (c, b)) == beta * (b + c)


def test_unit_and_identity_translations():
    rng = S.rng_of(3)
    d = S.core_anchor_datum(rng)
    f = S.k_element(rng, d)
    z = d.zero()
    assert fg.k_mul(d, f, z) == f
    n = d.c + d.b
    assert fg.left_translate_matrix(d, z) == mx.identity(n)
    assert fg.ad_b(d, z) == mx.identity(d.b) and fg.ad_cstar(d, z) == mx.identity(d.c)
    core = S.vector(rng, d.c) + (F(0),) * d.b
    assert fg.left_translate(d, f, core) == core
    tau = (F(0),) * d.b + S.vector(rng, d.c)
    assert fg.dual_pairing(d, tau, core) == mx.dot(tau[d.b:], core[:d.c])


def test_identity_anchor_gives_general_linear_group():
    d = fg.CoreAnchorDatum(2, 2, mx.identity(2))
    f = ((F(1), F(2)), (F(0), F(3)))
    ref = (sp.eye(2) + sp.Matrix(f)).inv()
    assert fg.ad_b(d, f) == tuple(tuple(F(int(x.p), int(x.q)) for x in ref.row(i)) for i in range(2))
    g = ((F(-1), F(1)), (F(2), F(0)))
    # Ad^B is a homomorphism into GL(B)
    assert fg.ad_b(d, fg.k_mul(d, f, g)) == mx.matmul(fg.ad_b(d, f), fg.ad_b(d, g))


def test_outside_k_is_rejected():
    with pytest.raises(fg.NotInK):
        fg.k_mul(ONE, m1(-1), m1(0))


def _oracle_ad_b(d, f):
    m = sp.eye(d.b) + sp.Matrix(d.rho) * sp.Matrix(f) if d.b and d.c else sp.eye(d.b)
    inv = m.inv()
    return tuple(tuple(F(int(x.p), int(x.q)) for x in inv.row(i)) for i in range(d.b))


@given(seed=seeds)
def test_group_axioms(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng)
    f1, f2, f3 = (S.k_element(rng, d) for _ in range(3))
    assert fg.k_mul(d, fg.k_mul(d, f1, f2), f3) == fg.k_mul(d, f1, fg.k_mul(d, f2, f3))
    z = d.zero()
    assert fg.k_mul(d, z, f1) == f1 == fg.k_mul(d, f1, z)
    inv = fg.k_inv(d, f1)
    assert fg.k_mul(d, f1, inv) == z == fg.k_mul(d, inv, f1)
    assert fg.k_mul(d, f1, f2) == fg.k_mul_factored(d, f1, f2)


@given(seed=seeds)
def test_actions_are_homomorphisms(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng)
    f1, f2 = S.k_element(rng, d), S.k_element(rng, d)
    f12 = fg.k_mul(d, f1, f2)
    assert fg.ad_b(d, f1) == _oracle_ad_b(d, f1)
    for act in (fg.ad_b, fg.ad_c, fg.left_translate_matrix, fg.right_translate_inv_matrix):
        assert fg.action_orientation(d, f1, f2, lambda f: act(d, f)) in ("homomorphism", "both")
    assert fg.left_translate_matrix(d, f12) == mx.matmul(fg.left_translate_matrix(d, f1),
                                                         fg.left_translate_matrix(d, f2))


@given(seed=seeds)
def test_source_target_equivariance(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng)
    f = S.k_element(rng, d)
    z = S.vector(rng, d.c + d.b)
    adb = fg.ad_b(d, f)
    lz, rz = fg.left_translate(d, f, z), fg.right_translate_inv(d, f, z)
    assert fg.source(d, lz) == fg.source(d, z)
    assert fg.target(d, lz) == mx.matvec(adb, fg.target(d, z))
    assert fg.source(d, rz) == mx.matvec(adb, fg.source(d, z))
    assert fg.target(d, rz) == fg.target(d, z)


@given(seed=seeds)
def test_pairing_invariance(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng)
    f = S.k_element(rng, d)
    z, tau = S.vector(rng, d.c + d.b), S.vector(rng, d.b + d.c)
    base = fg.dual_pairing(d, tau, z)
    assert fg.dual_pairing(d, fg.dual_left_translate(d, f, tau), fg.left_translate(d, f, z)) == base
    assert fg.dual_pairing(d, fg.dual_right_translate_inv(d, f, tau), fg.right_translate_inv(d, f, z)) == base


@given(seed=seeds)
def test_first_order_jets_give_infinitesimal_actions(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng, max_dim=4)
    h = S.matrix(rng, d.c, d.b)
    jd = fg.CoreAnchorDatum(d.c, d.b, d.rho, JETS)
    f = tuple(tuple(Jet(F(0), x) for x in r) for r in h)
    for act, inf in ((fg.ad_b, fg.ad_b_inf), (fg.ad_c, fg.ad_c_inf)):
        m = act(jd, f)
        value = tuple(tuple(x.a for x in r) for r in m)
        deriv = tuple(tuple(x.b for x in r) for r in m)
        assert value == mx.identity(len(m))
        assert deriv == inf(d, h)
    assert fg.ad_b_inf(d, h) == mx.neg(mx.matmul(d.rho, h, cols=d.c))


@given(seed=seeds)
def test_bracket_is_antisymmetric(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng)
    h1, h2 = S.matrix(rng, d.c, d.b), S.matrix(rng, d.c, d.b)
    assert fg.k_bracket(d, h1, h1) == d.zero()
    assert fg.k_bracket(d, h1, h2) == mx.neg(fg.k_bracket(d, h2, h1))
