from fractions import Fraction as F

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

import oracles
from artifact import integrate as ig
from artifact import matrix as mx
from artifact import sampling as S
from artifact.examples import abelian_double
from artifact.fatgroup import CoreAnchorDatum, source, target
from artifact.liealg import GroupElement, InvalidGroupElement, group_exp, group_identity
from artifact.linrel import Subspace

seeds = st.integers(min_value=0, max_value=10**9)


def unit(t, i):
    return mx.unit_vector(t.dim, i, t.field)


def g_basis(t, i):
    return tuple(t.lagrangian.basis[i])


def _sym(m):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in m])


def adjoint_on_g(t, g):
    """Oracle for ``Ad_g`` on g in canonical coordinates."""
    b = _sym(t.lagrangian.basis)
    return (b * b.T).inv() * b * _sym(g.matrix) * b.T


def oracle_product(t, r1, r2):
    """Groupoid product of ``R_g1`` and ``R_g2`` solved with sympy."""
    N, n = t.dim, t.n
    a = _sym(r1.graph.basis).T
    b = _sym(r2.graph.basis).T
    coad2 = adjoint_on_g(t, r2.g.inverse()).T
    # zeta_1 = zeta'_2 and tau_1 = Ad_g2 tau_2
    top = sp.Matrix.hstack(a[N:2 * N, :], -b[:N, :])
    bottom = sp.Matrix.hstack(a[2 * N + n:, :], -coad2 * b[2 * N + n:, :])
    null = sp.Matrix.vstack(top, bottom).nullspace()
    back = adjoint_on_g(t, r2.g)
    out = []
    for v in null:
        x1 = a * v[: a.cols, :]
        x2 = b * v[a.cols:, :]
        xi = back.inv() * x1[2 * N:2 * N + n, :] + x2[2 * N:2 * N + n, :]
        out.append(list(x1[:N, :]) + list(x2[N:2 * N, :]) + list(xi) + list(x2[2 * N + n:, :]))
    return out


def heis_pairs(heis, count, seed):
    rng = S.rng_of(seed)
    return [(S.group_element(rng, heis), S.group_element(rng, heis)) for _ in range(count)]


# -- build_R ------------------------------------------------------------------

def test_units_map_to_units(heis):
    rel = ig.build_R(heis, group_identity(heis))
    for i in range(heis.n):
        z = g_basis(heis, i)
        assert rel.relation.relates(z + z, (F(0),) * (2 * heis.n))


def test_abelian_relation_shape():
    t = abelian_double(2)
    N, n = t.dim, t.n
    rng = S.rng_of(3)
    expected = []
    for k in range(N):
        e = unit(t, k)
        expected.append(e + e + (F(0),) * n + tuple(-x for x in e[n:]))
    for i in range(n):
        e = unit(t, i)
        expected.append((F(0),) * N + e + e[:n] + (F(0),) * n)
    want = oracles.canonical(expected, 2 * N + 2 * n)
    for g in [group_identity(t)] + [S.group_element(rng, t) for _ in range(3)]:
        assert ig.build_R(t, g).graph.canonical_text() == want


def test_heisenberg_lagrangian(heis):
    g = group_exp(heis, unit(heis, 0))
    rel = ig.build_R(heis, g)
    assert rel.graph.dim == 3 * heis.dim // 2
    assert oracles.isotropic(rel.graph.basis, rel.relation.ambient.form)
    assert ig.is_lagrangian_R(rel)


def test_build_R_rejects_invalid_element(heis):
    bad = GroupElement(mx.add(mx.identity(heis.dim), mx.identity(heis.dim)))
    with pytest.raises(InvalidGroupElement):
        ig.build_R(heis, bad)


def test_membership_constraint(heis):
    """Every graph vector has ``zeta - Ad_{g^-1} zeta'`` in g."""
    g = S.group_element(S.rng_of(8), heis)
    rel = ig.build_R(heis, g)
    N = heis.dim
    for v in rel.graph.basis:
        d = tuple(a - b for a, b in zip(v[N:2 * N], g.inverse().act(v[:N])))
        assert heis.lagrangian.contains(d)


@given(seed=seeds)
def test_relation_properties_heisenberg(heis, seed):
    g = S.group_element(S.rng_of(seed), heis)
    rel = ig.build_R(heis, g)
    assert oracles.isotropic(rel.graph.basis, rel.relation.ambient.form)
    assert rel.graph.dim == 9
    assert ig.check_manin_morphism_R(rel)
    assert all(ig.check_alt_form(rel).values())
    assert ig.tangent_consistency(rel)


# -- morphism conditions against an oracle ----------------------------------

def oracle_morphism(t, rel):
    N, n = t.dim, t.n
    gb = rel.graph.basis
    tangent = [mx.unit_vector(2 * n, i) for i in range(n)]
    fwd = oracles.forward(gb, 2 * N, 2 * n, tangent)
    gg = list(t.lagrangian.basis)
    pair_g = [list(v) + [0] * N for v in gg] + [[0] * N + list(v) for v in gg]
    lands = all(oracles.rank(pair_g + [v]) == oracles.rank(pair_g) for v in fwd)
    ker = oracles.backward(gb, 2 * N, 2 * n, [])
    ker = [v for v in ker if any(v)]
    meets = oracles.rank([v[n:] for v in ker]) < oracles.rank(ker) if ker else False
    return lands and not meets


@pytest.mark.parametrize("which", ["identity", "abelian", "heisenberg"])
def test_morphism_examples(heis, which):
    if which == "identity":
        t, g = heis, group_identity(heis)
    elif which == "abelian":
        t = abelian_double(2)
        g = S.group_element(S.rng_of(1), t)
    else:
        t, g = heis, group_exp(heis, unit(heis, 1)) @ group_exp(heis, unit(heis, 2))
    rel = ig.build_R(t, g)
    assert ig.check_manin_morphism_R(rel)
    assert oracle_morphism(t, rel)


# -- alternative description and tangent part ------------------------------

def test_alt_form_identity_is_syntactic(heis):
    e = group_identity(heis)
    assert ig.left_conditions(heis, e) == ig.right_conditions(heis, e)
    assert all(ig.check_alt_form(ig.build_R(heis, e)).values())


@pytest.mark.parametrize("name", ["abelian", "heisenberg"])
def test_alt_form_examples(heis, name):
    t = abelian_double(2) if name == "abelian" else heis
    g = S.group_element(S.rng_of(5), t)
    rel = ig.build_R(t, g)
    assert ig.left_conditions(t, g).canonical_text() == ig.right_conditions(t, g).canonical_text()
    assert all(ig.check_alt_form(rel).values())


def test_tangent_part_at_identity(heis):
    rel = ig.build_R(heis, group_identity(heis))
    assert ig.tangent_consistency(rel)
    # (tau, sigma) -> sigma - tau
    s, u = g_basis(heis, 0), g_basis(heis, 1)
    n = heis.n
    xi = heis.g_coords(tuple(a - b for a, b in zip(s, u)))
    assert rel.relation.relates(u + s, xi + (F(0),) * n)


def test_tangent_part_central(heis):
    # e2 is central in the Heisenberg algebra, so exp(e2) fixes g and sigma = tau maps to 0
    g = group_exp(heis, unit(heis, 2))
    rel = ig.build_R(heis, g)
    for i in range(heis.n):
        z = g_basis(heis, i)
        assert g.act(z) == z
        assert rel.relation.relates(z + z, (F(0),) * (2 * heis.n))
    assert ig.tangent_consistency(ig.build_R(heis, group_exp(heis, unit(heis, 0))))


# -- the T G groupoid --------------------------------------------------------

def tg_element(t, rng, g=None, tau=None):
    g = S.group_element(rng, t) if g is None else g
    xi = S.vector(rng, t.n)
    tau = S.vector(rng, t.n) if tau is None else tau
    return (g, xi, tuple(tau))


def test_tg_unit_and_inverse(heis):
    rng = S.rng_of(2)
    x = tg_element(heis, rng)
    g, xi, tau = x
    assert ig.tg_equal(heis, ig.tg_compose(heis, ig.tg_unit(heis, ig.tg_target(heis, x)), x), x)
    # solving x o y = unit(t(x)) for y: y = (g^-1, -Ad_g xi, Ad_g tau)
    ad = adjoint_on_g(heis, g)
    coad = adjoint_on_g(heis, g.inverse()).T
    y = (g.inverse(), tuple(-v for v in ad * sp.Matrix(xi)), tuple(coad * sp.Matrix(tau)))
    y = (y[0], tuple(F(int(sp.numer(v)), int(sp.denom(v))) for v in y[1]),
         tuple(F(int(sp.numer(v)), int(sp.denom(v))) for v in y[2]))
    assert ig.tg_equal(heis, ig.tg_inverse(heis, x), y)
    assert ig.tg_equal(heis, ig.tg_compose(heis, x, y), ig.tg_unit(heis, ig.tg_target(heis, x)))


def test_tg_abelian_composition():
    t = abelian_double(2)
    rng = S.rng_of(6)
    x1, x2 = tg_element(t, rng), tg_element(t, rng)
    x1 = (x1[0], x1[1], ig.tg_target(t, x2))
    assert ig.tg_target(t, x2) == x2[2]
    out = ig.tg_compose(t, x1, x2)
    assert ig.tg_equal(t, out, (x1[0] @ x2[0], tuple(a + b for a, b in zip(x1[1], x2[1])), x2[2]))


def test_tg_not_composable(heis):
    rng = S.rng_of(7)
    x2 = tg_element(heis, rng)
    tau = tuple(v + 1 for v in ig.tg_target(heis, x2))
    with pytest.raises(ig.NotComposable):
        ig.tg_compose(heis, tg_element(heis, rng, tau=tau), x2)


@given(seed=seeds)
def test_tg_groupoid_axioms(heis, seed):
    rng = S.rng_of(seed)
    x3 = tg_element(heis, rng)
    x2 = tg_element(heis, rng, tau=ig.tg_target(heis, x3))
    x1 = tg_element(heis, rng, tau=ig.tg_target(heis, x2))
    c = lambda a, b: ig.tg_compose(heis, a, b)
    assert ig.tg_equal(heis, c(c(x1, x2), x3), c(x1, c(x2, x3)))
    assert ig.tg_equal(heis, c(ig.tg_unit(heis, ig.tg_target(heis, x1)), x1), x1)
    assert ig.tg_equal(heis, c(x1, ig.tg_unit(heis, ig.tg_source(heis, x1))), x1)
    inv = ig.tg_inverse(heis, x1)
    assert ig.tg_equal(heis, c(x1, inv), ig.tg_unit(heis, ig.tg_target(heis, x1)))
    assert ig.tg_equal(heis, c(inv, x1), ig.tg_unit(heis, ig.tg_source(heis, x1)))
    assert ig.tg_source(heis, c(x1, x2)) == ig.tg_source(heis, x2)
    assert ig.tg_target(heis, c(x1, x2)) == ig.tg_target(heis, x1)


# -- subgroupoid law ----------------------------------------------------------

def test_subgroupoid_identity(heis):
    e = group_identity(heis)
    assert ig.check_subgroupoid(heis, e, e)


def test_subgroupoid_abelian():
    t = abelian_double(2)
    rng = S.rng_of(11)
    g1, g2 = S.group_element(rng, t), S.group_element(rng, t)
    assert ig.check_subgroupoid(t, g1, g2)


def test_subgroupoid_heisenberg_against_oracle(heis):
    g1, g2 = group_exp(heis, unit(heis, 0)), group_exp(heis, unit(heis, 1))
    r1, r2 = ig.build_R(heis, g1), ig.build_R(heis, g2)
    want = ig.build_R(heis, g1 @ g2).graph
    size = want.ambient_dim
    assert oracles.canonical(oracle_product(heis, r1, r2), size) == want.canonical_text()
    assert ig.groupoid_product(heis, r1, r2) == want
    assert ig.check_subgroupoid(heis, g1, g2)


@given(seed=seeds)
def test_subgroupoid_sampled(heis, seed):
    (g1, g2), = heis_pairs(heis, 1, seed)
    assert ig.check_subgroupoid(heis, g1, g2)


def test_subgroupoid_float_residual(sl2):
    rng = S.rng_of(13)
    for _ in range(3):
        g1, g2 = S.group_element(rng, sl2), S.group_element(rng, sl2)
        got = ig.groupoid_product(sl2, ig.build_R(sl2, g1), ig.build_R(sl2, g2))
        want = ig.build_R(sl2, g1 @ g2).graph
        assert got.dim == want.dim == 9
        assert oracles.span_residual(got.basis, want.basis) <= 1e-9
        assert oracles.span_residual(want.basis, got.basis) <= 1e-9


# -- the comorphism S over a trivial base ----------------------------------

def S_relates(d, zp, z, x):
    return ig.build_S_trivial_base(d).relates(tuple(zp) + tuple(z), tuple(x))


def test_S_examples():
    rng = S.rng_of(4)
    d = S.core_anchor_datum(rng, c=3, b=2)
    z = S.vector(rng, 3)
    # zeta = zeta' gives the unit over rho zeta
    assert S_relates(d, z, z, (F(0),) * 3 + mx.matvec(d.rho, z))
    zero = CoreAnchorDatum(3, 2, mx.zeros(2, 3))
    zp = S.vector(rng, 3)
    assert S_relates(zero, zp, z, tuple(a - b for a, b in zip(z, zp)) + (F(0),) * 2)
    ident = CoreAnchorDatum(2, 2, mx.identity(2))
    zp = S.vector(rng, 2)
    x = tuple(-a for a in zp) + zp
    assert S_relates(ident, zp, (F(0),) * 2, x)
    assert source(ident, x) == (0, 0) == mx.matvec(ident.rho, (F(0),) * 2)
    assert target(ident, x) == zp == mx.matvec(ident.rho, zp)


@given(seed=seeds)
def test_S_both_descriptions(seed):
    rng = S.rng_of(seed)
    d = S.core_anchor_datum(rng)
    s = ig.build_S_trivial_base(d)
    assert s.graph == ig.s_alt_conditions(d)
    assert s.graph.dim == 2 * d.c
    assert ig.s_is_subgroupoid(d)
    zp, z = S.vector(rng, d.c), S.vector(rng, d.c)
    x = tuple(a - b for a, b in zip(z, zp)) + mx.matvec(d.rho, zp)
    assert s.relates(zp + z, x)
    assert target(d, x) == mx.matvec(d.rho, zp)
    assert source(d, x) == mx.matvec(d.rho, z)


# -- brackets of invariant fields ------------------------------------------

def test_brackets_abelian():
    t = abelian_double(2)
    rng = S.rng_of(0)
    g = S.group_element(rng, t)
    s, u = t.lagrangian.basis
    zero = (F(0),) * t.dim
    for X in (ig.left_field(s), ig.right_field(s)):
        for Y in (ig.left_field(u), ig.right_field(u)):
            assert ig.field_bracket(t, X, Y, g) == zero


def test_mixed_bracket_at_identity(heis):
    e = group_identity(heis)
    rng = S.rng_of(1)
    for _ in range(5):
        s = S.vector(rng, heis.n) + (F(0),) * heis.n
        u = S.vector(rng, heis.n) + (F(0),) * heis.n
        assert ig.field_bracket(heis, ig.left_field(s), ig.right_field(u), e) == (F(0),) * heis.dim


def test_brackets_heisenberg_example(heis):
    g = group_exp(heis, unit(heis, 0))
    assert all(ig.bracket_relations_jet(heis, g, unit(heis, 1), unit(heis, 2)).values())
    # the left-left bracket of e0, e1 is e2, so the check is not vacuous
    assert ig.field_bracket(heis, ig.left_field(unit(heis, 0)), ig.left_field(unit(heis, 1)), g) == unit(heis, 2)


def test_brackets_sampled(heis):
    rng = S.rng_of(21)
    for _ in range(12):
        g = S.group_element(rng, heis)
        s = S.vector(rng, heis.n) + (F(0),) * heis.n
        u = S.vector(rng, heis.n) + (F(0),) * heis.n
        assert all(ig.bracket_relations_jet(heis, g, s, u).values())


# -- bivectors ------------------------------------------------------------------

def test_bivector_vanishes_at_identity(heis, sl2):
    for t in (heis, sl2, abelian_double(2)):
        p = ig.extract_bivector(t, group_identity(t))
        assert all(t.field.is_zero(x) for r in p for x in r)


def test_abelian_bivector_is_zero():
    t = abelian_double(2)
    rng = S.rng_of(9)
    for _ in range(5):
        p = ig.extract_bivector(t, S.group_element(rng, t))
        assert p == mx.zeros(t.n, t.n)


def bivector_oracle_residual(t, g, p):
    """Distance of ``{(p tau, tau)}`` from the backward image of ``h x h`` under ``R_g``."""
    N, n = t.dim, t.n
    rel = ig.build_R(t, g)
    h = t.complement.basis
    hh = [tuple(a) + (0,) * N for a in h] + [(0,) * N + tuple(a) for a in h]
    back = oracles.backward(rel.graph.basis, 2 * N, 2 * n, hh)
    back = [[float(x) for x in v] for v in back]
    cols = [tuple(p[i][j] for i in range(n)) + mx.unit_vector(n, j, t.field) for j in range(n)]
    return oracles.span_residual(cols, back)


def test_bivector_sl2(sl2):
    rng = S.rng_of(17)
    g = S.group_element(rng, sl2)
    p = ig.extract_bivector(sl2, g)
    assert max(abs(x) for r in p for x in r) > 1e-3
    assert ig.skew_residual(p) <= 1e-9
    arr = oracles.as_array(p)
    assert np.abs(arr + arr.T).max() <= 1e-9


def test_bivector_heisenberg_oracle(heis):
    rng = S.rng_of(18)
    for _ in range(3):
        g = S.group_element(rng, heis)
        p = ig.extract_bivector(heis, g)
        assert ig.is_skew(p, heis.field)
        assert bivector_oracle_residual(heis, g, p) <= 1e-12


def test_not_a_graph_is_reported():
    with pytest.raises(ig.NotAGraph):
        ig.graph_to_map(Subspace.coordinates(4, [0, 1]), 2, abelian_double(1).field)


def test_bivector_multiplicative_examples(heis, sl2):
    e = group_identity(heis)
    assert ig.check_bivector_multiplicative(heis, e, e)
    t = abelian_double(2)
    rng = S.rng_of(30)
    assert ig.check_bivector_multiplicative(t, S.group_element(rng, t), S.group_element(rng, t))
    for g1, g2 in heis_pairs(heis, 4, 31):
        assert ig.check_bivector_multiplicative(heis, g1, g2)
    g1, g2 = S.group_element(rng, sl2), S.group_element(rng, sl2)
    got = ig.compose_tg_subspaces(sl2, ig.bivector_graph(sl2, g1), g2, ig.bivector_graph(sl2, g2))
    want = ig.bivector_graph(sl2, g1 @ g2)
    assert oracles.span_residual(got.basis, want.basis) <= 1e-9


@given(seed=seeds)
def test_bivector_skew_sampled(heis, seed):
    p = ig.extract_bivector(heis, S.group_element(S.rng_of(seed), heis))
    assert ig.is_skew(p, heis.field)


# -- R0 ---------------------------------------------------------------------------

def test_R0_at_zero(heis):
    N, n = heis.dim, heis.n
    rel = ig.build_R0_point(heis, (0,) * N)
    p = heis.pr_dual()
    for k in range(N):
        z = unit(heis, k)
        assert rel.relates((F(0),) * N + z, (F(0),) * n + mx.matvec(p, z))
    assert rel.graph.dim == 3 * N // 2


def test_R0_abelian_independent_of_base_point():
    t = abelian_double(2)
    base = ig.build_R0_point(t, (0,) * t.dim).graph
    assert ig.build_R0_point(t, unit(t, 0)).graph == base


def test_R0_heisenberg(heis):
    rel = ig.build_R0_point(heis, unit(heis, 0))
    assert rel.graph.dim == 9
    assert oracles.isotropic(rel.graph.basis, rel.ambient.form)
    assert ig.r0_report(heis, unit(heis, 0)) == {"dim": 9, "expected_dim": 9, "lagrangian": True}


def test_R0_rejects_point_outside_g(heis):
    with pytest.raises(ValueError):
        ig.build_R0_point(heis, unit(heis, 3))
