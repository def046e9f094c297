"""The integration relation over a point and the structures built from it.

Notation: ``d`` is the double (dimension ``N``), ``g`` the Lagrangian
subalgebra (dimension ``n = N/2``) with its canonical basis, ``g*`` in the
dual basis. A ``T G`` fiber vector at a group element is ``(xi, tau)`` in
``g (+) g*`` (left trivialization) with the duality pairing.

``R_g`` is a relation from the ``T G`` fiber to ``Pair(d) = d (+) dbar``; its
graph has coordinates ``(zeta', zeta, xi, tau)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .fatgroup import CoreAnchorDatum
from .liealg import GroupElement, ManinTriple, group_identity, validate_group_element
from .linrel import (
    LinearRelation,
    MetrizedSpace,
    Subspace,
    backward_image,
    direct_sum,
    image,
    intersect,
    is_manin_morphism,
    kernel,
    project,
)
from .scalars import JETS, Jet


class NotAGraph(AssertionError):
    """A backward image that should be the graph of a map is not."""


class NotComposable(ValueError):
    pass


# -- coordinates -----------------------------------------------------------

def inc(t: ManinTriple):
    """``g -> d``."""
    return t.g_inclusion()


def pr(t: ManinTriple):
    """``d -> g*``."""
    return t.pr_dual()


def g_coords_matrix(t: ManinTriple):
    """Left inverse of ``inc``: reads the canonical coordinates of a vector of ``g``."""
    f = t.field
    return tuple(mx.unit_vector(t.dim, p, f) for p in t.lagrangian.pivots)


def ad_g(t: ManinTriple, g: GroupElement):
    """``Ad_g`` restricted to ``g`` in canonical coordinates."""
    return mx.chain(g_coords_matrix(t), g.matrix, inc(t), field=t.field)


def coad_g(t: ManinTriple, g: GroupElement):
    """``Ad_g`` on ``g*``: ``(Ad_g tau)(x) = tau(Ad_{g^-1} x)``."""
    return mx.transpose(ad_g(t, g.inverse()))


def tg_space(t: ManinTriple) -> MetrizedSpace:
    return MetrizedSpace.split(t.n, t.field)


def pair_space(t: ManinTriple) -> MetrizedSpace:
    return t.metric.oplus(t.metric.reversed())


def _zeros(k, f):
    return tuple(f.zero for _ in range(k))


# -- the relation ----------------------------------------------------------

@dataclass(frozen=True)
class IntegrationRelation:
    triple: ManinTriple
    g: GroupElement
    relation: LinearRelation

    @property
    def graph(self) -> Subspace:
        return self.relation.graph


def spanning_vectors(t: ManinTriple, g: GroupElement):
    """``(0, s, s, 0)`` for ``s`` in g and ``(Ad_g z, z, 0, -pr z)`` for ``z`` in d."""
    f, N, n = t.field, t.dim, t.n
    vecs = []
    for i, s in enumerate(t.lagrangian.basis):
        vecs.append(_zeros(N, f) + tuple(s) + mx.unit_vector(n, i, f) + _zeros(n, f))
    p = pr(t)
    for z in t.algebra.basis():
        vecs.append(g.act(z) + z + _zeros(n, f) + tuple(-x for x in mx.matvec(p, z, f)))
    return vecs


def left_conditions(t: ManinTriple, g: GroupElement) -> Subspace:
    """``inc xi = zeta - Ad_{g^-1} zeta'`` and ``tau = -pr zeta``."""
    f, N, n = t.field, t.dim, t.n
    ginv = g.inverse().matrix
    ident, i_g, p = mx.identity(N, f), inc(t), pr(t)
    first = mx.hstack(ginv, mx.neg(ident), i_g, mx.zeros(N, n, f))
    second = mx.hstack(mx.zeros(n, N, f), p, mx.zeros(n, n, f), mx.identity(n, f))
    return kernel(mx.vstack(first, second), 2 * N + 2 * n, f)


def right_conditions(t: ManinTriple, g: GroupElement) -> Subspace:
    """``Ad_g inc xi = Ad_g zeta - zeta'`` and ``Ad_g tau = -pr zeta'``."""
    f, N, n = t.field, t.dim, t.n
    gm, p = g.matrix, pr(t)
    first = mx.hstack(mx.identity(N, f), mx.neg(gm), mx.matmul(gm, inc(t), f), mx.zeros(N, n, f))
    second = mx.hstack(p, mx.zeros(n, N, f), mx.zeros(n, n, f), coad_g(t, g))
    return kernel(mx.vstack(first, second), 2 * N + 2 * n, f)


def build_R(t: ManinTriple, g: GroupElement, validate: bool = True) -> IntegrationRelation:
    if validate:
        validate_group_element(t, g)
    f = t.field
    graph = Subspace.span(spanning_vectors(t, g), 2 * t.dim + 2 * t.n, f)
    if graph != left_conditions(t, g):
        raise AssertionError("spanning vectors do not match the defining conditions")
    rel = LinearRelation(pair_space(t), tg_space(t), graph)
    return IntegrationRelation(t, g, rel)


def check_alt_form(rel: IntegrationRelation) -> dict:
    """Left- and right-translated descriptions of ``R_g`` agree.

    ``core``: the two core conditions cut out the same subspace.
    ``anchor``: given the core condition, ``t(x) = alpha(zeta')`` iff ``s(x) = alpha(zeta)``.
    """
    t, g = rel.triple, rel.g
    f, N, n = t.field, t.dim, t.n
    total = 2 * N + 2 * n
    ginv = g.inverse().matrix
    gm, p, ident = g.matrix, pr(t), mx.identity(N, f)
    core_left = kernel(mx.hstack(ginv, mx.neg(ident), inc(t), mx.zeros(N, n, f)), total, f)
    core_right = kernel(mx.hstack(ident, mx.neg(gm), mx.matmul(gm, inc(t), f), mx.zeros(N, n, f)), total, f)
    src = kernel(mx.hstack(mx.zeros(n, N, f), p, mx.zeros(n, n, f), mx.identity(n, f)), total, f)
    tgt = kernel(mx.hstack(p, mx.zeros(n, N, f), mx.zeros(n, n, f), coad_g(t, g)), total, f)
    return {
        "core": core_left == core_right,
        "anchor": intersect(core_left, src) == intersect(core_left, tgt),
        "relation": intersect(core_left, src) == rel.graph,
    }


def tangent_consistency(rel: IntegrationRelation) -> bool:
    """Tangent part of ``R_g`` is ``{(u, s, s - Ad_{g^-1} u)}`` for ``s, u`` in g."""
    t, g = rel.triple, rel.g
    f, N, n = t.field, t.dim, t.n
    total = 2 * N + 2 * n
    gg = t.lagrangian
    tangent = direct_sum(gg, gg, Subspace.full(n, f), Subspace.zero(n, f))
    part = intersect(rel.graph, tangent)
    gi = g.inverse()
    rd = g_coords_matrix(t)
    vecs = []
    for s in gg.basis:
        vecs.append(_zeros(N, f) + tuple(s) + mx.matvec(rd, s, f) + _zeros(n, f))
    for u in gg.basis:
        back = mx.matvec(rd, gi.act(u), f)
        vecs.append(tuple(u) + _zeros(N, f) + tuple(-x for x in back) + _zeros(n, f))
    return part == Subspace.span(vecs, total, f)


def check_manin_morphism_R(rel: IntegrationRelation) -> bool:
    t = rel.triple
    f, n = t.field, t.n
    a1 = Subspace.coordinates(2 * n, range(n), f)
    a2 = direct_sum(t.lagrangian, t.lagrangian)
    return is_manin_morphism(rel.relation, a1, a2)


def is_lagrangian_R(rel: IntegrationRelation) -> bool:
    return rel.relation.is_lagrangian() and 2 * rel.graph.dim == 3 * rel.triple.dim


# -- the groupoid T G over a point -----------------------------------------

def tg_source(t: ManinTriple, x):
    return tuple(x[2])


def tg_target(t: ManinTriple, x):
    g, _, tau = x
    return mx.matvec(coad_g(t, g), tau, t.field)


def tg_compose(t: ManinTriple, x1, x2):
    """``(g1, xi1, tau1) o (g2, xi2, tau2) = (g1 g2, Ad_{g2^-1} xi1 + xi2, tau2)``."""
    g1, xi1, tau1 = x1
    g2, xi2, tau2 = x2
    f = t.field
    if any(not f.is_zero(a - b) for a, b in zip(tau1, tg_target(t, x2))):
        raise NotComposable("source of the first factor differs from target of the second")
    moved = mx.matvec(ad_g(t, g2.inverse()), xi1, f)
    return (g1 @ g2, tuple(a + b for a, b in zip(moved, xi2)), tuple(tau2))


def tg_unit(t: ManinTriple, tau):
    return (group_identity(t), _zeros(t.n, t.field), tuple(tau))


def tg_inverse(t: ManinTriple, x):
    g, xi, tau = x
    f = t.field
    return (g.inverse(), tuple(-a for a in mx.matvec(ad_g(t, g), xi, f)), mx.matvec(coad_g(t, g), tau, f))


def tg_equal(t: ManinTriple, x, y) -> bool:
    f = t.field
    return (mx.equal(x[0].matrix, y[0].matrix, f) and mx.equal((x[1],), (y[1],), f)
            and mx.equal((x[2],), (y[2],), f))


def groupoid_product(t: ManinTriple, r1: IntegrationRelation, r2: IntegrationRelation) -> Subspace:
    """All products ``(x1, p1) o (x2, p2)`` of composable elements of ``R_g1`` and ``R_g2``."""
    f, N, n = t.field, t.dim, t.n
    size = 2 * N + 2 * n
    both = direct_sum(r1.graph, r2.graph)
    # unknowns: (zp, za, xi1, tau1, zb, zpp, xi2, tau2)
    eqs = []
    for i in range(N):
        row = [f.zero] * (2 * size)
        row[N + i], row[size + i] = f.one, -f.one
        eqs.append(row)
    cg = coad_g(t, r2.g)
    for i in range(n):
        row = [f.zero] * (2 * size)
        row[2 * N + n + i] = f.one
        for j in range(n):
            row[size + 2 * N + n + j] = -cg[i][j]
        eqs.append(row)
    fiber = intersect(both, kernel(eqs, 2 * size, f))
    back = ad_g(t, r2.g.inverse())
    out = []
    for v in fiber.basis:
        zp, xi1 = v[:N], v[2 * N:2 * N + n]
        w = v[size:]
        zpp, xi2, tau2 = w[N:2 * N], w[2 * N:2 * N + n], w[2 * N + n:]
        xi = tuple(a + b for a, b in zip(mx.matvec(back, xi1, f), xi2))
        out.append(tuple(zp) + tuple(zpp) + xi + tuple(tau2))
    return Subspace.span(out, size, f)


def check_subgroupoid(t: ManinTriple, g1: GroupElement, g2: GroupElement) -> bool:
    r1, r2 = build_R(t, g1), build_R(t, g2)
    return groupoid_product(t, r1, r2) == build_R(t, g1 @ g2).graph


# -- invariant vector fields and their brackets ----------------------------

def _jet_group(t: ManinTriple, g: GroupElement, x):
    """``Ad`` of ``g exp(d x)`` as a jet matrix: ``Ad_g (1 + d ad_x)``."""
    ad = t.algebra.ad(x)
    gm = g.matrix
    return tuple(
        tuple(Jet(gm[i][j], sum((gm[i][k] * ad[k][j] for k in range(t.dim)), t.field.zero))
              for j in range(t.dim))
        for i in range(t.dim)
    )


def left_field(s):
    return lambda t, adm, field: tuple(field.coerce(x) for x in s)


def right_field(u):
    """``g -> Ad_{g^-1} u``."""
    def value(t, adm, field):
        inv = mx.inverse(adm, field)
        return mx.matvec(inv, tuple(field.coerce(x) for x in u), field)
    return value


def _eval(t, X, g):
    return X(t, g.matrix, t.field)


def _derivative(t, Y, g, direction):
    adm = _jet_group(t, g, direction)
    vals = Y(t, adm, JETS)
    return tuple(v.b for v in vals)


def field_bracket(t: ManinTriple, X, Y, g: GroupElement):
    """``[X, Y](g) = D_X Y - D_Y X + [X(g), Y(g)]`` in left trivialization."""
    xg, yg = _eval(t, X, g), _eval(t, Y, g)
    dxy = _derivative(t, Y, g, xg)
    dyx = _derivative(t, X, g, yg)
    br = t.algebra.bracket(xg, yg)
    return tuple(a - b + c for a, b, c in zip(dxy, dyx, br))


def bracket_relations_jet(t: ManinTriple, g: GroupElement, s1, s2) -> dict:
    """The three bracket relations of left- and right-invariant fields at ``g``."""
    f = t.field
    br = t.algebra.bracket(s1, s2)
    ll = field_bracket(t, left_field(s1), left_field(s2), g)
    rr = field_bracket(t, right_field(s1), right_field(s2), g)
    lr = field_bracket(t, left_field(s1), right_field(s2), g)
    rr_expected = tuple(-x for x in right_field(br)(t, g.matrix, f))
    eq = lambda a, b: mx.equal((a,), (b,), f)
    return {
        "left-left": eq(ll, br),
        "right-right": eq(rr, rr_expected),
        "left-right": eq(lr, _zeros(t.dim, f)),
    }


# -- bivectors ---------------------------------------------------------------

def bivector_graph(t: ManinTriple, g: GroupElement, complement: Subspace | None = None) -> Subspace:
    h = t.complement if complement is None else complement
    if h is None:
        raise ValueError("a Lagrangian complement is required")
    rel = build_R(t, g)
    return backward_image(rel.relation, direct_sum(h, h))


def graph_to_map(w: Subspace, n: int, field):
    """Read ``w`` as ``{(P tau, tau)}`` and return ``P`` (``n x n``)."""
    if w.dim != n:
        raise NotAGraph(f"backward image has dimension {w.dim}, expected {n}: {w.basis}")
    xs = tuple(v[:n] for v in w.basis)
    ts = tuple(v[n:] for v in w.basis)
    try:
        tinv = mx.inverse(ts, field)
    except ZeroDivisionError:
        raise NotAGraph(f"backward image is not a graph over g*: {w.basis}") from None
    # rows: w_i = (x_i, t_i); P t_i = x_i  =>  P = X^T (T^T)^-1
    return mx.matmul(mx.transpose(xs, n), mx.transpose(tinv), field)


def extract_bivector(t: ManinTriple, g: GroupElement, complement: Subspace | None = None):
    """``pi(g): g* -> g`` whose graph is the backward image of ``h x h`` under ``R_g``."""
    f, n = t.field, t.n
    w = bivector_graph(t, g, complement)
    tangent = Subspace.coordinates(2 * n, range(n), f)
    if intersect(w, tangent).dim:
        raise NotAGraph(f"backward image meets the tangent part: {intersect(w, tangent).basis}")
    return graph_to_map(w, n, f)


def skew_residual(p) -> float:
    return max((float(abs(p[i][j] + p[j][i])) for i in range(len(p)) for j in range(len(p))), default=0.0)


def is_skew(p, field) -> bool:
    return all(field.is_zero(p[i][j] + p[j][i]) for i in range(len(p)) for j in range(len(p)))


def compose_tg_subspaces(t: ManinTriple, w1: Subspace, g2: GroupElement, w2: Subspace) -> Subspace:
    """``{(Ad_{g2^-1} xi1 + xi2, tau2) : tau1 = Ad_g2 tau2}`` for ``(xi_i, tau_i)`` in ``w_i``."""
    f, n = t.field, t.n
    both = direct_sum(w1, w2)
    cg = coad_g(t, g2)
    eqs = []
    for i in range(n):
        row = [f.zero] * (4 * n)
        row[n + i] = f.one
        for j in range(n):
            row[3 * n + j] = -cg[i][j]
        eqs.append(row)
    fiber = intersect(both, kernel(eqs, 4 * n, f))
    back = ad_g(t, g2.inverse())
    out = []
    for v in fiber.basis:
        xi = tuple(a + b for a, b in zip(mx.matvec(back, v[:n], f), v[2 * n:3 * n]))
        out.append(xi + tuple(v[3 * n:]))
    return Subspace.span(out, 2 * n, f)


def check_bivector_multiplicative(t: ManinTriple, g1, g2, complement=None) -> bool:
    w1 = bivector_graph(t, g1, complement)
    w2 = bivector_graph(t, g2, complement)
    return compose_tg_subspaces(t, w1, g2, w2) == bivector_graph(t, g1 @ g2, complement)


# -- the linearized relation R0 --------------------------------------------

def flip_space(t: ManinTriple) -> MetrizedSpace:
    """``d (+) d`` with the tangent-lift form ``<x_v, y_t> + <x_t, y_v>``."""
    f, N = t.field, t.dim
    z = mx.zeros(N, N, f)
    return MetrizedSpace(2 * N, mx.block([[z, t.metric.form], [t.metric.form, z]]), f)


def build_R0_point(t: ManinTriple, a) -> LinearRelation:
    """Relation from the ``T g`` fiber at ``a`` to ``d (+) d``.

    Spanned by ``((x, 0), (x, 0))`` for ``x`` in g and
    ``((ad_a z, z), (0, pr z))`` for ``z`` in d.
    """
    f, N, n = t.field, t.dim, t.n
    a = tuple(f.coerce(x) for x in a)
    if not t.lagrangian.contains(a):
        raise ValueError("base point must lie in g")
    vecs = []
    for i, s in enumerate(t.lagrangian.basis):
        vecs.append(tuple(s) + _zeros(N, f) + mx.unit_vector(n, i, f) + _zeros(n, f))
    ada, p = t.algebra.ad(a), pr(t)
    for z in t.algebra.basis():
        vecs.append(mx.matvec(ada, z, f) + tuple(z) + _zeros(n, f) + mx.matvec(p, z, f))
    graph = Subspace.span(vecs, 2 * N + 2 * n, f)
    return LinearRelation(flip_space(t), tg_space(t), graph)


def r0_report(t: ManinTriple, a) -> dict:
    """Dimension and Lagrangian status of ``R0`` under the tangent-lift metric."""
    rel = build_R0_point(t, a)
    return {"dim": rel.graph.dim, "expected_dim": 3 * t.dim // 2, "lagrangian": rel.is_lagrangian()}


# -- the canonical comorphism over a trivial base ---------------------------

def _plain(k, f):
    return MetrizedSpace(k, mx.zeros(k, k, f), f)


def build_S_trivial_base(d: CoreAnchorDatum) -> LinearRelation:
    """``x = zeta^L - zeta'^R = (zeta - zeta', rho zeta')``.

    Target ``Pair(C)`` with coordinates ``(zeta', zeta)``, source ``C (+) B``.
    The spaces carry zero forms; only the linear structure is used.
    """
    f, c, b = d.field, d.c, d.b
    vecs = []
    for i in range(c):
        e = mx.unit_vector(c, i, f)
        # zeta' = e
        vecs.append(e + _zeros(c, f) + tuple(-x for x in e) + mx.matvec(d.rho, e, f))
        # zeta = e
        vecs.append(_zeros(c, f) + e + e + _zeros(b, f))
    return LinearRelation(_plain(2 * c, f), _plain(c + b, f), Subspace.span(vecs, 3 * c + b, f))


def s_alt_conditions(d: CoreAnchorDatum) -> Subspace:
    """``t(x) = rho zeta'`` and ``[x] = zeta - zeta'`` for ``x = (x_c, x_b)``."""
    f, c, b = d.field, d.c, d.b
    eqs = []
    for i in range(b):
        row = [f.zero] * (3 * c + b)
        row[3 * c + i] = f.one
        for j in range(c):
            row[j] = -d.rho[i][j]
        eqs.append(row)
    for i in range(c):
        row = [f.zero] * (3 * c + b)
        row[2 * c + i] = f.one
        row[c + i] = -f.one
        row[i] = f.one
        eqs.append(row)
    return kernel(eqs, 3 * c + b, f)


def j_compose(d: CoreAnchorDatum, x1, x2):
    """``(c1, b1) o (c2, b2) = (c1 + c2, b1)`` when ``s(x1) = t(x2)``."""
    from .fatgroup import source, split, target

    if any(not d.field.is_zero(p - q) for p, q in zip(source(d, x1), target(d, x2))):
        raise NotComposable("source of the first factor differs from target of the second")
    c1, b1 = split(d, x1)
    c2, _ = split(d, x2)
    return tuple(p + q for p, q in zip(c1, c2)) + b1


def s_is_subgroupoid(d: CoreAnchorDatum) -> bool:
    """Composable pairs in ``S`` compose (in ``J`` and in ``Pair(C)``) back into ``S``."""
    f, c, b = d.field, d.c, d.b
    s = build_S_trivial_base(d)
    size = 3 * c + b
    both = direct_sum(s.graph, s.graph)
    eqs = []
    # middle pair entries agree: zeta of the first equals zeta' of the second
    for i in range(c):
        row = [f.zero] * (2 * size)
        row[c + i], row[size + i] = f.one, -f.one
        eqs.append(row)
    # s(x1) = t(x2): b1 + rho c1 = b2
    for i in range(b):
        row = [f.zero] * (2 * size)
        row[3 * c + i] = f.one
        for j in range(c):
            row[2 * c + j] = row[2 * c + j] + d.rho[i][j]
        row[size + 3 * c + i] = -f.one
        eqs.append(row)
    fiber = intersect(both, kernel(eqs, 2 * size, f))
    out = []
    for v in fiber.basis:
        w = v[size:]
        x = j_compose(d, v[2 * c:size], w[2 * c:])
        out.append(tuple(v[:c]) + tuple(w[c:2 * c]) + x)
    return Subspace.span(out, size, f).issubset(s.graph)
