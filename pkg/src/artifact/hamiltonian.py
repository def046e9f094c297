"""Hamiltonian spaces at the level of a single fiber.

A Hamiltonian fiber is a Lagrangian relation ``L`` from the ``T P`` fiber
``W (+) W*`` to a Manin pair fiber ``(E, A)``, together with the moment map
``Phi`` from ``T P`` to the units ``V (+) A*`` of the ``T G`` fiber.

Sign convention for the cotangent moment: ``<Phi(mu), x> = -mu(x_P)`` where
``x_P`` is the vector related to ``x`` in ``A`` under ``L``. With
``alpha = (a, -pr)`` this is the sign for which ``y ~ zeta`` implies
``Phi(y) = alpha(zeta)``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from . import matrix as mx
from .integrate import (
    IntegrationRelation,
    build_R,
    coad_g,
    tg_compose,
    tg_space,
)
from .liealg import GroupElement, ManinTriple
from .linrel import (
    DimensionError,
    LinearRelation,
    MetrizedSpace,
    Subspace,
    backward_image,
    direct_sum,
    intersect,
    is_manin_morphism,
    project,
)
from .maninrep import ManinPairFiber


@dataclass(frozen=True)
class HamiltonianFiber:
    fiber: ManinPairFiber
    P: MetrizedSpace
    L: LinearRelation
    moment: tuple | None = None

    @property
    def field(self):
        return self.fiber.field

    @property
    def w(self):
        return self.P.dim // 2

    def tangent_part(self) -> Subspace:
        return Subspace.coordinates(self.P.dim, range(self.w), self.field)

    def is_lagrangian(self) -> bool:
        return self.L.is_lagrangian()

    def is_morphism(self) -> bool:
        return is_manin_morphism(self.L, self.tangent_part(), self.fiber.A)


def fiber_of_triple(t: ManinTriple) -> ManinPairFiber:
    """The Manin pair ``(d, g)`` over a point: no anchor."""
    return ManinPairFiber(t.metric, t.lagrangian, (), courant=True, complement=t.complement)


def canonical_example(fiber: ManinPairFiber) -> HamiltonianFiber:
    """``L = gr(a_A) + gr(a_E*)`` relating ``(a_A x, mu)`` in ``V (+) V*`` to ``iota x + a* mu``.

    The moment map is ``(v, mu) -> (v, -a_A* mu)``.
    """
    if not fiber.courant:
        raise ValueError("the canonical example needs a Courant fiber")
    f, n, m, k = fiber.field, fiber.n, fiber.m, fiber.E.dim
    P = MetrizedSpace.split(m, f)
    iota, adual = fiber.iota(), fiber.anchor_dual()
    aa = fiber.anchor_a()
    vecs = []
    for i in range(n):
        x = mx.unit_vector(n, i, f)
        v = mx.matvec(aa, x, f) if m else ()
        vecs.append(mx.matvec(iota, x, f) + tuple(v) + tuple(f.zero for _ in range(m)))
    for j in range(m):
        mu = mx.unit_vector(m, j, f)
        vecs.append(mx.matvec(adual, mu, f) + tuple(f.zero for _ in range(m)) + mu)
    L = LinearRelation(fiber.E, P, Subspace.span(vecs, k + 2 * m, f))
    moment = []
    for i in range(m):
        moment.append(mx.unit_vector(2 * m, i, f))
    for l in range(n):
        moment.append(tuple(f.zero for _ in range(m)) + tuple(-aa[r][l] for r in range(m)))
    return HamiltonianFiber(fiber, P, L, tuple(moment))


def infinitesimal_action(h: HamiltonianFiber):
    """Matrix ``A -> W`` sending ``x`` to the unique ``x_P`` with ``x_P ~_L iota x``."""
    f, w, fib = h.field, h.w, h.fiber
    k = fib.E.dim
    cols = []
    for x in range(fib.n):
        ix = mx.matvec(fib.iota(), mx.unit_vector(fib.n, x, f), f)
        line = Subspace.span([ix], k, f)
        rel = intersect(h.L.graph, direct_sum(line, h.tangent_part()))
        vec = None
        for v in rel.basis:
            c = _ratio(v[:k], ix, f)
            if c is not None and not f.is_zero(c):
                vec = tuple(a / c for a in v[k:k + w])
                break
        if vec is None:
            raise ValueError("no tangent vector is related to this element of A")
        cols.append(vec)
    return mx.transpose(cols, w)


def _ratio(u, v, f):
    """``c`` with ``u = c v`` or ``None``."""
    idx = next((i for i, x in enumerate(v) if not f.is_zero(x)), None)
    if idx is None:
        return None
    c = u[idx] / v[idx]
    if all(f.is_zero(a - c * b) for a, b in zip(u, v)):
        return c
    return None


def moment_from_action(h: HamiltonianFiber, tangent_moment):
    """Assemble ``Phi = (T Phi, -x_P^T)`` from the tangent part and ``L``."""
    f, w = h.field, h.w
    act = infinitesimal_action(h)
    rows = [tuple(r) + tuple(f.zero for _ in range(w)) for r in tangent_moment]
    for l in range(h.fiber.n):
        rows.append(tuple(f.zero for _ in range(w)) + tuple(-act[r][l] for r in range(w)))
    return tuple(rows)


def moment_compat(h: HamiltonianFiber):
    """``y ~_L zeta`` implies ``Phi(y) = alpha(zeta)``; returns ``(ok, witness)``."""
    if h.moment is None:
        raise ValueError("moment map data is missing")
    f, k = h.field, h.fiber.E.dim
    am = h.fiber.alpha_matrix()
    for v in h.L.graph.basis:
        zeta, y = v[:k], v[k:]
        lhs = mx.matvec(h.moment, y, f) if h.moment else ()
        rhs = mx.matvec(am, zeta, f) if am else ()
        if not mx.equal((lhs,), (rhs,), f):
            return False, {"zeta": zeta, "y": y, "Phi(y)": lhs, "alpha(zeta)": rhs}
    return True, None


def pairing_bookkeeping(h: HamiltonianFiber, u, v) -> bool:
    """``<zeta1, zeta2> = <y1, y2>`` for related pairs given as graph vectors."""
    k = h.fiber.E.dim
    lhs = h.fiber.E.pair(u[:k], v[:k])
    rhs = h.P.pair(u[k:], v[k:])
    return h.field.is_zero(lhs - rhs)


def bivector_of_complement(h: HamiltonianFiber, complement: Subspace):
    """Backward image of ``complement`` under ``L`` read as a map ``W* -> W``."""
    from .integrate import graph_to_map

    w = backward_image(h.L, complement)
    if intersect(w, h.tangent_part()).dim:
        raise AssertionError("backward image meets the tangent part")
    return graph_to_map(w, h.w, h.field)


# -- the group acting on itself ---------------------------------------------

def group_space_example(t: ManinTriple, p: GroupElement, complement: Subspace | None = None) -> HamiltonianFiber:
    """``P = G`` with left multiplication; ``L_p = R_p`` closed off by ``h`` in the second factor.

    ``y ~_L zeta'`` iff ``y ~_R (zeta', zeta)`` for some ``zeta`` in ``h``. The
    moment map is the target of ``T G``.
    """
    hh = t.complement if complement is None else complement
    if hh is None:
        raise ValueError("a Lagrangian complement is required")
    f, N, n = t.field, t.dim, t.n
    rel = build_R(t, p)
    cut = intersect(rel.graph, direct_sum(Subspace.full(N, f), hh, Subspace.full(2 * n, f)))
    keep = list(range(N)) + list(range(2 * N, 2 * N + 2 * n))
    L = LinearRelation(t.metric, tg_space(t), project(cut, keep))
    moment = mx.hstack(mx.zeros(n, n, f), coad_g(t, p))
    return HamiltonianFiber(fiber_of_triple(t), tg_space(t), L, moment)


@dataclass(frozen=True)
class ActionData:
    """Graph of ``(x, y) -> x . y`` as a subspace of ``(y', x, y)``.

    ``x`` lives in the ``T G`` fiber at ``g`` (dimension ``2n``), ``y`` in the
    ``T P`` fiber at ``p`` and ``y'`` in the one at ``g p``.
    """

    g: GroupElement
    graph: Subspace
    x_dim: int
    y_dim: int


def group_action_data(t: ManinTriple, g: GroupElement, p: GroupElement) -> ActionData:
    """Left multiplication of ``T G`` on ``T P = T G`` (groupoid composition)."""
    f, n = t.field, t.n
    size = 2 * n
    cg = coad_g(t, p)
    vecs = []
    # composable pairs: tau_x = Ad_p tau_y; parametrize by (xi_x, xi_y, tau_y)
    for i in range(3 * n):
        e = mx.unit_vector(3 * n, i, f)
        xi_x, xi_y, tau_y = e[:n], e[n:2 * n], e[2 * n:]
        tau_x = mx.matvec(cg, tau_y, f)
        x = (g, xi_x, tau_x)
        y = (p, xi_y, tau_y)
        _, xi_out, tau_out = tg_compose(t, x, y)
        vecs.append(tuple(xi_out) + tuple(tau_out) + tuple(xi_x) + tuple(tau_x) + tuple(xi_y) + tuple(tau_y))
    return ActionData(g, Subspace.span(vecs, 3 * size, f), size, size)


def trivial_action_data(t: ManinTriple, g: GroupElement, h: HamiltonianFiber) -> ActionData:
    """Action on a zero-dimensional ``T P``: only the composability constraint remains."""
    f, n = t.field, t.n
    if h.P.dim:
        raise ValueError("only for zero-dimensional fibers")
    # s(x) = tau_x must equal Phi(y) = 0
    vecs = [mx.unit_vector(2 * n, i, f) for i in range(n)]
    return ActionData(g, Subspace.span(vecs, 2 * n, f), 2 * n, 0)


def corrupt_action(a: ActionData, shift_from=0, shift_to=0) -> ActionData:
    """Add coordinate ``shift_from`` of ``x`` to coordinate ``shift_to`` of ``y'``."""
    f = a.graph.field
    yd = a.graph.ambient_dim - a.x_dim - a.y_dim
    vecs = []
    for v in a.graph.basis:
        v = list(v)
        v[shift_to] = v[shift_to] + v[yd + shift_from]
        vecs.append(v)
    return replace(a, graph=Subspace.span(vecs, a.graph.ambient_dim, f))


def action_problems(a: ActionData, t: ManinTriple, h: HamiltonianFiber, h_out: HamiltonianFiber):
    """Coherence of action data: composability and units acting trivially."""
    f, n = t.field, t.n
    out = []
    yd = a.graph.ambient_dim - a.x_dim - a.y_dim
    for v in a.graph.basis:
        x, y = v[yd:yd + a.x_dim], v[yd + a.x_dim:]
        phi = mx.matvec(h.moment, y, f) if h.moment and y else tuple(f.zero for _ in range(n))
        if not mx.equal((tuple(x[n:]),), (tuple(phi),), f):
            out.append(("composability", v))
            break
    if mx.equal(a.g.matrix, mx.identity(t.dim, f), f) and h.P.dim == h_out.P.dim:
        # units (0, Phi(y)) act trivially
        for y in (mx.unit_vector(a.y_dim, i, f) for i in range(a.y_dim)):
            phi = mx.matvec(h.moment, y, f)
            vec = tuple(y) + tuple(f.zero for _ in range(n)) + tuple(phi) + tuple(y)
            if not a.graph.contains(vec):
                out.append(("unit", vec))
                break
    return out


def _place(sub: Subspace, positions, total):
    """Embed ``sub`` into ``total`` coordinates at the given positions (others free)."""
    f = sub.field
    others = [i for i in range(total) if i not in set(positions)]
    vecs = []
    for v in sub.basis:
        w = [f.zero] * total
        for p, x in zip(positions, v):
            w[p] = x
        vecs.append(w)
    for i in others:
        vecs.append(mx.unit_vector(total, i, f))
    return Subspace.span(vecs, total, f)


def module_composite(rel: IntegrationRelation, h: HamiltonianFiber, a: ActionData) -> Subspace:
    """``{(zeta', x . y)}`` over ``x ~_R (zeta', zeta)``, ``y ~_L zeta``, composable."""
    t = rel.triple
    N, n = t.dim, t.n
    if a.x_dim != 2 * n or a.y_dim != h.P.dim or h.fiber.E.dim != N:
        raise DimensionError("action data, fiber and relation shapes disagree")
    yd, yo = h.P.dim, a.graph.ambient_dim - a.x_dim - a.y_dim
    # layout: zeta' | zeta | x | y | y'
    o_zp, o_z, o_x, o_y, o_yo = 0, N, 2 * N, 2 * N + 2 * n, 2 * N + 2 * n + yd
    total = o_yo + yo
    r_pos = list(range(o_zp, o_x + 2 * n))
    l_pos = list(range(o_z, o_z + N)) + list(range(o_y, o_y + yd))
    a_pos = list(range(o_yo, o_yo + yo)) + list(range(o_x, o_x + 2 * n)) + list(range(o_y, o_y + yd))
    sub = intersect(_place(rel.graph, r_pos, total), _place(h.L.graph, l_pos, total))
    sub = intersect(sub, _place(a.graph, a_pos, total))
    return project(sub, list(range(o_zp, o_zp + N)) + list(range(o_yo, o_yo + yo)))


def module_morphism_check(rel: IntegrationRelation, h: HamiltonianFiber, a: ActionData,
                          h_out: HamiltonianFiber | None = None):
    """Composite is contained in ``L`` at ``g p``; returns ``(ok, witness)``.

    ``h_out`` is the fiber at ``g p``; it defaults to ``h`` for spaces whose
    relation does not depend on the point.
    """
    t = rel.triple
    h_out = h if h_out is None else h_out
    comp = module_composite(rel, h, a)
    for v in comp.basis:
        if not h_out.L.graph.contains(v):
            return False, {"zeta'": v[: t.dim], "x.y": v[t.dim:]}
    return True, None
