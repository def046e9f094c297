"""A single fiber of a Manin pair with anchor, and the fat group acting on it.

Coordinates. ``E`` has the standard basis and form ``G``. ``A`` is described by
its canonical basis ``a_1..a_n``; ``A*`` uses the dual basis, so the quotient
map ``E -> E/A = A*`` is ``zeta -> (<zeta, a_i>)_i``, which does not depend on
any complement. ``V`` is the anchor target and ``V*`` uses the dual basis.

The fat group acting here is the one of the datum ``rho = a_A: A -> V``; its
elements are maps ``f: V -> A`` stored as ``n x m`` matrices.

The fiber of ``T G`` over a unit is ``(A (+) V*) (+) (V (+) A*)``: core first,
then units. Its metric pairs tangent and cotangent parts through the twisted
pairing of the fat-group module, so core vectors ``(a, mu)`` have square
``2 mu(a_A a)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import fatgroup as fg
from . import matrix as mx
from .linrel import (
    MetrizedSpace,
    Subspace,
    intersect,
    is_lagrangian,
    subspace_sum,
    direct_sum,
    image,
)
from .scalars import EXACT


@dataclass(frozen=True)
class ManinPairFiber:
    E: MetrizedSpace
    A: Subspace
    anchor: tuple
    courant: bool = True
    complement: Subspace | None = None

    def __post_init__(self):
        f = self.E.field
        anchor = mx.to_field(self.anchor, f)
        object.__setattr__(self, "anchor", anchor)
        if any(len(r) != self.E.dim for r in anchor):
            raise ValueError("anchor must be m x dim(E)")
        if self.A.ambient_dim != self.E.dim:
            raise ValueError("A must live in E")
        if not is_lagrangian(self.A, self.E):
            raise ValueError("A is not Lagrangian")
        if self.courant and self.m and not all(
            f.is_zero(x) for r in mx.matmul(self.anchor, self.anchor_dual(), f) for x in r
        ):
            raise ValueError("Courant fiber needs a_E a_E* = 0")
        if self.complement is not None:
            c = self.complement
            if not is_lagrangian(c, self.E) or intersect(c, self.A).dim:
                raise ValueError("complement must be a Lagrangian complement to A")

    @property
    def field(self):
        return self.E.field

    @property
    def n(self):
        return self.A.dim

    @property
    def m(self):
        return len(self.anchor)

    def mul(self, *ms):
        return mx.chain(*ms, field=self.field)

    def iota(self):
        """``A -> E``."""
        return mx.transpose(self.A.basis, self.E.dim)

    def pr(self):
        """``E -> A*``."""
        return mx.matmul(self.A.basis, self.E.form, self.field) if self.n else ()

    def anchor_dual(self):
        """Metric adjoint ``V* -> E``: ``<a* mu, zeta> = mu(a zeta)``."""
        ginv = mx.inverse(self.E.form, self.field)
        return mx.matmul(ginv, mx.transpose(self.anchor, self.E.dim), self.field)

    def anchor_a(self):
        """``a_A = a_E iota_A: A -> V``."""
        return self.mul(self.anchor, self.iota()) if self.m else ()

    def datum(self) -> fg.CoreAnchorDatum:
        return fg.CoreAnchorDatum(self.n, self.m, self.anchor_a(), self.field)

    def alpha_matrix(self):
        """``E -> V (+) A*``, ``zeta -> (a zeta, -pr zeta)``."""
        return mx.vstack(self.anchor, mx.neg(self.pr()))

    def beta_matrix(self):
        """``A (+) V* -> E``, ``(x, mu) -> iota x - a* mu``."""
        return mx.hstack(self.iota(), mx.neg(self.anchor_dual()))

    def alpha(self, zeta):
        return mx.matvec(self.alpha_matrix(), zeta, self.field)

    def beta(self, y):
        return mx.matvec(self.beta_matrix(), y, self.field)

    def duality(self, x, w):
        """Pairing of ``x = (a, mu)`` in ``A (+) V*`` with ``w = (v, gamma)`` in ``V (+) A*``."""
        a, mu = x[: self.n], x[self.n:]
        v, gamma = w[: self.m], w[self.m:]
        return mx.dot(gamma, a, self.field) + mx.dot(mu, v, self.field)

    def tg_datum(self) -> fg.CoreAnchorDatum:
        """Core ``A (+) V*``, units ``V (+) A*`` and ``rho(x, mu) = (a_A x, a_A* mu)``."""
        n, m, f = self.n, self.m, self.field
        aa = self.anchor_a()
        rows = [tuple(aa[k]) + (f.zero,) * m for k in range(m)]
        rows += [(f.zero,) * n + tuple(aa[k][l] for k in range(m)) for l in range(n)]
        return fg.CoreAnchorDatum(n + m, m + n, tuple(rows), f)

    def tg_space(self) -> MetrizedSpace:
        """The ``T G`` fiber over a unit with its twisted split metric."""
        n, m, f = self.n, self.m, self.field
        # tangent part (a, v), cotangent part (mu, gamma); pairing gamma(a) + mu(v) + mu(a_A a)
        # expressed on the flattened vector (a, mu, v, gamma)
        size = 2 * (n + m)
        form = [[f.zero] * size for _ in range(size)]
        ia = list(range(n))
        imu = list(range(n, n + m))
        iv = list(range(n + m, n + 2 * m))
        ig = list(range(n + 2 * m, size))
        aa = self.anchor_a()

        def put(i, j, x):
            form[i][j] = form[i][j] + x
            form[j][i] = form[j][i] + x

        for k in range(n):
            put(ig[k], ia[k], f.one)
        for k in range(m):
            put(imu[k], iv[k], f.one)
        for k in range(m):
            for l in range(n):
                if not f.is_zero(aa[k][l]):
                    put(imu[k], ia[l], aa[k][l])
        return MetrizedSpace(size, tuple(tuple(r) for r in form), f)

    def core_anchor(self):
        return self.tg_datum().rho


def core_anchor_square(fiber: ManinPairFiber) -> bool:
    """``alpha o beta`` equals the core-anchor of the ``T G`` fiber."""
    lhs = fiber.mul(fiber.alpha_matrix(), fiber.beta_matrix())
    return mx.equal(lhs, fiber.core_anchor(), fiber.field)


def duality_holds(fiber: ManinPairFiber, x, zeta) -> bool:
    """``<x, alpha(zeta)> = -<beta(x), zeta>``."""
    lhs = fiber.duality(x, fiber.alpha(zeta))
    rhs = -fiber.E.pair(fiber.beta(x), zeta)
    return fiber.field.is_zero(lhs - rhs)


def _check_f(fiber, f):
    if not fg.in_k(fiber.datum(), f):
        raise fg.NotInK("f is not in the fat group of this fiber")


def U(fiber: ManinPairFiber, f):
    """``(id_E + iota f a_E)^-1``."""
    _check_f(fiber, f)
    k = fiber.E.dim
    inner = mx.add(mx.identity(k, fiber.field), fiber.mul(fiber.iota(), f, fiber.anchor)) \
        if fiber.m else mx.identity(k, fiber.field)
    return mx.inverse(inner, fiber.field)


def Vmap(fiber: ManinPairFiber, f):
    """``id_E + a_E* f* pr``."""
    _check_f(fiber, f)
    k = fiber.E.dim
    if not fiber.m:
        return mx.identity(k, fiber.field)
    ft = mx.transpose(f, fiber.m)
    return mx.add(mx.identity(k, fiber.field), fiber.mul(fiber.anchor_dual(), ft, fiber.pr()))


def ad_E(fiber: ManinPairFiber, f):
    return fiber.mul(U(fiber, f), Vmap(fiber, f))


def ad_E_second(fiber: ManinPairFiber, f):
    """``id + a* f* pr - iota f Ad^TM a`` with ``Ad^TM = (id + a_A f)^-1``."""
    _check_f(fiber, f)
    k = fiber.E.dim
    if not fiber.m:
        return mx.identity(k, fiber.field)
    d = fiber.datum()
    ft = mx.transpose(f, fiber.m)
    plus = fiber.mul(fiber.anchor_dual(), ft, fiber.pr())
    minus = fiber.mul(fiber.iota(), f, fg.ad_b(d, f), fiber.anchor)
    return mx.sub(mx.add(mx.identity(k, fiber.field), plus), minus)


def ad_E_via_alpha_beta(fiber: ManinPairFiber, f):
    """``id + beta (Inv f, f*) alpha``."""
    _check_f(fiber, f)
    k, n, m, fl = fiber.E.dim, fiber.n, fiber.m, fiber.field
    if not m:
        return mx.identity(k, fl)
    inv = fg.k_inv(fiber.datum(), f)
    mid = mx.block([[inv, mx.zeros(n, n, fl)], [mx.zeros(m, m, fl), mx.transpose(f, m)]])
    return mx.add(mx.identity(k, fl), fiber.mul(fiber.beta_matrix(), mid, fiber.alpha_matrix()))


def u_inf(fiber: ManinPairFiber, h):
    k = fiber.E.dim
    if not fiber.m:
        return mx.zeros(k, k, fiber.field)
    return fiber.mul(fiber.iota(), h, fiber.anchor)


def v_inf(fiber: ManinPairFiber, h):
    """``-u(h)*`` (metric adjoint)."""
    return mx.neg(fiber.E.adjoint(u_inf(fiber, h)))


def ad_E_inf(fiber: ManinPairFiber, h):
    return mx.add(u_inf(fiber, h), v_inf(fiber, h))


def ad_A(fiber: ManinPairFiber, f):
    return fg.ad_c(fiber.datum(), f)


def ad_TM(fiber: ManinPairFiber, f):
    return fg.ad_b(fiber.datum(), f)


def ad_Astar(fiber: ManinPairFiber, f):
    return fg.ad_cstar(fiber.datum(), f)


def equivariance_checks(fiber: ManinPairFiber, f) -> dict:
    """Anchor and quotient equivariance plus the restriction to ``A``."""
    ad = ad_E(fiber, f)
    fl = fiber.field
    out = {}
    if fiber.m:
        out["anchor"] = mx.equal(fiber.mul(fiber.anchor, ad), fiber.mul(ad_TM(fiber, f), fiber.anchor), fl)
    else:
        out["anchor"] = True
    out["quotient"] = mx.equal(fiber.mul(fiber.pr(), ad), fiber.mul(ad_Astar(fiber, f), fiber.pr()), fl) \
        if fiber.n else True
    out["restriction"] = mx.equal(fiber.mul(ad, fiber.iota()), fiber.mul(fiber.iota(), ad_A(fiber, f)), fl) \
        if fiber.n else True
    return out


def tg_lift(fiber: ManinPairFiber, f):
    """The element ``f (+) Inv(f)*`` of the ``T G`` fat group induced by ``f``."""
    n, m, fl = fiber.n, fiber.m, fiber.field
    inv = fg.k_inv(fiber.datum(), f)
    rows = [tuple(f[i]) + (fl.zero,) * n for i in range(n)]
    rows += [(fl.zero,) * m + tuple(inv[l][k] for l in range(n)) for k in range(m)]
    return tuple(rows)


def tg_left_matrix(fiber: ManinPairFiber, f):
    """``l_f`` on the ``T G`` fiber, assembled from the tangent and cotangent actions.

    Tangent part ``(a, v)`` uses the fat-group translation of ``a_A``; the
    cotangent part ``(mu, gamma)`` uses the dual translation.
    """
    d = fiber.datum()
    return _assemble(fiber, fg.left_translate_matrix(d, f), fg.dual_left_translate_matrix(d, f))


def tg_right_inv_matrix(fiber: ManinPairFiber, f):
    d = fiber.datum()
    return _assemble(fiber, fg.right_translate_inv_matrix(d, f), fg.dual_right_translate_inv_matrix(d, f))


def _assemble(fiber, tan, cot):
    """Merge a map on ``(a, v)`` and one on ``(mu, gamma)`` into ``(a, mu, v, gamma)`` order."""
    n, m, fl = fiber.n, fiber.m, fiber.field
    size = 2 * (n + m)
    # flattened positions of (a, v) and (mu, gamma)
    tpos = list(range(n)) + list(range(n + m, n + 2 * m))
    cpos = list(range(n, n + m)) + list(range(n + 2 * m, size))
    out = [[fl.zero] * size for _ in range(size)]
    for i, pi in enumerate(tpos):
        for j, pj in enumerate(tpos):
            out[pi][pj] = tan[i][j]
    for i, pi in enumerate(cpos):
        for j, pj in enumerate(cpos):
            out[pi][pj] = cot[i][j]
    return tuple(tuple(r) for r in out)


def rum_subspace(fiber: ManinPairFiber) -> Subspace:
    """``gr(alpha) + gr(beta)`` inside ``E (+) E (+) TG``.

    ``gr(alpha) = {(zeta, zeta, alpha zeta)}`` and ``gr(beta) = {(0, beta y, y)}``
    with ``y`` in the core.
    """
    fl = fiber.field
    k, n, m = fiber.E.dim, fiber.n, fiber.m
    total = 2 * k + 2 * (n + m)
    vecs = []
    am = fiber.alpha_matrix()
    for i in range(k):
        e = mx.unit_vector(k, i, fl)
        vecs.append(e + e + tuple(fl.zero for _ in range(n + m)) + mx.matvec(am, e, fl))
    bm = fiber.beta_matrix()
    for i in range(n + m):
        y = mx.unit_vector(n + m, i, fl)
        vecs.append(tuple(fl.zero for _ in range(k)) + mx.matvec(bm, y, fl) + y
                    + tuple(fl.zero for _ in range(n + m)))
    return Subspace.span(vecs, total, fl)


def rum_space(fiber: ManinPairFiber) -> MetrizedSpace:
    return fiber.E.oplus(fiber.E.reversed()).oplus(fiber.tg_space().reversed())


def rum_action(fiber: ManinPairFiber, f1, f2):
    """Matrix of the ``(f1, f2)`` action on ``E (+) E (+) TG``."""
    tg = fiber.mul(tg_left_matrix(fiber, f1), tg_right_inv_matrix(fiber, f2))
    return _block_diag(fiber.field, ad_E(fiber, f1), ad_E(fiber, f2), tg)


def _block_diag(fl, *ms):
    size = sum(len(m) for m in ms)
    out = [[fl.zero] * size for _ in range(size)]
    off = 0
    for m in ms:
        for i, r in enumerate(m):
            for j, x in enumerate(r):
                out[off + i][off + j] = x
        off += len(m)
    return tuple(tuple(r) for r in out)


def rum_invariance(fiber: ManinPairFiber, f1, f2) -> bool:
    sub = rum_subspace(fiber)
    act = rum_action(fiber, f1, f2)
    return image(act, sub) == sub


def rum_is_lagrangian(fiber: ManinPairFiber) -> bool:
    return is_lagrangian(rum_subspace(fiber), rum_space(fiber))


def jet_ad_E(fiber: ManinPairFiber, h):
    """``Ad^E`` evaluated at ``f = d h`` over first-order jets; returns (value, derivative)."""
    from .scalars import JETS, Jet

    jf = JETS
    f = tuple(tuple(Jet(fiber.field.zero, x) for x in r) for r in h)
    k = fiber.E.dim
    if not fiber.m:
        z = mx.zeros(k, k, fiber.field)
        return mx.identity(k, fiber.field), z
    lift = lambda m: tuple(tuple(jf.coerce(x) for x in r) for r in m)
    iota, anchor = lift(fiber.iota()), lift(fiber.anchor)
    adual, pr = lift(fiber.anchor_dual()), lift(fiber.pr())
    ident = mx.identity(k, jf)
    u = mx.inverse(mx.add(ident, mx.chain(iota, f, anchor, field=jf)), jf)
    v = mx.add(ident, mx.chain(adual, mx.transpose(f, fiber.m), pr, field=jf))
    full = mx.matmul(u, v, jf)
    return (tuple(tuple(x.a for x in r) for r in full), tuple(tuple(x.b for x in r) for r in full))


def generator_sign(fiber: ManinPairFiber, h) -> str:
    """Compare the jet derivative of ``Ad^E`` at ``d h`` with ``ad^E_h``.

    Returns ``"+"``, ``"-"``, ``"both"`` (when the generator vanishes) or ``"neither"``.
    """
    _, deriv = jet_ad_E(fiber, h)
    gen = ad_E_inf(fiber, h)
    plus = mx.equal(deriv, gen, fiber.field)
    minus = mx.equal(deriv, mx.neg(gen), fiber.field)
    return {(True, True): "both", (True, False): "+", (False, True): "-", (False, False): "neither"}[(plus, minus)]


def core_square_identity(fiber: ManinPairFiber, y) -> dict:
    """Squares of a core vector ``y = (x, mu)`` of ``T G`` and of its image under beta.

    Returns the three numbers ``tg = <y, y>``, ``formula = 2 mu(a_A x)`` and
    ``beta = <beta y, beta y>``. They satisfy ``tg = formula = -beta``, which is
    what makes ``{(0, beta y, y)}`` isotropic.
    """
    n, m, fl = fiber.n, fiber.m, fiber.field
    x, mu = tuple(y[:n]), tuple(y[n:])
    formula = 2 * mx.dot(mu, mx.matvec(fiber.anchor_a(), x, fl), fl) if m else fl.zero
    full = y + tuple(fl.zero for _ in range(n + m))
    by = fiber.beta(y)
    return {"tg": fiber.tg_space().pair(full, full), "formula": formula, "beta": fiber.E.pair(by, by)}


def core_square_holds(fiber: ManinPairFiber, y) -> bool:
    v = core_square_identity(fiber, y)
    fl = fiber.field
    return fl.is_zero(v["tg"] - v["formula"]) and fl.is_zero(v["beta"] + v["tg"])
