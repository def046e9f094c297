"""The fat group of a core-anchor map ``rho: C -> B``.

Elements are linear maps ``f: B -> C`` (stored as ``c x b`` matrices acting on
column vectors) such that ``id_B + rho f`` is invertible. Vectors of the
groupoid fiber are pairs ``(c, b)`` flattened as ``c + b``; vectors of the dual
fiber are pairs ``(beta, gamma)`` in ``B* (+) C*`` flattened the same way.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import matrix as mx
from .scalars import EXACT


class NotInK(ValueError):
    """``id_B + rho f`` is singular."""


@dataclass(frozen=True)
class CoreAnchorDatum:
    c: int
    b: int
    rho: tuple
    field: object = EXACT

    def __post_init__(self):
        rho = mx.to_field(self.rho, self.field) if self.rho else tuple(() for _ in range(self.b))
        if len(rho) != self.b or any(len(r) != self.c for r in rho):
            raise ValueError(f"rho must be {self.b}x{self.c}")
        object.__setattr__(self, "rho", rho)

    @property
    def rho_t(self):
        return mx.transpose(self.rho, self.c)

    def zero(self):
        return mx.zeros(self.c, self.b, self.field)

    def id_b(self):
        return mx.identity(self.b, self.field)

    def id_c(self):
        return mx.identity(self.c, self.field)

    def mul(self, *ms, cols=None):
        """Product of factors; ``cols`` lists each factor's column count."""
        return mx.chain(*ms, field=self.field, shapes=cols)

    def check_shape(self, f):
        if len(f) != self.c or any(len(r) != self.b for r in f):
            raise ValueError(f"element must be a {self.c}x{self.b} matrix")


def in_k(d: CoreAnchorDatum, f) -> bool:
    d.check_shape(f)
    return mx.is_invertible(mx.add(d.id_b(), d.mul(d.rho, f, cols=(d.c, d.b))), d.field)


def _require(d, f):
    if not in_k(d, f):
        raise NotInK("id_B + rho f is not invertible")


def k_mul(d: CoreAnchorDatum, f1, f2):
    """``f1 f2 = f1 + f2 + f2 rho f1``."""
    _require(d, f1)
    _require(d, f2)
    out = mx.add(mx.add(f1, f2), d.mul(f2, d.rho, f1, cols=(d.b, d.c, d.b)))
    if not in_k(d, out):
        raise AssertionError("product left the group")
    return out


def k_mul_factored(d: CoreAnchorDatum, f1, f2):
    """The same product written as ``f1 + f2 (id_B + rho f1)``."""
    return mx.add(f1, d.mul(f2, mx.add(d.id_b(), d.mul(d.rho, f1, cols=(d.c, d.b))), cols=(d.b, d.b)))


def k_inv(d: CoreAnchorDatum, f):
    """``-f (id_B + rho f)^-1``."""
    return mx.neg(d.mul(f, ad_b(d, f), cols=(d.b, d.b)))


def ad_b(d: CoreAnchorDatum, f):
    """``(id_B + rho f)^-1``."""
    d.check_shape(f)
    try:
        return mx.inverse(mx.add(d.id_b(), d.mul(d.rho, f, cols=(d.c, d.b))), d.field)
    except ZeroDivisionError:
        raise NotInK("id_B + rho f is not invertible") from None


def ad_c(d: CoreAnchorDatum, f):
    """``(id_C + f rho)^-1``."""
    d.check_shape(f)
    try:
        return mx.inverse(mx.add(d.id_c(), d.mul(f, d.rho, cols=(d.b, d.c))), d.field)
    except ZeroDivisionError:
        raise NotInK("id_C + f rho is not invertible") from None


def ad_bstar(d: CoreAnchorDatum, f):
    """``id + f* rho*`` on ``B*``."""
    return mx.add(d.id_b(), d.mul(mx.transpose(f, d.b), d.rho_t, cols=(d.c, d.b)))


def ad_cstar(d: CoreAnchorDatum, f):
    """``id + rho* f*`` on ``C*``."""
    return mx.add(d.id_c(), d.mul(d.rho_t, mx.transpose(f, d.b), cols=(d.b, d.c)))


def split(d: CoreAnchorDatum, z):
    if len(z) != d.c + d.b:
        raise ValueError("vector length must be c + b")
    return tuple(z[: d.c]), tuple(z[d.c:])


def split_dual(d: CoreAnchorDatum, tau):
    if len(tau) != d.b + d.c:
        raise ValueError("dual vector length must be b + c")
    return tuple(tau[: d.b]), tuple(tau[d.b:])


def source(d: CoreAnchorDatum, z):
    c, b = split(d, z)
    return tuple(x + y for x, y in zip(b, mx.matvec(d.rho, c, d.field)))


def target(d: CoreAnchorDatum, z):
    return split(d, z)[1]


def left_translate(d: CoreAnchorDatum, f, z):
    """``l_f(c + b) = c + Ad^C f b + Ad^B b``."""
    c, b = split(d, z)
    shift = d.mul(ad_c(d, f), f)
    c_out = tuple(x + y for x, y in zip(c, mx.matvec(shift, b, d.field)))
    return c_out + mx.matvec(ad_b(d, f), b, d.field)


def right_translate_inv(d: CoreAnchorDatum, f, z):
    """``r_f^-1(c + b) = Ad^C (c - f b) + b``."""
    c, b = split(d, z)
    fb = mx.matvec(f, b, d.field)
    return mx.matvec(ad_c(d, f), tuple(x - y for x, y in zip(c, fb)), d.field) + b


def left_translate_matrix(d: CoreAnchorDatum, f):
    adc = ad_c(d, f)
    return mx.block([[d.id_c(), d.mul(adc, f)], [mx.zeros(d.b, d.c, d.field), ad_b(d, f)]])


def right_translate_inv_matrix(d: CoreAnchorDatum, f):
    adc = ad_c(d, f)
    return mx.block([[adc, mx.neg(d.mul(adc, f))], [mx.zeros(d.b, d.c, d.field), d.id_b()]])


def dual_left_translate(d: CoreAnchorDatum, f, tau):
    """``l_f(beta + gamma) = beta - f* gamma + Ad^{C*} gamma``."""
    beta, gamma = split_dual(d, tau)
    fg = mx.matvec(mx.transpose(f, d.b), gamma, d.field)
    return tuple(x - y for x, y in zip(beta, fg)) + mx.matvec(ad_cstar(d, f), gamma, d.field)


def dual_right_translate_inv(d: CoreAnchorDatum, f, tau):
    """``r_f^-1(beta + gamma) = Ad^{B*} beta + f* gamma + gamma``."""
    beta, gamma = split_dual(d, tau)
    fg = mx.matvec(mx.transpose(f, d.b), gamma, d.field)
    ab = mx.matvec(ad_bstar(d, f), beta, d.field)
    return tuple(x + y for x, y in zip(ab, fg)) + gamma


def dual_left_translate_matrix(d: CoreAnchorDatum, f):
    ft = mx.transpose(f, d.b)
    return mx.block([[d.id_b(), mx.neg(ft)], [mx.zeros(d.c, d.b, d.field), ad_cstar(d, f)]])


def dual_right_translate_inv_matrix(d: CoreAnchorDatum, f):
    ft = mx.transpose(f, d.b)
    return mx.block([[ad_bstar(d, f), ft], [mx.zeros(d.c, d.b, d.field), d.id_c()]])


def dual_pairing(d: CoreAnchorDatum, tau, z):
    """``<gamma + beta, c + b> = gamma(c) + beta(b) + beta(rho c)``."""
    beta, gamma = split_dual(d, tau)
    c, b = split(d, z)
    f = d.field
    return mx.dot(gamma, c, f) + mx.dot(beta, b, f) + mx.dot(beta, mx.matvec(d.rho, c, f), f)


def pairing_matrix(d: CoreAnchorDatum):
    """Matrix ``P`` with ``dual_pairing(tau, z) = tau^T P z``."""
    zc = mx.zeros(d.c, d.b, d.field)
    return mx.block([[d.rho, d.id_b()], [d.id_c(), zc]])


def k_bracket(d: CoreAnchorDatum, h1, h2):
    """``[h1, h2] = h2 rho h1 - h1 rho h2``."""
    shapes = (d.b, d.c, d.b)
    return mx.sub(d.mul(h2, d.rho, h1, cols=shapes), d.mul(h1, d.rho, h2, cols=shapes))


def ad_b_inf(d: CoreAnchorDatum, h):
    return mx.neg(d.mul(d.rho, h, cols=(d.c, d.b)))


def ad_c_inf(d: CoreAnchorDatum, h):
    return mx.neg(d.mul(h, d.rho, cols=(d.b, d.c)))


def action_orientation(d: CoreAnchorDatum, f1, f2, action) -> str:
    """How ``action`` (a map ``f -> matrix``) interacts with ``k_mul``.

    Returns ``"homomorphism"`` if ``A(f1 f2) = A(f1) A(f2)``,
    ``"anti-homomorphism"`` if ``A(f1 f2) = A(f2) A(f1)``, ``"both"`` or
    ``"neither"``.
    """
    lhs = action(k_mul(d, f1, f2))
    a1, a2 = action(f1), action(f2)
    hom = mx.equal(lhs, d.mul(a1, a2), d.field)
    anti = mx.equal(lhs, d.mul(a2, a1), d.field)
    return {(True, True): "both", (True, False): "homomorphism",
            (False, True): "anti-homomorphism", (False, False): "neither"}[(hom, anti)]
