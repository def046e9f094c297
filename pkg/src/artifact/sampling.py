"""Seeded random data over small rational grids."""
from __future__ import annotations

import random
from fractions import Fraction

from . import matrix as mx
from .linrel import LinearRelation, MetrizedSpace, Subspace, subspace_sum
from .scalars import EXACT

GRID = (-2, -1, 0, 1, 2)


def rng_of(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def rational(rng, grid=GRID, denominators=(1, 1, 2, 3)):
    return Fraction(rng.choice(grid), rng.choice(denominators))


def matrix(rng, r, c, sparsity=0.0):
    return tuple(
        tuple(Fraction(0) if rng.random() < sparsity else rational(rng) for _ in range(c))
        for _ in range(r)
    )


def vector(rng, n):
    return tuple(rational(rng) for _ in range(n))


def skew(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            x = rational(rng)
            m[i][j], m[j][i] = x, -x
    return tuple(tuple(r) for r in m)


def subspace(rng, n, k=None):
    k = rng.randint(0, n) if k is None else k
    return Subspace.span([vector(rng, n) for _ in range(k)], n)


def lagrangian(rng, space: MetrizedSpace, base: Subspace, comp: Subspace) -> Subspace:
    """Random Lagrangian ``{l + T l}`` transverse to ``comp``.

    ``base`` and ``comp`` are transverse Lagrangians; ``T: base -> comp`` is
    drawn so that the graph is isotropic. With probability 1/4 the result is
    swapped with a coordinate-mixed Lagrangian to reach non-generic positions.
    """
    n = base.dim
    lb, lc = base.basis, comp.basis
    p = tuple(tuple(space.pair(x, y) for y in lc) for x in lb)
    t = mx.matmul(mx.inverse(p), skew(rng, n))
    vecs = []
    for i in range(n):
        v = list(lb[i])
        for j in range(n):
            if t[j][i]:
                v = [a + t[j][i] * b for a, b in zip(v, lc[j])]
        vecs.append(v)
    if rng.random() < 0.25 and n:
        # swap a random subset of the pairs (l_i, c_i) after dualizing the comp basis
        q = mx.inverse(mx.transpose(p))  # dual basis of comp relative to base
        dual = [tuple(sum(q[i][j] * lc[j][k] for j in range(n)) for k in range(space.dim)) for i in range(n)]
        keep = [rng.random() < 0.5 for _ in range(n)]
        vecs = [lb[i] if keep[i] else dual[i] for i in range(n)]
    return Subspace.span(vecs, space.dim)


def split_lagrangian(rng, n):
    """Random Lagrangian in the standard split space of dimension ``2n``."""
    sp = MetrizedSpace.split(n)
    return lagrangian(rng, sp, Subspace.coordinates(2 * n, range(n)),
                      Subspace.coordinates(2 * n, range(n, 2 * n)))


def split_relation(rng, n_target, n_source) -> LinearRelation:
    """Random Lagrangian relation between standard split spaces."""
    t, s = MetrizedSpace.split(n_target), MetrizedSpace.split(n_source)
    amb = t.oplus(s.reversed())
    tot = 2 * (n_target + n_source)
    first = list(range(n_target)) + list(range(2 * n_target, 2 * n_target + n_source))
    second = [i for i in range(tot) if i not in first]
    base = Subspace.coordinates(tot, first)
    comp = Subspace.coordinates(tot, second)
    return LinearRelation(t, s, lagrangian(rng, amb, base, comp))


def relation(rng, n_target, n_source, field=EXACT) -> LinearRelation:
    """Arbitrary (not necessarily Lagrangian) relation between split spaces."""
    t, s = MetrizedSpace.split(n_target), MetrizedSpace.split(n_source)
    return LinearRelation(t, s, subspace(rng, t.dim + s.dim))


def k_element(rng, datum, tries=50):
    from .fatgroup import in_k
    for _ in range(tries):
        f = matrix(rng, datum.c, datum.b, sparsity=rng.choice((0.0, 0.3, 0.6)))
        if in_k(datum, f):
            return f
    return datum.zero()


def core_anchor_datum(rng, max_dim=5, c=None, b=None):
    from .fatgroup import CoreAnchorDatum
    c = rng.randint(1, max_dim) if c is None else c
    b = rng.randint(1, max_dim) if b is None else b
    return CoreAnchorDatum(c, b, matrix(rng, b, c, sparsity=rng.choice((0.0, 0.4))))


def courant_fiber(rng, max_n=3, max_m=3, n=None, m=None):
    """Random anchored fiber with ``a a* = 0``.

    ``E`` is the standard split space of dimension ``2n``; ``A`` is a random
    Lagrangian; the anchor rows are ``G w`` for ``w`` drawn from a random
    isotropic subspace, which makes ``a G^-1 a^T`` vanish.
    """
    from .maninrep import ManinPairFiber

    n = rng.randint(1, max_n) if n is None else n
    m = rng.randint(0, max_m) if m is None else m
    E = MetrizedSpace.split(n)
    A = split_lagrangian(rng, n)
    iso = split_lagrangian(rng, n).basis
    k = rng.randint(0, n)
    iso = iso[:k]
    rows = []
    for _ in range(m):
        w = [Fraction(0)] * (2 * n)
        for v in iso:
            c = rational(rng)
            w = [x + c * y for x, y in zip(w, v)]
        rows.append(mx.matvec(E.form, w))
    return ManinPairFiber(E, A, tuple(rows), courant=True)


def lagrangian_complement(rng, a: Subspace, tries=200) -> Subspace:
    """Random Lagrangian of the standard split space transverse to ``a``."""
    n = a.ambient_dim // 2
    for _ in range(tries):
        c = split_lagrangian(rng, n)
        if subspace_sum(a, c).dim == 2 * n:
            return c
    raise RuntimeError("no transverse Lagrangian found")


def group_element(rng, triple, factors=3, scale=None):
    """Product of up to ``factors`` exponentials of random elements of ``g``.

    In float mode coefficients are scaled down by ``scale`` (default 1/4) so
    that non-nilpotent exponentials stay well conditioned.
    """
    from .liealg import group_exp, group_identity

    f = triple.field
    if scale is None:
        scale = 1 if f.name == "exact" else Fraction(1, 4)
    g = group_identity(triple)
    basis = triple.lagrangian.basis
    for _ in range(rng.randint(1, factors)):
        coef = [f.coerce(rational(rng) * scale) for _ in basis]
        xi = tuple(sum((c * v[i] for c, v in zip(coef, basis)), f.zero) for i in range(triple.dim))
        g = g @ group_exp(triple, xi)
    return g
