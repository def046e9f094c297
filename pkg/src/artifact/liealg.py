"""Lie algebras from structure constants, invariant metrics and Manin triples.

Structure constants are stored densely as ``c[i][j][k]`` with
``[e_i, e_j] = sum_k c[i][j][k] e_k``. Group elements are represented only by
their adjoint matrices on the ambient algebra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from . import matrix as mx
from .linrel import MetrizedSpace, Subspace, is_lagrangian, intersect, subspace_sum
from .scalars import EXACT, Approx


class NotNilpotentError(ValueError):
    pass


class InvalidGroupElement(ValueError):
    pass


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    c: tuple
    field: object = EXACT

    @classmethod
    def from_sparse(cls, dim, triples, field=EXACT, antisymmetrize=True):
        """Build from ``(i, j, k, value)`` entries; by default ``c[j][i][k]`` is filled in."""
        c = [[[field.zero] * dim for _ in range(dim)] for _ in range(dim)]
        for i, j, k, v in triples:
            v = field.coerce(v)
            c[i][j][k] = v
            if antisymmetrize:
                c[j][i][k] = -v
        return cls(dim, tuple(tuple(tuple(r) for r in m) for m in c), field)

    @classmethod
    def abelian(cls, dim, field=EXACT):
        return cls.from_sparse(dim, [], field)

    def sparse(self):
        """Entries with ``i < j`` and nonzero value."""
        return [
            (i, j, k, self.c[i][j][k])
            for i in range(self.dim)
            for j in range(i + 1, self.dim)
            for k in range(self.dim)
            if not self.field.is_zero(self.c[i][j][k])
        ]

    def bracket(self, x, y):
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vector length does not match algebra dimension")
        f = self.field
        out = [f.zero] * self.dim
        for i, xi in enumerate(x):
            if f.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if f.is_zero(yj):
                    continue
                s = xi * yj
                row = self.c[i][j]
                for k in range(self.dim):
                    if not f.is_zero(row[k]):
                        out[k] = out[k] + s * row[k]
        return tuple(out)

    def ad(self, x):
        """Matrix of ``y -> [x, y]``."""
        cols = [self.bracket(x, mx.unit_vector(self.dim, j, self.field)) for j in range(self.dim)]
        return mx.transpose(cols, self.dim)

    def basis(self):
        return [mx.unit_vector(self.dim, i, self.field) for i in range(self.dim)]

    def antisymmetry_violations(self):
        f = self.field
        return [
            (i, j, k)
            for i, j, k in product(range(self.dim), repeat=3)
            if not f.is_zero(self.c[i][j][k] + self.c[j][i][k])
        ]

    def jacobi_witness(self):
        """First basis triple violating Jacobi, or ``None``."""
        e = self.basis()
        f = self.field
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    a = self.bracket(e[i], self.bracket(e[j], e[k]))
                    b = self.bracket(e[j], self.bracket(e[k], e[i]))
                    c = self.bracket(e[k], self.bracket(e[i], e[j]))
                    if any(not f.is_zero(x + y + z) for x, y, z in zip(a, b, c)):
                        return (i, j, k)
        return None

    def is_nilpotent(self) -> bool:
        """Lower central series reaches zero."""
        cur = Subspace.full(self.dim, self.field)
        for _ in range(self.dim + 1):
            if cur.dim == 0:
                return True
            nxt = [self.bracket(x, y) for x in self.basis() for y in cur.basis]
            cur = Subspace.span(nxt, self.dim, self.field)
        return cur.dim == 0


def check_jacobi(a: LieAlgebra) -> bool:
    return a.jacobi_witness() is None


def is_subalgebra(u: Subspace, a: LieAlgebra) -> bool:
    return all(u.contains(a.bracket(x, y)) for x in u.basis for y in u.basis)


def bracket(x, y, a: LieAlgebra):
    return a.bracket(x, y)


@dataclass(frozen=True)
class MetrizedLieAlgebra:
    algebra: LieAlgebra
    metric: MetrizedSpace

    def __post_init__(self):
        if self.algebra.dim != self.metric.dim:
            raise ValueError("metric and algebra dimensions differ")

    @property
    def dim(self):
        return self.algebra.dim

    @property
    def field(self):
        return self.algebra.field

    def invariance_witness(self):
        a, m = self.algebra, self.metric
        e = a.basis()
        for i, j, k in product(range(a.dim), repeat=3):
            v = m.pair(a.bracket(e[i], e[j]), e[k]) + m.pair(e[j], a.bracket(e[i], e[k]))
            if not a.field.is_zero(v):
                return (i, j, k)
        return None


def check_invariance(m: MetrizedLieAlgebra) -> bool:
    return m.invariance_witness() is None


@dataclass(frozen=True)
class ManinTriple:
    """Metrized algebra ``d``, Lagrangian subalgebra ``g``, optional complement ``h``."""

    double: MetrizedLieAlgebra
    lagrangian: Subspace
    complement: Subspace | None = None
    name: str = ""

    @property
    def dim(self):
        return self.double.dim

    @property
    def n(self):
        return self.lagrangian.dim

    @property
    def field(self):
        return self.double.field

    @property
    def algebra(self):
        return self.double.algebra

    @property
    def metric(self):
        return self.double.metric

    def problems(self):
        """Itemized invariant violations, empty when the triple is valid."""
        out = []
        a, m = self.algebra, self.metric
        if a.antisymmetry_violations():
            out.append(("antisymmetry", a.antisymmetry_violations()[0]))
        w = a.jacobi_witness()
        if w is not None:
            out.append(("jacobi", w))
        if not m.is_split():
            out.append(("split metric", m.signature()))
            return out
        w = self.double.invariance_witness()
        if w is not None:
            out.append(("ad-invariance", w))
        if not is_lagrangian(self.lagrangian, m):
            out.append(("lagrangian g", self.lagrangian.basis))
        if not is_subalgebra(self.lagrangian, a):
            out.append(("g subalgebra", self.lagrangian.basis))
        h = self.complement
        if h is not None:
            if not is_lagrangian(h, m):
                out.append(("lagrangian h", h.basis))
            if intersect(h, self.lagrangian).dim or subspace_sum(h, self.lagrangian).dim != self.dim:
                out.append(("h complement to g", h.basis))
        return out

    def validate(self):
        p = self.problems()
        if p:
            raise ValueError(f"invalid Manin triple: {p}")
        return self

    def pr_dual(self):
        """Matrix of ``d -> g*``, ``zeta -> <zeta, g_i>`` in the dual basis of g."""
        return mx.matmul(self.lagrangian.basis, self.metric.form, self.field)

    def g_inclusion(self):
        """Matrix of ``g -> d`` in the canonical basis of g."""
        return mx.transpose(self.lagrangian.basis, self.dim)

    def g_coords(self, v):
        """Coordinates of ``v`` in the canonical basis of g (``v`` must lie in g)."""
        if not self.lagrangian.contains(v):
            raise ValueError("vector is not in g")
        return tuple(v[p] for p in self.lagrangian.pivots)


def exp_ad(xi, a: LieAlgebra, metric: MetrizedSpace | None = None):
    """Adjoint matrix of ``exp(xi)``.

    Exact mode needs ``ad_xi`` nilpotent and returns the finite series. Float
    mode uses scaling and squaring of a Taylor polynomial.
    """
    ad = a.ad(xi)
    f = a.field
    if f.name == "exact":
        return nilpotent_exp(ad, f)
    return float_expm(ad)


def nilpotent_exp(m, field=EXACT):
    n = len(m)
    out = mx.identity(n, field)
    term = mx.identity(n, field)
    for k in range(1, n + 1):
        term = mx.scale(field.one / k, mx.matmul(term, m, field))
        if all(field.is_zero(x) for r in term for x in r):
            return out
        out = mx.add(out, term)
    raise NotNilpotentError("ad is not nilpotent; exact exponential unavailable")


def float_expm(m, order: int = 20):
    n = len(m)
    fl = Approx()
    norm = max((sum(abs(x) for x in r) for r in m), default=0.0)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 2) if norm > 0 else 0
    a = mx.scale(1.0 / (2 ** squarings), m)
    out = term = mx.identity(n, fl)
    for k in range(1, order + 1):
        term = mx.scale(1.0 / k, mx.matmul(term, a, fl))
        out = mx.add(out, term)
    for _ in range(squarings):
        out = mx.matmul(out, out, fl)
    return out


@dataclass(frozen=True)
class GroupElement:
    """Adjoint action of a group element on the double."""

    matrix: tuple
    field: object = EXACT

    def inverse(self) -> "GroupElement":
        return GroupElement(mx.inverse(self.matrix, self.field), self.field)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(mx.matmul(self.matrix, other.matrix, self.field), self.field)

    def act(self, v):
        return mx.matvec(self.matrix, v, self.field)


def group_identity(triple: ManinTriple) -> GroupElement:
    return GroupElement(mx.identity(triple.dim, triple.field), triple.field)


def group_exp(triple: ManinTriple, xi) -> GroupElement:
    """``Ad_{exp xi}`` for ``xi`` in g."""
    xi = tuple(triple.field.coerce(x) for x in xi)
    if not triple.lagrangian.contains(xi):
        raise InvalidGroupElement("exponent must lie in g")
    return GroupElement(exp_ad(xi, triple.algebra), triple.field)


def group_problems(triple: ManinTriple, g: GroupElement):
    """Invariant violations of a proposed group element (empty if valid)."""
    f = triple.field
    m = g.matrix
    out = []
    if len(m) != triple.dim or any(len(r) != triple.dim for r in m):
        return [("shape", (len(m),))]
    if not mx.is_invertible(m, f):
        return [("invertible", None)]
    if not triple.metric.is_preserved_by(m):
        out.append(("metric", None))
    e = triple.algebra.basis()
    for i in range(triple.dim):
        for j in range(i + 1, triple.dim):
            lhs = g.act(triple.algebra.bracket(e[i], e[j]))
            rhs = triple.algebra.bracket(g.act(e[i]), g.act(e[j]))
            if not mx.equal((lhs,), (rhs,), f):
                out.append(("bracket", (i, j)))
                break
        else:
            continue
        break
    if any(not triple.lagrangian.contains(g.act(v)) for v in triple.lagrangian.basis):
        out.append(("preserves g", None))
    return out


def validate_group_element(triple: ManinTriple, g: GroupElement) -> GroupElement:
    p = group_problems(triple, g)
    if p:
        raise InvalidGroupElement(f"invalid group element: {p}")
    return g
