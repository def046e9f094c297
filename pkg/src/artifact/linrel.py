"""Subspaces, metrized spaces and linear relations over a scalar field.

A subspace is stored by its reduced row echelon basis, which is unique, so two
subspaces are equal exactly when their stored bases agree. A linear relation
from ``source`` to ``target`` is a subspace of ``target (+) source``, target
coordinates first.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import matrix as mx
from .scalars import EXACT


class DimensionError(ValueError):
    """Raised on ambient or shape mismatches."""


class DegenerateFormError(ValueError):
    """Raised when an operation needs a nondegenerate form and gets none."""


def rref(rows, n, field=EXACT):
    """Reduced row echelon basis of the span of ``rows`` (zero rows dropped).

    Returns ``(basis, pivots)``.
    """
    work = [list(field.coerce(x) for x in r) for r in rows]
    for r in work:
        if len(r) != n:
            raise DimensionError(f"vector of length {len(r)} in ambient {n}")
    pivots = []
    row = 0
    approx = field.name == "float"
    for col in range(n):
        if row >= len(work):
            break
        best, score = None, 0
        for r in range(row, len(work)):
            x = work[r][col]
            if field.is_unit(x):
                s = field.pivot_score(x)
                if s > score:
                    best, score = r, s
                    if not approx:
                        break
        if best is None:
            continue
        work[row], work[best] = work[best], work[row]
        pinv = field.one / work[row][col]
        work[row] = [x * pinv for x in work[row]]
        work[row][col] = field.one
        for r in range(len(work)):
            if r != row:
                factor = work[r][col]
                if not field.is_zero(factor):
                    work[r] = [x - factor * y for x, y in zip(work[r], work[row])]
                work[r][col] = field.zero
        pivots.append(col)
        row += 1
    basis = work[:row]
    if approx:
        basis = [[field.zero if field.is_zero(x) else x for x in r] for r in basis]
    return tuple(tuple(r) for r in basis), tuple(pivots)


def nullspace(rows, n, field=EXACT):
    """Basis of ``{v : r . v = 0 for every r in rows}``."""
    basis, pivots = rref(rows, n, field)
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fcol in free:
        v = [field.zero] * n
        v[fcol] = field.one
        for r, pcol in zip(basis, pivots):
            v[pcol] = -r[fcol]
        out.append(tuple(v))
    return out


@dataclass(frozen=True, eq=False)
class Subspace:
    ambient_dim: int
    basis: tuple
    field: object = dc_field(default=EXACT, repr=False)
    pivots: tuple = dc_field(default=(), repr=False)

    @classmethod
    def span(cls, vectors, ambient_dim: int, field=EXACT) -> "Subspace":
        basis, pivots = rref(list(vectors), ambient_dim, field)
        return cls(ambient_dim, basis, field, pivots)

    @classmethod
    def zero(cls, n: int, field=EXACT) -> "Subspace":
        return cls(n, (), field, ())

    @classmethod
    def full(cls, n: int, field=EXACT) -> "Subspace":
        return cls(n, mx.identity(n, field), field, tuple(range(n)))

    @classmethod
    def coordinates(cls, n: int, indices, field=EXACT) -> "Subspace":
        return cls.span([mx.unit_vector(n, i, field) for i in indices], n, field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector length does not match ambient dimension")
        v = [self.field.coerce(x) for x in v]
        for r, p in zip(self.basis, self.pivots):
            c = v[p]
            if not self.field.is_zero(c):
                v = [x - c * y for x, y in zip(v, r)]
        return all(self.field.is_zero(x) for x in v)

    def issubset(self, other: "Subspace") -> bool:
        _check_same(self, other)
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        if self.field.name == "exact" and other.field.name == "exact":
            return self.basis == other.basis
        return self.issubset(other)

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def canonical_text(self) -> str:
        """Stable text form of the canonical basis (used for byte comparisons)."""
        rows = ["[" + ",".join(str(x) for x in r) + "]" for r in self.basis]
        return f"{self.ambient_dim}:[" + ",".join(rows) + "]"


def _check_same(u: Subspace, v: Subspace):
    if u.ambient_dim != v.ambient_dim:
        raise DimensionError(f"ambient mismatch: {u.ambient_dim} vs {v.ambient_dim}")


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_same(u, v)
    return Subspace.span(u.basis + v.basis, u.ambient_dim, u.field)


def annihilator(u: Subspace) -> Subspace:
    """Vectors killed by every basis vector of ``u`` under the dot product."""
    return Subspace.span(nullspace(u.basis, u.ambient_dim, u.field), u.ambient_dim, u.field)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_same(u, v)
    eqs = annihilator(u).basis + annihilator(v).basis
    return Subspace.span(nullspace(eqs, u.ambient_dim, u.field), u.ambient_dim, u.field)


def image(m, u: Subspace, out_dim: int | None = None) -> Subspace:
    """Image of a subspace under the matrix ``m``."""
    rows = len(m) if out_dim is None else out_dim
    return Subspace.span([mx.matvec(m, v, u.field) for v in u.basis], rows, u.field)


def kernel(m, n: int, field=EXACT) -> Subspace:
    return Subspace.span(nullspace(m, n, field), n, field)


def preimage(m, u: Subspace, n: int) -> Subspace:
    """``{x : m x in u}`` for an ``len(m) x n`` matrix."""
    ann = annihilator(u).basis
    eqs = mx.matmul(ann, m, u.field) if ann else ()
    return Subspace.span(nullspace(eqs, n, u.field), n, u.field)


def project(u: Subspace, indices) -> Subspace:
    idx = list(indices)
    return Subspace.span([[v[i] for i in idx] for v in u.basis], len(idx), u.field)


def embed(u: Subspace, offset: int, total: int) -> Subspace:
    """Put ``u`` into a bigger ambient space starting at coordinate ``offset``."""
    z = u.field.zero
    vecs = []
    for v in u.basis:
        w = [z] * total
        w[offset:offset + len(v)] = v
        vecs.append(w)
    return Subspace.span(vecs, total, u.field)


def direct_sum(*parts: Subspace) -> Subspace:
    total = sum(p.ambient_dim for p in parts)
    field = parts[0].field if parts else EXACT
    vecs, off = [], 0
    for p in parts:
        vecs.extend(embed(p, off, total).basis)
        off += p.ambient_dim
    return Subspace.span(vecs, total, field)


@dataclass(frozen=True)
class MetrizedSpace:
    dim: int
    form: tuple
    field: object = dc_field(default=EXACT, repr=False, compare=False)

    def __post_init__(self):
        f = mx.to_field(self.form, self.field)
        if len(f) != self.dim or any(len(r) != self.dim for r in f):
            raise DimensionError("form shape does not match dimension")
        for i in range(self.dim):
            for j in range(i):
                if not self.field.is_zero(f[i][j] - f[j][i]):
                    raise ValueError("form is not symmetric")
        object.__setattr__(self, "form", f)

    @classmethod
    def split(cls, n: int, field=EXACT) -> "MetrizedSpace":
        """``k^n (+) k^n`` with the pairing ``<(x,a),(y,b)> = a(y) + b(x)``."""
        z, i = mx.zeros(n, n, field), mx.identity(n, field)
        return cls(2 * n, mx.block([[z, i], [i, z]]), field)

    def pair(self, x, y):
        return mx.dot(x, mx.matvec(self.form, y, self.field), self.field)

    def reversed(self) -> "MetrizedSpace":
        return MetrizedSpace(self.dim, mx.neg(self.form), self.field)

    def oplus(self, other: "MetrizedSpace") -> "MetrizedSpace":
        z1 = mx.zeros(self.dim, other.dim, self.field)
        z2 = mx.zeros(other.dim, self.dim, self.field)
        if self.dim == 0:
            return other
        if other.dim == 0:
            return self
        return MetrizedSpace(
            self.dim + other.dim, mx.block([[self.form, z1], [z2, other.form]]), self.field
        )

    def is_nondegenerate(self) -> bool:
        return self.dim == 0 or mx.is_invertible(self.form, self.field)

    def signature(self):
        """(positive, negative, zero) counts via symmetric elimination."""
        f = self.field
        a = [list(r) for r in self.form]
        n = self.dim
        pos = negc = 0
        active = list(range(n))
        while active:
            i = next((k for k in active if f.is_unit(a[k][k])), None)
            if i is None:
                pair = next(
                    ((k, l) for k in active for l in active if k != l and f.is_unit(a[k][l])),
                    None,
                )
                if pair is None:
                    break
                k, l = pair
                # replace basis vector k by e_k + e_l, making the diagonal nonzero
                for t in range(n):
                    a[k][t] = a[k][t] + a[l][t]
                for t in range(n):
                    a[t][k] = a[t][k] + a[t][l]
                i = k
            p = a[i][i]
            pos, negc = (pos + 1, negc) if p > 0 else (pos, negc + 1)
            active.remove(i)
            for k in active:
                factor = a[k][i] / p
                if not f.is_zero(factor):
                    for t in range(n):
                        a[k][t] = a[k][t] - factor * a[i][t]
            for k in active:
                a[i][k] = f.zero
                a[k][i] = f.zero
        return pos, negc, n - pos - negc

    def is_split(self) -> bool:
        pos, negc, zero = self.signature()
        return zero == 0 and pos == negc

    def is_isotropic(self, u: Subspace) -> bool:
        return all(
            self.field.is_zero(self.pair(x, y))
            for i, x in enumerate(u.basis)
            for y in u.basis[i:]
        )

    def is_preserved_by(self, m) -> bool:
        """``m^T G m == G``."""
        lhs = mx.chain(mx.transpose(m), self.form, m, field=self.field)
        return mx.equal(lhs, self.form, self.field)

    def adjoint(self, m, other: "MetrizedSpace | None" = None):
        """Metric adjoint of ``m: self -> other`` as a map ``other -> self``."""
        other = self if other is None else other
        ginv = mx.inverse(self.form, self.field)
        return mx.chain(ginv, mx.transpose(m), other.form, field=self.field)


def orth(u: Subspace, space: MetrizedSpace) -> Subspace:
    if u.ambient_dim != space.dim:
        raise DimensionError("subspace does not live in this metrized space")
    if not space.is_nondegenerate():
        raise DegenerateFormError("orth needs a nondegenerate form")
    rows = mx.matmul(u.basis, space.form, space.field) if u.basis else ()
    return Subspace.span(nullspace(rows, space.dim, space.field), space.dim, space.field)


def is_lagrangian(u: Subspace, space: MetrizedSpace) -> bool:
    if u.ambient_dim != space.dim:
        raise DimensionError("subspace does not live in this metrized space")
    if not space.is_nondegenerate():
        raise DegenerateFormError("Lagrangian test needs a nondegenerate form")
    return 2 * u.dim == space.dim and space.is_isotropic(u)


@dataclass(frozen=True)
class LinearRelation:
    """A subspace ``graph`` of ``target (+) source`` (target coordinates first)."""

    target: MetrizedSpace
    source: MetrizedSpace
    graph: Subspace

    def __post_init__(self):
        if self.graph.ambient_dim != self.target.dim + self.source.dim:
            raise DimensionError("graph ambient must be target.dim + source.dim")

    @classmethod
    def from_map(cls, m, source: MetrizedSpace, target: MetrizedSpace) -> "LinearRelation":
        f = source.field
        vecs = []
        for i in range(source.dim):
            e = mx.unit_vector(source.dim, i, f)
            vecs.append(tuple(mx.matvec(m, e, f)) + e)
        return cls(target, source, Subspace.span(vecs, target.dim + source.dim, f))

    @classmethod
    def identity(cls, space: MetrizedSpace) -> "LinearRelation":
        return cls.from_map(mx.identity(space.dim, space.field), space, space)

    @property
    def ambient(self) -> MetrizedSpace:
        """``target (+) reversed(source)``."""
        return self.target.oplus(self.source.reversed())

    def transpose(self) -> "LinearRelation":
        t, s = self.target.dim, self.source.dim
        idx = list(range(t, t + s)) + list(range(t))
        return LinearRelation(self.source, self.target, project(self.graph, idx))

    def is_lagrangian(self) -> bool:
        return is_lagrangian(self.graph, self.ambient)

    def relates(self, z, x) -> bool:
        return self.graph.contains(tuple(z) + tuple(x))

    def kernel(self) -> Subspace:
        """``{x : (0, x) in graph}``."""
        return backward_image(self, Subspace.zero(self.target.dim, self.graph.field))


def compose(r2: LinearRelation, r1: LinearRelation) -> LinearRelation:
    """``r2 o r1``: pairs (z, x) with some y such that (z, y) in r2 and (y, x) in r1."""
    if r1.target.dim != r2.source.dim or not mx.equal(r1.target.form, r2.source.form, r1.target.field):
        raise DimensionError("relations are not composable")
    z, y, x = r2.target.dim, r2.source.dim, r1.source.dim
    total = z + y + x
    left = direct_sum(r2.graph, Subspace.full(x, r2.graph.field))
    right = direct_sum(Subspace.full(z, r1.graph.field), r1.graph)
    fiber = intersect(left, right)
    keep = list(range(z)) + list(range(z + y, total))
    return LinearRelation(r2.target, r1.source, project(fiber, keep))


def forward_image(r: LinearRelation, u: Subspace) -> Subspace:
    if u.ambient_dim != r.source.dim:
        raise DimensionError("subspace is not in the source")
    t = r.target.dim
    cut = intersect(r.graph, direct_sum(Subspace.full(t, u.field), u))
    return project(cut, range(t))


def backward_image(r: LinearRelation, u: Subspace) -> Subspace:
    if u.ambient_dim != r.target.dim:
        raise DimensionError("subspace is not in the target")
    return forward_image(r.transpose(), u)


class ManinMorphismInconsistency(AssertionError):
    """The two defining conditions hold but the uniqueness consequence fails."""


def is_manin_morphism(r: LinearRelation, a1: Subspace, a2: Subspace) -> bool:
    """``r(a1) <= a2`` and ``ker r`` meets ``a1`` trivially.

    When both hold, every element of ``a2`` must be related to exactly one
    element of ``a1``; that consequence is checked as well.
    """
    if not r.is_lagrangian():
        raise ValueError("relation is not Lagrangian")
    if not is_lagrangian(a1, r.source):
        raise ValueError("a1 is not Lagrangian in the source")
    if not is_lagrangian(a2, r.target):
        raise ValueError("a2 is not Lagrangian in the target")
    ok = forward_image(r, a1).issubset(a2) and intersect(r.kernel(), a1).dim == 0
    if ok:
        # related pairs inside a2 x a1 must project isomorphically onto a2
        pairs = intersect(r.graph, direct_sum(a2, a1))
        onto = project(pairs, range(r.target.dim))
        if pairs.dim != a2.dim or onto != a2:
            raise ManinMorphismInconsistency("uniqueness of related elements fails")
    return ok
