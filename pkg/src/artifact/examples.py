"""Built-in Manin triples: abelian, a nilpotent Heisenberg double, and the sl2 double."""
from __future__ import annotations

from . import matrix as mx
from .liealg import LieAlgebra, ManinTriple, MetrizedLieAlgebra
from .linrel import MetrizedSpace, Subspace
from .scalars import EXACT, Approx


def drinfeld_double(g_triples, dual_triples, n, field=EXACT, name=""):
    """Double ``g (+) g*`` of a Lie bialgebra given by both sets of structure constants.

    ``g_triples`` are ``(i, j, k, v)`` for ``[e_i, e_j] = v e_k`` and
    ``dual_triples`` the same for the bracket on ``g*``. The mixed bracket is
    ``[x, a] = ad*_x a - ad*_a x``. Validity (the cocycle condition) is left to
    :meth:`ManinTriple.validate`.
    """
    a = LieAlgebra.from_sparse(n, g_triples, field).c
    b = LieAlgebra.from_sparse(n, dual_triples, field).c
    entries = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                if not field.is_zero(a[i][j][k]):
                    entries.append((i, j, k, a[i][j][k]))
                if not field.is_zero(b[i][j][k]):
                    entries.append((n + i, n + j, n + k, b[i][j][k]))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if not field.is_zero(a[i][k][j]):
                    entries.append((i, n + j, n + k, -a[i][k][j]))
                if not field.is_zero(b[j][k][i]):
                    entries.append((i, n + j, k, b[j][k][i]))
    merged = {}
    for i, j, k, v in entries:
        merged[(i, j, k)] = merged.get((i, j, k), field.zero) + v
    alg = LieAlgebra.from_sparse(2 * n, [(i, j, k, v) for (i, j, k), v in merged.items()], field)
    metric = MetrizedSpace.split(n, field)
    g = Subspace.coordinates(2 * n, range(n), field)
    h = Subspace.coordinates(2 * n, range(n, 2 * n), field)
    return ManinTriple(MetrizedLieAlgebra(alg, metric), g, h, name)


def abelian_double(n: int = 2, field=EXACT) -> ManinTriple:
    return drinfeld_double([], [], n, field, name=f"abelian_{2 * n}")


def heisenberg_double(field=EXACT) -> ManinTriple:
    """``g`` is the Heisenberg algebra ``[e0, e1] = e2``; ``g*`` has ``[e1*, e2*] = e0*``.

    Both brackets are nilpotent and so is the double, so every exponential is
    an exact finite sum.
    """
    return drinfeld_double([(0, 1, 2, 1)], [(1, 2, 0, 1)], 3, field, name="heisenberg_double")


def sl2_double(field=None) -> ManinTriple:
    """``sl2 (+) sl2`` with form ``tr(ac) - tr(bd)``, diagonal ``g`` and Borel-type ``h``.

    Basis order: (e,0), (h,0), (f,0), (0,e), (0,h), (0,f).
    """
    field = Approx() if field is None else field
    sl2 = [(1, 0, 0, 2), (1, 2, 2, -2), (0, 2, 1, 1)]
    entries = sl2 + [(i + 3, j + 3, k + 3, v) for i, j, k, v in sl2]
    alg = LieAlgebra.from_sparse(6, entries, field)
    trace = ((0, 0, 1), (0, 2, 0), (1, 0, 0))
    z = mx.zeros(3, 3, field)
    form = mx.block([[mx.to_field(trace, field), z], [z, mx.neg(mx.to_field(trace, field))]])
    metric = MetrizedSpace(6, form, field)
    g = Subspace.span([[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 1, 0], [0, 0, 1, 0, 0, 1]], 6, field)
    h = Subspace.span([[0, 1, 0, 0, -1, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1]], 6, field)
    return ManinTriple(MetrizedLieAlgebra(alg, metric), g, h, "sl2_double")


BUILTIN = {
    "abelian_4": lambda: abelian_double(2),
    "heisenberg_double": heisenberg_double,
    "sl2_double": sl2_double,
}
