"""Independent reference computations used by the tests.

Exact linear algebra goes through sympy, floating point through numpy/scipy.
Nothing here calls into the package's own elimination code.
"""
from __future__ import annotations

import numpy as np
import sympy as sp
from scipy.linalg import expm


def _rat(x):
    return sp.Rational(x.numerator, x.denominator) if hasattr(x, "numerator") else sp.nsimplify(x)


def rref_rows(vectors, n):
    """Nonzero rows of the reduced echelon form of the stacked vectors."""
    if not vectors:
        return []
    m = sp.Matrix([[_rat(x) for x in v] for v in vectors])
    r, piv = m.rref()
    return [list(r.row(i)) for i in range(len(piv))]


def canonical(vectors, n) -> str:
    rows = rref_rows(vectors, n)
    return f"{n}:[" + ",".join("[" + ",".join(str(x) for x in r) + "]" for r in rows) + "]"


def _null(cols_blocks):
    """Null space of the horizontal concatenation of column blocks."""
    m = sp.Matrix.hstack(*cols_blocks)
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [sp.eye(m.cols).col(i) for i in range(m.cols)]
    return m.nullspace()


def _mat(vectors, lo, hi):
    """Columns are the slices ``v[lo:hi]`` of the given vectors."""
    if not vectors or hi == lo:
        return sp.zeros(hi - lo, len(vectors))
    return sp.Matrix([[_rat(v[i]) for v in vectors] for i in range(lo, hi)])


def compose(g2, t2, s2, g1, t1, s1):
    """Graph basis of ``r2 o r1`` from graph bases of both relations.

    ``g2`` lives in ``t2 + s2`` coordinates, ``g1`` in ``t1 + s1`` with ``s2 == t1``.
    Solves for coefficient vectors that agree on the shared middle factor.
    """
    mid2 = _mat(g2, t2, t2 + s2)
    mid1 = _mat(g1, 0, t1)
    null = _null([mid2, -mid1])
    z2 = _mat(g2, 0, t2)
    x1 = _mat(g1, t1, t1 + s1)
    out = []
    for v in null:
        a, b = v[: len(g2), :], v[len(g2):, :]
        out.append(list(z2 * a) + list(x1 * b))
    return out


def backward(g, t, s, u):
    """``{x : (z, x) in graph for some z in u}``."""
    zg = _mat(g, 0, t)
    xg = _mat(g, t, t + s)
    blocks = [zg]
    if u:
        blocks.append(-_mat(u, 0, t))
    null = _null(blocks)
    return [list(xg * v[: len(g), :]) for v in null]


def forward(g, t, s, u):
    """``{z : (z, x) in graph for some x in u}``."""
    swapped = [list(v[t:]) + list(v[:t]) for v in g]
    return backward(swapped, s, t, u)


def float_expm(m):
    return expm(np.array(m, dtype=float))


def as_array(m):
    return np.array([[float(x) for x in r] for r in m], dtype=float)


def isotropic(vectors, form) -> bool:
    """``B G B^T = 0`` in exact arithmetic."""
    if not vectors:
        return True
    b = sp.Matrix([[_rat(x) for x in v] for v in vectors])
    g = sp.Matrix([[_rat(x) for x in r] for r in form])
    return (b * g * b.T).is_zero_matrix


def rank(vectors) -> int:
    if not vectors or not len(vectors[0]):
        return 0
    return sp.Matrix([[_rat(x) for x in v] for v in vectors]).rank()


def _orth(vectors):
    a = np.array([[float(x) for x in v] for v in vectors], dtype=float)
    if a.size == 0:
        return None
    u, sv, _ = np.linalg.svd(a.T, full_matrices=False)
    keep = sv > 1e-10 * max(sv.max(), 1.0)
    return u[:, keep]


def span_residual(vectors, basis) -> float:
    """Largest distance of a unit vector in span(vectors) from span(basis)."""
    qa = _orth(vectors)
    if qa is None or not qa.shape[1]:
        return 0.0
    qb = _orth(basis)
    if qb is None or not qb.shape[1]:
        return 1.0
    return float(np.linalg.norm(qa - qb @ (qb.T @ qa), axis=0).max())
