"""Dense matrices as tuples of row tuples, generic over a scalar field."""
from __future__ import annotations

from .scalars import EXACT


def as_matrix(rows, field=EXACT, shape=None):
    m = tuple(tuple(field.coerce(x) for x in row) for row in rows)
    if m and len({len(r) for r in m}) != 1:
        raise ValueError("ragged matrix")
    if shape is not None and m and (len(m), len(m[0])) != tuple(shape):
        raise ValueError(f"expected shape {shape}, got {(len(m), len(m[0]))}")
    return m


def zeros(r, c, field=EXACT):
    return tuple(tuple(field.zero for _ in range(c)) for _ in range(r))


def identity(n, field=EXACT):
    return tuple(
        tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)
    )


def ncols(m, default=0):
    return len(m[0]) if m else default


def transpose(m, rows_if_empty=0):
    if not m:
        return tuple(() for _ in range(rows_if_empty))
    return tuple(zip(*m))


def matmul(a, b, field=EXACT, cols=None):
    """Product ``a @ b``.

    When the inner dimension is zero ``b`` has no rows, so the column count
    cannot be read off and must be passed as ``cols``.
    """
    if not a:
        return ()
    k = len(a[0])
    if k == 0:
        if b:
            raise ValueError("shape mismatch: inner dimension 0 but b has rows")
        if cols is None:
            raise ValueError("empty inner dimension needs an explicit column count")
        return zeros(len(a), cols, field)
    if len(b) != k:
        raise ValueError(f"shape mismatch: {len(a)}x{k} @ {len(b)}x{ncols(b)}")
    bt = transpose(b)
    zero = field.zero
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), zero) for col in bt) for row in a
    )


def matvec(a, v, field=EXACT):
    zero = field.zero
    if a and len(a[0]) != len(v):
        raise ValueError("shape mismatch in matrix-vector product")
    return tuple(sum((x * y for x, y in zip(row, v)), zero) for row in a)


def add(a, b):
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def sub(a, b):
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def neg(a):
    return tuple(tuple(-x for x in r) for r in a)


def scale(s, a):
    return tuple(tuple(s * x for x in r) for r in a)


def chain(*ms, field=EXACT, shapes=None):
    """Left-to-right product ``ms[0] @ ms[1] @ ...``.

    ``shapes`` gives the column count of each factor, needed only when some
    inner dimension may be zero.
    """
    out = ms[0]
    for i, m in enumerate(ms[1:], start=1):
        out = matmul(out, m, field, cols=None if shapes is None else shapes[i])
    return out


def block(rows, field=EXACT):
    """Assemble a block matrix from a grid of matrices (all filled in)."""
    out = []
    for brow in rows:
        height = len(brow[0])
        for i in range(height):
            line = []
            for blk in brow:
                line.extend(blk[i])
            out.append(tuple(line))
    return tuple(out)


def vstack(*ms):
    return tuple(r for m in ms for r in m)


def hstack(*ms):
    return tuple(tuple(x for m in ms for x in m[i]) for i in range(len(ms[0])))


def inverse(m, field=EXACT):
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` if singular."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("inverse of a non-square matrix")
    aug = [list(r) + list(e) for r, e in zip(m, identity(n, field))]
    for col in range(n):
        best, score = None, 0
        for r in range(col, n):
            s = field.pivot_score(aug[r][col]) if field.is_unit(aug[r][col]) else 0
            if s > score:
                best, score = r, s
                if field.name != "float":
                    break
        if best is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[best] = aug[best], aug[col]
        p = aug[col][col]
        pinv = field.one / p
        aug[col] = [x * pinv for x in aug[col]]
        for r in range(n):
            if r != col and not field.is_zero(aug[r][col]):
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(r[n:]) for r in aug)


def is_invertible(m, field=EXACT) -> bool:
    try:
        inverse(m, field)
    except ZeroDivisionError:
        return False
    return True


def det(m, field=EXACT):
    """Determinant by elimination (fields only)."""
    n = len(m)
    a = [list(r) for r in m]
    result = field.one
    for col in range(n):
        piv = next((r for r in range(col, n) if field.is_unit(a[r][col])), None)
        if piv is None:
            return field.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        p = a[col][col]
        result = result * p
        for r in range(col + 1, n):
            if not field.is_zero(a[r][col]):
                factor = a[r][col] / p
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return result


def equal(a, b, field=EXACT) -> bool:
    if len(a) != len(b):
        return False
    for r, s in zip(a, b):
        if len(r) != len(s):
            return False
        if any(not field.is_zero(x - y) for x, y in zip(r, s)):
            return False
    return True


def max_abs_diff(a, b) -> float:
    return max((float(abs(x - y)) for r, s in zip(a, b) for x, y in zip(r, s)), default=0.0)


def column(v):
    return tuple((x,) for x in v)


def to_field(m, field):
    return tuple(tuple(field.coerce(x) for x in r) for r in m)


def unit_vector(n, i, field=EXACT):
    return tuple(field.one if j == i else field.zero for j in range(n))


def dot(u, v, field=EXACT):
    return sum((x * y for x, y in zip(u, v)), field.zero)
