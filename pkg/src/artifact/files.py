"""JSON documents for triples, core-anchor data and anchored fibers.

Numbers are strings: ``"p/q"`` in exact mode, ``repr`` of the float otherwise.
Structure constants are listed entry by entry, so a file can describe a
bracket that is not antisymmetric; the loader reports it instead of fixing it.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .fatgroup import CoreAnchorDatum
from .liealg import LieAlgebra, ManinTriple, MetrizedLieAlgebra
from .linrel import MetrizedSpace, Subspace
from .maninrep import ManinPairFiber
from .scalars import Exact, field_from_mode, parse_number

BUILTIN_NAMES = ("abelian_4", "heisenberg_double", "sl2_double")


class LoadError(ValueError):
    """Itemized problems found while loading a document."""

    def __init__(self, items):
        self.items = list(items)
        super().__init__("; ".join(f"{i['where']}: {i['message']}" for i in self.items))


def number_text(x) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    x = float(x)
    return "0.0" if x == 0 else repr(x)


def to_text(doc: dict) -> str:
    """JSON with one line per matrix row or structure constant."""
    lines = ["{"]
    items = list(doc.items())
    for n, (k, v) in enumerate(items):
        end = "," if n < len(items) - 1 else ""
        if isinstance(v, dict):
            lines.append(f"  {json.dumps(k)}: {{")
            sub = list(v.items())
            for m, (sk, sv) in enumerate(sub):
                lines.append(f"    {json.dumps(sk)}: " + _block(sv, 4) + ("," if m < len(sub) - 1 else ""))
            lines.append("  }" + end)
        else:
            lines.append(f"  {json.dumps(k)}: " + _block(v, 2) + end)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _block(v, indent):
    if isinstance(v, list) and v and all(isinstance(r, list) for r in v):
        pad = " " * (indent + 2)
        body = ",\n".join(pad + json.dumps(r) for r in v)
        return "[\n" + body + "\n" + " " * indent + "]"
    return json.dumps(v)


def _rows(m):
    return [[number_text(x) for x in r] for r in m]


def _mode(field):
    return "exact" if isinstance(field, Exact) else "float"


def _header(kind, name, field):
    doc = {"kind": kind, "name": name, "mode": _mode(field)}
    if doc["mode"] == "float":
        doc["epsilon"] = repr(field.eps)
    return doc


def dump_triple(t: ManinTriple) -> dict:
    a = t.algebra
    doc = _header("manin_triple", t.name, t.field)
    doc["dim"] = t.dim
    doc["structure_constants"] = [
        [i, j, k, number_text(a.c[i][j][k])]
        for i in range(a.dim) for j in range(a.dim) for k in range(a.dim)
        if not a.field.is_zero(a.c[i][j][k])
    ]
    doc["metric"] = _rows(t.metric.form)
    doc["subspaces"] = {"g": _rows(t.lagrangian.basis)}
    if t.complement is not None:
        doc["subspaces"]["h"] = _rows(t.complement.basis)
    return doc


def dump_datum(d: CoreAnchorDatum, name="") -> dict:
    doc = _header("core_anchor_datum", name, d.field)
    doc.update({"c": d.c, "b": d.b, "rho": _rows(d.rho)})
    return doc


def dump_fiber(fb: ManinPairFiber, name="") -> dict:
    doc = _header("manin_pair_fiber", name, fb.field)
    doc["dim"] = fb.E.dim
    doc["metric"] = _rows(fb.E.form)
    doc["anchor"] = _rows(fb.anchor)
    doc["courant"] = fb.courant
    doc["subspaces"] = {"A": _rows(fb.A.basis)}
    if fb.complement is not None:
        doc["subspaces"]["complement"] = _rows(fb.complement.basis)
    return doc


def dump(obj, name="") -> dict:
    if isinstance(obj, ManinTriple):
        return dump_triple(obj)
    if isinstance(obj, CoreAnchorDatum):
        return dump_datum(obj, name)
    if isinstance(obj, ManinPairFiber):
        return dump_fiber(obj, name)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def save(obj, path, name="") -> None:
    Path(path).write_text(to_text(dump(obj, name)))


# -- loading -----------------------------------------------------------------

class _Reader:
    def __init__(self, doc):
        self.doc = doc
        self.items = []

    def fail(self, where, message, witness=None):
        item = {"where": where, "message": message}
        if witness is not None:
            item["witness"] = witness
        self.items.append(item)

    def get(self, key, kind=None, default=...):
        if key not in self.doc:
            if default is ...:
                self.fail(key, "missing field")
            return None if default is ... else default
        v = self.doc[key]
        if kind is not None and not isinstance(v, kind):
            self.fail(key, f"expected {kind.__name__ if isinstance(kind, type) else kind}")
            return None
        return v

    def number(self, where, text, field):
        try:
            return field.coerce(parse_number(text) if isinstance(text, str) else text)
        except (ValueError, ZeroDivisionError, TypeError) as e:
            self.fail(where, f"bad number {text!r}: {e}")
            return None

    def matrix(self, where, rows, field, shape=None):
        if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
            self.fail(where, "expected a list of rows")
            return None
        out = []
        for i, r in enumerate(rows):
            out.append(tuple(self.number(f"{where}[{i}][{j}]", x, field) for j, x in enumerate(r)))
        if any(x is None for r in out for x in r):
            return None
        if shape is not None:
            nr, nc = shape
            if (nr is not None and len(out) != nr) or any(len(r) != nc for r in out):
                self.fail(where, f"expected shape {nr if nr is not None else '*'}x{nc}")
                return None
        return tuple(out)


def _field(r: _Reader):
    mode = r.get("mode", str, "exact")
    eps = r.get("epsilon", None, None)
    try:
        return field_from_mode(mode, None if eps is None else float(eps))
    except ValueError as e:
        r.fail("mode", str(e))
        return None


def _witness(x):
    from .report import jsonable

    return jsonable(x)


def _load_triple(r: _Reader, field):
    dim = r.get("dim", int)
    name = r.get("name", str, "")
    sc = r.get("structure_constants", list)
    subs = r.get("subspaces", dict)
    if dim is None or sc is None or subs is None:
        raise LoadError(r.items)
    triples = []
    for idx, e in enumerate(sc):
        where = f"structure_constants[{idx}]"
        if not (isinstance(e, list) and len(e) == 4 and all(isinstance(i, int) for i in e[:3])):
            r.fail(where, "expected [i, j, k, value]")
            continue
        i, j, k, v = e
        if not all(0 <= x < dim for x in (i, j, k)):
            r.fail(where, f"index out of range for dim {dim}")
            continue
        v = r.number(where, v, field)
        if v is not None:
            triples.append((i, j, k, v))
    metric = r.matrix("metric", r.get("metric", list), field, (dim, dim))
    g = r.matrix("subspaces.g", subs.get("g"), field, (None, dim)) if "g" in subs else None
    if g is None and "g" not in subs:
        r.fail("subspaces.g", "missing Lagrangian subalgebra")
    h = r.matrix("subspaces.h", subs["h"], field, (None, dim)) if "h" in subs else None
    if r.items:
        raise LoadError(r.items)
    algebra = LieAlgebra.from_sparse(dim, triples, field, antisymmetrize=False)
    for i, j, k in algebra.antisymmetry_violations()[:5]:
        if i < j:
            r.fail(f"structure_constants c[{i}][{j}][{k}]", "antisymmetry violated",
                   _witness({"c_ijk": algebra.c[i][j][k], "c_jik": algebra.c[j][i][k]}))
    if r.items:
        raise LoadError(r.items)
    space = MetrizedSpace(dim, metric, field)
    if not all(field.is_zero(metric[i][j] - metric[j][i]) for i in range(dim) for j in range(dim)):
        r.fail("metric", "not symmetric")
        raise LoadError(r.items)
    gs = Subspace.span(g, dim, field)
    if gs.dim != len(g):
        r.fail("subspaces.g", "basis vectors are linearly dependent")
    hs = None
    if h is not None:
        hs = Subspace.span(h, dim, field)
        if hs.dim != len(h):
            r.fail("subspaces.h", "basis vectors are linearly dependent")
    if r.items:
        raise LoadError(r.items)
    t = ManinTriple(MetrizedLieAlgebra(algebra, space), gs, hs, name)
    for inv, w in t.problems():
        r.fail(f"invariant {inv}", "violated", _witness(w))
    if r.items:
        raise LoadError(r.items)
    return t


def _load_datum(r: _Reader, field):
    c, b = r.get("c", int), r.get("b", int)
    rho = r.get("rho", list)
    if c is None or b is None or rho is None:
        raise LoadError(r.items)
    m = r.matrix("rho", rho, field, (b, c))
    if r.items:
        raise LoadError(r.items)
    return CoreAnchorDatum(c, b, m if b else (), field)


def _load_fiber(r: _Reader, field):
    from .linrel import is_lagrangian

    dim = r.get("dim", int)
    subs = r.get("subspaces", dict)
    if dim is None or subs is None:
        raise LoadError(r.items)
    metric = r.matrix("metric", r.get("metric", list), field, (dim, dim))
    anchor = r.matrix("anchor", r.get("anchor", list), field, (None, dim))
    a = r.matrix("subspaces.A", subs.get("A", []), field, (None, dim))
    comp = r.matrix("subspaces.complement", subs["complement"], field, (None, dim)) \
        if "complement" in subs else None
    courant = r.get("courant", bool, True)
    if r.items:
        raise LoadError(r.items)
    space = MetrizedSpace(dim, metric, field)
    if not space.is_nondegenerate():
        r.fail("metric", "degenerate")
        raise LoadError(r.items)
    A = Subspace.span(a, dim, field)
    C = Subspace.span(comp, dim, field) if comp is not None else None
    if not is_lagrangian(A, space):
        r.fail("invariant lagrangian A", "violated", _witness(A.basis))
    if C is not None and not is_lagrangian(C, space):
        r.fail("invariant lagrangian complement", "violated", _witness(C.basis))
    if r.items:
        raise LoadError(r.items)
    try:
        return ManinPairFiber(space, A, anchor, courant=courant, complement=C)
    except ValueError as e:
        r.fail("invariant", str(e))
        raise LoadError(r.items)


_KINDS = {"manin_triple": _load_triple, "core_anchor_datum": _load_datum, "manin_pair_fiber": _load_fiber}


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError([{"where": f"line {e.lineno}, column {e.colno}", "message": e.msg}])
    if not isinstance(doc, dict):
        raise LoadError([{"where": "document", "message": "expected an object"}])
    r = _Reader(doc)
    kind = r.get("kind", str, "manin_triple")
    if kind not in _KINDS:
        raise LoadError([{"where": "kind", "message": f"unknown kind {kind!r}"}])
    field = _field(r)
    if field is None:
        raise LoadError(r.items)
    return _KINDS[kind](r, field)


def builtin_text(name: str) -> str:
    return resources.files("artifact").joinpath("data", f"{name}.json").read_text()


def load(source):
    """Load a path or the name of a built-in document."""
    s = str(source)
    if s in BUILTIN_NAMES:
        return loads(builtin_text(s))
    name = s[:-5] if s.endswith(".json") else None
    p = Path(s)
    if not p.exists():
        if name in BUILTIN_NAMES:
            return loads(builtin_text(name))
        raise LoadError([{"where": s, "message": "no such file"}])
    return loads(p.read_text())
