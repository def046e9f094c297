"""Command line entry point.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for input errors.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

from . import files
from . import integrate as ig
from . import matrix as mx
from . import sampling as S
from . import suites
from .fatgroup import CoreAnchorDatum
from .liealg import GroupElement, InvalidGroupElement, ManinTriple, group_exp, group_identity, validate_group_element
from .linrel import Subspace, is_lagrangian
from .maninrep import ManinPairFiber
from .report import SKIP, Check, Report, check, render_json, render_markdown
from .scalars import parse_number

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def resolve_conventions(seed, samples=6) -> dict:
    """Orientation and sign conventions measured on a few random instances."""
    rng = suites.suite_rng(seed, "conventions")
    _, fconv = suites.fatgroup_checks(rng, samples)
    _, mconv = suites.maninrep_checks(rng, samples)
    return {
        "ad_orientation": suites.summarize(fconv.values()),
        "generator_sign": mconv["generator_sign"],
        "core_square": suites.CORE_SQUARE,
        "R_conditions": suites.R_CONDITIONS,
        "cotangent_moment": suites.MOMENT_SIGN,
    }


# -- inputs -------------------------------------------------------------------

def load_as(source, kind):
    obj = files.load(source)
    if not isinstance(obj, kind):
        raise InputError(f"{source}: expected a {kind.__name__}, found {type(obj).__name__}")
    return obj


_TERM = re.compile(r"^\s*(?:([-+]?[0-9./eE]+)\s*\*\s*)?([-+])?e(\d+)\s*$")


def _exponent(t: ManinTriple, text: str):
    f, basis = t.field, t.lagrangian.basis
    xi = [f.zero] * t.dim
    terms = re.split(r"(?<=\d)\s*(?=[-+])", text.strip())
    for term in terms:
        term = term.lstrip("+")
        m = _TERM.match(term)
        if not m:
            raise InputError(f"cannot parse exponent term {term!r}")
        coef = f.coerce(parse_number(m.group(1))) if m.group(1) else f.one
        if m.group(2) == "-":
            coef = -coef
        i = int(m.group(3))
        if i >= len(basis):
            raise InputError(f"e{i}: g has only {len(basis)} basis vectors")
        xi = [a + coef * b for a, b in zip(xi, basis[i])]
    return tuple(xi)


def parse_group_element(t: ManinTriple, text: str) -> GroupElement:
    """``id``, ``exp:<terms>`` with factors joined by ``,``, or a JSON matrix file.

    Terms look like ``e0``, ``-e1`` or ``1/2*e2`` and refer to the canonical
    basis of g.
    """
    text = text.strip()
    if text in ("id", "e", "identity"):
        return group_identity(t)
    if text.startswith("exp:"):
        g = group_identity(t)
        for factor in text.split(","):
            body = factor.strip()
            body = body[4:] if body.startswith("exp:") else body
            try:
                g = g @ group_exp(t, _exponent(t, body))
            except (ValueError, ZeroDivisionError) as e:
                raise InputError(f"bad exponent {body!r}: {e}")
        return g
    p = Path(text)
    if not p.exists():
        raise InputError(f"group element {text!r} is neither exp:... nor an existing file")
    try:
        doc = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{text}: line {e.lineno}, column {e.colno}: {e.msg}")
    rows = doc.get("matrix") if isinstance(doc, dict) else doc
    try:
        m = tuple(tuple(t.field.coerce(parse_number(x)) for x in r) for r in rows)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"{text}: bad matrix: {e}")
    g = GroupElement(m, t.field)
    try:
        validate_group_element(t, g)
    except InvalidGroupElement as e:
        raise InputError(f"{text}: {e}")
    return g


def parse_complement(t: ManinTriple, text):
    if text in (None, "h"):
        if t.complement is None:
            raise InputError("the triple has no complement; pass --complement")
        return t.complement
    p = Path(text)
    if not p.exists():
        raise InputError(f"complement file {text!r} not found")
    try:
        doc = json.loads(p.read_text())
        rows = doc.get("basis") if isinstance(doc, dict) else doc
        vecs = [tuple(t.field.coerce(parse_number(x)) for x in r) for r in rows]
    except (json.JSONDecodeError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"{text}: {e}")
    if any(len(v) != t.dim for v in vecs):
        raise InputError(f"{text}: vectors must have length {t.dim}")
    c = Subspace.span(vecs, t.dim, t.field)
    if not is_lagrangian(c, t.metric):
        raise InputError(f"{text}: complement is not Lagrangian")
    if Subspace.span(list(c.basis) + list(t.lagrangian.basis), t.dim, t.field).dim != t.dim:
        raise InputError(f"{text}: complement is not transverse to g")
    return c


# -- commands -----------------------------------------------------------------

def cmd_check_lie(a):
    t = load_as(a.source, ManinTriple)
    r = Report("check-lie", a.source)
    r.extend(suites.lie_checks(t))
    return [r]


def cmd_check_fatgroup(a):
    rng = suites.suite_rng(a.seed, "fatgroup")
    r = Report("check-fatgroup", a.source or "random", params={"samples": a.samples, "seed": a.seed})
    if a.source:
        d = load_as(a.source, CoreAnchorDatum)
        r.extend(_datum_checks(d, rng, a.samples))
    else:
        cs, _ = suites.fatgroup_checks(rng, a.samples)
        r.extend(cs)
    return [r]


def _datum_checks(d, rng, samples):
    from . import fatgroup as fg

    assoc, inv, orient = [], [], []
    for _ in range(samples):
        f1, f2, f3 = (S.k_element(rng, d) for _ in range(3))
        lhs = fg.k_mul(d, fg.k_mul(d, f1, f2), f3)
        assoc.append((mx.equal(lhs, fg.k_mul(d, f1, fg.k_mul(d, f2, f3)), d.field), {"f": (f1, f2, f3)}))
        z = d.zero()
        inv.append((mx.equal(fg.k_mul(d, f1, fg.k_inv(d, f1)), z, d.field), {"f": f1}))
        orient.append(fg.action_orientation(d, f1, f2, lambda f: fg.ad_b(d, f)))
    o = suites.summarize(orient)
    return [suites._tally("k associativity", assoc), suites._tally("k inverse", inv),
            check("Ad^B orientation", not o.startswith("inconsistent"), {"value": o}, o),
            check("comorphism subgroupoid", ig.s_is_subgroupoid(d))]


def cmd_check_maninrep(a):
    rng = suites.suite_rng(a.seed, "maninrep")
    r = Report("check-maninrep", a.source or "random", params={"samples": a.samples, "seed": a.seed})
    if a.source:
        fb = load_as(a.source, ManinPairFiber)
        r.extend(_fiber_checks(fb, rng, a.samples))
    else:
        cs, _ = suites.maninrep_checks(rng, a.samples)
        r.extend(cs)
    return [r]


def _fiber_checks(fb, rng, samples):
    from . import maninrep as mr

    if not fb.courant:
        return [Check("fiber", SKIP, {"reason": "not Courant-flagged"})]
    d = fb.datum()
    res = {"equivariance": [], "two formulas agree": [], "metric preserved": [], "K x K invariance": []}
    for _ in range(samples):
        f1, f2 = S.k_element(rng, d), S.k_element(rng, d)
        res["equivariance"].append((all(mr.equivariance_checks(fb, f1).values()), {"f": f1}))
        ad = mr.ad_E(fb, f1)
        res["two formulas agree"].append((mx.equal(ad, mr.ad_E_second(fb, f1), fb.field), {"f": f1}))
        res["metric preserved"].append((fb.E.is_preserved_by(ad), {"f": f1}))
        res["K x K invariance"].append((mr.rum_invariance(fb, f1, f2), {"f1": f1, "f2": f2}))
    out = [suites._tally(k, v) for k, v in res.items()]
    out.append(check("graph sum lagrangian", mr.rum_is_lagrangian(fb)))
    out.append(check("core anchor square", mr.core_anchor_square(fb)))
    return out


def cmd_build_r(a):
    t = load_as(a.source, ManinTriple)
    g = parse_group_element(t, a.g)
    try:
        rel = ig.build_R(t, g)
    except InvalidGroupElement as e:
        raise InputError(str(e))
    r = Report("build-R", a.source, params={"g": a.g})
    detail = {"dim": rel.graph.dim, "ambient_dim": rel.graph.ambient_dim,
              "coordinates": "(zeta', zeta, xi, tau)"}
    if a.emit_basis:
        detail["basis"] = rel.graph.basis
    r.add(Check("relation", "pass", detail))
    r.add(check("R lagrangian", ig.is_lagrangian_R(rel)))
    r.add(check("R morphism", ig.check_manin_morphism_R(rel)))
    alt = ig.check_alt_form(rel)
    r.add(check("alternative form", all(alt.values()), {"parts": alt}, alt))
    r.add(check("tangent consistency", ig.tangent_consistency(rel)))
    return [r]


def cmd_extract_poisson(a):
    t = load_as(a.source, ManinTriple)
    g = parse_group_element(t, a.g)
    comp = parse_complement(t, a.complement)
    r = Report("extract-poisson", a.source, params={"g": a.g, "complement": a.complement or "h"})
    try:
        p = ig.extract_bivector(t, g, comp)
    except ig.NotAGraph as e:
        r.add(check("bivector", False, witness=str(e)))
        return [r]
    res = float(ig.skew_residual(p))
    ok = ig.is_skew(p, t.field) and (t.field.name == "exact" or res <= 1e-9)
    r.add(check("bivector skew", ok, {"pi": p, "skew_residual": res}, p))
    return [r]


def cmd_check_hamiltonian(a):
    rng = suites.suite_rng(a.seed, "hamiltonian")
    t = load_as(a.source, ManinTriple) if a.source else None
    r = Report("check-hamiltonian", a.source or "random", params={"samples": a.samples, "seed": a.seed})
    r.extend(suites.hamiltonian_checks(t, rng, a.samples))
    return [r]


def verify(source, samples, seed) -> Report:
    t = load_as(source, ManinTriple)
    r = Report("verify-all", source, params={"samples": samples, "seed": seed})
    r.extend(suites.lie_checks(t))
    cs, _ = suites.fatgroup_checks(suites.suite_rng(seed, "fatgroup"), samples)
    r.extend(cs)
    cs, _ = suites.maninrep_checks(suites.suite_rng(seed, "maninrep"), samples)
    r.extend(cs)
    r.extend(suites.integrate_checks(t, suites.suite_rng(seed, "integrate"), samples))
    r.extend(suites.hamiltonian_checks(t, suites.suite_rng(seed, "hamiltonian"), samples))
    return r


def cmd_verify_all(a):
    sources = [a.source] if a.source else list(files.BUILTIN_NAMES)
    return [verify(s, a.samples, a.seed) for s in sources]


def cmd_report(a):
    sources = a.sources or list(files.BUILTIN_NAMES)
    return [verify(s, a.samples, a.seed) for s in sources]


COMMANDS = {
    "check-lie": cmd_check_lie,
    "check-fatgroup": cmd_check_fatgroup,
    "check-maninrep": cmd_check_maninrep,
    "build-R": cmd_build_r,
    "verify-all": cmd_verify_all,
    "extract-poisson": cmd_extract_poisson,
    "check-hamiltonian": cmd_check_hamiltonian,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "markdown"), default=None)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings")
    sampled = argparse.ArgumentParser(add_help=False)
    sampled.add_argument("--samples", type=int, default=10)
    sampled.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="artifact", description="Verify Manin pair and fat groupoid constructions.")
    sub = p.add_subparsers(dest="command", required=True)
    src = "built-in name (%s) or path to a JSON document" % ", ".join(files.BUILTIN_NAMES)

    s = sub.add_parser("check-lie", parents=[common], help="validate a Manin triple document")
    s.add_argument("source", help=src)
    s = sub.add_parser("check-fatgroup", parents=[common, sampled], help="fat group axioms")
    s.add_argument("source", nargs="?", help="core-anchor datum document (random data if omitted)")
    s = sub.add_parser("check-maninrep", parents=[common, sampled], help="adjoint actions on anchored fibers")
    s.add_argument("source", nargs="?", help="anchored fiber document (random data if omitted)")
    s = sub.add_parser("build-R", parents=[common], help="build the integrating relation at g")
    s.add_argument("source", help=src)
    s.add_argument("--g", required=True, help='"id", "exp:e0+1/2*e1" (factors joined by ",") or a matrix file')
    s.add_argument("--emit-basis", action="store_true")
    s = sub.add_parser("verify-all", parents=[common, sampled], help="every suite on one triple")
    s.add_argument("source", nargs="?", help=src + " (all built-ins if omitted)")
    s = sub.add_parser("extract-poisson", parents=[common], help="bivector at g from a complement")
    s.add_argument("source", help=src)
    s.add_argument("--g", required=True)
    s.add_argument("--complement", help='"h" (default) or a JSON file with basis rows')
    s = sub.add_parser("check-hamiltonian", parents=[common, sampled], help="Hamiltonian space checks")
    s.add_argument("source", nargs="?", help=src)
    s = sub.add_parser("report", parents=[common, sampled], help="verify-all rendered for reading")
    s.add_argument("sources", nargs="*")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    fmt = a.format or ("markdown" if a.command == "report" else "json")
    seed = getattr(a, "seed", 0)
    start = time.perf_counter()
    try:
        reports = COMMANDS[a.command](a)
    except files.LoadError as e:
        for item in e.items:
            print(f"error: {item['where']}: {item['message']}"
                  + (f" (witness: {json.dumps(item['witness'])})" if "witness" in item else ""), file=sys.stderr)
        return EXIT_INPUT
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    conv = resolve_conventions(seed)
    for r in reports:
        r.conventions = conv
        if a.timing:
            r.timing = {"total": time.perf_counter() - start}
    text = render_json(reports) if fmt == "json" else render_markdown(reports)
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if any(r.status == "fail" for r in reports) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
