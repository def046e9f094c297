"""Verification suites run by the command line tool."""
from __future__ import annotations

import random

from . import fatgroup as fg
from . import hamiltonian as hm
from . import integrate as ig
from . import maninrep as mr
from . import matrix as mx
from . import sampling as S
from .liealg import ManinTriple, group_identity
from .report import PASS, SKIP, Check, check

TRIPLE_INVARIANTS = (
    "antisymmetry", "jacobi", "split metric", "ad-invariance",
    "lagrangian g", "g subalgebra", "lagrangian h", "h complement to g",
)

CORE_SQUARE = "<y, y> = 2 mu(a_A x) = -<beta y, beta y>"
R_CONDITIONS = "inc xi = zeta - Ad_{g^-1} zeta', tau = -pr zeta"
MOMENT_SIGN = "<Phi(mu), x> = -mu(x_P)"


def suite_rng(seed, name):
    return random.Random(f"{seed}:{name}")


def summarize(observed) -> str:
    """Collapse per-sample orientation or sign results into one label."""
    vals = set(observed) - {"both"}
    if not vals:
        return "undetermined"
    if len(vals) == 1:
        return vals.pop()
    return "inconsistent: " + ",".join(sorted(vals))


def _first_failure(results):
    for i, (ok, w) in enumerate(results):
        if not ok:
            return {"sample": i, "data": w}
    return None


def _tally(name, results, detail=None):
    ok = all(r for r, _ in results)
    d = {"samples": len(results)}
    d.update(detail or {})
    return check(name, ok, d, _first_failure(results))


def lie_checks(t: ManinTriple):
    found = dict(t.problems())
    out = []
    for inv in TRIPLE_INVARIANTS:
        if inv.endswith("h") or inv.startswith("h "):
            if t.complement is None:
                out.append(Check(inv, SKIP, {"reason": "no complement"}))
                continue
        out.append(check(inv, inv not in found, witness=found.get(inv)))
    out.append(Check("nilpotent", PASS, {"value": t.algebra.is_nilpotent()}))
    return out


def fatgroup_checks(rng, samples):
    assoc, unit, inv, orient = [], [], [], {"Ad^B": [], "Ad^C": []}
    comorph = []
    for _ in range(samples):
        d = S.core_anchor_datum(rng)
        f1, f2, f3 = (S.k_element(rng, d) for _ in range(3))
        lhs = fg.k_mul(d, fg.k_mul(d, f1, f2), f3)
        rhs = fg.k_mul(d, f1, fg.k_mul(d, f2, f3))
        assoc.append((mx.equal(lhs, rhs, d.field), {"f1": f1, "f2": f2, "f3": f3}))
        z = d.zero()
        unit.append((mx.equal(fg.k_mul(d, z, f1), f1, d.field) and mx.equal(fg.k_mul(d, f1, z), f1, d.field),
                     {"f": f1}))
        fi = fg.k_inv(d, f1)
        inv.append((mx.equal(fg.k_mul(d, f1, fi), z, d.field) and mx.equal(fg.k_mul(d, fi, f1), z, d.field),
                    {"f": f1}))
        orient["Ad^B"].append(fg.action_orientation(d, f1, f2, lambda f: fg.ad_b(d, f)))
        orient["Ad^C"].append(fg.action_orientation(d, f1, f2, lambda f: fg.ad_c(d, f)))
        comorph.append((ig.s_is_subgroupoid(d), {"rho": d.rho}))
    out = [
        _tally("k associativity", assoc),
        _tally("k unit", unit),
        _tally("k inverse", inv),
        _tally("comorphism subgroupoid", comorph),
    ]
    conv = {k: summarize(v) for k, v in orient.items()}
    for k, v in conv.items():
        out.append(check(f"{k} orientation", not v.startswith("inconsistent"), {"value": v}, v))
    return out, conv


def maninrep_checks(rng, samples):
    res = {k: [] for k in ("anchor equivariance", "quotient equivariance", "restriction to A",
                           "two formulas agree", "alpha-beta formula", "metric preserved",
                           "K x K invariance", "graph sum lagrangian", "core square identity",
                           "core anchor square")}
    signs = []
    for _ in range(samples):
        fb = S.courant_fiber(rng)
        d = fb.datum()
        f1, f2 = S.k_element(rng, d), S.k_element(rng, d)
        w = {"anchor": fb.anchor, "A": fb.A.basis, "f": f1}
        eq = mr.equivariance_checks(fb, f1)
        res["anchor equivariance"].append((eq["anchor"], w))
        res["quotient equivariance"].append((eq["quotient"], w))
        res["restriction to A"].append((eq["restriction"], w))
        ad = mr.ad_E(fb, f1)
        res["two formulas agree"].append((mx.equal(ad, mr.ad_E_second(fb, f1), fb.field), w))
        res["alpha-beta formula"].append((mx.equal(ad, mr.ad_E_via_alpha_beta(fb, f1), fb.field), w))
        res["metric preserved"].append((fb.E.is_preserved_by(ad), w))
        res["K x K invariance"].append((mr.rum_invariance(fb, f1, f2), {**w, "f2": f2}))
        res["graph sum lagrangian"].append((mr.rum_is_lagrangian(fb), w))
        y = S.vector(rng, fb.n + fb.m)
        res["core square identity"].append((mr.core_square_holds(fb, y), {**w, "y": y}))
        res["core anchor square"].append((mr.core_anchor_square(fb), w))
        if fb.m:
            signs.append(mr.generator_sign(fb, S.matrix(rng, fb.n, fb.m)))
    out = [_tally(k, v) for k, v in res.items()]
    sign = summarize(signs)
    out.append(check("generator sign", sign in ("+", "-"), {"value": sign}, sign))
    return out, {"generator_sign": sign}


def group_samples(t: ManinTriple, rng, samples):
    return [S.group_element(rng, t) for _ in range(samples)]


def integrate_checks(t: ManinTriple, rng, samples):
    f = t.field
    if f.name == "exact" and not t.algebra.is_nilpotent():
        return [Check("integration", SKIP, {"reason": "exact mode needs a nilpotent double"})]
    gs = group_samples(t, rng, samples)
    res = {k: [] for k in ("R lagrangian", "R morphism", "alternative form", "tangent consistency",
                           "subgroupoid law")}
    for g in gs:
        rel = ig.build_R(t, g)
        w = {"g": g.matrix}
        res["R lagrangian"].append((ig.is_lagrangian_R(rel), w))
        res["R morphism"].append((ig.check_manin_morphism_R(rel), w))
        alt = ig.check_alt_form(rel)
        res["alternative form"].append((all(alt.values()), {**w, "parts": alt}))
        res["tangent consistency"].append((ig.tangent_consistency(rel), w))
    pairs = list(zip(gs, gs[1:] + gs[:1]))
    for g1, g2 in pairs:
        res["subgroupoid law"].append((ig.check_subgroupoid(t, g1, g2), {"g1": g1.matrix, "g2": g2.matrix}))
    out = [_tally(k, v) for k, v in res.items()]
    if t.complement is None:
        out.append(Check("bivector", SKIP, {"reason": "no complement"}))
    else:
        e = group_identity(t)
        pe = ig.extract_bivector(t, e)
        out.append(check("bivector vanishes at identity", mx.equal(pe, mx.zeros(t.n, t.n, f), f), witness=pe))
        skew = []
        worst = 0.0
        for g in gs:
            p = ig.extract_bivector(t, g)
            worst = max(worst, float(ig.skew_residual(p)))
            skew.append((ig.is_skew(p, f), {"g": g.matrix, "pi": p}))
        out.append(_tally("bivector skew", skew, {"max_skew_residual": worst}))
        mult = [(ig.check_bivector_multiplicative(t, g1, g2), {"g1": g1.matrix, "g2": g2.matrix})
                for g1, g2 in pairs]
        out.append(_tally("bivector multiplicative", mult))
    if f.name == "exact":
        br = []
        for g in gs:
            s1, s2 = _combo(rng, t.lagrangian.basis, f), _combo(rng, t.lagrangian.basis, f)
            r = ig.bracket_relations_jet(t, g, s1, s2)
            br.append((all(r.values()), {"g": g.matrix, "s1": s1, "s2": s2, "parts": r}))
        out.append(_tally("invariant field brackets", br))
    else:
        out.append(Check("invariant field brackets", SKIP, {"reason": "jets are exact only"}))
    a = _combo(rng, t.lagrangian.basis, f)
    r0 = ig.r0_report(t, a)
    out.append(check("infinitesimal relation lagrangian", r0["lagrangian"] and r0["dim"] == r0["expected_dim"],
                     {"metric": "tangent lift", **r0}, r0))
    return out


def hamiltonian_checks(t: ManinTriple | None, rng, samples):
    res = {k: [] for k in ("canonical lagrangian", "canonical morphism", "canonical moment",
                           "canonical bivector skew", "pairing bookkeeping")}
    for _ in range(samples):
        fb = S.courant_fiber(rng)
        h = hm.canonical_example(fb)
        w = {"anchor": fb.anchor, "A": fb.A.basis}
        res["canonical lagrangian"].append((h.is_lagrangian(), w))
        res["canonical morphism"].append((h.is_morphism(), w))
        ok, wit = hm.moment_compat(h)
        res["canonical moment"].append((ok, {**w, "witness": wit}))
        comp = S.lagrangian_complement(rng, fb.A)
        res["canonical bivector skew"].append((ig.is_skew(hm.bivector_of_complement(h, comp), fb.field), w))
        basis = h.L.graph.basis
        u = _combo(rng, basis, fb.field)
        v = _combo(rng, basis, fb.field)
        res["pairing bookkeeping"].append((hm.pairing_bookkeeping(h, u, v), {**w, "u": u, "v": v}))
    out = [_tally(k, v) for k, v in res.items()]
    if t is None:
        return out
    f = t.field
    if f.name == "exact" and not t.algebra.is_nilpotent():
        out.append(Check("module morphism", SKIP, {"reason": "exact mode needs a nilpotent double"}))
        return out
    if t.complement is None:
        out.append(Check("module morphism", SKIP, {"reason": "no complement"}))
        return out
    e = group_identity(t)
    pt = hm.canonical_example(hm.fiber_of_triple(t))
    rel_e = ig.build_R(t, e)
    ok, wit = hm.moment_compat(pt)
    out.append(check("point moment", ok, witness=wit))
    ok, wit = hm.module_morphism_check(rel_e, pt, hm.trivial_action_data(t, e, pt))
    out.append(check("point module morphism at identity", ok, witness=wit))
    mod, mom, coh, ctrl = [], [], [], []
    for _ in range(samples):
        g, p = S.group_element(rng, t), S.group_element(rng, t)
        hp, hgp = hm.group_space_example(t, p), hm.group_space_example(t, g @ p)
        rel = ig.build_R(t, g)
        act = hm.group_action_data(t, g, p)
        w = {"g": g.matrix, "p": p.matrix}
        mom.append((hm.moment_compat(hp)[0], w))
        coh.append((not hm.action_problems(act, t, hp, hgp), w))
        ok, wit = hm.module_morphism_check(rel, hp, act, hgp)
        mod.append((ok, {**w, "witness": wit}))
        bad, wit = hm.module_morphism_check(rel, hp, hm.corrupt_action(act), hgp)
        ctrl.append((not bad, {**w, "witness": wit}))
    out.append(_tally("group space moment", mom))
    out.append(_tally("action coherence", coh))
    out.append(_tally("module morphism", mod))
    c = _tally("corrupted action rejected", ctrl)
    if c.status == PASS:
        c.detail["first_rejection_witness"] = ctrl[0][1]["witness"]
    out.append(c)
    return out


def _combo(rng, basis, f):
    if not basis:
        return ()
    coef = [f.coerce(S.rational(rng)) for _ in basis]
    return tuple(sum((c * v[i] for c, v in zip(coef, basis)), f.zero) for i in range(len(basis[0])))
