"""One test per acceptance criterion; each prints a single verdict line.

The lines are also collected and repeated in the terminal summary.
"""
import random
import time

import numpy as np
import sympy as sp

import oracles
from artifact import fatgroup as fg
from artifact import hamiltonian as hm
from artifact import integrate as ig
from artifact import matrix as mx
from artifact import maninrep as mr
from artifact import sampling as S
from artifact.examples import abelian_double
from artifact.liealg import group_identity
from artifact.linrel import MetrizedSpace, Subspace, backward_image, compose
from artifact.scalars import JETS, Jet

VERDICTS = []


def verdict(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} | {detail}"
    VERDICTS.append(line)
    print(line)
    assert ok, line


def _sym(m):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in r] for r in m])


def _datum(rng):
    return S.core_anchor_datum(rng, max_dim=5)


# 1 ---------------------------------------------------------------------------

def test_fat_group_axioms():
    rng = random.Random(101)
    cases = []
    for _ in range(100):
        d = _datum(rng)
        cases.append((d, [S.k_element(rng, d) for _ in range(3)]))
    start = time.perf_counter()
    bad = []
    for d, (f1, f2, f3) in cases:
        z = d.zero()
        inv = fg.k_inv(d, f1)
        ok = (fg.k_mul(d, fg.k_mul(d, f1, f2), f3) == fg.k_mul(d, f1, fg.k_mul(d, f2, f3))
              and fg.k_mul(d, z, f1) == f1 == fg.k_mul(d, f1, z)
              and fg.k_mul(d, f1, inv) == z == fg.k_mul(d, inv, f1))
        if not ok:
            bad.append(d)
    elapsed = time.perf_counter() - start
    # product formula against sympy
    for d, (f1, f2, _) in cases:
        ref = _sym(f1) + _sym(f2) + _sym(f2) * _sym(d.rho) * _sym(f1) if d.b and d.c else sp.zeros(d.c, d.b)
        if _sym(fg.k_mul(d, f1, f2)) != ref:
            bad.append(d)
    verdict(1, not bad and elapsed < 5.0, f"100 instances, {len(bad)} failures, {elapsed:.2f}s (< 5s)")


# 2 ---------------------------------------------------------------------------

def test_action_identities():
    rng = random.Random(102)
    fails = 0
    for _ in range(100):
        d = _datum(rng)
        f = S.k_element(rng, d)
        z = S.vector(rng, d.c + d.b)
        tau = S.vector(rng, d.b + d.c)
        adb = fg.ad_b(d, f)
        lz, rz = fg.left_translate(d, f, z), fg.right_translate_inv(d, f, z)
        base = fg.dual_pairing(d, tau, z)
        ok = (fg.source(d, lz) == fg.source(d, z)
              and fg.target(d, lz) == mx.matvec(adb, fg.target(d, z))
              and fg.source(d, rz) == mx.matvec(adb, fg.source(d, z))
              and fg.target(d, rz) == fg.target(d, z)
              and fg.dual_pairing(d, fg.dual_left_translate(d, f, tau), lz) == base
              and fg.dual_pairing(d, fg.dual_right_translate_inv(d, f, tau), rz) == base)
        fails += not ok
    verdict(2, fails == 0, f"source/target equivariance and pairing invariance, 100 instances, {fails} failures")


# 3 ---------------------------------------------------------------------------

def test_two_formula_agreement():
    rng = random.Random(103)
    fails = 0
    for _ in range(100):
        fb = S.courant_fiber(rng)
        f = S.k_element(rng, fb.datum())
        ad = mr.ad_E(fb, f)
        g = _sym(fb.E.form)
        a = _sym(ad)
        ok = ad == mr.ad_E_second(fb, f) and fb.E.is_preserved_by(ad) and a.T * g * a == g
        fails += not ok
    verdict(3, fails == 0, f"U V product equals the closed formula and preserves the metric, 100 fibers, {fails} failures")


# 4 ---------------------------------------------------------------------------

def test_jet_consistency():
    rng = random.Random(104)
    fails, signs = 0, set()
    for _ in range(50):
        d = _datum(rng)
        h = S.matrix(rng, d.c, d.b)
        jd = fg.CoreAnchorDatum(d.c, d.b, d.rho, JETS)
        m = fg.ad_b(jd, tuple(tuple(Jet(0, x) for x in r) for r in h))
        deriv = tuple(tuple(x.b for x in r) for r in m)
        ref = -_sym(d.rho) * _sym(h) if d.b and d.c else sp.zeros(d.b, d.b)
        fails += _sym(deriv) != ref
        fb = S.courant_fiber(rng)
        hh = S.matrix(rng, fb.n, fb.m)
        value, dE = mr.jet_ad_E(fb, hh)
        fails += value != mx.identity(fb.E.dim) or dE != mx.neg(mr.ad_E_inf(fb, hh))
        signs.add(mr.generator_sign(fb, hh))
    signs.discard("both")
    ok = fails == 0 and signs == {"-"}
    verdict(4, ok, f"ad^B derivative = -rho h and Ad^E derivative = -(u(h)+v(h)), generator sign {'/'.join(sorted(signs))}, {fails} failures")


# 5 ---------------------------------------------------------------------------

def test_graph_sum_invariance():
    rng = random.Random(105)
    fails = 0
    for _ in range(60):
        fb = S.courant_fiber(rng)
        d = fb.datum()
        f1, f2 = S.k_element(rng, d), S.k_element(rng, d)
        sub = mr.rum_subspace(fb)
        act = mr.rum_action(fb, f1, f2)
        moved = [mx.matvec(act, v) for v in sub.basis]
        ok = (mr.rum_invariance(fb, f1, f2)
              and oracles.canonical(moved, sub.ambient_dim) == sub.canonical_text())
        fails += not ok
    verdict(5, fails == 0, f"K x K invariance of gr(alpha)+gr(beta), 60 instances, canonical forms equal, {fails} failures")


# 6 ---------------------------------------------------------------------------

def _float_isotropy(basis, form):
    q = oracles._orth(basis)
    g = np.array([[float(x) for x in r] for r in form])
    return float(np.abs(q.T @ g @ q).max())


def test_integration_relation(heis, sl2):
    start = time.perf_counter()
    rng = random.Random(106)
    fails = 0
    for _ in range(20):
        g1, g2 = S.group_element(rng, heis), S.group_element(rng, heis)
        rel = ig.build_R(heis, g1)
        ok = (ig.is_lagrangian_R(rel) and ig.check_manin_morphism_R(rel)
              and all(ig.check_alt_form(rel).values()) and ig.tangent_consistency(rel)
              and ig.check_subgroupoid(heis, g1, g2))
        fails += not ok
    worst = 0.0
    for _ in range(5):
        g1, g2 = S.group_element(rng, sl2), S.group_element(rng, sl2)
        rel = ig.build_R(sl2, g1)
        fails += not (ig.check_manin_morphism_R(rel) and all(ig.check_alt_form(rel).values())
                      and ig.tangent_consistency(rel) and rel.graph.dim == 9)
        got = ig.groupoid_product(sl2, rel, ig.build_R(sl2, g2))
        want = ig.build_R(sl2, g1 @ g2).graph
        worst = max(worst, _float_isotropy(rel.graph.basis, rel.relation.ambient.form),
                    oracles.span_residual(got.basis, want.basis), oracles.span_residual(want.basis, got.basis))
    elapsed = time.perf_counter() - start
    ok = fails == 0 and worst <= 1e-9 and elapsed < 10.0
    verdict(6, ok, f"20 exact heisenberg elements + 5 float sl2 elements, {fails} failures, "
                   f"float residual {worst:.1e} (<= 1e-9), {elapsed:.2f}s (< 10s)")


# 7 ---------------------------------------------------------------------------

def test_bivector_extraction(heis, sl2):
    rng = random.Random(107)
    parts = []
    zero_e = all(x == 0 for r in ig.extract_bivector(heis, group_identity(heis)) for x in r)
    parts.append(zero_e)
    skew = all(ig.is_skew(ig.extract_bivector(heis, S.group_element(rng, heis)), heis.field) for _ in range(10))
    parts.append(skew)
    mult = all(ig.check_bivector_multiplicative(heis, S.group_element(rng, heis), S.group_element(rng, heis))
               for _ in range(10))
    parts.append(mult)
    ab = abelian_double(2)
    parts.append(all(ig.extract_bivector(ab, S.group_element(rng, ab)) == mx.zeros(2, 2) for _ in range(5)))
    worst = 0.0
    nonzero = False
    for _ in range(5):
        g1, g2 = S.group_element(rng, sl2), S.group_element(rng, sl2)
        p = ig.extract_bivector(sl2, g1)
        nonzero |= max(abs(x) for r in p for x in r) > 1e-6
        got = ig.compose_tg_subspaces(sl2, ig.bivector_graph(sl2, g1), g2, ig.bivector_graph(sl2, g2))
        want = ig.bivector_graph(sl2, g1 @ g2)
        worst = max(worst, ig.skew_residual(p), oracles.span_residual(got.basis, want.basis))
    pe = ig.extract_bivector(sl2, group_identity(sl2))
    parts.append(max(abs(x) for r in pe for x in r) == 0 and nonzero and worst <= 1e-9)
    names = ("pi(e)=0", "skew", "multiplicative", "abelian zero", "sl2 float")
    verdict(7, all(parts), ", ".join(f"{n} {'ok' if p else 'FAILED'}" for n, p in zip(names, parts))
            + f", sl2 residual {worst:.1e} (<= 1e-9)")


# 8 ---------------------------------------------------------------------------

def test_bracket_relations(heis):
    rng = random.Random(108)
    fails = 0
    for _ in range(12):
        g = S.group_element(rng, heis)
        s = S.vector(rng, heis.n) + (0,) * heis.n
        u = S.vector(rng, heis.n) + (0,) * heis.n
        fails += not all(ig.bracket_relations_jet(heis, g, s, u).values())
    verdict(8, fails == 0, f"left-left, right-right and left-right brackets at 12 sampled (g, s, t), {fails} failures")


# 9 ---------------------------------------------------------------------------

def test_hamiltonian(heis):
    rng = random.Random(109)
    fails = 0
    for _ in range(25):
        h = hm.canonical_example(S.courant_fiber(rng))
        fails += not (h.is_lagrangian() and h.is_morphism() and hm.moment_compat(h)[0])
    # module property: point space at the identity and the group acting on itself
    e = group_identity(heis)
    pt = hm.canonical_example(hm.fiber_of_triple(heis))
    good_b = hm.module_morphism_check(ig.build_R(heis, e), pt, hm.trivial_action_data(heis, e, pt))[0]
    g, p = S.group_element(rng, heis), S.group_element(rng, heis)
    hp, hgp = hm.group_space_example(heis, p), hm.group_space_example(heis, g @ p)
    rel, act = ig.build_R(heis, g), hm.group_action_data(heis, g, p)
    good_a = hm.moment_compat(pt)[0] and hm.moment_compat(hp)[0]
    good_b = good_b and hm.module_morphism_check(rel, hp, act, hgp)[0]
    # negative controls
    n = 2
    anchor = mx.hstack(mx.identity(n), mx.zeros(n, n))
    fb = mr.ManinPairFiber(MetrizedSpace.split(n), Subspace.coordinates(2 * n, range(n)), anchor)
    h = hm.canonical_example(fb)
    moment = [list(r) for r in h.moment]
    moment[0][-1] += 1
    bad_a, wit_a = hm.moment_compat(hm.HamiltonianFiber(fb, h.P, h.L, tuple(map(tuple, moment))))
    bad_b, wit_b = hm.module_morphism_check(rel, hp, hm.corrupt_action(act), hgp)
    print("  corrupted moment witness:", {k: [str(x) for x in v] for k, v in wit_a.items()} if wit_a else None)
    print("  corrupted action witness:", {k: [str(x) for x in v] for k, v in wit_b.items()} if wit_b else None)
    ok = fails == 0 and good_a and good_b and not bad_a and not bad_b and wit_a and wit_b
    verdict(9, bool(ok), f"25 canonical examples ({fails} failures), moment and module checks pass, "
                         f"corrupted moment {'rejected' if not bad_a else 'ACCEPTED'}, "
                         f"corrupted action {'rejected' if not bad_b else 'ACCEPTED'}")


# 10 --------------------------------------------------------------------------

def test_oracle_equivalence():
    rng = random.Random(110)
    count = mismatches = 0
    while count < 150:
        a, b, c = rng.randint(0, 2), rng.randint(0, 2), rng.randint(0, 2)
        if 2 * (a + b) > 8 or 2 * (b + c) > 8:
            continue
        make = S.split_relation if rng.random() < 0.5 else S.relation
        r1, r2 = make(rng, b, a), make(rng, c, b)
        got = compose(r2, r1).graph.canonical_text()
        ref = oracles.compose(list(r2.graph.basis), r2.target.dim, r2.source.dim,
                              list(r1.graph.basis), r1.target.dim, r1.source.dim)
        mismatches += got != oracles.canonical(ref, r2.target.dim + r1.source.dim)
        t, s = r1.target.dim, r1.source.dim
        u = S.subspace(rng, t)
        back = oracles.backward(list(r1.graph.basis), t, s, list(u.basis))
        mismatches += backward_image(r1, u).canonical_text() != oracles.canonical(back, s)
        count += 1
    verdict(10, mismatches == 0, f"{count} compositions and backward images, ambient dim <= 8, "
                                 f"{mismatches} canonical-form mismatches")
