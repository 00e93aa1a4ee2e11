"""Acceptance criteria 1 to 7, one verdict line each."""

import random
import time
from fractions import Fraction
from pathlib import Path


from conftest import setup_named
from helpers import eps_bump, flow_family, t_family, verdict

from sflab.bigbracket import (
    SuperChart,
    from_form,
    from_multivector,
    m2_closed_form,
    random_form,
    taylor_M,
    to_form,
    two_form_flat,
    two_form_specialization,
)
from sflab.cli.parser import ExprContext, parse_expr, parse_manifest, parse_multivector
from sflab.cli.tasks import run_tasks, sample_points
from sflab.errors import ManifestSyntaxError, NonSmallDeformation, NotGood, SingularAtSample
from sflab.exactnum import EpsSeries, FieldElement
from sflab.foliation.brackets import KoszulBrackets, MultivectorBasis
from sflab.foliation.dirac import (
    as_series,
    graph_transport_check,
    mc_residual_G,
    poisson_residual,
    rank_at_sample,
)
from sflab.foliation.generate import random_good, random_mc_series, random_multivector
from sflab.foliation.multivector import format_multivector
from sflab.foliation.setup import is_good
from sflab.foliation.splitting import change_of_splitting, exp_N_and_intertwine, n2_apply, word_of
from sflab.gaugeequiv import (
    ProductSetup,
    base_mc_residual,
    blocks_match_direct,
    d_dt,
    gauge_rhs,
    hat_correspondence,
    koszul_equations,
    koszul_square_residual,
    lift,
    square_equivalence_residuals,
)
from sflab.kronecker import (
    Slope,
    bound_violations,
    brute_force_profile,
    divisor_profile,
    h2_assembly,
    naive_sqrt2_bound,
    truncated_cohomology,
)
from sflab.linfty import jacobi_residual

MANIFESTS = Path(__file__).resolve().parents[1] / "src" / "sflab" / "manifests"
K = 4


def test_criterion_1_jacobi_certification():
    start = time.perf_counter()
    rng = random.Random(1)
    problems, counts = [], {}
    for name in ("t3", "t4"):
        S = setup_named(name)
        algebra = KoszulBrackets(S).algebra()
        for arity in (1, 2, 3, 4):
            tested = 0
            while tested < 100:
                degs = [rng.randint(0, 3) for _ in range(arity)]
                args = [random_good(rng, S, d, nterms=1) for d in degs]
                if any(a.is_zero() for a in args):
                    continue
                tested += 1
                if not jacobi_residual(algebra, arity, args).is_zero():
                    problems.append((name, arity, tuple(degs)))
            counts[(name, arity)] = tested
    l3_t3 = KoszulBrackets(setup_named("t3")).upsilon
    l3_t4 = KoszulBrackets(setup_named("t4")).upsilon
    elapsed = time.perf_counter() - start
    ok = not problems and not l3_t3 and bool(l3_t4) and elapsed < 120
    assert verdict(1, ok, f"{sum(counts.values())} nonzero tuples, arities 1-4 on T3 (l3 = 0) and T4 "
                          f"(l3 != 0), {len(problems)} nonzero residuals, {elapsed:.1f}s"), problems


def test_criterion_2_m2_lemma():
    start = time.perf_counter()
    rng = random.Random(2)
    bad = []
    for t in range(100):
        chart = SuperChart(rng.randint(0, 1), rng.randint(2, 4))
        eta = random_form(rng, chart, 2)
        ws = [random_form(rng, chart, rng.randint(0, min(3, chart.r))) for _ in range(3)]
        E, W = from_multivector(chart, eta), [from_form(chart, w) for w in ws]
        if taylor_M(E, W[:1]) or taylor_M(E, W):
            bad.append(("M1/M3", t))
        if taylor_M(E, W[:2]) != from_form(chart, m2_closed_form(eta, ws[0], ws[1])):
            bad.append(("M2", t))
    chart = SuperChart(0, 4)
    for t in range(20):
        eta, w1, w2 = (random_form(rng, chart, 2) for _ in range(3))
        M2 = to_form(taylor_M(from_multivector(chart, eta), [from_form(chart, w1), from_form(chart, w2)]), 2)
        if two_form_flat(M2) != two_form_specialization(eta, w1, w2):
            bad.append(("two-form", t))
    ok = not bad
    assert verdict(2, ok, f"100 triples with rank <= 4, 20 two-form pairs, {len(bad)} mismatches, "
                          f"{time.perf_counter() - start:.1f}s"), bad


def _first_order(R):
    return None if R.is_zero() else R.lowest_order()


def test_criterion_3_main_theorem():
    start = time.perf_counter()
    rng = random.Random(3)
    bad, both_zero, both_nonzero, rank_ok = [], 0, 0, 0
    eps0 = Fraction(1, 10)
    for name in ("t3", "t4"):
        S = setup_named(name)
        for t in range(20):
            # a Maurer-Cartan series and a perturbation of it
            Z, _ = random_mc_series(rng, S, K)
            r1, r2 = mc_residual_G(S, Z), poisson_residual(S, Z)
            if r1.is_zero() and r2.is_zero():
                both_zero += 1
            else:
                bad.append((name, t, "mc"))
            j = 1 + t % K
            coeffs = list(Z.coeffs)
            coeffs[j] = coeffs[j] + random_good(rng, S, 2)
            Zp = EpsSeries(coeffs, K)
            p1, p2 = mc_residual_G(S, Zp), poisson_residual(S, Zp)
            if _first_order(p1) != _first_order(p2):
                bad.append((name, t, "perturbed", _first_order(p1), _first_order(p2)))
            elif not p1.is_zero():
                both_nonzero += 1
            # an arbitrary good series
            G = as_series([S.zero(2)] + [random_good(rng, S, 2) for _ in range(K)], K)
            q1, q2 = mc_residual_G(S, G), poisson_residual(S, G)
            if q1.is_zero() != q2.is_zero():
                bad.append((name, t, "random"))
        Z, _ = random_mc_series(rng, S, K)
        for pt in sample_points(rng, S.n, 5):
            if rank_at_sample(S, Z, pt, eps0) == S.rank and graph_transport_check(S, Z, pt, eps0):
                rank_ok += 1
            else:
                bad.append((name, "rank", pt))
    ok = not bad and both_zero >= 40 and both_nonzero > 0 and rank_ok == 10
    assert verdict(3, ok, f"K = 4, {both_zero} MC series with zero Poisson residual, {both_nonzero} "
                          f"perturbations failing both at the same order, rank 2k at {rank_ok}/10 points, "
                          f"{time.perf_counter() - start:.1f}s"), bad


def test_criterion_4_splitting_independence():
    start = time.perf_counter()
    rng = random.Random(4)
    bad, words_total, pairs_total = [], 0, 0
    for a, b in (("t3", "t3g1"), ("t4", "t4g0")):
        g0, g1 = setup_named(a), setup_named(b)
        pair = change_of_splitting(g0, g1)
        basis = MultivectorBasis(g0.n, g0.dim, g0.npoly)
        words = []
        for length in (1, 2, 3):
            found = attempts = 0
            while found < 4 and attempts < 200:
                attempts += 1
                els = [random_good(rng, g0, rng.randint(0, min(3, g0.n)), nterms=1) for _ in range(length)]
                w = word_of(basis, els)
                if not w.is_zero():
                    words.append(w)
                    found += 1
        rep = exp_N_and_intertwine(pair, words)
        words_total += len(words)
        bad += [(a, j) for j, r in enumerate(rep.residuals) if not r.is_zero()]
        for _ in range(50):
            q1 = random_good(rng, g0, rng.randint(1, min(3, g0.n)), nterms=1)
            q2 = random_good(rng, g0, rng.randint(1, min(3, g0.n)), nterms=1)
            pairs_total += 1
            if not is_good(n2_apply(pair, q1, q2), g0):
                bad.append((a, "n2"))
    ok = not bad and words_total > 0
    assert verdict(4, ok, f"{words_total} words of length <= 3 on T3 and T4, {pairs_total} N2 pairs, "
                          f"{len(bad)} failures, {time.perf_counter() - start:.1f}s"), bad


def test_criterion_5_squares():
    start = time.perf_counter()
    rng = random.Random(5)
    bad, fams, flows, bumps = [], 0, 0, 0
    for name in ("t3", "t4"):
        ps = ProductSetup(setup_named(name))
        for t in range(10):
            W, X = t_family(ps, rng, K, tdeg=2)
            L = lift(ps, W, X)
            noS, sPart = square_equivalence_residuals(ps, L)
            if noS != base_mc_residual(ps, W) or sPart != gauge_rhs(ps, W, X) - d_dt(ps, W):
                bad.append((name, t, "square"))
            if koszul_square_residual(ps, L) != koszul_equations(ps, W, X):
                bad.append((name, t, "koszul"))
            if not blocks_match_direct(ps, L):
                bad.append((name, t, "blocks"))
            fams += 1
        for t in range(2):
            W, X, _, _ = flow_family(ps, rng, K)
            r = hat_correspondence(ps, W, X)
            if r.gauge_ok and r.koszul_ok:
                flows += 1
            else:
                bad.append((name, t, "flow"))
            V = random_multivector(rng, ps.n, 1, ps.n + 1, 1, density=0.6, nterms=1)
            r = hat_correspondence(ps, W, X + eps_bump(ps, V, 2, K))
            if r.gauge_ok or r.koszul_ok:
                bad.append((name, t, "bump"))
            else:
                bumps += 1
    ok = not bad and fams >= 20
    assert verdict(5, ok, f"{fams} t-polynomial families (t-degree <= 2, order 4), {flows} flow families "
                          f"solve both systems, {bumps} perturbations fail both, "
                          f"{time.perf_counter() - start:.1f}s"), bad


def test_criterion_6_kronecker():
    start = time.perf_counter()
    rt = Slope.exact(FieldElement.rt())
    notes, ok = [], True
    for N in (5, 10, 20, 40):
        r = truncated_cohomology(rt, N)
        if (r.h0_leaf, r.h1_leaf, h2_assembly(r)) != (1, 1, 3):
            ok = False
            notes.append(f"sqrt2 dims at N = {N}")
    half = Slope.rational(Fraction(1, 2))
    for N in range(0, 41):
        lattice = sum(1 for n in range(-N, N + 1) for m in range(-N, N + 1) if 2 * m + n == 0)
        if truncated_cohomology(half, N).h0_leaf != lattice or lattice != 2 * (N // 2) + 1:
            ok = False
            notes.append(f"1/2 count at N = {N}")
    violations = bound_violations(rt, 50, naive_sqrt2_bound)
    if violations:
        ok = False
        notes.append(f"1/|m + sqrt2 n| <= |m| + |n| + 1 fails at {len(violations)} modes "
                     f"{sorted(v for v in violations if v[0] > 0)} and their negatives")
    L = Slope.liouville(6)
    cut = [1, 10, 100, 10 ** 6, 10 ** 24, 10 ** 120]
    prof = divisor_profile(L, cut)
    if not prof.exceeds_power(4):
        ok = False
        notes.append("Liouville profile stays below N^4")
    for N in (5, 20, 60):
        if divisor_profile(L, [N]).rows[0].value != brute_force_profile(L.approximants[-1], N):
            ok = False
            notes.append(f"Liouville profile differs from enumeration at N = {N}")
    elapsed = time.perf_counter() - start
    if elapsed >= 30:
        ok = False
        notes.append("runtime")
    detail = "; ".join(notes) if notes else "all parts hold"
    assert verdict(6, ok, f"{detail}, {elapsed:.1f}s"), notes


def test_criterion_7_plumbing(tmp_path):
    start = time.perf_counter()
    rng = random.Random(7)
    bad = []
    for _ in range(100):
        n = rng.choice([2, 3, 4])
        deg = rng.randint(0, min(n, 3))
        P = random_multivector(rng, n, deg, nterms=rng.randint(1, 3))
        if parse_multivector(format_multivector(P), ExprContext(n, n), deg) != P:
            bad.append("round trip")
    text = (MANIFESTS / "t3_kronecker.sfm").read_text().replace(
        "checks = jacobi, mc, square, blocks, gauge, splitting-independence", "checks = jacobi, m2\ntrials = 10")
    if run_tasks(parse_manifest(text)).text() != run_tasks(parse_manifest(text)).text():
        bad.append("determinism")
    paths_ok = 0
    try:
        parse_expr("e1^^e2", ExprContext(3, 3))
    except ManifestSyntaxError as exc:
        paths_ok += exc.col == 4
    S4 = setup_named("t4")
    e3e4 = parse_multivector("e3^e4", ExprContext(4, 4), 2)
    try:
        mc_residual_G(S4, as_series([S4.zero(2), e3e4], 1))
    except NotGood:
        paths_ok += 1
    e1e3 = parse_multivector("e1^e3", ExprContext(4, 4), 2)
    try:
        poisson_residual(S4, as_series([e1e3, S4.zero(2)], 1))
    except NonSmallDeformation:
        paths_ok += 1
    S3 = setup_named("t3")
    try:
        rank_at_sample(S3, as_series([S3.zero(2), S3.Pi], 1), (0, 0, 0), 1)
    except SingularAtSample:
        paths_ok += 1
    if paths_ok != 4:
        bad.append(f"{4 - paths_ok} error paths not raised")
    ok = not bad
    assert verdict(7, ok, f"100 round trips, byte-identical reports, {paths_ok}/4 error paths, "
                          f"{time.perf_counter() - start:.1f}s"), bad
