"""Named checks run from a manifest, each producing a deterministic record."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Callable

from ..errors import SemanticError
from ..exactnum import EpsSeries, FieldElement, FourierScalar, format_field, radical
from .parser import Manifest

if TYPE_CHECKING:
    from .report import Report


@dataclass
class CheckResult:
    name: str
    status: str = "PASS"  # PASS | FAIL | ERROR
    witness: str | None = None
    values: list[tuple[str, str]] = field(default_factory=list)
    elapsed: float = 0.0  # kept out of the emitted report so re-runs stay byte-identical

    def value(self, key: str, v) -> None:
        self.values.append((key, format_value(v)))

    def fail(self, witness: str) -> None:
        if self.status == "PASS":
            self.status = "FAIL"
        if self.witness is None:
            self.witness = witness


def format_value(v) -> str:
    if v is None:
        return "inf"
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, FieldElement):
        return format_field(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return str(v)


@dataclass
class RunConfig:
    manifest: Manifest
    seed: int = 0
    order: int = 4

    def param(self, key: str, default=None):
        return self.manifest.params.get(key, default)

    def rng(self, check: str) -> random.Random:
        return random.Random(f"{self.seed}:{check}")


def _trials(cfg: RunConfig, default: int) -> int:
    return int(cfg.param("trials", default))


def _setups(cfg: RunConfig):
    man = cfg.manifest
    return [man.setup(name) for name in man.complements]


def sample_points(rng: random.Random, n: int, count: int) -> list[tuple[Fraction, ...]]:
    dens = [1, 2, 4, 8] if radical() == 2 else [1, 2, 4]
    pts = [tuple(Fraction(0) for _ in range(n))]
    while len(pts) < count:
        pts.append(tuple(Fraction(rng.randrange(q), q) for q in (rng.choice(dens) for _ in range(n))))
    return pts


# individual checks

def check_jacobi(cfg: RunConfig, res: CheckResult) -> None:
    from ..foliation.brackets import KoszulBrackets, certify_jacobi

    trials, arity = _trials(cfg, 100), int(cfg.param("arity", 4))
    rng = cfg.rng("jacobi")
    total = 0
    for S in _setups(cfg):
        rep = certify_jacobi(S, rng, trials, arity)
        total += rep.tested
        res.value(f"upsilon_terms[{S.name}]", len(KoszulBrackets(S).upsilon))
        res.value(f"failures[{S.name}]", len(rep.failures))
        if rep.failures:
            k, degs = rep.failures[0]
            res.fail(f"{S.name}: arity {k}, multivector degrees {degs}")
    res.value("tested", total)


def check_mc(cfg: RunConfig, res: CheckResult) -> None:
    from ..foliation.dirac import (
        graph_transport_check,
        mc_residual_G,
        poisson_residual,
        rank_at_sample,
    )
    from ..foliation.generate import random_good, random_mc_series

    S = _setups(cfg)[0]
    K = cfg.order
    rng = cfg.rng("mc")
    man = cfg.manifest
    eps0 = Fraction(1, 10)
    if man.Z is not None:
        Z = man.Z
        r1, r2 = mc_residual_G(S, Z), poisson_residual(S, Z)
        res.value("given_mc_zero", r1.is_zero())
        res.value("given_poisson_zero", r2.is_zero())
        if r1.is_zero() != r2.is_zero():
            res.fail(f"given Z: MC residual {'zero' if r1.is_zero() else 'nonzero'}, "
                     f"Poisson residual {'zero' if r2.is_zero() else 'nonzero'}")
    trials = _trials(cfg, 20)
    agree = witnessed = 0
    for t in range(trials):
        Z, _ = random_mc_series(rng, S, K)
        r1, r2 = mc_residual_G(S, Z), poisson_residual(S, Z)
        if not (r1.is_zero() and r2.is_zero()):
            res.fail(f"trial {t}: generated MC series has residual orders {r1.lowest_order()}, {r2.lowest_order()}")
            continue
        j = 1 + t % K
        d = random_good(rng, S, 2)
        coeffs = list(Z.coeffs)
        coeffs[j] = coeffs[j] + d
        Zp = EpsSeries(coeffs, K)
        p1, p2 = mc_residual_G(S, Zp), poisson_residual(S, Zp)
        if p1.is_zero() != p2.is_zero() or p1.lowest_order() != p2.lowest_order():
            res.fail(f"trial {t}: perturbation at eps^{j} gives orders {p1.lowest_order()} vs {p2.lowest_order()}")
        else:
            agree += 1
            witnessed += not p1.is_zero()
    res.value("trials", trials)
    res.value("agreeing", agree)
    res.value("counterexamples", witnessed)
    if trials and not witnessed:
        res.fail("no perturbation produced a non-Maurer-Cartan series")
    points = int(cfg.param("points", 5))
    Z, _ = random_mc_series(rng, S, K)
    ok = 0
    for pt in sample_points(rng, S.n, points):
        rk = rank_at_sample(S, Z, pt, eps0)
        if rk == S.rank and graph_transport_check(S, Z, pt, eps0):
            ok += 1
        else:
            res.fail(f"rank {rk} at point {tuple(str(x) for x in pt)}")
    res.value("rank_points", ok)
    res.value("rank", S.rank)


def _t_families(ps, rng, K: int, tdeg: int = 2):
    from ..foliation.dirac import as_series
    from ..foliation.generate import random_multivector

    B = ps.base_t
    n = ps.n
    tvar = FourierScalar.variable(n, n + 1, 1)

    def rnd(deg):
        acc = B.zero(deg)
        for p in range(tdeg + 1):
            m = random_multivector(rng, n, deg, n + 1, 1, density=0.4, nterms=1)
            acc = acc + (m * (tvar ** p) if p else m)
        return acc

    W = as_series([B.zero(2)] + [rnd(2) for _ in range(K)], K)
    X = as_series([B.zero(1)] + [rnd(1) for _ in range(K)], K)
    return W, X


def check_square(cfg: RunConfig, res: CheckResult) -> None:
    from ..gaugeequiv import (
        ProductSetup,
        base_mc_residual,
        d_dt,
        extract,
        gauge_rhs,
        koszul_equations,
        koszul_square_residual,
        lift,
        square_equivalence_residuals,
    )

    rng = cfg.rng("square")
    trials = _trials(cfg, 20)
    setups = _setups(cfg)
    done = 0
    for t in range(trials):
        S = setups[t % len(setups)]
        ps = ProductSetup(S)
        W, X = _t_families(ps, rng, cfg.order)
        L = lift(ps, W, X)
        if extract(ps, L.assembled) != (W, X):
            res.fail(f"trial {t}: lift does not round-trip")
        noS, sPart = square_equivalence_residuals(ps, L)
        if noS != base_mc_residual(ps, W):
            res.fail(f"trial {t} on {S.name}: d_s-free part differs from the base MC residual")
        if sPart != gauge_rhs(ps, W, X) - d_dt(ps, W):
            res.fail(f"trial {t} on {S.name}: d_s part differs from the gauge evolution residual")
        k1, k2 = koszul_square_residual(ps, L)
        if (k1, k2) != koszul_equations(ps, W, X):
            res.fail(f"trial {t} on {S.name}: Koszul square residual differs from the two flow equations")
        done += 1
    res.value("families", done)


def check_blocks(cfg: RunConfig, res: CheckResult) -> None:
    from ..gaugeequiv import ProductSetup, block_gauge_transform, blocks_match_direct, lift

    rng = cfg.rng("blocks")
    trials = _trials(cfg, 10)
    setups = _setups(cfg)
    for t in range(trials):
        S = setups[t % len(setups)]
        ps = ProductSetup(S)
        W, X = _t_families(ps, rng, cfg.order)
        L = lift(ps, W, X)
        if not blocks_match_direct(ps, L):
            res.fail(f"trial {t} on {S.name}: block formula differs from the direct gauge transform")
        if not block_gauge_transform(ps, L).bottom_right.is_zero():
            res.fail(f"trial {t} on {S.name}: bottom-right block is nonzero")
    res.value("lifts", trials)


def flow_family(ps, rng, K: int):
    """(W, X) from Pi_t = exp(t eps ad_Y)(Pi + W') with X^ = -eps Y."""
    from ..foliation.dirac import as_series
    from ..foliation.generate import ad_exp_series, random_multivector, random_poisson_deformation
    from ..gaugeequiv import unhat_map

    B, n = ps.base_t, ps.n
    tvar = FourierScalar.variable(n, n + 1, 1)
    Wp = random_poisson_deformation(rng, B, K)
    Y = random_multivector(rng, n, 1, n + 1, 1, density=0.5, nterms=1)
    start = as_series([B.Pi] + list(Wp.coeffs[1:]), K)
    flowed = ad_exp_series(Y * tvar, start)
    W_hat = as_series([B.zero(2)] + list(flowed.coeffs[1:]), K)
    X_hat = as_series([B.zero(1), -Y] + [B.zero(1)] * (K - 1), K)
    W, X = unhat_map(ps, W_hat, X_hat)
    return W, X, W_hat, X_hat


def check_gauge(cfg: RunConfig, res: CheckResult) -> None:
    from ..foliation.dirac import as_series
    from ..foliation.generate import random_multivector
    from ..gaugeequiv import ProductSetup, exact_flow_residual, hat_correspondence, hat_map

    man = cfg.manifest
    rng = cfg.rng("gauge")
    setups = _setups(cfg)
    if man.gauge_W is not None:
        ps = ProductSetup(setups[0])
        r = hat_correspondence(ps, man.gauge_W, man.gauge_X)
        res.value("given_gauge_zero", r.gauge_ok)
        res.value("given_koszul_zero", r.koszul_ok)
        if r.gauge_ok != r.koszul_ok:
            res.fail("given family: the two residual systems disagree")
    trials = _trials(cfg, 2)
    witnessed = 0
    for t in range(trials):
        S = setups[t % len(setups)]
        ps = ProductSetup(S)
        K = cfg.order
        W, X, W_hat, X_hat = flow_family(ps, rng, K)
        if hat_map(ps, W, X) != (W_hat, X_hat):
            res.fail(f"trial {t} on {S.name}: hat map does not invert")
        if not exact_flow_residual(ps, W_hat, X_hat).is_zero():
            res.fail(f"trial {t} on {S.name}: d/dt Pi_t differs from [Pi_t, X^]")
        r = hat_correspondence(ps, W, X)
        if not (r.gauge_ok and r.koszul_ok):
            res.fail(f"trial {t} on {S.name}: flow family fails a residual system")
        B = ps.base_t
        V = random_multivector(rng, ps.n, 1, ps.n + 1, 1, density=0.6, nterms=1)
        bump = as_series([B.zero(1)] * 2 + [V] + [B.zero(1)] * (K - 2), K)
        r = hat_correspondence(ps, W, X + bump)
        if r.gauge_ok != r.koszul_ok:
            res.fail(f"trial {t} on {S.name}: perturbed family separates the residual systems")
        witnessed += not r.gauge_ok
    res.value("families", trials)
    res.value("counterexamples", witnessed)


def check_splitting(cfg: RunConfig, res: CheckResult) -> None:
    from ..foliation.brackets import MultivectorBasis
    from ..foliation.generate import random_good
    from ..foliation.setup import is_good
    from ..foliation.splitting import change_of_splitting, exp_N_and_intertwine, n2_apply, word_of

    man = cfg.manifest
    if len(man.complements) < 2:
        raise SemanticError("splitting-independence needs two complements in [splitting]")
    names = list(man.complements)
    g0, g1 = man.setup(names[0]), man.setup(names[1])
    pair = change_of_splitting(g0, g1)
    rng = cfg.rng("splitting-independence")
    basis = MultivectorBasis(g0.n, g0.dim, g0.npoly)
    per_length = max(1, _trials(cfg, 9) // 3)
    words = []
    for length in (1, 2, 3):
        found = attempts = 0
        while found < per_length and attempts < 50 * per_length:
            attempts += 1
            els = [random_good(rng, g0, rng.randint(0, min(3, g0.n)), nterms=1) for _ in range(length)]
            w = word_of(basis, els)
            if not w.is_zero():
                words.append(w)
                found += 1
    rep = exp_N_and_intertwine(pair, words)
    for j, r in enumerate(rep.residuals):
        if not r.is_zero():
            res.fail(f"intertwining fails on word {j}")
            break
    res.value("words", len(words))
    pairs = int(cfg.param("pairs", 50))
    bad = 0
    for _ in range(pairs):
        a = random_good(rng, g0, rng.randint(1, min(3, g0.n)), nterms=1)
        b = random_good(rng, g0, rng.randint(1, min(3, g0.n)), nterms=1)
        if not is_good(n2_apply(pair, a, b), g0):
            bad += 1
    res.value("n2_pairs", pairs)
    res.value("n2_not_good", bad)
    if bad:
        res.fail(f"{bad} N_2 outputs are not good")


def check_m2(cfg: RunConfig, res: CheckResult) -> None:
    from ..bigbracket import (
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

    rng = cfg.rng("m2")
    trials = _trials(cfg, 100)
    for t in range(trials):
        chart = SuperChart(rng.randint(0, 1), rng.randint(2, 4))
        eta = random_form(rng, chart, 2)
        w = [random_form(rng, chart, rng.randint(0, min(3, chart.r))) for _ in range(3)]
        E, W = from_multivector(chart, eta), [from_form(chart, x) for x in w]
        if taylor_M(E, W[:1]):
            res.fail(f"trial {t}: M_1 is nonzero")
        if taylor_M(E, W):
            res.fail(f"trial {t}: M_3 is nonzero")
        it = taylor_M(E, W[:2])
        cl = m2_closed_form(eta, w[0], w[1])
        if it != from_form(chart, cl):
            res.fail(f"trial {t}: closed-form M_2 differs (rank {chart.r}, degrees {w[0].degree}, {w[1].degree})")
    res.value("triples", trials)
    npairs = int(cfg.param("pairs", 20))
    for t in range(npairs):
        chart = SuperChart(0, 4)
        eta = random_form(rng, chart, 2)
        w1, w2 = random_form(rng, chart, 2), random_form(rng, chart, 2)
        M2 = to_form(taylor_M(from_multivector(chart, eta), [from_form(chart, w1), from_form(chart, w2)]), 2)
        if not (two_form_flat(M2) - two_form_specialization(eta, w1, w2)).is_zero():
            res.fail(f"two-form specialization fails on pair {t}")
    res.value("two_form_pairs", npairs)


def _slope(cfg: RunConfig):
    lam = cfg.param("lambda")
    if lam is None:
        raise SemanticError("this check needs 'lambda' in [task]")
    return lam


def check_cohomology(cfg: RunConfig, res: CheckResult) -> None:
    from ..kronecker import h2_assembly, rational_obstruction_count, truncated_cohomology

    slope = _slope(cfg)
    N = int(cfg.param("cutoff", 10))
    rep = truncated_cohomology(slope, N)
    res.value("H0", rep.h0_leaf)
    res.value("H1", rep.h1_leaf)
    res.value("H1_foliated", rep.h1_foliated)
    res.value("H2_foliated", rep.h2_foliated)
    res.value("H2_F", rep.h2_poisson)
    res.value("max_inverse_divisor", rep.max_inverse_divisor)
    if h2_assembly(rep) != rep.h2_poisson:
        res.fail("Kunneth assembly is inconsistent")
    if slope.kind == "rational":
        q = slope.as_fraction()
        expect = rational_obstruction_count(q.numerator, q.denominator, N)
    else:
        expect = 1
    if rep.h0_leaf != expect:
        res.fail(f"obstructed modes {rep.h0_leaf}, lattice count {expect}")
    if sorted((-m, -n) for m, n in rep.obstructed) != rep.obstructed:
        res.fail("obstructed modes are not symmetric")


def _cutoff_label(N: int) -> str:
    s = str(N)
    if N >= 10 ** 4 and s == "1" + "0" * (len(s) - 1):
        return f"10^{len(s) - 1}"
    return s


def check_profile(cfg: RunConfig, res: CheckResult) -> None:
    from ..kronecker import brute_force_profile, divisor_profile, reliable_convergents

    slope = _slope(cfg)
    cutoffs = cfg.param("profile")
    if cutoffs is None:
        if slope.is_exact:
            cutoffs = list(range(1, int(cfg.param("cutoff", 10)) + 1))
        else:
            # powers of ten at the scale of each best approximation
            cutoffs = sorted({10 ** (len(str(c.denominator)) - 1) for c in reliable_convergents(slope)}
                             | {1, 10, 100})
    prof = divisor_profile(slope, cutoffs)
    for row in prof.rows:
        res.value(f"profile[{_cutoff_label(row.cutoff)}]", row.value)
    res.value("exceeds_N4", len(prof.exceeds_power(4)))
    # oracle: enumerate the whole box at small cutoffs
    for row in prof.rows:
        if row.cutoff > 30:
            continue
        if slope.is_exact:
            brute = _brute_exact(slope, row.cutoff)
        else:
            brute = brute_force_profile(slope.approximants[-1], row.cutoff)
        if brute != row.value:
            res.fail(f"profile at N = {row.cutoff} differs from box enumeration")


def _brute_exact(slope, N: int):
    from ..kronecker import divisor

    best = None
    for m in range(-N, N + 1):
        for n in range(-N, N + 1):
            if (m, n) == (0, 0):
                continue
            d = divisor((m, n), slope)
            if not d:
                return None
            inv = FieldElement(1) / d.abs_real()
            if best is None or inv > best:
                best = inv
    return best


CHECKS: dict[str, Callable[[RunConfig, CheckResult], None]] = {
    "jacobi": check_jacobi,
    "mc": check_mc,
    "gauge": check_gauge,
    "square": check_square,
    "blocks": check_blocks,
    "splitting-independence": check_splitting,
    "m2": check_m2,
    "cohomology": check_cohomology,
    "profile": check_profile,
}


def run_check(cfg: RunConfig, name: str) -> CheckResult:
    res = CheckResult(name)
    start = time.perf_counter()
    fn = CHECKS.get(name)
    try:
        if fn is None:
            raise SemanticError(f"unknown check {name!r}")
        fn(cfg, res)
    except Exception as exc:  # a check reports ERROR instead of aborting the suite
        res.status = "ERROR"
        res.witness = f"{type(exc).__name__}: {exc}"
    res.elapsed = time.perf_counter() - start
    return res


def run_tasks(man: Manifest, seed: int | None = None, order: int | None = None) -> Report:
    from .report import Report

    cfg = RunConfig(man, seed if seed is not None else int(man.params.get("seed", 0)),
                    order if order is not None else int(man.params.get("order", 4)))
    env = [("seed", str(cfg.seed)), ("order", str(cfg.order)), ("radical", str(radical()))]
    if "cutoff" in man.params:
        env.append(("cutoff", str(man.params["cutoff"])))
    if "lambda" in man.params:
        env.append(("lambda", man.params["lambda"].label))
    return Report(env, [run_check(cfg, name) for name in man.checks])
