"""Acceptance criteria 1-10, each at its stated tolerance and time budget."""

from __future__ import annotations

import math
import random
import time

import numpy as np
import pytest

import oracles
from padic_hardy import (DivergenceError, HerzParams, MorreyHerzParams, MultilinearParams,
                         PadicContext, PadicScalar, RadialFunction, Segment, ShellWeight, Term,
                         UnitSampler, apply_dual_hardy, apply_hardy, ball_measure, char_const,
                         herz_norm, lq_norm, morrey_herz_norm, power_law, restrict_norm,
                         sphere_measure)
from padic_hardy.cli import EXIT_DIVERGENT, EXIT_TOLERANCE, run_command, verify_all
from padic_hardy.config import builtin_preset_dir, load_config, resolve_preset
from padic_hardy.hardy import slot_exponents
from padic_hardy.sharpness import (SharpnessConfig, herz_extremal, mh_extremal, ratio_mh,
                                   sharpness_sweep)


def preset(name):
    return load_config(resolve_preset(name))


# 1 -------------------------------------------------------------------------------------

def _random_scalar(rng: random.Random, p: int, precision: int = 64) -> PadicScalar:
    digits = [rng.randrange(1, p)] + [rng.randrange(p) for _ in range(precision - 1)]
    return PadicScalar(p, rng.randint(-6, 6), tuple(digits))


def test_criterion_1_ultrametric(criterion):
    rng = random.Random(1)
    pairs = {p: [(_random_scalar(rng, p), _random_scalar(rng, p)) for _ in range(10_000)]
             for p in (2, 3, 5, 7)}
    start = time.perf_counter()
    bad = 0
    strict = 0
    for p, items in pairs.items():
        for x, y in items:
            s = x + y
            vs = math.inf if s.valuation is None else s.valuation
            # integer comparison of valuations: |s| <= max(|x|, |y|) iff v(s) >= min(v)
            if vs < min(x.valuation, y.valuation):
                bad += 1
            if x.valuation != y.valuation:
                strict += 1
                if vs != min(x.valuation, y.valuation):
                    bad += 1
    elapsed = time.perf_counter() - start
    ok = bad == 0 and strict > 0 and elapsed < 1.0
    criterion(1, ok, f"{bad} violations in 4x10^4 pairs, {elapsed:.2f} s")
    assert bad == 0
    assert elapsed < 1.0


# 2 -------------------------------------------------------------------------------------

@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (5, 2)])
def test_criterion_2_measures(criterion, p, n):
    ctx = PadicContext(p, n)
    start = time.perf_counter()
    worst = 0.0
    for g in range(-20, 21):
        # sphere = ball minus the next smaller ball
        lhs = sphere_measure(ctx, g)
        worst = max(worst, abs(lhs - (ball_measure(ctx, g) - ball_measure(ctx, g - 1))) / lhs)
        # telescoping: the ball is the disjoint union of its spheres
        depth = 1200 // n
        tele = math.fsum(sphere_measure(ctx, j) for j in range(g - depth, g + 1))
        tele += ball_measure(ctx, g - depth - 1)
        worst = max(worst, abs(tele - ball_measure(ctx, g)) / ball_measure(ctx, g))
    N = 100_000
    shells = UnitSampler(ctx, seed=7).shells(N)
    zmax = 0.0
    for j in range(9):
        prob = float(p) ** (-j * n) * ctx.unit_mass
        sd = math.sqrt(N * prob * (1 - prob))
        count = int(np.count_nonzero(shells == -j))
        zmax = max(zmax, abs(count - N * prob) / sd)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and zmax <= 4 and elapsed < 5
    criterion(2, ok, f"p={p} n={n}: rel err {worst:.1e}, max |z| {zmax:.2f}")
    assert worst <= 1e-12
    assert zmax <= 4
    assert elapsed < 5


# 3 -------------------------------------------------------------------------------------

def test_criterion_3_herz_constant(criterion):
    start = time.perf_counter()
    cfg = preset("herz_canonical")
    value = char_const("herz", cfg.psi, cfg.params).value
    err = abs(value - oracles.FROZEN["herz_canonical"])
    code, mc = run_command("mc-check", cfg)
    elapsed = time.perf_counter() - start
    ok = err <= 1e-9 and mc["sigmas"] <= 3 and elapsed < 10
    criterion(3, ok, f"constant {value:.9f} (oracle diff {err:.1e}), MC {mc['sigmas']:.2f} "
                     f"stderr, {elapsed:.1f} s")
    assert err <= 1e-9
    assert mc["sigmas"] <= 3
    assert elapsed < 10


# 4 -------------------------------------------------------------------------------------

def _herz_sweep(name, dual):
    cfg = preset(name)
    grid = tuple(2.0 ** -l for l in range(13))
    return sharpness_sweep(SharpnessConfig(cfg.params, cfg.psi, grid, dual=dual))


def test_criterion_4_herz_sharpness(criterion):
    start = time.perf_counter()
    rep = _herz_sweep("herz_canonical", dual=False)
    elapsed = time.perf_counter() - start
    gap = rep.rows[-1].relative_gap
    ok = rep.upper_ok and gap <= 0.02 and elapsed < 30
    criterion(4, ok, f"max ratio/constant {max(r.ratio for r in rep.rows) / rep.constant:.6f}, "
                     f"l=12 gap {gap:.2%}")
    assert rep.upper_ok
    assert gap <= 0.02
    assert elapsed < 30


# 5 -------------------------------------------------------------------------------------

MH_CASES = [("mh_all_distinct", "all distinct"), ("mh_all_equal", "all equal"),
            ("mh_mixed", "mixed")]


def _mh_check(name, dual, oracle_key, expected_tag, criterion_no, record):
    start = time.perf_counter()
    cfg = preset(name)
    kind = "mh-dual" if dual else "mh"
    const = char_const(kind, cfg.psi, cfg.params).value
    ratio, tag = ratio_mh(SharpnessConfig(cfg.params, cfg.psi, dual=dual))
    rel = abs(ratio - const) / const
    oracle = abs(const - oracles.FROZEN[oracle_key]) / oracles.FROZEN[oracle_key]
    elapsed = time.perf_counter() - start
    ok = rel <= 1e-9 and oracle <= 1e-9 and tag == expected_tag and elapsed < 10
    record(criterion_no, ok, f"{name}: ratio rel err {rel:.1e}, oracle rel err {oracle:.1e}")
    assert tag == expected_tag
    assert rel <= 1e-9
    assert oracle <= 1e-9
    assert elapsed < 10


@pytest.mark.parametrize("name,tag", MH_CASES)
def test_criterion_5_mh_exactness(criterion, name, tag):
    _mh_check(name, False, name, tag, 5, criterion)


# 6 -------------------------------------------------------------------------------------

def test_criterion_6_dual_constant(criterion):
    start = time.perf_counter()
    cfg = preset("herz_dual_canonical")
    value = char_const("herz-dual", cfg.psi, cfg.params).value
    err = abs(value - oracles.FROZEN["herz_dual_quarter"])
    code, mc = run_command("mc-check", cfg)
    elapsed = time.perf_counter() - start
    ok = err <= 1e-9 and mc["sigmas"] <= 3 and elapsed < 10
    criterion(6, ok, f"dual constant diff {err:.1e}, MC {mc['sigmas']:.2f} stderr")
    assert err <= 1e-9
    assert mc["sigmas"] <= 3
    assert elapsed < 10


def test_criterion_6_dual_sharpness(criterion):
    start = time.perf_counter()
    rep = _herz_sweep("herz_dual_canonical", dual=True)
    elapsed = time.perf_counter() - start
    gap = rep.rows[-1].relative_gap
    ok = rep.upper_ok and gap <= 0.02 and elapsed < 30
    criterion(6, ok, f"dual sweep l=12 gap {gap:.2%}")
    assert rep.upper_ok
    assert gap <= 0.02
    assert elapsed < 30


@pytest.mark.parametrize("name,tag", [("mh_dual_all_distinct", "all distinct"),
                                      ("mh_dual_all_equal", "all equal"),
                                      ("mh_dual_mixed", "mixed")])
def test_criterion_6_dual_mh_exactness(criterion, name, tag):
    _mh_check(name, True, name, tag, 6, criterion)


def test_criterion_6_dual_mh_mc(criterion):
    cfg = preset("mh_dual_single")
    value = char_const("mh-dual", cfg.psi, cfg.params).value
    err = abs(value - oracles.FROZEN["mh_dual_single"])
    code, mc = run_command("mc-check", cfg)
    ok = err <= 1e-9 and mc["sigmas"] <= 3
    criterion(6, ok, f"mh-dual m=1 diff {err:.1e}, MC {mc['sigmas']:.2f} stderr")
    assert err <= 1e-9
    assert mc["sigmas"] <= 3


# 7 -------------------------------------------------------------------------------------

def test_criterion_7_proof_identities(criterion):
    ctx = PadicContext(2, 1)
    params = MultilinearParams(ctx, (0.25, 0.5), (4.0, 4.0), (2.0, 2.0), (0.125, 0.25))
    worst_restrict = 0.0
    for i in range(2):
        a, q = params.alphas[i], params.qs[i]
        for eps in (0.5, 0.125, 2.0 ** -6):
            f = herz_extremal(i, params, eps)
            for k in range(21):
                ref = ctx.unit_mass ** (1 / q) * 2.0 ** (-k * (a + eps))
                worst_restrict = max(worst_restrict, abs(restrict_norm(f, k, q) - ref) / ref)
    worst_mh = 0.0
    for i in range(2):
        mp = params.slot_mh(i)
        ref = (ctx.unit_mass ** (1 / mp.q) * 2.0 ** mp.lam
               / (2.0 ** (mp.r * mp.lam) - 1) ** (1 / mp.r))
        worst_mh = max(worst_mh, abs(morrey_herz_norm(mh_extremal(i, params), mp) - ref) / ref)
    # Herz norm of the extremal against dense summation; the closed form needs the outer root
    worst_herz = 0.0
    root_gap = 0.0
    for eps in (0.5, 0.25, 0.1):
        hp = params.slot_herz(0)
        f = herz_extremal(0, params, eps)
        dense = oracles.brute_shell_sum(f, 2, hp.alpha + 1 / hp.q, hp.r, 0, 1000) ** (1 / hp.r)
        dense *= ctx.unit_mass ** (1 / hp.q)
        closed = ctx.unit_mass ** (1 / hp.q) * 2 ** eps / (2 ** (hp.r * eps) - 1) ** (1 / hp.r)
        without_root = ctx.unit_mass ** (1 / hp.q) * 2 ** eps / (2 ** (hp.r * eps) - 1)
        got = herz_norm(f, hp)
        worst_herz = max(worst_herz, abs(got - dense) / dense, abs(got - closed) / closed)
        root_gap = max(root_gap, abs(without_root - got) / got)
    ok = worst_restrict <= 1e-12 and worst_mh <= 1e-9 and worst_herz <= 1e-12 and root_gap > 1e-3
    criterion(7, ok, f"restrict {worst_restrict:.1e}, MH {worst_mh:.1e}, Herz {worst_herz:.1e}; "
                     f"formula without the outer root is off by up to {root_gap:.0%}")
    assert worst_restrict <= 1e-12
    assert worst_mh <= 1e-9
    assert worst_herz <= 1e-12
    assert root_gap > 1e-3


# 8 -------------------------------------------------------------------------------------

def test_criterion_8_space_identities(criterion):
    rng = random.Random(8)
    worst_lq = worst_mh = worst_brute = 0.0
    for _ in range(50):
        p = rng.choice((2, 3, 5, 7))
        n = rng.randint(1, 3)
        ctx = PadicContext(p, n)
        shells = rng.sample(range(-12, 13), rng.randint(1, 8))
        vals = {k: rng.uniform(-3, 3) for k in shells}
        f = RadialFunction(ctx, vals)
        q = rng.uniform(1.05, 5)
        lq = lq_norm(f, q)
        hz = herz_norm(f, HerzParams(0.0, q, q))
        worst_lq = max(worst_lq, abs(hz - lq) / lq)
        brute = math.fsum(abs(v) ** q * sphere_measure(ctx, k) for k, v in vals.items()) ** (1 / q)
        worst_brute = max(worst_brute, abs(lq - brute) / brute)
        a, r = rng.uniform(-2, 2), rng.uniform(0.5, 5)
        h = herz_norm(f, HerzParams(a, r, q))
        m = morrey_herz_norm(f, MorreyHerzParams(a, r, q, 0.0))
        worst_mh = max(worst_mh, abs(m - h) / h)
    ok = max(worst_lq, worst_mh, worst_brute) <= 1e-12
    criterion(8, ok, f"Herz vs L^q {worst_lq:.1e}, MH(0) vs Herz {worst_mh:.1e}")
    assert ok


# 9 -------------------------------------------------------------------------------------

def _two_sided(ctx, rng, lo_rate, hi_rate, cut):
    """``c1 p^{k lo_rate}`` below ``cut`` and ``c2 p^{k hi_rate}`` from ``cut`` on, continuous-ish."""
    c = rng.uniform(0.5, 2)
    c2 = c * float(ctx.p) ** (cut * (lo_rate - hi_rate)) * rng.uniform(0.5, 2)
    return RadialFunction(ctx, {}, (Segment(None, cut - 1, (Term(c, lo_rate),)),
                                    Segment(cut, None, (Term(c2, hi_rate),))))


def _random_config(rng, with_lams):
    p = rng.choice((2, 3, 5))
    n = rng.randint(1, 2)
    m = rng.randint(1, 3)
    ctx = PadicContext(p, n)
    # aggregate q, r >= 1 keeps Minkowski's inequality available
    inv_q = [rng.uniform(0.05, 0.9 / m) for _ in range(m)]
    inv_r = [rng.uniform(0.05, 0.9 / m) for _ in range(m)]
    alphas = [rng.uniform(-1, 1) for _ in range(m)]
    lams = [rng.uniform(0.1, 1.0) for _ in range(m)] if with_lams else None
    params = MultilinearParams(ctx, alphas, [1 / v for v in inv_r], [1 / v for v in inv_q], lams)
    kind = "mh" if with_lams else "herz"
    exps = slot_exponents(kind, params)
    betas = [-e - n + rng.uniform(0.1, 2) for e in exps]
    psi = ShellWeight.separable([rng.uniform(0.5, 2) for _ in range(m)], betas)
    fs = []
    for i in range(m):
        tilt = alphas[i] + n / params.qs[i]
        if with_lams:
            lo = lams[i] + rng.uniform(0.05, 1)    # partial sums grow no faster than p^{k0 lam}
            hi = lams[i] - rng.uniform(0.05, 1)
        else:
            lo, hi = rng.uniform(0.05, 1), -rng.uniform(0.05, 1)
        fs.append(_two_sided(ctx, rng, lo - tilt, hi - tilt, rng.randint(-3, 3)))
    return params, psi, fs, kind


def test_criterion_9_boundedness(criterion):
    rng = random.Random(9)
    start = time.perf_counter()
    worst = {"herz": 0.0, "mh": 0.0}
    count = {"herz": 0, "mh": 0}
    failures = []
    for trial in range(100):
        with_lams = trial % 2 == 1
        params, psi, fs, kind = _random_config(rng, with_lams)
        const = char_const(kind, psi, params).value
        out = apply_hardy(fs, psi, params).values
        if with_lams:
            lhs = morrey_herz_norm(out, params.target_mh())
            rhs = const * math.prod(morrey_herz_norm(f, params.slot_mh(i))
                                    for i, f in enumerate(fs))
        else:
            lhs = herz_norm(out, params.target_herz())
            rhs = const * math.prod(herz_norm(f, params.slot_herz(i)) for i, f in enumerate(fs))
        worst[kind] = max(worst[kind], lhs / rhs)
        count[kind] += 1
        if lhs > rhs * (1 + 1e-9):
            failures.append(trial)
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    criterion(9, ok, f"{count['herz']} Herz + {count['mh']} MH configs, worst norm/bound "
                     f"{max(worst.values()):.4f}, {elapsed:.1f} s")
    assert not failures
    assert elapsed < 60


# 10 ------------------------------------------------------------------------------------

@pytest.mark.parametrize("name,command", [("divergent_herz", "constant"),
                                          ("divergent_herz_bilinear", "constant"),
                                          ("divergent_dual_apply", "apply"),
                                          ("divergent_constant_norm", "norm")])
def test_criterion_10_divergent_presets(criterion, name, command):
    code, record = run_command(command, preset(name))
    values = [record.get("value")] + [row["value"] for row in record.get("shells", [])]
    numeric = [v for v in values if isinstance(v, (int, float))]
    ok = code == EXIT_DIVERGENT and not numeric and "divergent" in values
    criterion(10, ok, f"{name}: exit {code}")
    assert ok


def test_criterion_10_divergence_in_api(criterion):
    ctx = PadicContext(2, 1)
    params = MultilinearParams(ctx, (0.5,), (2.0,), (2.0,))   # alpha_1 = n(1 - 1/q_1)
    raised = []
    for fn in (lambda: char_const("herz", ShellWeight.constant(1), params),
               lambda: apply_dual_hardy([power_law(ctx, 1.0, 0.0)], ShellWeight.constant(1), ctx),
               lambda: herz_norm(power_law(ctx, 1.0, 0.0), HerzParams(0.0, 2.0, 2.0))):
        try:
            fn()
            raised.append(False)
        except DivergenceError:
            raised.append(True)
    criterion(10, all(raised), "API raises divergence signals")
    assert all(raised)


def test_criterion_10_perturbed_constant(criterion):
    code, summary = verify_all(builtin_preset_dir() / "controls")
    ok = code == EXIT_TOLERANCE and 10 in summary["failed_criteria"]
    criterion(10, ok, f"perturbed preset: verify-all exit {code}")
    assert ok
