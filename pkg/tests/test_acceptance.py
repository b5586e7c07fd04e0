"""Release gate: every criterion at its stated tolerance and time bound.

Run `pytest tests/test_acceptance.py -v -s` for one PASS/FAIL line per
criterion. Each test prints its line before asserting, so the verdicts of all
criteria are visible even when one fails.
"""

import math
import time

import numpy as np

import streamdist as sd
from streamdist.collision import bipartite_estimate_error
from streamdist.testers.compare import CompareKind, compare
from streamdist.testers.config import (assess_window, pcond_window,
                                       streaming_monotonicity_window,
                                       window_midpoint)
from streamdist.testers.pcond import pcond_budget_bits

from helpers import (brute_force_monotone_distance, pcond_of, random_monotone,
                     simplex_grid, stream_of)


def report(num, ok, elapsed, bound, detail):
    verdict = "PASS" if ok and elapsed < bound else "FAIL"
    line = f"criterion {num}: {verdict} ({detail}; {elapsed:.1f}s < {bound}s)"
    print(line)
    assert ok and elapsed < bound, line


def mid(window_fn, n, eps):
    return window_midpoint(window_fn(n, eps, sd.TesterConfig(eps=eps)))


def test_criterion_01_birge_flattening_guarantee():
    t0 = time.monotonic()
    rng = np.random.default_rng(101)
    worst = -1.0
    ok = True
    for n in (10 ** 3, 10 ** 4):
        for eps1 in (0.05, 0.1):
            part = sd.birge_partition(n, eps1)
            for _ in range(100):
                err = sd.flattening_distance(random_monotone(n, rng).pmf, part)
                worst = max(worst, err / eps1)
                ok = ok and err <= eps1
    report(1, ok, time.monotonic() - t0, 10,
           f"400 instances, worst err/eps1 = {worst:.3f}")


def test_criterion_02_countmin_tail():
    t0 = time.monotonic()
    n, big_s, eps, delta = 1000, 10_000, 0.05, 0.01
    rng = np.random.default_rng(202)
    one_sided = True
    bad = 0
    queried = 0
    points = np.arange(1, n + 1)
    for _ in range(500):
        sk = sd.CountMinSketch.for_error(eps, delta, n, rng)
        data = rng.integers(1, n + 1, size=big_s)
        sk.update_many(data)
        truth = np.bincount(data, minlength=n + 1)[1:]
        est = sk.query_many(points)
        one_sided = one_sided and bool(np.all(est >= truth))
        bad += int((est > truth + eps * big_s).sum())
        queried += n
    tail = bad / queried
    ok = one_sided and tail <= delta + 0.02
    report(2, ok, time.monotonic() - t0, 30,
           f"one-sided={one_sided}, tail={tail:.4f} <= {delta + 0.02}")


def test_criterion_03_bipartite_concentration():
    t0 = time.monotonic()
    size, eps = 64, 0.5
    tol = eps * eps / (64.0 * size)
    l2 = 1.0 / size
    # Chebyshev point of the variance bound: failure probability 1/3 there
    s = math.ceil(math.sqrt(3.0 * l2 * (1.0 - l2)) / tol)
    gate_ok = s * s >= (2 * s) / eps ** 4
    p = np.full(size, l2)
    rng = np.random.default_rng(303)
    miss_base = bipartite_estimate_error(p, s, s, eps, 300, rng)
    s10 = math.ceil(s * math.sqrt(10.0))
    miss_10x = bipartite_estimate_error(p, s10, s10, eps, 300, rng)
    ok = gate_ok and miss_base <= 1 / 3 + 0.05 and miss_10x <= 0.05
    report(3, ok, time.monotonic() - t0, 60,
           f"|S1|=|S2|={s}: miss={miss_base:.3f} <= {1 / 3 + 0.05:.3f}; "
           f"10x ({s10}): miss={miss_10x:.3f} <= 0.05")


def test_criterion_04_compare_grid():
    t0 = time.monotonic()
    eta, big_k, delta = 0.1, 2.0, 0.05
    cfg = sd.TesterConfig(eps=0.1)
    rates = []
    for i, rho in enumerate((0.25, 0.5, 1.0, 2.0, 4.0)):
        px = 0.5 / (1.0 + rho)
        rest = 1.0 - px * (1.0 + rho)
        d = sd.ExplicitDistribution(np.array([px, px * rho, rest / 2, rest / 2]))
        hits = 0
        for seed in range(200):
            r = compare(pcond_of(d, 40_000 + 1000 * i + seed), 1, 2,
                        eta, big_k, delta, cfg)
            if r.kind is CompareKind.RATIO:
                hits += (1 - eta) <= r.ratio / rho <= (1 + eta)
            else:
                hits += (rho <= 1 / big_k and r.is_low) or (rho >= big_k and r.is_high)
        rates.append(hits / 200)
    ok = min(rates) >= 0.93
    report(4, ok, time.monotonic() - t0, 30,
           "per-point correct rates " + ", ".join(f"{r:.3f}" for r in rates))


def test_criterion_05_streaming_monotonicity_contract():
    t0 = time.monotonic()
    trials = 60
    n_c, eps_c = 1 << 14, 0.3
    m_c = mid(streaming_monotonicity_window, n_c, eps_c)
    geom = sd.gen_monotone("geometric", n_c, ratio=0.999)
    accepts = 0
    peaks_ok = True
    for i in range(trials):
        v = sd.streaming_monotonicity(stream_of(geom, 500 + i),
                                      sd.TesterConfig(eps=eps_c, m=m_c, seed=500 + i))
        accepts += v.decision is sd.Decision.ACCEPT
        peaks_ok = peaks_ok and v.peak_bits <= 4 * m_c

    n_f, eps_f = 1024, 0.03
    m_f = mid(streaming_monotonicity_window, n_f, eps_f)
    rejects = 0
    for i in range(trials):
        far = sd.gen_no_instance(n_f // 2, 0.9, np.random.default_rng(700 + i))
        v = sd.streaming_monotonicity(stream_of(far, 700 + i),
                                      sd.TesterConfig(eps=eps_f, m=m_f, seed=700 + i))
        rejects += v.decision is sd.Decision.REJECT
        peaks_ok = peaks_ok and v.peak_bits <= 4 * m_f
    ok = accepts >= 0.6 * trials and rejects >= 0.6 * trials and peaks_ok
    report(5, ok, time.monotonic() - t0, 300,
           f"accept {accepts}/{trials}, reject {rejects}/{trials}, "
           f"peaks within 4m: {peaks_ok}")


def test_criterion_06_pcond_identity_contract():
    t0 = time.monotonic()
    trials = 60
    n, eps = 256, 0.25
    m = mid(pcond_window, n, eps)
    budget = pcond_budget_bits(n, eps, m)
    dstar = sd.gen_uniform(n)
    half = sd.gen_half_uniform(n)
    accepts = rejects = 0
    peaks_ok = True
    for i in range(trials):
        v = sd.pcond_identity_streaming(
            stream_of(dstar, 600 + i), pcond_of(dstar, 1600 + i), dstar,
            sd.TesterConfig(eps=eps, m=m, seed=600 + i))
        accepts += v.decision is sd.Decision.ACCEPT
        peaks_ok = peaks_ok and v.peak_bits <= 4 * budget
        v = sd.pcond_identity_streaming(
            stream_of(half, 800 + i), pcond_of(half, 1800 + i), dstar,
            sd.TesterConfig(eps=eps, m=m, seed=800 + i))
        rejects += v.decision is sd.Decision.REJECT
        peaks_ok = peaks_ok and v.peak_bits <= 4 * budget
    ok = accepts >= 0.6 * trials and rejects >= 0.6 * trials and peaks_ok
    report(6, ok, time.monotonic() - t0, 300,
           f"accept {accepts}/{trials}, reject {rejects}/{trials}, "
           f"peaks within 4x documented budget: {peaks_ok}")


def test_criterion_07_no_instance_certificate():
    t0 = time.monotonic()
    worst = np.inf
    ok = True
    for half_n in (64, 512):
        for eps0 in (0.5, 0.8):
            for seed in range(20):
                d = sd.gen_no_instance(half_n, eps0, np.random.default_rng(seed))
                dist = sd.distance_to_monotone(d.pmf)
                worst = min(worst, dist / (eps0 / 4.0))
                ok = ok and dist >= eps0 / 4.0
    report(7, ok, time.monotonic() - t0, 60,
           f"80 sign draws, min dist/(eps0/4) = {worst:.3f}")


def test_criterion_08_decomposable_learner_contract():
    t0 = time.monotonic()
    trials = 40
    n, eps, big_l = 1 << 12, 0.3, 64
    m = mid(assess_window, n, eps)
    d = sd.gen_monotone("geometric", n, ratio=0.999)
    hits = 0
    peaks_ok = True
    for i in range(trials):
        out = sd.learn_decomposable_streaming(
            stream_of(d, 900 + i), big_l, sd.TesterConfig(eps=eps, m=m, seed=900 + i))
        peaks_ok = peaks_ok and out.verdict.peak_bits <= 4 * m
        if out.accepted and sd.tv_distance(out.view.as_distribution().pmf,
                                           d.pmf) <= eps:
            hits += 1
    ok = hits >= 0.6 * trials and peaks_ok
    report(8, ok, time.monotonic() - t0, 600,
           f"accept-and-learn {hits}/{trials}, peaks within 4m: {peaks_ok}")


def test_criterion_09_lp_matches_brute_force():
    t0 = time.monotonic()
    worst = 0.0
    checked = 0
    for n in (1, 2, 3, 4):
        for p in simplex_grid(n):
            gap = abs(sd.distance_to_monotone(p) - brute_force_monotone_distance(p))
            worst = max(worst, gap)
            checked += 1
    ok = worst <= 1e-9
    report(9, ok, time.monotonic() - t0, 60,
           f"{checked} grid points, max |LP - brute| = {worst:.2e}")


def test_criterion_10_collision_identity():
    t0 = time.monotonic()
    rng = np.random.default_rng(1010)
    ok = True
    for _ in range(10_000):
        a = rng.integers(1, 13, size=rng.integers(0, 31))
        b = rng.integers(1, 13, size=rng.integers(0, 31))
        merged = np.concatenate([a, b])
        lhs = sd.pairwise_collisions(merged) - sd.pairwise_collisions(a) \
            - sd.pairwise_collisions(b)
        ok = ok and lhs == sd.bipartite_collisions(a, b)
    report(10, ok, time.monotonic() - t0, 10, "10000 fuzzed pairs, identity exact")
