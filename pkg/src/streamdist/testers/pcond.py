"""Single-pass identity testing against a known D* with pair-conditional help.

The tester never stores raw samples. It streams into a CountMin sketch to
check that the empirical weight of every D*-mass bucket matches D*, then
anchors a handful of points drawn from the explicit D* and compares each
against fresh stream arrivals with pair-conditional queries, rejecting when
an observed weight ratio falls measurably below what D* predicts.
"""

from __future__ import annotations

import math

from ..distributions import ExplicitDistribution
from ..oracles import MemoryLedger, PcondOracle, Sampler
from ..partition import bucketize, loglog
from ..sketch import CountMinSketch
from .compare import compare
from .config import (LEDGER_SLACK, Decision, TesterConfig, Verdict,
                     pcond_window, require_window)


def pcond_budget_bits(n: int, eps: float, m: int) -> float:
    """Documented working-set size: the sketch dominates at e*ln(100)-ish cells."""
    width = math.ceil(math.e * m / eps)
    depth = max(1, math.ceil(math.log(100.0)))
    return width * depth * 64.0


def pcond_identity_streaming(stream, pcond: PcondOracle, dstar: ExplicitDistribution,
                             cfg: TesterConfig) -> Verdict:
    """Accept D = D*, reject tv(D, D*) >= eps, each with probability >= 2/3."""
    n = dstar.n
    eps = cfg.eps
    m = cfg.require_m()
    require_window(m, pcond_window(n, eps, cfg), "conditional identity tester")

    eta = eps / 6.0
    ln2 = math.log2(max(2, n))
    buckets = bucketize(dstar.pmf, eta)
    occupied = buckets.occupied
    ell = max(1, occupied.size)

    ledger = MemoryLedger(budget_bits=pcond_budget_bits(n, eps, m), slack=LEDGER_SLACK)
    sketch = CountMinSketch.for_error(eps / m, 0.01, n, cfg.rng, ledger)
    s_sketch = cfg.capped(cfg.c("c_pcond_sketch") * ln2 ** 2 * loglog(n) / (m * eps ** 2))
    sketch.update_many(stream.next(s_sketch))

    # bucket-weight branch: one-sided slack below, sketch-inflated slack above
    slack_lo = math.sqrt(m) * eps / ln2
    slack_hi = slack_lo + ln2 ** 2 * loglog(n) / (eps * m * m)
    bucket_reject = None
    for j in occupied:
        est = sketch.group_query(buckets.elements(int(j))) / s_sketch
        mass = float(buckets.masses[j])
        if est < mass - slack_lo or est > mass + slack_hi:
            bucket_reject = {"bucket": int(j), "estimate": est, "mass": mass}
            break

    # pair branch: anchors from the explicit D*, probes from the stream
    s_pairs = cfg.capped(cfg.c("c_pcond_pairs") * ell / eps)
    ledger.charge(s_pairs * ledger.sample_bits(n))
    anchors = Sampler(dstar.pmf, cfg.rng).draw(s_pairs)
    delta = 1.0 / (10.0 * s_pairs * s_pairs)
    ratio_floor = 1.0 - eta / (2.0 * ell)
    pair_reject = None
    for y in anchors:
        probes = stream.next(s_pairs)
        dy = float(dstar.pmf[y - 1])
        for z in probes:
            if z == y:
                continue
            dz = float(dstar.pmf[z - 1])
            if dz <= 0.0 or dy <= 0.0 or not 0.5 <= dy / dz <= 2.0:
                continue
            res = compare(pcond, int(z), int(y), eta / (4.0 * ell), 2.0, delta, cfg)
            if res.is_low or (res.ratio is not None and res.ratio < ratio_floor * dy / dz):
                pair_reject = pair_reject or {
                    "y": int(y), "z": int(z), "kind": res.kind.value,
                    "ratio": res.ratio, "floor": ratio_floor * dy / dz,
                }
    ledger.release(s_pairs * ledger.sample_bits(n))

    rejected = bucket_reject is not None or pair_reject is not None
    diag = {
        "occupied_buckets": int(ell), "sketch_samples": s_sketch,
        "anchors": s_pairs, "bucket_reject": bucket_reject, "pair_reject": pair_reject,
    }
    return Verdict(Decision.REJECT if rejected else Decision.ACCEPT,
                   samples_used=stream.consumed, cond_queries_used=pcond.queries,
                   peak_bits=ledger.peak_bits, budget_bits=ledger.budget_bits,
                   diagnostics=diag)
