"""Monotonicity testers: two offline collision variants and a single-pass one.

All three share a skeleton. Phase 1 estimates interval weights over the
geometric partition with eps1 = eps^2, giving a reduced distribution whose
flattening tracks D closely whenever D is monotone. Phase 2 hunts for
intervals whose conditional distribution is far from uniform (monotone
distributions are near-uniform inside geometric intervals, so such intervals
betray non-monotonicity): by within-sample collisions, or by collisions
between a stored prefix and streamed probes when memory is scarce. The
verdict rejects when flagged intervals carry more than 5*eps weight, and
otherwise accepts exactly when the flattened estimate is 2*eps-close to
monotone (an exact small LP on the reduced domain, excluded from the
streaming ledger).

Accept guarantee holds for monotone D; reject guarantee for D at total
variation >= 7*eps from every monotone distribution.
"""

from __future__ import annotations

import math

import numpy as np

from ..collision import (CollisionStats, Flag, bipartite_collisions,
                         classify_bipartite, classify_pairwise,
                         pairwise_collisions, split_by_group)
from ..distributions import FlattenedView, distance_to_monotone_flattened
from ..oracles import MemoryLedger
from ..partition import birge_partition, loglog
from .config import (LEDGER_SLACK, Decision, TesterConfig, Verdict,
                     require_window, streaming_monotonicity_window)


def _phase1_weights(stream, partition, cfg: TesterConfig, ledger: MemoryLedger):
    t = cfg.capped(cfg.c("c_mono_t") * math.log2(max(2, partition.n)) ** 2
                   * loglog(partition.n) / cfg.eps ** 6)
    ledger.charge(partition.ell * ledger.counter_bits)
    counts = np.bincount(partition.index_of(stream.next(t)), minlength=partition.ell)
    return counts / float(t), t


def _decide(partition, weights, stats_list, flags, cfg: TesterConfig,
            ledger: MemoryLedger, consumed: int, extra: dict) -> Verdict:
    flagged = [
        {"lo": st.lo, "hi": st.hi, "weight": float(weights[j]), "rate": st.rate()}
        for j, st in enumerate(stats_list) if flags[j] is Flag.FAR_FROM_UNIFORM
    ]
    flagged_weight = float(sum(f["weight"] for f in flagged))
    diag = {"flagged": flagged, "flagged_weight": flagged_weight,
            "ell": partition.ell, **extra}
    if flagged_weight > 5.0 * cfg.eps:
        return Verdict(Decision.REJECT, samples_used=consumed,
                       peak_bits=ledger.peak_bits, budget_bits=ledger.budget_bits,
                       diagnostics=diag)
    total = weights.sum()
    view = FlattenedView(partition, weights / total if total > 0 else
                         partition.sizes / partition.n)
    # exact reduced-domain LP; deliberately outside the ledger
    dist = distance_to_monotone_flattened(view)
    diag["flattened_distance"] = dist
    decision = Decision.ACCEPT if dist <= 2.0 * cfg.eps else Decision.REJECT
    return Verdict(decision, samples_used=consumed, peak_bits=ledger.peak_bits,
                   budget_bits=ledger.budget_bits, diagnostics=diag)


def collision_monotonicity(stream, cfg: TesterConfig) -> Verdict:
    """Offline variant: stores the collision draw and counts within-sample pairs."""
    n = stream.n
    eps = cfg.eps
    partition = birge_partition(n, eps * eps)
    ledger = MemoryLedger()
    weights, t = _phase1_weights(stream, partition, cfg, ledger)

    s = cfg.capped(cfg.c("c_mono_s") * math.sqrt(n) * math.log2(max(2, n))
                   * loglog(n) / eps ** 8)
    draw = stream.next(s)
    ledger.charge(s * ledger.sample_bits(n))
    groups = split_by_group(draw, partition.index_of(draw), partition.ell)
    stats_list, flags = [], []
    for j, g in enumerate(groups):
        lo, hi = partition.interval(j)
        st = CollisionStats(lo, hi, stored=0, observed=int(g.size),
                            collisions=pairwise_collisions(g))
        stats_list.append(st)
        flags.append(classify_pairwise(st, eps, n, cfg.c("c1_pairwise")))
    ledger.release(s * ledger.sample_bits(n))
    return _decide(partition, weights, stats_list, flags, cfg, ledger,
                   stream.consumed, {"t": t, "s": s})


def bipartite_collision_monotonicity(stream, cfg: TesterConfig) -> Verdict:
    """Offline variant estimating interval l2 mass by cross-half collisions."""
    n = stream.n
    eps = cfg.eps
    partition = birge_partition(n, eps * eps)
    ledger = MemoryLedger()
    weights, t = _phase1_weights(stream, partition, cfg, ledger)

    s = cfg.capped(cfg.c("c_mono_s") * math.sqrt(n) * math.log2(max(2, n))
                   * loglog(n) / eps ** 8)
    draw = stream.next(s)
    groups = split_by_group(draw, partition.index_of(draw), partition.ell)
    stored_total = sum(math.ceil(g.size / 2) for g in groups)
    ledger.charge(stored_total * ledger.sample_bits(n))
    stats_list, flags = [], []
    for j, g in enumerate(groups):
        lo, hi = partition.interval(j)
        half = math.ceil(g.size / 2)
        st = CollisionStats(lo, hi, stored=half, observed=int(g.size) - half,
                            collisions=bipartite_collisions(g[:half], g[half:]))
        stats_list.append(st)
        flags.append(classify_bipartite(st, eps, "monotone", cfg.c("c2_bipartite")))
    ledger.release(stored_total * ledger.sample_bits(n))
    return _decide(partition, weights, stats_list, flags, cfg, ledger,
                   stream.consumed, {"t": t, "s": s})


def streaming_monotonicity(stream, cfg: TesterConfig) -> Verdict:
    """Single-pass variant under a hard bit budget m.

    Per interval only the first s1 arrivals are retained (the stored prefix)
    and collisions are counted against the following s2 arrivals; everything
    later is consumed and dropped.
    """
    n = stream.n
    eps = cfg.eps
    m = cfg.require_m()
    require_window(m, streaming_monotonicity_window(n, eps, cfg),
                   "streaming monotonicity tester")
    partition = birge_partition(n, eps * eps)
    ledger = MemoryLedger(budget_bits=m, slack=LEDGER_SLACK)
    weights, t = _phase1_weights(stream, partition, cfg, ledger)

    ln2 = math.log2(max(2, n))
    s = cfg.capped(cfg.c("c_alg5_s") * n * ln2 / (m * eps ** 8))
    s1 = max(1, math.ceil(cfg.c("c_alg5_s1") * m * eps * eps / ln2 ** 2))
    s2 = max(1, math.ceil(cfg.c("c_alg5_s2") * n / (m * eps ** 4)))
    draw = stream.next(s)
    groups = split_by_group(draw, partition.index_of(draw), partition.ell)
    ledger.charge(partition.ell * ledger.counter_bits)  # collision counters
    stored_total = sum(min(int(g.size), s1) for g in groups)
    ledger.charge(stored_total * ledger.sample_bits(n))
    stats_list, flags = [], []
    for j, g in enumerate(groups):
        lo, hi = partition.interval(j)
        stored = g[:s1]
        probes = g[s1:s1 + s2]
        st = CollisionStats(lo, hi, stored=int(stored.size), observed=int(probes.size),
                            collisions=bipartite_collisions(stored, probes))
        stats_list.append(st)
        flags.append(classify_bipartite(st, eps, "monotone", cfg.c("c2_bipartite")))
    ledger.release(stored_total * ledger.sample_bits(n))
    ledger.release(partition.ell * ledger.counter_bits)
    return _decide(partition, weights, stats_list, flags, cfg, ledger,
                   stream.consumed, {"t": t, "s": s, "s1": s1, "s2": s2})
