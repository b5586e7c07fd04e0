"""Partition assessment, decomposable-distribution learning, property testing.

A distribution is (gamma, L)-decomposable when some partition into at most L
intervals makes every piece either light (mass <= gamma/L) or near-flat
(max <= (1+gamma)*min inside the piece). Such distributions are learnable in
one pass: build a fine partition from a prefix of samples, spot-check by
rounds of stored-versus-streamed collision counting that the heavy wide
intervals look flat (assessment), then estimate interval weights and return
the flattened estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..collision import CollisionStats, Flag, bipartite_collisions, classify_bipartite
from ..distributions import ExplicitDistribution, FlattenedView
from ..oracles import MemoryLedger
from ..partition import IntervalPartition, fine_partition
from ..sketch import CountMinSketch
from .config import (LEDGER_SLACK, ConfigError, Decision, TesterConfig, Verdict,
                     assess_window, require_window)

LEARNER_ROUNDS_C = 20


def assess_partition_streaming(stream, partition: IntervalPartition, c: int, r: int,
                               cfg: TesterConfig, ledger: MemoryLedger | None = None) -> Verdict:
    """Decide whether D places nearly all its weight on intervals of the
    partition that are light, narrow, or near-flat.

    Runs ceil(c/eps) rounds; each round picks the interval of a fresh sample,
    gates it on width <= n/c and sketch-estimated weight >= eps/r - eps^2/r,
    and counts stored-versus-streamed collisions inside it. Rejects when more
    than 4*eps*k rounds land on a far-from-flat interval.
    """
    n = partition.n
    eps = cfg.eps
    m = cfg.require_m()
    if c < 1 or r < 1:
        raise ConfigError("c and r must be positive")
    require_window(m, assess_window(n, eps, cfg), "partition assessment")

    own_ledger = ledger is None
    if own_ledger:
        ledger = MemoryLedger(budget_bits=m, slack=LEDGER_SLACK)
    t = cfg.capped(cfg.c("c_assess_t") * r * r * math.log2(r + 1) / eps ** 4)
    sketch = CountMinSketch.for_error(eps, 0.01, n, cfg.rng, ledger)
    sketch.update_many(stream.next(t))

    ln2 = math.log2(max(2, n))
    k = max(1, math.ceil(c / eps))
    s_round = cfg.capped(cfg.c("c_assess_round_samples") * n * r / (m * eps ** 8),
                         "round_cap")
    s1_cap = max(1, math.ceil(cfg.c("c_assess_s1") * m / ln2))
    s2_cap = max(1, math.ceil(cfg.c("c_assess_s2") * n / (m * eps ** 5)))
    weight_floor = eps / r - eps * eps / r

    bad = 0
    checked = 0
    for _ in range(k):
        selector = int(stream.next(1)[0])
        j = int(partition.index_of([selector])[0])
        lo, hi = partition.interval(j)
        size = hi - lo + 1
        batch = stream.next(s_round)
        if size > n // max(1, c):
            continue
        est_weight = sketch.group_query(np.arange(lo, hi + 1)) / t
        if est_weight < weight_floor:
            continue
        arrivals = batch[(batch >= lo) & (batch <= hi)]
        stored = arrivals[:s1_cap]
        probes = arrivals[s1_cap:s1_cap + s2_cap]
        ledger.charge(stored.size * ledger.sample_bits(n))
        st = CollisionStats(lo, hi, stored=int(stored.size), observed=int(probes.size),
                            collisions=bipartite_collisions(stored, probes))
        flag = classify_bipartite(st, eps, "decomposable", cfg.c("c2_bipartite"))
        ledger.release(stored.size * ledger.sample_bits(n))
        checked += 1
        if flag is Flag.FAR_FROM_UNIFORM:
            bad += 1

    decision = Decision.REJECT if bad > 4.0 * eps * k else Decision.ACCEPT
    diag = {"rounds": k, "rounds_checked": checked, "bad_rounds": bad,
            "gating_samples": t, "round_samples": s_round}
    return Verdict(decision, samples_used=stream.consumed, peak_bits=ledger.peak_bits,
                   budget_bits=m, diagnostics=diag)


@dataclass
class LearnedDistribution:
    verdict: Verdict
    view: FlattenedView | None

    @property
    def accepted(self) -> bool:
        return self.verdict.accepted


def learn_decomposable_streaming(stream, big_l: int, cfg: TesterConfig) -> LearnedDistribution:
    """Learn a (gamma, L)-decomposable D to total variation eps in one pass.

    Returns the flattened empirical estimate on acceptance; a rejected
    assessment means the fine partition failed to explain D and no estimate
    is produced.
    """
    n = stream.n
    eps = cfg.eps
    m = cfg.require_m()
    if big_l < 1:
        raise ConfigError("L must be a positive integer")
    require_window(m, assess_window(n, eps, cfg), "decomposable learner")

    eta = eps / (2000.0 * big_l)
    gamma = eps / 2000.0
    delta = 1.0 / 3.0
    k_fine = cfg.capped(cfg.c("c_fine_k") / eta * math.log(2.0 / (gamma * delta)))
    k_fine = min(k_fine, max(1, m // 256))  # keep interval counters within budget
    ledger = MemoryLedger(budget_bits=m, slack=LEDGER_SLACK)
    ledger.charge(k_fine * ledger.sample_bits(n))
    partition = fine_partition(stream.next(k_fine), n)

    r = min(math.ceil(1e5 * big_l * math.log2(1.0 / eps) / eps), 4 * n)
    r = max(r, partition.ell)
    assess = assess_partition_streaming(stream, partition, LEARNER_ROUNDS_C, r, cfg,
                                        ledger=ledger)
    diag = {"ell": partition.ell, "fine_points": k_fine, "r": r,
            "partition": partition.to_list(), "assess": assess.diagnostics}
    if not assess.accepted:
        verdict = Verdict(Decision.REJECT, samples_used=stream.consumed,
                          peak_bits=ledger.peak_bits, budget_bits=m, diagnostics=diag)
        return LearnedDistribution(verdict, None)

    t_learn = cfg.capped(cfg.c("c_learn") * partition.ell ** 2
                         * math.log2(partition.ell + 1) / eps ** 2)
    ledger.charge(partition.ell * ledger.counter_bits)
    counts = np.bincount(partition.index_of(stream.next(t_learn)),
                         minlength=partition.ell)
    view = FlattenedView(partition, counts / float(t_learn))
    diag["learning_samples"] = t_learn
    verdict = Verdict(Decision.ACCEPT, samples_used=stream.consumed,
                      peak_bits=ledger.peak_bits, budget_bits=m, diagnostics=diag)
    return LearnedDistribution(verdict, view)


def test_decomposable_property(stream, membership_distance: Callable[[ExplicitDistribution], float],
                               big_l: int, cfg: TesterConfig) -> Verdict:
    """Test membership in a class C of decomposable distributions.

    membership_distance must return the exact distance from an explicit
    distribution to C. Members are accepted; distributions 2*eps-far from C
    are rejected (either because learning fails or because the learned
    estimate sits measurably outside C).
    """
    learned = learn_decomposable_streaming(stream, big_l, cfg)
    if not learned.accepted:
        return learned.verdict
    dist = float(membership_distance(learned.view.as_distribution()))
    verdict = learned.verdict
    verdict.diagnostics["class_distance"] = dist
    verdict.decision = Decision.ACCEPT if dist <= cfg.eps else Decision.REJECT
    return verdict
