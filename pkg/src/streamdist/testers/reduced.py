"""Identity and closeness testing for monotone distributions by reduction.

A monotone non-increasing distribution is close to its flattening over a
geometric interval partition, so testing D against a monotone D* (or two
monotone sources against each other) reduces to testing their induced
distributions over the ell interval indices. Samples are mapped to interval
indices on the fly and never stored; the reduced-domain testers below keep
ell counters and decide by empirical total variation.

The reduced-domain testers are pluggable baselines: anything honouring the
same Accept/Reject contract can replace them without touching the reduction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..distributions import ExplicitDistribution, reduce, tv_distance
from ..oracles import MemoryLedger
from ..partition import IntervalPartition, birge_partition
from .config import LEDGER_SLACK, Decision, TesterConfig, Verdict


@dataclass
class MappedStream:
    """Adapter presenting a domain stream as a stream of 1-based interval ids."""

    base: object
    partition: IntervalPartition

    def next(self, k: int) -> np.ndarray:
        return self.partition.index_of(self.base.next(k)) + 1

    @property
    def consumed(self) -> int:
        return self.base.consumed


def _empirical(stream, ell: int, t: int) -> np.ndarray:
    ids = np.asarray(stream.next(t), dtype=np.int64)
    return np.bincount(ids - 1, minlength=ell) / float(t)


def reduced_identity_baseline(stream, target_pmf, eps: float, ledger: MemoryLedger,
                              cfg: TesterConfig) -> tuple[Decision, dict]:
    """Accept iff the empirical distribution lands within eps/2 of the target."""
    target = np.asarray(target_pmf, dtype=np.float64)
    ell = target.size
    if ell == 1:
        return Decision.ACCEPT, {"ell": 1, "t": 0, "empirical_tv": 0.0}
    t = cfg.capped(cfg.c("c_reduced") * ell / eps ** 2)
    ledger.charge(ell * ledger.counter_bits)
    emp = _empirical(stream, ell, t)
    ledger.release(ell * ledger.counter_bits)
    dist = tv_distance(emp, target)
    decision = Decision.ACCEPT if dist <= eps / 2.0 else Decision.REJECT
    return decision, {"ell": ell, "t": t, "empirical_tv": dist}


def reduced_closeness_baseline(stream1, stream2, ell: int, eps: float,
                               ledger: MemoryLedger, cfg: TesterConfig) -> tuple[Decision, dict]:
    """Accept iff two empirical distributions land within eps/2 of each other."""
    if ell == 1:
        return Decision.ACCEPT, {"ell": 1, "t": 0, "empirical_tv": 0.0}
    t = cfg.capped(cfg.c("c_reduced") * ell / eps ** 2)
    ledger.charge(2 * ell * ledger.counter_bits)
    emp1 = _empirical(stream1, ell, t)
    emp2 = _empirical(stream2, ell, t)
    ledger.release(2 * ell * ledger.counter_bits)
    dist = tv_distance(emp1, emp2)
    decision = Decision.ACCEPT if dist <= eps / 2.0 else Decision.REJECT
    return decision, {"ell": ell, "t": t, "empirical_tv": dist}


def identity_monotone_streaming(stream, dstar: ExplicitDistribution,
                                cfg: TesterConfig) -> Verdict:
    """Test D = D* against tv(D, D*) >= 3 eps for a known monotone D*.

    Sound because flattening over the geometric partition moves each side by
    at most eps, leaving a reduced-domain gap of at least eps to detect.
    """
    if not dstar.is_monotone():
        raise ValueError("reference distribution must be non-increasing")
    partition = birge_partition(dstar.n, cfg.eps)
    target = reduce(dstar.pmf, partition).weights
    ledger = MemoryLedger(budget_bits=cfg.m, slack=LEDGER_SLACK)
    decision, diag = reduced_identity_baseline(
        MappedStream(stream, partition), target, cfg.eps, ledger, cfg)
    return Verdict(decision, samples_used=stream.consumed, peak_bits=ledger.peak_bits,
                   budget_bits=cfg.m, diagnostics=diag)


def closeness_monotone_streaming(stream1, stream2, n: int, cfg: TesterConfig) -> Verdict:
    """Test D1 = D2 against tv(D1, D2) >= 3 eps for two monotone sources."""
    partition = birge_partition(n, cfg.eps)
    ledger = MemoryLedger(budget_bits=cfg.m, slack=LEDGER_SLACK)
    decision, diag = reduced_closeness_baseline(
        MappedStream(stream1, partition), MappedStream(stream2, partition),
        partition.ell, cfg.eps, ledger, cfg)
    samples = stream1.consumed + stream2.consumed
    return Verdict(decision, samples_used=samples, peak_bits=ledger.peak_bits,
                   budget_bits=cfg.m, diagnostics=diag)
