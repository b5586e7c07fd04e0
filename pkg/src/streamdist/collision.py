"""Collision counting and the uniformity flags built on it.

Collisions estimate the squared l2 norm of a conditional distribution:
E[coll(S)/C(|S|,2)] = ||D||_2^2 for pairwise counting within one sample, and
E[coll(S1,S2)/(|S1||S2|)] = ||D||_2^2 for bipartite counting between a stored
set and a streamed set. An interval whose conditional l2 mass sits well above
1/|I| is far from uniform on that interval; classifiers turn the empirical
rate into a FAR / NOT_FLAGGED / INSUFFICIENT call.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .partition import loglog


class Flag(enum.Enum):
    FAR_FROM_UNIFORM = "far_from_uniform"
    NOT_FLAGGED = "not_flagged"
    INSUFFICIENT = "insufficient"


def pairwise_collisions(samples) -> int:
    """Number of equal unordered pairs within one multiset."""
    s = np.asarray(samples)
    if s.size < 2:
        return 0
    counts = np.unique(s, return_counts=True)[1]
    return int((counts * (counts - 1) // 2).sum())


def bipartite_collisions(s1, s2) -> int:
    """Number of equal cross-pairs between two multisets."""
    a = np.asarray(s1)
    b = np.asarray(s2)
    if a.size == 0 or b.size == 0:
        return 0
    va, ca = np.unique(a, return_counts=True)
    vb, cb = np.unique(b, return_counts=True)
    _, ia, ib = np.intersect1d(va, vb, assume_unique=True, return_indices=True)
    return int(ca[ia] @ cb[ib])


@dataclass
class CollisionStats:
    """Collision evidence gathered for one interval.

    Pairwise mode: stored == 0 and observed is the full in-interval sample
    count. Bipartite mode: stored = |S1| (retained prefix), observed = |S2|
    (streamed suffix).
    """

    lo: int
    hi: int
    stored: int
    observed: int
    collisions: int

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def pairwise_pairs(self) -> int:
        return self.observed * (self.observed - 1) // 2

    def bipartite_pairs(self) -> int:
        return self.stored * self.observed

    def rate(self) -> float:
        pairs = self.bipartite_pairs() if self.stored else self.pairwise_pairs()
        return self.collisions / pairs if pairs else 0.0


def monotone_flag_threshold(size: int, eps: float) -> float:
    return (1.0 + eps * eps / 64.0) / size + eps * eps / 16.0

def decomposable_flag_threshold(size: int, eps: float) -> float:
    return (1.0 + 63.0 * eps * eps / 64.0) / size


def classify_pairwise(stats: CollisionStats, eps: float, n: int, c1: float = 1.0) -> Flag:
    """Flag an interval whose within-sample collision rate is too high.

    The sample gate c1*sqrt(|I|)*loglog(n)/eps^4 must be met before the rate
    is trusted at all.
    """
    gate = c1 * math.sqrt(stats.size) * loglog(n) / eps ** 4
    if stats.observed < max(2.0, gate):
        return Flag.INSUFFICIENT
    if stats.rate() >= monotone_flag_threshold(stats.size, eps):
        return Flag.FAR_FROM_UNIFORM
    return Flag.NOT_FLAGGED


def classify_bipartite(stats: CollisionStats, eps: float, mode: str = "monotone",
                       c2: float = 1.0) -> Flag:
    """Flag an interval from stored-vs-streamed collision evidence.

    mode picks the threshold: "monotone" uses the additive eps^2/16 band,
    "decomposable" the multiplicative (1 + 63 eps^2/64)/|I| band. The gate
    |S1|*|S2| >= c2*(|S1|+|S2|)/eps^4 must be met first.
    """
    pairs = stats.bipartite_pairs()
    gate = c2 * (stats.stored + stats.observed) / eps ** 4
    if pairs < max(1.0, gate):
        return Flag.INSUFFICIENT
    if mode == "monotone":
        threshold = monotone_flag_threshold(stats.size, eps)
        flagged = stats.rate() >= threshold
    elif mode == "decomposable":
        threshold = decomposable_flag_threshold(stats.size, eps)
        flagged = stats.rate() > threshold
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return Flag.FAR_FROM_UNIFORM if flagged else Flag.NOT_FLAGGED


def bipartite_estimate_error(cond_pmf, s1_size: int, s2_size: int, eps: float,
                             trials: int, rng: np.random.Generator) -> float:
    """Fraction of trials where the bipartite l2 estimate misses by more than
    eps^2/(64|I|). Test-suite helper; cond_pmf is the conditional pmf on I."""
    p = np.asarray(cond_pmf, dtype=np.float64)
    size = p.size
    l2 = float(p @ p)
    band = eps * eps / (64.0 * size)
    misses = 0
    for _ in range(trials):
        s1 = rng.choice(size, size=s1_size, p=p)
        s2 = rng.choice(size, size=s2_size, p=p)
        est = bipartite_collisions(s1, s2) / (s1_size * s2_size)
        if abs(est - l2) > band:
            misses += 1
    return misses / trials


def split_by_group(values: np.ndarray, group: np.ndarray, k: int) -> list[np.ndarray]:
    """Partition values into k lists by group id, preserving arrival order."""
    order = np.argsort(group, kind="stable")
    sorted_groups = group[order]
    sorted_values = values[order]
    cuts = np.searchsorted(sorted_groups, np.arange(k + 1))
    return [sorted_values[cuts[j]:cuts[j + 1]] for j in range(k)]
