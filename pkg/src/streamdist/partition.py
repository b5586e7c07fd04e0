"""Interval partitions of the domain [n] and weight bucketizations.

Three partition constructions feed the testers:

* geometric ("oblivious") partitions whose interval sizes grow like
  (1+eps)^j; flattening a monotone non-increasing pmf over them moves it by
  at most eps in total variation;
* weight bucketizations of a known pmf into powers-of-two mass bands;
* sample-driven fine partitions (singleton at every sampled point, one
  interval per gap).

All intervals are 1-based and inclusive: [lo, hi] covers elements
lo, lo+1, ..., hi, and a partition tiles [1, n] contiguously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def loglog(n: int) -> float:
    """max(1, ln ln n); the guard keeps tiny domains out of the zero/negative range."""
    if n <= 2:
        return 1.0
    return max(1.0, math.log(math.log(n)))


@dataclass(frozen=True)
class IntervalPartition:
    """A contiguous tiling of [1, n] by inclusive intervals, stored as hi endpoints."""

    n: int
    his: np.ndarray = field(repr=False)

    def __post_init__(self):
        his = np.asarray(self.his, dtype=np.int64)
        if his.size == 0 or his[-1] != self.n:
            raise ValueError("partition must cover [1, n]")
        if np.any(np.diff(his) <= 0) or his[0] < 1:
            raise ValueError("interval endpoints must be strictly increasing")
        object.__setattr__(self, "his", his)

    @property
    def ell(self) -> int:
        return int(self.his.size)

    @property
    def los(self) -> np.ndarray:
        return np.concatenate(([1], self.his[:-1] + 1))

    @property
    def sizes(self) -> np.ndarray:
        return np.diff(np.concatenate(([0], self.his)))

    def index_of(self, elements) -> np.ndarray:
        """Interval index (0-based) containing each 1-based element."""
        e = np.asarray(elements, dtype=np.int64)
        if e.size and (e.min() < 1 or e.max() > self.n):
            raise ValueError("element outside [1, n]")
        return np.searchsorted(self.his, e, side="left")

    def interval(self, j: int) -> tuple[int, int]:
        lo = 1 if j == 0 else int(self.his[j - 1]) + 1
        return lo, int(self.his[j])

    def to_list(self) -> list[list[int]]:
        los = self.los
        return [[int(lo), int(hi)] for lo, hi in zip(los, self.his)]


def birge_partition(n: int, eps1: float) -> IntervalPartition:
    """Geometric partition with interval sizes max(1, floor((1+eps1)^j)),
    the last interval truncated to end at n.

    The number of intervals is O((1/eps1) * log(n*eps1 + 1)).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0.0 < eps1 < 1.0:
        raise ValueError("eps1 must be in (0, 1)")
    his = []
    total = 0
    j = 1
    while total < n:
        size = max(1, math.floor((1.0 + eps1) ** j))
        total = min(n, total + size)
        his.append(total)
        j += 1
    return IntervalPartition(n, np.array(his, dtype=np.int64))


@dataclass(frozen=True)
class BucketPartition:
    """Elements of [n] grouped by the mass a known pmf assigns them.

    Bucket 0 holds elements with mass below eta/n; bucket j >= 1 holds the
    half-open band [2^(j-1) * eta/n, 2^j * eta/n). Buckets are index sets,
    not intervals.
    """

    n: int
    eta: float
    index_of_element: np.ndarray = field(repr=False)  # bucket id per element, 0-based domain
    masses: np.ndarray = field(repr=False)  # pmf mass per bucket

    @property
    def nominal_buckets(self) -> int:
        """The formula bucket count ceil(log2(n/eta)) + 2 (most may be empty)."""
        return int(math.ceil(math.log2(self.n / self.eta))) + 2

    @property
    def occupied(self) -> np.ndarray:
        """Bucket ids carrying positive mass."""
        return np.flatnonzero(self.masses > 0)

    def elements(self, j: int) -> np.ndarray:
        """1-based elements of bucket j."""
        return np.flatnonzero(self.index_of_element == j) + 1


def bucketize(pmf, eta: float) -> BucketPartition:
    """Group [n] by pmf mass into powers-of-two bands of width eta/n."""
    p = np.asarray(pmf, dtype=np.float64)
    n = p.size
    if not 0 < eta <= 1:
        raise ValueError("eta must be in (0, 1]")
    base = eta / n
    idx = np.zeros(n, dtype=np.int64)
    heavy = p >= base
    with np.errstate(divide="ignore"):
        j = np.floor(np.log2(np.where(heavy, p, 1.0) / base)).astype(np.int64) + 1
    # repair float edge cases against the half-open definition
    j = np.maximum(j, 1)
    lo_edge = base * np.exp2(j - 1.0)
    hi_edge = base * np.exp2(j.astype(np.float64))
    j = np.where(heavy & (p < lo_edge), j - 1, j)
    j = np.where(heavy & (p >= hi_edge), j + 1, j)
    idx[heavy] = np.maximum(j[heavy], 1)
    nbuckets = int(idx.max()) + 1
    masses = np.bincount(idx, weights=p, minlength=nbuckets)
    return BucketPartition(n=n, eta=eta, index_of_element=idx, masses=masses)


def fine_partition(samples, n: int) -> IntervalPartition:
    """Partition [1, n] into a singleton at every sampled point plus the gaps.

    Duplicates are dropped; an empty sample gives the single interval [1, n].
    """
    if n < 1:
        raise ValueError("n must be positive")
    xs = np.unique(np.asarray(samples, dtype=np.int64))
    if xs.size and (xs[0] < 1 or xs[-1] > n):
        raise ValueError("sample outside [1, n]")
    his = []
    prev = 0
    for x in xs:
        if x - 1 > prev:
            his.append(x - 1)  # gap [prev+1, x-1]
        his.append(x)
        prev = x
    if prev < n:
        his.append(n)
    return IntervalPartition(n, np.array(his, dtype=np.int64))


def empirical_reduced(stream, partition: IntervalPartition, t: int, ledger=None):
    """Draw t samples from the stream and return their interval frequencies.

    Charges one 64-bit counter per interval to the ledger (released by the
    caller when the counters are dropped).
    """
    from .distributions import ReducedDistribution

    if t < 1:
        raise ValueError("need at least one sample")
    if ledger is not None:
        ledger.charge(partition.ell * ledger.counter_bits)
    counts = np.bincount(partition.index_of(stream.next(t)), minlength=partition.ell)
    return ReducedDistribution(partition, counts / float(t))
