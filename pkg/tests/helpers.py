"""Shared test utilities: stream construction and a brute-force nearest-monotone oracle.

The oracle enumerates every non-increasing pmf on a refined rational grid.
For an input whose entries are multiples of 1/10 and n <= 4, an optimal
monotone pmf can be taken piecewise constant with each level an average of
at most n consecutive input entries, so its entries are multiples of
1/(10*lcm(1..n)). Searching that grid is therefore exact, and independent
of the linear-programming code it validates.
"""

from __future__ import annotations

import math

import numpy as np

import streamdist as sd


def stream_of(dist, seed, limit=None):
    sampler = sd.Sampler(dist.pmf, np.random.default_rng(seed))
    return sd.SampleStream(sampler, limit=limit)


def pcond_of(dist, seed):
    return sd.PcondOracle(dist.pmf, np.random.default_rng(seed))


class FixedStream:
    """A stream that replays a fixed sequence; for deterministic counting tests."""

    def __init__(self, values, n=None):
        self.values = np.asarray(values, dtype=np.int64)
        self.n = int(n if n is not None else self.values.max())
        self.consumed = 0

    def next(self, k):
        k = int(k)
        if self.consumed + k > self.values.size:
            raise sd.StreamExhausted(f"only {self.values.size - self.consumed} left")
        out = self.values[self.consumed:self.consumed + k]
        self.consumed += k
        return out


def nonincreasing_tuples(n, total):
    """All integer tuples a_1 >= ... >= a_n >= 0 with sum == total."""

    def rec(k, remaining, cap):
        if k == 1:
            if remaining <= cap:
                yield (remaining,)
            return
        for first in range(min(cap, remaining), math.ceil(remaining / k) - 1, -1):
            for rest in rec(k - 1, remaining - first, first):
                yield (first,) + rest

    return np.array(list(rec(n, total, total)), dtype=np.int64)


_MONOTONE_GRIDS: dict[tuple[int, int], np.ndarray] = {}


def monotone_grid(n, den):
    key = (n, den)
    if key not in _MONOTONE_GRIDS:
        _MONOTONE_GRIDS[key] = nonincreasing_tuples(n, den) / float(den)
    return _MONOTONE_GRIDS[key]


def brute_force_monotone_distance(p):
    """Exact distance to the nearest non-increasing pmf, for 0.1-grid p, n <= 4."""
    p = np.asarray(p, dtype=float)
    n = p.size
    assert n <= 4, "grid enumeration is exponential; keep n tiny"
    den = 10 * math.lcm(*range(1, n + 1))
    cands = monotone_grid(n, den)
    return 0.5 * float(np.abs(cands - p).sum(axis=1).min())


def simplex_grid(n, steps=10):
    """All pmfs over [n] whose entries are multiples of 1/steps."""

    def rec(k, remaining):
        if k == 1:
            yield (remaining,)
            return
        for first in range(remaining + 1):
            for rest in rec(k - 1, remaining - first):
                yield (first,) + rest

    return np.array(list(rec(n, steps)), dtype=np.int64) / float(steps)


def random_monotone(n, rng):
    w = np.sort(rng.dirichlet(np.ones(n)))[::-1]
    return sd.ExplicitDistribution(w)
