"""CountMin sketch: fixed-size counter array giving one-sided frequency estimates.

A width-w, depth-d sketch answers point-frequency queries over a stream of S
updates with f_x <= estimate <= f_x + (e/w)*S, the upper bound holding with
probability >= 1 - exp(-d) per query. Rows hash with a pairwise-independent
family h(x) = ((a*x + b) mod P) mod w over the fixed Mersenne prime
P = 2^31 - 1, which caps the supported domain at n < P.

Storage is d*w cells of 64 bits each, charged to the ledger at construction;
the update total lives outside the rows as a single machine counter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

MERSENNE_P = (1 << 31) - 1


@dataclass
class CountMinSketch:
    width: int
    depth: int
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    total: int = 0

    @classmethod
    def for_error(cls, eps: float, delta: float, n: int,
                  rng: np.random.Generator, ledger=None) -> "CountMinSketch":
        """Sketch sized so estimates exceed truth by eps*total w.p. <= delta."""
        if not 0 < eps <= 1:
            raise ValueError("eps must be in (0, 1]")
        if not 0 < delta < 1:
            raise ValueError("delta must be in (0, 1)")
        if n >= MERSENNE_P:
            raise ValueError(f"domain must be smaller than {MERSENNE_P}")
        w = math.ceil(math.e / eps)
        d = max(1, math.ceil(math.log(1.0 / delta)))
        a = rng.integers(1, MERSENNE_P, size=d, dtype=np.int64)
        b = rng.integers(0, MERSENNE_P, size=d, dtype=np.int64)
        if ledger is not None:
            ledger.charge(w * d * ledger.cell_bits)
        return cls(width=w, depth=d, a=a, b=b,
                   counts=np.zeros((d, w), dtype=np.int64))

    @property
    def memory_bits(self) -> int:
        return self.width * self.depth * 64

    def _cols(self, xs: np.ndarray) -> np.ndarray:
        """Row-wise hash columns, shape (d, len(xs))."""
        if xs.size and (xs.min() < 1 or xs.max() >= MERSENNE_P):
            raise ValueError("element outside supported domain")
        return ((self.a[:, None] * xs[None, :] + self.b[:, None]) % MERSENNE_P) % self.width

    def update(self, x: int) -> None:
        self.update_many(np.array([x], dtype=np.int64))

    def update_many(self, xs) -> None:
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size == 0:
            return
        cols = self._cols(xs)
        rows = np.broadcast_to(np.arange(self.depth)[:, None], cols.shape)
        np.add.at(self.counts, (rows.ravel(), cols.ravel()), 1)
        self.total += int(xs.size)

    def query(self, x: int) -> int:
        return int(self.query_many(np.array([x], dtype=np.int64))[0])

    def query_many(self, xs) -> np.ndarray:
        """Min-over-rows estimates; one-sided, never below true frequency."""
        xs = np.asarray(xs, dtype=np.int64)
        if xs.size == 0:
            return np.zeros(0, dtype=np.int64)
        cols = self._cols(xs)
        return self.counts[np.arange(self.depth)[:, None], cols].min(axis=0)

    def group_query(self, group) -> int:
        """Sum of point estimates over a set of elements."""
        group = np.asarray(group, dtype=np.int64)
        if group.size == 0:
            return 0
        return int(self.query_many(group).sum())
