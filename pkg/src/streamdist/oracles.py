"""Sampling access to distributions and the bit-level memory ledger.

Testers never touch a pmf array directly while streaming. They consume:

* SampleStream: one-pass i.i.d. samples, optionally capped, with a
  consumed-sample counter;
* PcondOracle: pairwise conditional queries; given {x, y}, a draw from the
  distribution restricted to that pair (a fair coin when both have zero mass);
* MemoryLedger: explicit charge/release accounting of working storage in
  bits, with a hard budget and a peak-usage watermark.

Accounting convention: a stored sample from a domain of size n costs
ceil(log2 n) bits; counters and sketch cells cost 64 bits each. Samples that
are only inspected and dropped within a batch are not charged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class MemoryBudgetExceeded(RuntimeError):
    """Raised when a charge would push ledger usage past its budget."""


class StreamExhausted(RuntimeError):
    """Raised when a stream is asked for more samples than its cap allows."""


@dataclass
class MemoryLedger:
    """Tracks working-memory bits against a budget.

    budget_bits None means "account but never refuse". slack scales the
    enforced ceiling, letting callers reserve headroom for constant factors.
    """

    budget_bits: float | None = None
    slack: float = 1.0
    used_bits: float = 0.0
    peak_bits: float = 0.0
    counter_bits: int = 64
    cell_bits: int = 64

    def sample_bits(self, n: int) -> int:
        return max(1, math.ceil(math.log2(n)))

    @property
    def ceiling(self) -> float | None:
        return None if self.budget_bits is None else self.budget_bits * self.slack

    def charge(self, bits: float) -> None:
        if bits < 0:
            raise ValueError("charge must be non-negative")
        self.used_bits += bits
        if self.ceiling is not None and self.used_bits > self.ceiling:
            raise MemoryBudgetExceeded(
                f"{self.used_bits:.0f} bits used, ceiling {self.ceiling:.0f}"
            )
        self.peak_bits = max(self.peak_bits, self.used_bits)

    def release(self, bits: float) -> None:
        if bits < 0:
            raise ValueError("release must be non-negative")
        self.used_bits = max(0.0, self.used_bits - bits)


def spawn_rngs(seed, k: int) -> list[np.random.Generator]:
    """k independent generators from one seed via SeedSequence.spawn."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.default_rng(child) for child in ss.spawn(k)]


@dataclass
class Sampler:
    """Inverse-CDF sampler over a pmf; draws are 1-based elements."""

    pmf: np.ndarray
    rng: np.random.Generator
    cdf: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        p = np.asarray(self.pmf, dtype=np.float64)
        cdf = np.cumsum(p)
        cdf[-1] = 1.0
        self.pmf = p
        self.cdf = cdf

    @property
    def n(self) -> int:
        return int(self.pmf.size)

    def draw(self, k: int) -> np.ndarray:
        u = self.rng.random(k)
        return np.searchsorted(self.cdf, u, side="right").astype(np.int64) + 1


@dataclass
class SampleStream:
    """One-pass sample access with an optional total cap."""

    sampler: Sampler
    limit: int | None = None
    consumed: int = 0

    @property
    def n(self) -> int:
        return self.sampler.n

    def remaining(self) -> float:
        return math.inf if self.limit is None else self.limit - self.consumed

    def next(self, k: int) -> np.ndarray:
        if k < 0:
            raise ValueError("k must be non-negative")
        if self.limit is not None and self.consumed + k > self.limit:
            raise StreamExhausted(
                f"requested {k} samples with {self.limit - self.consumed} left"
            )
        self.consumed += k
        return self.sampler.draw(k)


@dataclass
class PcondOracle:
    """Pairwise conditional sampling from a pmf.

    query(x, y) returns a draw from the pmf conditioned on {x, y}; when both
    masses are zero the conditional is undefined and a fair coin is used.
    queries counts every call.
    """

    pmf: np.ndarray
    rng: np.random.Generator
    queries: int = 0

    def __post_init__(self):
        self.pmf = np.asarray(self.pmf, dtype=np.float64)

    @property
    def n(self) -> int:
        return int(self.pmf.size)

    def query(self, x: int, y: int) -> int:
        out = self.query_many(x, y, 1)
        return int(out[0])

    def query_many(self, x: int, y: int, k: int) -> np.ndarray:
        """k independent conditional draws from {x, y}; returns elements."""
        if x == y:
            raise ValueError("conditioning pair must be two distinct elements")
        if not (1 <= x <= self.n and 1 <= y <= self.n):
            raise ValueError(f"pair ({x}, {y}) outside [1, {self.n}]")
        self.queries += k
        px = float(self.pmf[x - 1])
        py = float(self.pmf[y - 1])
        tot = px + py
        prob_y = 0.5 if tot == 0.0 else py / tot
        take_y = self.rng.random(k) < prob_y
        return np.where(take_y, y, x).astype(np.int64)
