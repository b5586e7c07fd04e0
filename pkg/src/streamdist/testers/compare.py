"""Weight-ratio estimation between two points via pair-conditional queries.

compare(x, y) repeatedly samples the distribution conditioned on {x, y} and
turns the fraction of y-returns into an estimate of D(y)/D(x). When the true
ratio lies within [1/K, K], the returned Ratio is a (1 +/- eta) multiplicative
estimate with probability >= 1 - delta; ratios far outside the band surface
as High or Low flags instead.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .config import TesterConfig


class CompareKind(enum.Enum):
    RATIO = "ratio"
    HIGH = "high"
    LOW = "low"


@dataclass(frozen=True)
class CompareResult:
    kind: CompareKind
    ratio: float | None = None

    def __post_init__(self):
        if self.kind is CompareKind.RATIO and not (self.ratio and self.ratio > 0):
            raise ValueError("ratio results must carry a positive value")

    @property
    def is_low(self) -> bool:
        return self.kind is CompareKind.LOW

    @property
    def is_high(self) -> bool:
        return self.kind is CompareKind.HIGH


def compare_queries(big_k: float, eta: float, delta: float, cfg: TesterConfig) -> int:
    return max(1, math.ceil(cfg.c("c_cmp") * big_k * math.log(1.0 / delta) / eta ** 2))


def compare(oracle, x: int, y: int, eta: float, big_k: float, delta: float,
            cfg: TesterConfig) -> CompareResult:
    """Estimate D(y)/D(x) from pair-conditional draws on {x, y}.

    Decision zones on the y-fraction p: above K/(K+1)+margin -> High, below
    1/(K+1)-margin -> Low, otherwise Ratio(p/(1-p)), with margin =
    eta/(2(K+1)) separating the zones.
    """
    if x == y:
        raise ValueError("compare needs two distinct points")
    if not 0 < eta <= 1:
        raise ValueError("eta must be in (0, 1]")
    if big_k < 1:
        raise ValueError("K must be at least 1")
    if not 0 < delta <= 0.5:
        raise ValueError("delta must be in (0, 1/2]")
    q = compare_queries(big_k, eta, delta, cfg)
    draws = oracle.query_many(x, y, q)
    p_hat = float((draws == y).mean())
    margin = eta / (2.0 * (big_k + 1.0))
    if p_hat >= big_k / (big_k + 1.0) + margin:
        return CompareResult(CompareKind.HIGH)
    if p_hat <= 1.0 / (big_k + 1.0) - margin:
        return CompareResult(CompareKind.LOW)
    return CompareResult(CompareKind.RATIO, p_hat / (1.0 - p_hat))
