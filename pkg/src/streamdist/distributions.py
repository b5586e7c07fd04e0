"""Discrete distributions over [n] = {1, ..., n} and exact distance computations.

Everything in this module is exact (no sampling): total variation and l2
norms, interval flattening/reduction, the nearest-monotone linear program,
and the deterministic instance generators used by the testers and the CLI.

Domain elements are 1-based to match interval notation [lo, hi]; pmf arrays
are plain 0-based numpy vectors with pmf[i] = mass of element i+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .partition import IntervalPartition, birge_partition

MASS_TOL = 1e-9


def _as_pmf(p, name: str = "pmf") -> np.ndarray:
    a = np.asarray(p, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise ValueError(f"{name} must be a nonempty 1-D array")
    if np.any(a < -MASS_TOL):
        raise ValueError(f"{name} has negative mass")
    total = float(a.sum())
    if abs(total - 1.0) > MASS_TOL * max(1, a.size):
        raise ValueError(f"{name} must sum to 1 (got {a.sum():.12f})")
    return np.clip(a, 0.0, None) / total


@dataclass(frozen=True)
class ExplicitDistribution:
    """A fully materialized pmf over [n]."""

    pmf: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pmf", _as_pmf(self.pmf))

    @property
    def n(self) -> int:
        return int(self.pmf.size)

    def is_monotone(self, tol: float = MASS_TOL) -> bool:
        """True if the pmf is non-increasing (up to tol)."""
        return bool(np.all(np.diff(self.pmf) <= tol))

    def mass(self, lo: int, hi: int) -> float:
        """Total mass of the inclusive 1-based interval [lo, hi]."""
        return float(self.pmf[lo - 1 : hi].sum())


@dataclass(frozen=True)
class ReducedDistribution:
    """Interval masses of a distribution under a partition: one weight per interval."""

    partition: IntervalPartition
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.size != self.partition.ell:
            raise ValueError("one weight per interval required")
        object.__setattr__(self, "weights", w)

    @property
    def ell(self) -> int:
        return self.partition.ell


@dataclass(frozen=True)
class FlattenedView:
    """A distribution averaged within each interval of a partition.

    Stored as interval weights; the pmf value on interval I_j is
    weights[j] / |I_j|.
    """

    partition: IntervalPartition
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.size != self.partition.ell:
            raise ValueError("one weight per interval required")
        object.__setattr__(self, "weights", w)

    def level_values(self) -> np.ndarray:
        """Per-interval pmf value (weight / size)."""
        return self.weights / self.partition.sizes

    def as_pmf(self) -> np.ndarray:
        """Materialize the piecewise-constant pmf over [n]."""
        return np.repeat(self.level_values(), self.partition.sizes)

    def as_distribution(self) -> ExplicitDistribution:
        w = self.weights
        s = float(w.sum())
        if abs(s - 1.0) > MASS_TOL:
            w = w / s
        return ExplicitDistribution(np.repeat(w / self.partition.sizes, self.partition.sizes))


def tv_distance(p, q) -> float:
    """Total variation distance (1/2) * sum |p_i - q_i| between equal-length pmfs."""
    a = np.asarray(p, dtype=np.float64)
    b = np.asarray(q, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("distributions must share a domain")
    return 0.5 * float(np.abs(a - b).sum())


def l2_norm_sq(p) -> float:
    """Squared l2 norm sum p_i^2 (the self-collision probability)."""
    a = np.asarray(p, dtype=np.float64)
    return float(np.dot(a, a))


def reduce(p, partition: IntervalPartition) -> ReducedDistribution:
    """Interval masses of p under the partition (a distribution over [ell])."""
    a = np.asarray(p, dtype=np.float64)
    if a.size != partition.n:
        raise ValueError("partition does not cover the domain of p")
    bounds = np.concatenate(([0], partition.his))
    weights = np.add.reduceat(a, bounds[:-1])
    return ReducedDistribution(partition, weights)


def flatten(p, partition: IntervalPartition) -> FlattenedView:
    """Average p within each interval of the partition."""
    return FlattenedView(partition, reduce(p, partition).weights)


def flattening_distance(p, partition: IntervalPartition) -> float:
    """Exact tv distance between p and its flattening over the partition."""
    a = np.asarray(p, dtype=np.float64)
    return tv_distance(a, flatten(a, partition).as_pmf())


def flattened_distance_certificate(p, alpha: float) -> float:
    """tv distance from p to its own geometric-interval flattening at scale alpha.

    A value above 2*eps + alpha certifies that p is eps-far from every
    monotone non-increasing distribution (contrapositive of the fact that an
    eps-close-to-monotone distribution is (2*eps + alpha)-close to its
    flattening).
    """
    a = np.asarray(p, dtype=np.float64)
    return flattening_distance(a, birge_partition(a.size, alpha))


def _monotone_lp(values: np.ndarray, sizes: np.ndarray) -> float:
    """Exact min of sum_j sizes_j * |values_j - c_j| over non-increasing c >= 0
    with sum_j sizes_j * c_j = 1.

    Variables x = [c (ell), t (ell)]; objective sum sizes_j * t_j.
    """
    ell = values.size
    c_obj = np.concatenate([np.zeros(ell), sizes.astype(np.float64)])

    rows = []
    rhs = []
    eye = np.eye(ell)
    zero = np.zeros((ell, ell))
    # |values - c| <= t, split into two one-sided constraints
    rows.append(np.hstack([-eye, -eye]))
    rhs.append(-values)
    rows.append(np.hstack([eye, -eye]))
    rhs.append(values)
    if ell > 1:
        mono = np.zeros((ell - 1, 2 * ell))
        idx = np.arange(ell - 1)
        mono[idx, idx + 1] = 1.0
        mono[idx, idx] = -1.0
        rows.append(mono)
        rhs.append(np.zeros(ell - 1))
    A_ub = np.vstack(rows)
    b_ub = np.concatenate(rhs)
    A_eq = np.concatenate([sizes.astype(np.float64), np.zeros(ell)])[None, :]
    del eye, zero

    res = linprog(
        c_obj,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * (2 * ell),
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"nearest-monotone LP failed: {res.message}")
    return 0.5 * float(res.fun)


def distance_to_monotone(p) -> float:
    """Exact tv distance from p to the nearest non-increasing distribution (LP)."""
    a = _as_pmf(p)
    return _monotone_lp(a, np.ones(a.size))


def distance_to_monotone_flattened(view: FlattenedView) -> float:
    """Exact tv distance from a piecewise-constant pmf to the nearest
    non-increasing distribution.

    An optimal monotone fit of a piecewise-constant pmf can be taken constant
    on the same blocks (block-averaging any feasible fit preserves
    monotonicity and the simplex constraint and never increases the L1
    error), so the LP needs only one variable per block.
    """
    sizes = view.partition.sizes.astype(np.float64)
    w = view.weights
    total = float(w.sum())
    if total <= 0:
        raise ValueError("flattened view carries no mass")
    values = (w / total) / sizes
    return _monotone_lp(values, sizes)


def gen_monotone(kind: str, n: int, **params) -> ExplicitDistribution:
    """Deterministic monotone non-increasing instances.

    kind="geometric": pmf[i] proportional to ratio**i, param ratio in (0, 1].
    kind="power":     pmf[i] proportional to (i+1)**(-alpha), param alpha >= 0.
    kind="step":      `levels` equal blocks with values decaying by `decay`.
    """
    if n < 1:
        raise ValueError("n must be positive")
    i = np.arange(n, dtype=np.float64)
    if kind == "geometric":
        ratio = float(params.get("ratio", 0.99))
        if not 0 < ratio <= 1:
            raise ValueError("ratio must be in (0, 1]")
        # work in log space so steep ratios at large n stay finite
        logw = i * np.log(ratio)
        w = np.exp(logw - logw.max())
    elif kind == "power":
        alpha = float(params.get("alpha", 1.0))
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        w = (i + 1.0) ** (-alpha)
    elif kind == "step":
        levels = int(params.get("levels", 4))
        decay = float(params.get("decay", 2.0))
        if levels < 1 or decay < 1:
            raise ValueError("need levels >= 1 and decay >= 1")
        block = -(-n // levels)
        w = decay ** (-(i // block))
    else:
        raise ValueError(f"unknown monotone generator {kind!r}")
    return ExplicitDistribution(w / w.sum())


def gen_uniform(n: int) -> ExplicitDistribution:
    return ExplicitDistribution(np.full(n, 1.0 / n))


def gen_point_mass(n: int, at: int = 1) -> ExplicitDistribution:
    pmf = np.zeros(n)
    pmf[at - 1] = 1.0
    return ExplicitDistribution(pmf)


def gen_half_uniform(n: int) -> ExplicitDistribution:
    """Uniform on the first half of [n]; tv distance 1/2 from uniform on [n]."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    pmf = np.zeros(n)
    pmf[: n // 2] = 2.0 / n
    return ExplicitDistribution(pmf)


def gen_no_instance(half_n: int, eps: float, rng: np.random.Generator) -> ExplicitDistribution:
    """Paired sawtooth far from monotone: support 2*half_n, element pair
    {2i-1, 2i} carries masses (1+eps)/(2*half_n) and (1-eps)/(2*half_n) in an
    order chosen by an independent fair sign.

    At eps=0 this is uniform; for eps>0 every sign vector lands at exact tv
    distance about eps/2 from the nearest monotone distribution.
    """
    if half_n < 1:
        raise ValueError("half_n must be positive")
    if not 0 <= eps < 1:
        raise ValueError("eps must be in [0, 1)")
    hi = (1.0 + eps) / (2 * half_n)
    lo = (1.0 - eps) / (2 * half_n)
    signs = rng.random(half_n) < 0.5
    pmf = np.empty(2 * half_n)
    pmf[0::2] = np.where(signs, hi, lo)
    pmf[1::2] = np.where(signs, lo, hi)
    return ExplicitDistribution(pmf)
