"""U-statistic estimator of the tail functional.

For a threshold ``u`` the estimator averages ``|x_i - x_j| / (x_i + x_j)``
over all pairs of observations that are both ``>= u``. Evaluated at the
order statistics it can be updated one point at a time, which gives the
whole curve in O(n^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# fall back to direct pair sums when the ratio recursion drifts this far
RECURSION_DRIFT_TOL = 1e-8
_CHUNK = 2048


class InsufficientExceedancesError(ValueError):
    def __init__(self, m: int, needed: int, u: float | None = None):
        self.m = m
        self.needed = needed
        self.u = u
        where = "" if u is None else f" at u={u:g}"
        super().__init__(f"{m} exceedance(s){where}; need at least {needed}")


class SortedSample:
    """Ascending, strictly positive, finite observations (n >= 2)."""

    __slots__ = ("values",)

    def __init__(self, values):
        x = np.array(values, dtype=float).ravel()
        if x.size < 2:
            raise ValueError(f"need at least 2 observations, got {x.size}")
        if not np.all(np.isfinite(x)):
            raise ValueError("observations must be finite")
        if np.any(x <= 0.0):
            raise ValueError("observations must be strictly positive")
        x = np.sort(x, kind="stable")
        x.flags.writeable = False
        self.values = x

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __repr__(self) -> str:
        return f"SortedSample(n={self.n}, min={self.values[0]:g}, max={self.values[-1]:g})"

    def scaled(self, c: float) -> SortedSample:
        return SortedSample(self.values * c)

    def exceedances(self, u: float) -> np.ndarray:
        return self.values[np.searchsorted(self.values, u, side="left") :]


def as_sample(sample) -> SortedSample:
    return sample if isinstance(sample, SortedSample) else SortedSample(sample)


@dataclass(frozen=True)
class PairStats:
    u: float
    u1: float
    u2: float
    m: int


@dataclass(frozen=True)
class TailEstimate:
    u: float
    m: int
    t_hat: float


def kernel_h1(x1, x2, u: float = 0.0):
    """``|x1 - x2| / (x1 + x2)`` when both points are ``>= u``, else 0."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x1 <= 0) or np.any(x2 <= 0):
        raise ValueError("kernel arguments must be positive")
    out = np.where(np.minimum(x1, x2) >= u, np.abs(x1 - x2) / (x1 + x2), 0.0)
    return float(out) if out.ndim == 0 else out


def kernel_h2(x1, x2, u: float = 0.0):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    out = (np.minimum(x1, x2) >= u).astype(float)
    return float(out) if out.ndim == 0 else out


def exceedance_count(sample, u: float) -> int:
    x = as_sample(sample).values
    return int(x.size - np.searchsorted(x, u, side="left"))


def brute_force_estimate(sample, u: float) -> tuple[PairStats, TailEstimate]:
    """Reference estimator: an explicit loop over all ``n(n-1)/2`` pairs."""
    x = as_sample(sample).values.tolist()
    n = len(x)
    m = sum(1 for v in x if v >= u)
    if m < 2:
        raise InsufficientExceedancesError(m, 2, u)
    num = []
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            a, b = x[i], x[j]
            if min(a, b) >= u:
                num.append(abs(a - b) / (a + b))
                count += 1
    npairs = n * (n - 1) / 2.0
    u1 = math.fsum(num) / npairs
    u2 = count / npairs
    return PairStats(u=u, u1=u1, u2=u2, m=m), TailEstimate(u=u, m=m, t_hat=u1 / u2)


def kernel_matrix(y: np.ndarray) -> np.ndarray:
    """Matrix of ``|y_i - y_j| / (y_i + y_j)``; zero diagonal."""
    y = np.asarray(y, dtype=float)
    return np.abs(y[:, None] - y[None, :]) / (y[:, None] + y[None, :])


@dataclass(frozen=True)
class PairSums:
    """Sufficient pair sums of the kernel over one exceedance set.

    ``pair_sum`` is the sum over unordered pairs, ``row_sq`` the sum of
    squared row sums and ``sq_sum`` the sum of squared kernel values over
    ordered pairs ``i != j``.
    """

    m: int
    pair_sum: float
    row_sq: float
    sq_sum: float

    @property
    def t_hat(self) -> float:
        return self.pair_sum / (0.5 * self.m * (self.m - 1))


def pair_sums(y: np.ndarray) -> PairSums:
    """Pair sums over all of ``y`` in O(m^2) time and O(chunk * m) memory."""
    y = np.asarray(y, dtype=float)
    m = y.size
    total = 0.0
    row_sq = 0.0
    sq = 0.0
    for start in range(0, m, _CHUNK):
        block = y[start : start + _CHUNK]
        h = np.abs(block[:, None] - y[None, :]) / (block[:, None] + y[None, :])
        rows = h.sum(axis=1)
        total += rows.sum()
        row_sq += rows @ rows
        sq += np.einsum("ij,ij->", h, h)
    return PairSums(m=m, pair_sum=0.5 * total, row_sq=row_sq, sq_sum=sq)


def tail_estimate(sample, u: float) -> TailEstimate:
    s = as_sample(sample)
    y = s.exceedances(u)
    if y.size < 2:
        raise InsufficientExceedancesError(y.size, 2, u)
    return TailEstimate(u=float(u), m=int(y.size), t_hat=pair_sums(y).t_hat)


@dataclass(frozen=True)
class CurveAccumulators:
    """Pair sums of the top ``n - i`` order statistics for every ``i``.

    Arrays are indexed by the 0-based position ``i`` of the threshold
    ``X_(i+1)``; the exceedance set is ``x[i:]`` (ties not merged).
    """

    x: np.ndarray
    m: np.ndarray
    pair_sum: np.ndarray
    row_sq: np.ndarray
    sq_sum: np.ndarray
    t_hat: np.ndarray

    @property
    def n(self) -> int:
        return self.x.size


def curve_accumulators(sample) -> CurveAccumulators:
    """Run the one-point-at-a-time update from the top order statistic down.

    The estimate is propagated with the ratio recursion
    ``t(k-1) = (n-k)/(n-k+2) * (t(k) + R_k / C(n-k+1, 2))`` where ``R_k`` is
    the kernel sum between ``X_(k-1)`` and the points above it. Pair sums are
    accumulated alongside and replace the recursion if the two disagree.
    """
    x = as_sample(sample).values
    n = x.size
    m = n - np.arange(n)
    pair = np.zeros(n)
    row_sq = np.zeros(n)
    sq = np.zeros(n)
    t = np.zeros(n)
    rows = np.zeros(n)
    p_acc = 0.0
    sq_acc = 0.0
    t_rec = 0.0
    for i in range(n - 2, -1, -1):
        a = x[i]
        rest = x[i + 1 :]
        h = (rest - a) / (rest + a)
        r = float(h.sum())
        rows[i + 1 :] += h
        rows[i] = r
        p_acc += r
        sq_acc += 2.0 * float(h @ h)
        tail_rows = rows[i:]
        pair[i] = p_acc
        row_sq[i] = float(tail_rows @ tail_rows)
        sq[i] = sq_acc
        mm = n - i
        # mm - 1 points above X_(i+1): binom(mm - 1, 2) pairs before adding it
        prev_pairs = 0.5 * (mm - 1) * (mm - 2)
        t_rec = (t_rec * prev_pairs + r) / (0.5 * mm * (mm - 1))
        t[i] = t_rec
    direct = pair[: n - 1] / (0.5 * m[: n - 1] * (m[: n - 1] - 1))
    scale = np.maximum(np.abs(direct), np.finfo(float).tiny)
    if np.any(np.abs(t[: n - 1] - direct) > RECURSION_DRIFT_TOL * scale):
        t[: n - 1] = direct
    t[n - 1] = np.nan
    return CurveAccumulators(x=x, m=m, pair_sum=pair, row_sq=row_sq, sq_sum=sq, t_hat=t)


def tie_block_start(x: np.ndarray) -> np.ndarray:
    """Index of the first order statistic equal to each ``x[i]``."""
    return np.searchsorted(x, x, side="left")


def tail_curve(sample, k_max: int | None = None) -> list[TailEstimate]:
    """Estimates at thresholds ``u = X_(k)`` for ``k = 1..k_max``.

    With ties, ``u = X_(k)`` counts every observation equal to it, so the
    point reports the estimate of the first order statistic in the block.
    """
    s = as_sample(sample)
    n = s.n
    if k_max is None:
        k_max = n - 1
    if not 1 <= k_max <= n - 1:
        raise IndexError(f"k_max must lie in [1, {n - 1}], got {k_max}")
    acc = curve_accumulators(s)
    first = tie_block_start(acc.x)
    out = []
    for i in range(k_max):
        j = first[i]
        out.append(TailEstimate(u=float(acc.x[i]), m=int(acc.m[j]), t_hat=float(acc.t_hat[j])))
    return out
