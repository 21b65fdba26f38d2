"""Tail curves: the estimate over a grid of thresholds with pointwise intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tail_math import OutOfBracketError, invert_tail_value
from .ustat import as_sample, curve_accumulators, tie_block_start
from .variance import VarianceMethod, curve_sigma2, interval

DEFAULT_QUANTILE = 0.995
DEFAULT_LEVEL = 0.95
# the jackknife is preferred for small and moderate samples, the plug-in above
JACKKNIFE_MAX_N = 2000


@dataclass(frozen=True)
class TailCurve:
    u: np.ndarray
    m: np.ndarray
    t_hat: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    alpha_hat: np.ndarray
    n: int
    level: float
    method: VarianceMethod | None

    def __len__(self) -> int:
        return self.u.size

    def rows(self):
        for i in range(self.u.size):
            yield (
                float(self.u[i]),
                int(self.m[i]),
                float(self.t_hat[i]),
                float(self.lo[i]),
                float(self.hi[i]),
                float(self.alpha_hat[i]),
            )


def default_method(n: int, seed: int = 0, bootstrap_reps: int = 999) -> VarianceMethod:
    kind = "jackknife" if n < JACKKNIFE_MAX_N else "unbiased"
    return VarianceMethod(kind=kind, seed=seed, bootstrap_reps=bootstrap_reps)


def implied_alpha(t: float) -> float:
    """Pareto shape matching ``t``; ``inf`` for 0 and NaN outside the bracket."""
    if t == 0.0:
        return math.inf
    try:
        return invert_tail_value(t)
    except OutOfBracketError:
        return math.nan


def threshold_indices(x: np.ndarray, quantile: float = DEFAULT_QUANTILE) -> np.ndarray:
    """Order-statistic positions used as thresholds.

    One position per distinct value (the first of a tie block), at most the
    sample ``quantile``, and with at least two observations at or above it.
    """
    if not 0.0 < quantile <= 1.0:
        raise ValueError(f"quantile must lie in (0, 1], got {quantile}")
    n = x.size
    cap = np.quantile(x, quantile)
    first = tie_block_start(x)
    idx = np.unique(first[(x <= cap)])
    return idx[(n - idx) >= 2]


def build_curve(
    sample,
    level: float = DEFAULT_LEVEL,
    method: VarianceMethod | None = None,
    quantile: float = DEFAULT_QUANTILE,
    with_ci: bool = True,
    with_alpha: bool = True,
    workers: int = 1,
) -> TailCurve:
    s = as_sample(sample)
    if method is None:
        method = default_method(s.n)
    acc = curve_accumulators(s)
    idx = threshold_indices(acc.x, quantile)
    t = acc.t_hat[idx]
    m = acc.m[idx]
    lo = np.full(idx.size, np.nan)
    hi = np.full(idx.size, np.nan)
    if with_ci:
        sig2 = curve_sigma2(acc, method, idx, workers=workers)
        for j in range(idx.size):
            if np.isfinite(sig2[j]):
                lo[j], hi[j], _ = interval(float(t[j]), float(sig2[j]), s.n, int(m[j]), level)
    if with_alpha:
        alpha = np.array([implied_alpha(float(v)) for v in t])
    else:
        alpha = np.full(idx.size, np.nan)
    return TailCurve(
        u=acc.x[idx].copy(),
        m=m.copy(),
        t_hat=t.copy(),
        lo=lo,
        hi=hi,
        alpha_hat=alpha,
        n=s.n,
        level=level,
        method=method if with_ci else None,
    )
