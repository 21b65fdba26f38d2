"""Variance estimates and pointwise confidence intervals for the tail estimator.

Three interchangeable backends, all reported on the scale of the asymptotic
variance ``sigma_u^2`` of ``sqrt(n * nu_u) * (t_hat - t(u))``:

* ``unbiased``: plug-in from unbiased variance/covariance estimates of the
  two pair U-statistics (numerator and exceedance-pair fraction);
* ``jackknife``: delete-one over the exceedances;
* ``bootstrap``: resampling the full sample with replacement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .rng import RngStream
from .special import normal_quantile
from .ustat import (
    CurveAccumulators,
    InsufficientExceedancesError,
    PairSums,
    as_sample,
    kernel_matrix,
    pair_sums,
)

Kind = Literal["unbiased", "jackknife", "bootstrap"]
KINDS: tuple[str, ...] = ("unbiased", "jackknife", "bootstrap")

MIN_EXCEEDANCES = {"unbiased": 4, "jackknife": 3, "bootstrap": 2}
MAX_BOOTSTRAP_DROP = 0.5


class InsufficientSampleError(ValueError):
    pass


class UnstableBootstrapError(RuntimeError):
    def __init__(self, dropped: int, reps: int):
        self.dropped = dropped
        self.reps = reps
        super().__init__(f"{dropped} of {reps} bootstrap replicates had fewer than 2 exceedances")


@dataclass(frozen=True)
class VarianceMethod:
    kind: Kind = "jackknife"
    bootstrap_reps: int = 999
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown variance method {self.kind!r}; choose from {KINDS}")
        if self.bootstrap_reps < 1:
            raise ValueError("bootstrap_reps must be >= 1")


@dataclass(frozen=True)
class UStatMoments:
    zeta0: float
    zeta1: float
    zeta2: float
    c1sq: float
    c2sq: float


@dataclass(frozen=True)
class ConfidenceInterval:
    t_hat: float
    lo: float
    hi: float
    level: float
    sigma_hat: float
    method: VarianceMethod
    n: int
    m: int


def _falling(n: int, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= n - j
    return out


def _unbiased_from_sums(n: int, total1: float, total2: float, cross_rows: float, cross_sq: float) -> float:
    """Unbiased ``Cov(U1, U2)`` from ordered-pair totals and cross sums.

    ``total_l`` is ``sum_{i != j} h_l``, ``cross_rows`` is ``sum_i S1_i S2_i``
    with row sums ``S_i = sum_{j != i} h(X_i, X_j)``, and ``cross_sq`` is
    ``sum_{i != j} h1 h2``.
    """
    if n < 4:
        raise InsufficientSampleError(f"unbiased variance needs n >= 4, got {n}")
    u1 = total1 / (n * (n - 1))
    u2 = total2 / (n * (n - 1))
    return (4.0 * cross_rows - 2.0 * cross_sq) / _falling(n, 4) - (4.0 * n - 6.0) / ((n - 2.0) * (n - 3.0)) * u1 * u2


def _kernel_matrix_of(sample, kernel: Callable) -> np.ndarray:
    x = as_sample(sample).values
    h = np.asarray(kernel(x[:, None], x[None, :]), dtype=float)
    h = np.broadcast_to(h, (x.size, x.size)).copy()
    np.fill_diagonal(h, 0.0)
    return h


def ustat_cov_unbiased(sample, kernel1: Callable, kernel2: Callable) -> float:
    """Unbiased covariance of two degree-2 U-statistics on the same sample.

    ``kernel(x1, x2)`` must be symmetric and broadcast over arrays.
    """
    n = as_sample(sample).n
    if n < 4:
        raise InsufficientSampleError(f"unbiased variance needs n >= 4, got {n}")
    h1 = _kernel_matrix_of(sample, kernel1)
    h2 = h1 if kernel2 is kernel1 else _kernel_matrix_of(sample, kernel2)
    s1, s2 = h1.sum(axis=1), h2.sum(axis=1)
    return _unbiased_from_sums(n, s1.sum(), s2.sum(), float(s1 @ s2), float(np.sum(h1 * h2)))


def ustat_cov_unbiased_batch(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    """``ustat_cov_unbiased`` over a stack of kernel matrices ``(..., n, n)``.

    Diagonals are ignored. Used by Monte Carlo checks with many small samples.
    """
    h1 = np.array(h1, dtype=float)
    h2 = np.array(h2, dtype=float)
    n = h1.shape[-1]
    if n < 4:
        raise InsufficientSampleError(f"unbiased variance needs n >= 4, got {n}")
    eye = np.eye(n, dtype=bool)
    h1[..., eye] = 0.0
    h2[..., eye] = 0.0
    s1, s2 = h1.sum(axis=-1), h2.sum(axis=-1)
    u1 = s1.sum(axis=-1) / (n * (n - 1))
    u2 = s2.sum(axis=-1) / (n * (n - 1))
    cross_rows = np.sum(s1 * s2, axis=-1)
    cross_sq = np.sum(h1 * h2, axis=(-2, -1))
    return (4.0 * cross_rows - 2.0 * cross_sq) / _falling(n, 4) - (4.0 * n - 6.0) / ((n - 2.0) * (n - 3.0)) * u1 * u2


def ustat_var_unbiased(sample, kernel: Callable) -> float:
    """Minimum-variance unbiased estimate of ``Var(U_n)`` in O(n^2).

    May be negative for small samples; it is returned as is.
    """
    return ustat_cov_unbiased(sample, kernel, kernel)


def ustat_moments(sample, kernel: Callable) -> UStatMoments:
    """Unbiased estimates of ``zeta_0, zeta_1, zeta_2`` and the row sums behind them."""
    n = as_sample(sample).n
    if n < 4:
        raise InsufficientSampleError(f"need n >= 4, got {n}")
    h = _kernel_matrix_of(sample, kernel)
    s = h.sum(axis=1)
    total = s.sum()
    c1 = float(s @ s)
    c2 = float(np.sum(h * h))
    zeta2 = c2 / (n * (n - 1))
    zeta1 = (c1 - c2) / _falling(n, 3)
    zeta0 = (total * total - 4.0 * c1 + 2.0 * c2) / _falling(n, 4)
    return UStatMoments(zeta0=zeta0, zeta1=zeta1, zeta2=zeta2, c1sq=c1, c2sq=c2)


# threshold-specific backends; each works from the exceedance set alone


def plugin_components(n: int, ps: PairSums) -> tuple[float, float, float]:
    """Unbiased ``Var(U1)``, ``Var(U2)`` and ``Cov(U1, U2)`` at one threshold.

    Rows of non-exceedances are identically zero for both kernels, so the
    sums over the full sample reduce to sums over the ``m`` exceedances.
    For the indicator kernel every exceedance row sums to ``m - 1``.
    """
    m = ps.m
    total1 = 2.0 * ps.pair_sum
    total2 = m * (m - 1.0)
    var1 = _unbiased_from_sums(n, total1, total1, ps.row_sq, ps.sq_sum)
    var2 = _unbiased_from_sums(n, total2, total2, m * (m - 1.0) ** 2, total2)
    cov = _unbiased_from_sums(n, total1, total2, (m - 1.0) * total1, total1)
    return var1, var2, cov


def _plugin_sigma2(n: int, ps: PairSums) -> float:
    var1, var2, cov = plugin_components(n, ps)
    t = ps.t_hat
    u2 = ps.m * (ps.m - 1.0) / (n * (n - 1.0))
    return n / u2 * (var1 - 2.0 * t * cov + t * t * var2)


def _jackknife_direct(ps: PairSums) -> float:
    # leave-one-out estimates are (P - S_i) / C(m-1, 2), so their spread is
    # the spread of the row sums S_i
    m = ps.m
    spread = ps.row_sq - (2.0 * ps.pair_sum) ** 2 / m
    pairs = 0.5 * (m - 1.0) * (m - 2.0)
    return max(spread, 0.0) * (m - 1.0) / m / (pairs * pairs)


def _direct_to_sigma2(n: int, m: int, direct: float) -> float:
    return n * m * (m - 1.0) / (n * (n - 1.0)) * direct


def _require(m: int, kind: str, u: float | None = None) -> None:
    need = MIN_EXCEEDANCES[kind]
    if m < need:
        raise InsufficientExceedancesError(m, need, u)


def _stream(seed) -> RngStream:
    return seed if isinstance(seed, RngStream) else RngStream(int(seed))


def bootstrap_replicates(
    y: np.ndarray, n: int, reps: int, seed: int | RngStream, h: np.ndarray | None = None
) -> tuple[np.ndarray, int]:
    """Bootstrap estimates at a fixed threshold, and the number dropped.

    A with-replacement resample of all ``n`` points puts ``M ~ Bin(n, m/n)``
    draws on the ``m`` exceedances, spread uniformly; only those counts
    matter because the estimate depends on exceedances alone. Replicates
    with ``M < 2`` are dropped.
    """
    m = y.size
    if h is None:
        h = kernel_matrix(y)
    gen = _stream(seed).generator()
    total = gen.binomial(n, m / n, size=reps)
    counts = gen.multinomial(total, np.full(m, 1.0 / m)).astype(float)
    num = np.einsum("ri,ri->r", counts @ h, counts)
    ok = total >= 2
    t_star = num[ok] / (total[ok] * (total[ok] - 1.0))
    return t_star, int(reps - ok.sum())


def _bootstrap_direct(y: np.ndarray, n: int, reps: int, seed, h=None) -> float:
    t_star, dropped = bootstrap_replicates(y, n, reps, seed, h)
    if dropped > MAX_BOOTSTRAP_DROP * reps:
        raise UnstableBootstrapError(dropped, reps)
    if t_star.size < 2:
        return 0.0
    return float(np.var(t_star, ddof=1))


def jackknife_variance(sample, u: float) -> float:
    """Delete-one jackknife variance of ``t_hat(u)`` on its own scale."""
    y = as_sample(sample).exceedances(u)
    _require(y.size, "jackknife", u)
    return _jackknife_direct(pair_sums(y))


def bootstrap_variance(sample, u: float, reps: int = 999, seed: int | RngStream = 0) -> float:
    """Bootstrap variance of ``t_hat(u)`` on its own scale."""
    s = as_sample(sample)
    y = s.exceedances(u)
    _require(y.size, "bootstrap", u)
    if reps < 1:
        raise ValueError("reps must be >= 1")
    return _bootstrap_direct(y, s.n, reps, seed)


def sigma_hat_plugin(sample, u: float) -> float:
    """Plug-in estimate of ``sigma_u^2`` (floored at 0)."""
    s = as_sample(sample)
    y = s.exceedances(u)
    _require(y.size, "unbiased", u)
    return max(_plugin_sigma2(s.n, pair_sums(y)), 0.0)


def sigma_hat_jackknife(sample, u: float) -> float:
    s = as_sample(sample)
    y = s.exceedances(u)
    return _direct_to_sigma2(s.n, y.size, jackknife_variance(s, u))


def sigma_hat_bootstrap(sample, u: float, reps: int = 999, seed: int | RngStream = 0) -> float:
    s = as_sample(sample)
    y = s.exceedances(u)
    return _direct_to_sigma2(s.n, y.size, bootstrap_variance(s, u, reps, seed))


def sigma2_at(
    n: int,
    y: np.ndarray,
    method: VarianceMethod,
    ps: PairSums | None = None,
    h: np.ndarray | None = None,
    rng: RngStream | None = None,
) -> float:
    """``sigma_u^2`` from the sorted exceedances ``y`` of an ``n``-sample."""
    _require(y.size, method.kind)
    if method.kind == "bootstrap":
        seed = rng if rng is not None else RngStream(method.seed)
        return _direct_to_sigma2(n, y.size, _bootstrap_direct(y, n, method.bootstrap_reps, seed, h))
    if ps is None:
        ps = pair_sums(y)
    if method.kind == "unbiased":
        return max(_plugin_sigma2(n, ps), 0.0)
    return _direct_to_sigma2(n, y.size, _jackknife_direct(ps))


def interval(t_hat: float, sigma2: float, n: int, m: int, level: float) -> tuple[float, float, float]:
    """Clipped normal interval; returns ``(lo, hi, sigma_hat)``."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {level}")
    sigma = math.sqrt(max(sigma2, 0.0))
    z = normal_quantile(0.5 + 0.5 * level)
    # sqrt(n * U2) with U2 = m(m-1) / (n(n-1))
    half = z * sigma / math.sqrt(m * (m - 1.0) / (n - 1.0))
    return max(t_hat - half, 0.0), min(t_hat + half, 1.0), sigma


def confidence_interval(sample, u: float, level: float = 0.95, method: VarianceMethod | None = None) -> ConfidenceInterval:
    method = method or VarianceMethod()
    s = as_sample(sample)
    y = s.exceedances(u)
    _require(y.size, method.kind, u)
    ps = pair_sums(y)
    sigma2 = sigma2_at(s.n, y, method, ps=ps)
    lo, hi, sigma = interval(ps.t_hat, sigma2, s.n, y.size, level)
    return ConfidenceInterval(
        t_hat=ps.t_hat, lo=lo, hi=hi, level=level, sigma_hat=sigma, method=method, n=s.n, m=int(y.size)
    )


def curve_sigma2(acc: CurveAccumulators, method: VarianceMethod, indices=None, workers: int = 1) -> np.ndarray:
    """``sigma_u^2`` at every order-statistic threshold (NaN where undefined).

    Plug-in and jackknife reuse the incremental pair sums, so the whole curve
    costs O(n^2). The bootstrap draws a separate stream per threshold, which
    keeps results independent of ``workers``.
    """
    n = acc.n
    idx = np.arange(n - 1) if indices is None else np.asarray(indices)
    out = np.full(idx.size, np.nan)
    need = MIN_EXCEEDANCES[method.kind]
    base = RngStream(method.seed)

    def boot(i: int) -> float:
        y = acc.x[i:]
        try:
            direct = _bootstrap_direct(y, n, method.bootstrap_reps, base.child(i))
        except UnstableBootstrapError:
            return math.nan
        return _direct_to_sigma2(n, y.size, direct)

    todo = [(pos, int(i)) for pos, i in enumerate(idx) if acc.m[i] >= need]
    if method.kind == "bootstrap":
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                vals = list(pool.map(boot, [i for _, i in todo]))
        else:
            vals = [boot(i) for _, i in todo]
        for (pos, _), v in zip(todo, vals):
            out[pos] = v
        return out
    for pos, i in todo:
        m = int(acc.m[i])
        ps = PairSums(m=m, pair_sum=acc.pair_sum[i], row_sq=acc.row_sq[i], sq_sum=acc.sq_sum[i])
        if method.kind == "unbiased":
            out[pos] = max(_plugin_sigma2(n, ps), 0.0)
        else:
            out[pos] = _direct_to_sigma2(n, m, _jackknife_direct(ps))
    return out
