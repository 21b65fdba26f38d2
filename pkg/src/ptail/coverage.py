"""Monte Carlo coverage of the pointwise confidence intervals.

Replicate ``r`` draws its sample from the stream ``(seed, r)`` and its
bootstrap resamples from children of that stream, so a report depends only
on the configuration and never on how replicates are spread over workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .curve import TailCurve, build_curve
from .distributions import FIGURE2_PRESETS, Distribution, ParetoI
from .rng import RngStream
from .tail_math import pareto_tail_value, theoretical_tail_value
from .ustat import kernel_matrix, pair_sums
from .variance import (
    KINDS,
    MIN_EXCEEDANCES,
    UnstableBootstrapError,
    VarianceMethod,
    interval,
    sigma2_at,
)

DROP_FLAG_FRACTION = 0.10


class DegenerateThresholdError(ValueError):
    pass


def required_n(dist: Distribution, u: float, n_eff: float) -> int:
    """Total sample size with ``n * P(min(X1, X2) >= u) = n_eff`` (at least 4)."""
    nu = dist.min_survival(u)
    if not nu > 0.0:
        raise DegenerateThresholdError(f"P(min >= {u}) is zero for {dist}")
    return max(4, int(math.floor(n_eff / nu + 0.5)))


def true_tail_value(dist: Distribution, u: float) -> float:
    if isinstance(dist, ParetoI):
        return pareto_tail_value(dist.alpha)
    return theoretical_tail_value(dist, u)


@dataclass(frozen=True)
class CoverageConfig:
    dist: Distribution
    u: float
    n_eff: float
    level: float = 0.95
    reps: int = 10_000
    methods: tuple[str, ...] = KINDS
    bootstrap_reps: int = 999
    seed: int = 0

    def __post_init__(self):
        if self.reps < 100:
            raise ValueError(f"reps must be >= 100, got {self.reps}")
        if not 0.0 < self.level < 1.0:
            raise ValueError(f"level must lie in (0, 1), got {self.level}")
        bad = [m for m in self.methods if m not in KINDS]
        if bad or not self.methods:
            raise ValueError(f"unknown or empty methods {bad or list(self.methods)}; choose from {KINDS}")
        if self.bootstrap_reps < 1:
            raise ValueError("bootstrap_reps must be >= 1")
        if self.n < 4:
            raise ValueError("implied sample size must be >= 4")

    @property
    def nu(self) -> float:
        return self.dist.min_survival(self.u)

    @property
    def n(self) -> int:
        return required_n(self.dist, self.u, self.n_eff)

    def variance_methods(self) -> list[VarianceMethod]:
        return [VarianceMethod(kind=k, bootstrap_reps=self.bootstrap_reps, seed=self.seed) for k in self.methods]


@dataclass(frozen=True)
class MethodCoverage:
    method: str
    evaluated: int
    covered: int
    dropped: int
    coverage: float
    se: float
    mean_width: float


@dataclass(frozen=True)
class CoverageReport:
    dist: str
    u: float
    n_eff: float
    n: int
    nu: float
    level: float
    reps: int
    bootstrap_reps: int
    seed: int
    true_value: float
    methods: list[MethodCoverage] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return any(mc.dropped > DROP_FLAG_FRACTION * self.reps for mc in self.methods)

    def coverage(self, method: str) -> float:
        for mc in self.methods:
            if mc.method == method:
                return mc.coverage
        raise KeyError(method)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["flagged"] = self.flagged
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _one_replicate(cfg: CoverageConfig, n: int, truth: float, r: int, methods) -> np.ndarray:
    """Row per method: (evaluated, covered, width)."""
    stream = RngStream(cfg.seed, r)
    sample = cfg.dist.sample(n, stream.child(0))
    y = sample.exceedances(cfg.u)
    m = y.size
    out = np.zeros((len(methods), 3))
    ps = pair_sums(y) if m >= 2 else None
    h = None
    for j, method in enumerate(methods):
        if m < MIN_EXCEEDANCES[method.kind]:
            continue
        if method.kind == "bootstrap" and h is None:
            h = kernel_matrix(y)
        try:
            sigma2 = sigma2_at(n, y, method, ps=ps, h=h, rng=stream.child(1 + j))
        except UnstableBootstrapError:
            continue
        lo, hi, _ = interval(ps.t_hat, sigma2, n, m, cfg.level)
        out[j] = (1.0, float(lo <= truth <= hi), hi - lo)
    return out


def _run_block(cfg: CoverageConfig, n: int, truth: float, start: int, stop: int) -> np.ndarray:
    methods = cfg.variance_methods()
    return np.stack([_one_replicate(cfg, n, truth, r, methods) for r in range(start, stop)])


def run_coverage(cfg: CoverageConfig, workers: int = 1, truth: float | None = None) -> CoverageReport:
    n = cfg.n
    if truth is None:
        truth = true_tail_value(cfg.dist, cfg.u)
    if workers <= 1:
        results = _run_block(cfg, n, truth, 0, cfg.reps)
    else:
        bounds = np.linspace(0, cfg.reps, workers * 4 + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_block, cfg, n, truth, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a
            ]
            results = np.concatenate([f.result() for f in futures])
    per_method = []
    for j, kind in enumerate(cfg.methods):
        evaluated = int(results[:, j, 0].sum())
        covered = int(results[:, j, 1].sum())
        p = covered / evaluated if evaluated else math.nan
        se = math.sqrt(p * (1.0 - p) / evaluated) * 100.0 if evaluated else math.nan
        # fixed-order sum keeps the width identical for any worker count
        width = float(math.fsum(results[:, j, 2])) / evaluated if evaluated else math.nan
        per_method.append(
            MethodCoverage(
                method=kind,
                evaluated=evaluated,
                covered=covered,
                dropped=cfg.reps - evaluated,
                coverage=100.0 * p,
                se=se,
                mean_width=width,
            )
        )
    return CoverageReport(
        dist=str(cfg.dist),
        u=cfg.u,
        n_eff=cfg.n_eff,
        n=n,
        nu=cfg.nu,
        level=cfg.level,
        reps=cfg.reps,
        bootstrap_reps=cfg.bootstrap_reps,
        seed=cfg.seed,
        true_value=truth,
        methods=per_method,
    )


_METHOD_HEADERS = {"unbiased": "plug-in", "jackknife": "jackknife", "bootstrap": "bootstrap"}


def format_table(reports: list[CoverageReport], label: str = "n_eff", values=None) -> str:
    """Aligned text table: one row per report, one coverage column per method."""
    if not reports:
        return ""
    kinds = [mc.method for mc in reports[0].methods]
    values = values if values is not None else [getattr(r, label) for r in reports]
    head = [label] + [_METHOD_HEADERS[k] for k in kinds]
    rows = []
    for v, rep in zip(values, reports):
        cells = [f"{v:g}" if isinstance(v, (int, float)) else str(v)]
        for mc in rep.methods:
            cells.append(f"{mc.coverage:.1f} ({mc.se:.1f})")
        rows.append(cells)
    widths = [max(len(head[i]), *(len(r[i]) for r in rows)) for i in range(len(head))]
    lines = ["  ".join(h.rjust(w) for h, w in zip(head, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(lines) + "\n"


REFERENCE_LINES = {"t_1": pareto_tail_value(1.0), "t_2": pareto_tail_value(2.0)}


def figure2_curves(preset: str, n: int = 10_000, seed: int = 0) -> dict:
    """Estimated curves for one row of simulated families.

    Returns ``{"curves": {label: TailCurve}, "limits": {label: t or None},
    "reference": {"t_1": ..., "t_2": ...}}``; the curves run from the
    left endpoint to the 0.995 sample quantile.
    """
    try:
        entries = FIGURE2_PRESETS[preset]
    except KeyError:
        raise ValueError(f"unknown preset {preset!r}; known: {', '.join(FIGURE2_PRESETS)}") from None
    curves: dict[str, TailCurve] = {}
    limits: dict[str, float | None] = {}
    for j, (label, dist, alpha) in enumerate(entries):
        sample = dist.sample(n, RngStream(seed, j))
        curves[label] = build_curve(sample, with_ci=False, with_alpha=False)
        limits[label] = None if alpha is None else pareto_tail_value(alpha)
    return {"curves": curves, "limits": limits, "reference": dict(REFERENCE_LINES)}
