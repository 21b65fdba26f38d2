"""Distribution families used in the simulations and density examples.

Every family exposes ``logpdf``, ``logsf``, ``pdf``, ``sf``, ``quantile`` and
``sample``. Log-scale methods are the primitive ones so that conditional
quantities stay finite far in the tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import ClassVar

import numpy as np
from scipy import optimize, special

from .rng import RngStream
from .ustat import SortedSample

_LOG_PI = math.log(math.pi)


def _positive(obj, *names: str) -> None:
    for name in names:
        value = getattr(obj, name)
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{type(obj).__name__}.{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class Distribution:
    name: ClassVar[str] = ""

    @property
    def left_endpoint(self) -> float:
        raise NotImplementedError

    def logpdf(self, x):
        raise NotImplementedError

    def logsf(self, x):
        raise NotImplementedError

    def isf_log(self, logp: float) -> float:
        """Point ``x`` with ``logsf(x) == logp`` (generic log-scale root search)."""
        if logp >= 0.0:
            return self.left_endpoint
        lo = max(self.left_endpoint, 1e-300)
        hi = max(2.0 * lo, 1.0)
        while float(self.logsf(hi)) > logp:
            lo, hi = hi, hi * 2.0
        return optimize.brentq(lambda x: float(self.logsf(x)) - logp, lo, hi, xtol=1e-14 * hi, rtol=1e-15)

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def sf(self, x):
        return np.exp(self.logsf(x))

    def cdf(self, x):
        return -np.expm1(self.logsf(x))

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0.0) | (p >= 1.0)):
            raise ValueError("p must lie in (0, 1)")
        out = np.vectorize(lambda q: self.isf_log(math.log1p(-q)))(p)
        return float(out) if out.ndim == 0 else out

    def _draw(self, n: int, rng: np.random.Generator) -> np.ndarray:
        # inverse transform; 1 - random() lies in (0, 1]
        u = 1.0 - rng.random(n)
        return np.vectorize(lambda q: self.isf_log(math.log(q)))(u)

    def sample(self, n: int, rng: RngStream | np.random.Generator) -> SortedSample:
        if n < 2:
            raise ValueError(f"need n >= 2, got {n}")
        gen = rng.generator() if isinstance(rng, RngStream) else rng
        return SortedSample(self._draw(int(n), gen))

    def min_survival(self, u: float) -> float:
        """``P(min(X1, X2) >= u) = S(u)^2``."""
        return float(np.exp(2.0 * self.logsf(u)))

    def params(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def __str__(self) -> str:
        args = " ".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}" for k, v in self.params().items())
        return f"{self.name} {args}".strip()


def _support_mask(x, lo: float, strict: bool = False):
    x = np.asarray(x, dtype=float)
    return x, (x > lo) if strict else (x >= lo)


def _finish(out):
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class ParetoI(Distribution):
    """Survival ``(x_m / x)^alpha`` on ``[x_m, inf)``."""

    name: ClassVar[str] = "pareto1"
    x_m: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        _positive(self, "x_m", "alpha")

    @property
    def left_endpoint(self) -> float:
        return self.x_m

    def logpdf(self, x):
        x, ok = _support_mask(x, self.x_m)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = math.log(self.alpha) + self.alpha * math.log(self.x_m) - (self.alpha + 1.0) * np.log(x)
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, self.x_m)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = self.alpha * (math.log(self.x_m) - np.log(x))
        return _finish(np.where(ok, v, 0.0))

    def isf_log(self, logp: float) -> float:
        return self.x_m * math.exp(-logp / self.alpha)

    def _draw(self, n, rng):
        return self.x_m * (1.0 - rng.random(n)) ** (-1.0 / self.alpha)


@dataclass(frozen=True)
class GPD(Distribution):
    """Generalized Pareto, survival ``(1 + xi x / beta)^(-1/xi)`` on ``(0, inf)``."""

    name: ClassVar[str] = "gpd"
    beta: float = 1.0
    xi: float = 1.0

    def __post_init__(self):
        _positive(self, "beta", "xi")

    @property
    def left_endpoint(self) -> float:
        return 0.0

    def logpdf(self, x):
        x, ok = _support_mask(x, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -math.log(self.beta) - (1.0 / self.xi + 1.0) * np.log1p(self.xi * x / self.beta)
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -np.log1p(self.xi * np.maximum(x, 0.0) / self.beta) / self.xi
        return _finish(np.where(ok, v, 0.0))

    def isf_log(self, logp: float) -> float:
        return self.beta * math.expm1(-self.xi * logp) / self.xi

    def _draw(self, n, rng):
        u = 1.0 - rng.random(n)
        return self.beta * np.expm1(-self.xi * np.log(u)) / self.xi


@dataclass(frozen=True)
class ParetoII(Distribution):
    """Lomax shifted to start at ``shift``: survival ``(1 + (x - shift)/theta)^(-alpha)``."""

    name: ClassVar[str] = "pareto2"
    theta: float = 1.0
    alpha: float = 1.0
    shift: float = 1.0

    def __post_init__(self):
        _positive(self, "theta", "alpha")

    @property
    def left_endpoint(self) -> float:
        return self.shift

    def logpdf(self, x):
        x, ok = _support_mask(x, self.shift)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = math.log(self.alpha / self.theta) - (self.alpha + 1.0) * np.log1p((x - self.shift) / self.theta)
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, self.shift)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -self.alpha * np.log1p(np.maximum(x - self.shift, 0.0) / self.theta)
        return _finish(np.where(ok, v, 0.0))

    def isf_log(self, logp: float) -> float:
        return self.shift + self.theta * math.expm1(-logp / self.alpha)

    def _draw(self, n, rng):
        u = 1.0 - rng.random(n)
        return self.shift + self.theta * np.expm1(-np.log(u) / self.alpha)


@dataclass(frozen=True)
class ParetoIII(Distribution):
    """Log-logistic shifted to ``shift``: survival ``1 / (1 + ((x - shift)/theta)^alpha)``."""

    name: ClassVar[str] = "pareto3"
    theta: float = 1.0
    alpha: float = 1.0
    shift: float = 1.0

    def __post_init__(self):
        _positive(self, "theta", "alpha")

    @property
    def left_endpoint(self) -> float:
        return self.shift

    def logpdf(self, x):
        x, ok = _support_mask(x, self.shift, strict=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            ly = np.log(np.maximum(x - self.shift, 1e-300) / self.theta)
            v = (
                math.log(self.alpha / self.theta)
                + (self.alpha - 1.0) * ly
                - 2.0 * np.logaddexp(0.0, self.alpha * ly)
            )
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, self.shift, strict=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            ly = np.log(np.maximum(x - self.shift, 1e-300) / self.theta)
            v = -np.logaddexp(0.0, self.alpha * ly)
        return _finish(np.where(ok, v, 0.0))

    def isf_log(self, logp: float) -> float:
        # S = 1/(1 + y^a)  =>  y = (1/S - 1)^(1/a)
        return self.shift + self.theta * math.expm1(-logp) ** (1.0 / self.alpha)

    def _draw(self, n, rng):
        u = 1.0 - rng.random(n)
        return self.shift + self.theta * np.expm1(-np.log(u)) ** (1.0 / self.alpha)


@dataclass(frozen=True)
class LogGamma(Distribution):
    """``exp(G)`` with ``G ~ Gamma(shape=beta, rate=alpha)``; support ``[1, inf)``."""

    name: ClassVar[str] = "loggamma"
    alpha: float = 1.0
    beta: float = 2.0

    def __post_init__(self):
        _positive(self, "alpha", "beta")

    @property
    def left_endpoint(self) -> float:
        return 1.0

    def logpdf(self, x):
        x, ok = _support_mask(x, 1.0, strict=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.log(np.maximum(x, 1.0 + 1e-300))
            v = (
                self.beta * math.log(self.alpha)
                - special.gammaln(self.beta)
                + (self.beta - 1.0) * np.log(lx)
                - (self.alpha + 1.0) * lx
            )
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.log(special.gammaincc(self.beta, self.alpha * np.log(np.maximum(x, 1.0))))
        return _finish(np.where(ok, v, 0.0))

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0.0) | (p >= 1.0)):
            raise ValueError("p must lie in (0, 1)")
        return _finish(np.exp(special.gammaincinv(self.beta, p) / self.alpha))

    def _draw(self, n, rng):
        return np.exp(rng.standard_gamma(self.beta, n) / self.alpha)


@dataclass(frozen=True)
class Weibull(Distribution):
    name: ClassVar[str] = "weibull"
    k: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        _positive(self, "k", "scale")

    @property
    def left_endpoint(self) -> float:
        return 0.0

    def logpdf(self, x):
        x, ok = _support_mask(x, 0.0, strict=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = np.maximum(x, 1e-300) / self.scale
            v = math.log(self.k / self.scale) + (self.k - 1.0) * np.log(y) - y**self.k
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, 0.0)
        v = -((np.maximum(x, 0.0) / self.scale) ** self.k)
        return _finish(np.where(ok, v, 0.0))

    def isf_log(self, logp: float) -> float:
        return self.scale * (-logp) ** (1.0 / self.k)

    def _draw(self, n, rng):
        u = 1.0 - rng.random(n)
        return self.scale * (-np.log(u)) ** (1.0 / self.k)


LOG_FINITE_MAX = math.log(np.finfo(float).max / 2.0)
LOG_FINITE_MIN = math.log(np.finfo(float).tiny)


@dataclass(frozen=True)
class LogCauchy(Distribution):
    """``exp(C)`` for standard Cauchy ``C``; ``truncated`` conditions on ``X >= 1``."""

    name: ClassVar[str] = "logcauchy"
    truncated: bool = False

    @property
    def left_endpoint(self) -> float:
        return 1.0 if self.truncated else 0.0

    def logpdf(self, x):
        x, ok = _support_mask(x, self.left_endpoint, strict=not self.truncated)
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.log(np.maximum(x, 1e-300))
            v = -_LOG_PI - lx - np.log1p(lx * lx)
            if self.truncated:
                v = v + math.log(2.0)
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, self.left_endpoint, strict=not self.truncated)
        with np.errstate(divide="ignore", invalid="ignore"):
            lx = np.log(np.maximum(x, 1e-300))
            # arccot(lx) / pi without cancellation for large lx
            v = np.log(np.arctan2(1.0, lx)) - _LOG_PI
            if self.truncated:
                v = v + math.log(2.0)
        return _finish(np.where(ok, v, 0.0))

    def isf_log(self, logp: float) -> float:
        p = math.exp(logp) * (0.5 if self.truncated else 1.0)
        # p = arccot(L)/pi  =>  L = cot(pi p); beyond the double range -> inf
        log_x = 1.0 / math.tan(math.pi * p)
        return math.exp(log_x) if log_x < 709.0 else math.inf

    def _draw(self, n, rng):
        # inverse transform restricted to survival levels whose quantile is a
        # positive double with a finite pairwise sum; the removed mass is ~5e-4
        top = 0.5 if self.truncated else 1.0
        p_lo = math.atan2(1.0, LOG_FINITE_MAX) / math.pi
        p_hi = min(top, math.atan2(1.0, LOG_FINITE_MIN) / math.pi)
        p = p_lo + (p_hi - p_lo) * rng.random(n)
        return np.exp(1.0 / np.tan(np.pi * p))


@dataclass(frozen=True)
class ShiftedGamma(Distribution):
    """``shift + Gamma(shape, scale)``."""

    name: ClassVar[str] = "shifted_gamma"
    shape: float = 1.0
    scale: float = 1.0
    shift: float = 1.0

    def __post_init__(self):
        _positive(self, "shape", "scale")

    @property
    def left_endpoint(self) -> float:
        return self.shift

    @property
    def mean(self) -> float:
        return self.shift + self.shape * self.scale

    def logpdf(self, x):
        x, ok = _support_mask(x, self.shift, strict=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            y = np.maximum(x - self.shift, 1e-300) / self.scale
            v = (self.shape - 1.0) * np.log(y) - y - special.gammaln(self.shape) - math.log(self.scale)
        return _finish(np.where(ok, v, -np.inf))

    def logsf(self, x):
        x, ok = _support_mask(x, self.shift)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = np.log(special.gammaincc(self.shape, np.maximum(x - self.shift, 0.0) / self.scale))
        return _finish(np.where(ok, v, 0.0))

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0.0) | (p >= 1.0)):
            raise ValueError("p must lie in (0, 1)")
        return _finish(self.shift + self.scale * special.gammaincinv(self.shape, p))

    def _draw(self, n, rng):
        return self.shift + self.scale * rng.standard_gamma(self.shape, n)


FAMILIES: dict[str, type[Distribution]] = {
    cls.name: cls for cls in (ParetoI, GPD, ParetoII, ParetoIII, LogGamma, Weibull, LogCauchy, ShiftedGamma)
}


def _coerce(value: str, current):
    if isinstance(current, bool):
        low = str(value).lower()
        if low in ("1", "true", "yes"):
            return True
        if low in ("0", "false", "no"):
            return False
        raise ValueError(f"not a boolean: {value!r}")
    return float(value)


def make_distribution(family: str, **params) -> Distribution:
    try:
        cls = FAMILIES[family.lower()]
    except KeyError:
        raise ValueError(f"unknown distribution {family!r}; known: {', '.join(sorted(FAMILIES))}") from None
    defaults = {f.name: f.default for f in fields(cls)}
    unknown = sorted(set(params) - set(defaults))
    if unknown:
        raise ValueError(f"unknown parameter(s) for {family}: {', '.join(unknown)}")
    return cls(**{k: _coerce(v, defaults[k]) for k, v in params.items()})


def parse_distribution(text: str) -> Distribution:
    """Parse ``"pareto1 x_m=1 alpha=1"`` into a distribution."""
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise ValueError("empty distribution spec")
    params = {}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {tok!r}")
        params[key.strip()] = value.strip()
    return make_distribution(tokens[0], **params)


# module-level surface


def density(dist: Distribution, x):
    return dist.pdf(x)


def survival(dist: Distribution, x):
    return dist.sf(x)


def quantile(dist: Distribution, p):
    return dist.quantile(p)


def sample(dist: Distribution, n: int, rng: RngStream) -> SortedSample:
    return dist.sample(n, rng)


def min_survival(dist: Distribution, u: float) -> float:
    return dist.min_survival(u)


def shifted_gamma_with_mean(shape: float, mean: float = 10.0, shift: float = 1.0) -> ShiftedGamma:
    return ShiftedGamma(shape=shape, scale=(mean - shift) / shape, shift=shift)


FIGURE2_PRESETS: dict[str, list[tuple[str, Distribution, float | None]]] = {
    # (label, distribution, limiting tail index or None)
    "pareto": [
        ("Pareto I, alpha=0.5", ParetoI(1.0, 0.5), 0.5),
        ("Pareto II, theta=5, alpha=1.5", ParetoII(5.0, 1.5), 1.5),
        ("Pareto III, theta=5, alpha=3", ParetoIII(5.0, 3.0), 3.0),
    ],
    "loggamma": [
        ("log-gamma, alpha=0.5, beta=2", LogGamma(0.5, 2.0), 0.5),
        ("log-gamma, alpha=1.5, beta=2", LogGamma(1.5, 2.0), 1.5),
        ("log-gamma, alpha=3, beta=2", LogGamma(3.0, 2.0), 3.0),
    ],
    "shifted_gamma": [
        ("shifted gamma, shape=0.5, mean=10", shifted_gamma_with_mean(0.5), None),
        ("shifted gamma, shape=2, mean=10", shifted_gamma_with_mean(2.0), None),
        ("shifted gamma, shape=8, mean=10", shifted_gamma_with_mean(8.0), None),
    ],
}
