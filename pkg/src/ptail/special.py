"""Special functions used by the closed-form tail values."""

from __future__ import annotations

import math
from statistics import NormalDist

EULER_GAMMA = 0.57721566490153286061

# B_{2k} / (2k) for k = 1..7
_ASYMPTOTIC_COEFFS = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
# truncation error at the switch is ~0.44 * x^-16, i.e. 4e-17 at x = 10
_ASYMPTOTIC_SWITCH = 10.0


def _check_positive(x: float, name: str = "x") -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {x!r}")
    return x


def digamma(x: float) -> float:
    """Digamma function for positive real ``x``.

    Upward recurrence ``psi(x) = psi(x + 1) - 1/x`` until ``x >= 10``, then the
    asymptotic series with seven Bernoulli terms.
    """
    x = _check_positive(x)
    shift = 0.0
    while x < _ASYMPTOTIC_SWITCH:
        shift += 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for coeff in _ASYMPTOTIC_COEFFS:
        series += coeff * power
        power *= inv2
    return math.log(x) - 0.5 / x - series - shift


def digamma_half_step(x: float) -> float:
    """``psi(x + 1/2) - psi(x)`` without cancellation for large ``x``.

    Each asymptotic term is differenced analytically through ``log1p`` and
    ``expm1`` so the result keeps full relative precision.
    """
    x = _check_positive(x)
    shift = 0.0
    while x < _ASYMPTOTIC_SWITCH:
        # psi(x+1/2) - psi(x) = [psi(x+3/2) - psi(x+1)] - 1/(x+1/2) + 1/x
        shift += 1.0 / x - 1.0 / (x + 0.5)
        x += 1.0
    lg = math.log1p(0.5 / x)
    total = lg + 1.0 / (4.0 * x * (x + 0.5))
    inv2 = 1.0 / (x * x)
    power = inv2
    for k, coeff in enumerate(_ASYMPTOTIC_COEFFS, start=1):
        # x^{-2k} - (x + 1/2)^{-2k}
        total += coeff * power * -math.expm1(-2.0 * k * lg)
        power *= inv2
    return total + shift


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p!r}")
    return NormalDist().inv_cdf(p)
