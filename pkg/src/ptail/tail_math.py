"""Theoretical values of the Pareto tail functional.

``t(u) = E[|X1 - X2| / (X1 + X2) | min(X1, X2) >= u]`` is constant in ``u``
exactly when ``X`` is Pareto; the constant for shape ``alpha`` is written
``pareto_tail_value(alpha)`` here. For regularly varying tails ``t(u)``
approaches the same constant as ``u`` grows, which
:func:`theoretical_tail_value` checks numerically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np
from scipy import integrate

from .special import digamma_half_step

if TYPE_CHECKING:
    from .distributions import Distribution

INTEGER_TOL = 1e-9
# the alternating sum loses ~log10(alpha) digits; above this the digamma
# branch (which is exact at integers too) is more accurate
INTEGER_BRANCH_MAX = 64
ALPHA_BRACKET = (1e-8, 1e8)
LOG_BISECTION_TOL = 1e-12


class QuadratureError(RuntimeError):
    """A numerical integral failed to reach its requested tolerance."""


class OutOfBracketError(ValueError):
    """The target tail value has no preimage inside the alpha bracket."""


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise ValueError(f"alpha must be positive and finite, got {alpha!r}")
    return alpha


def _integer_branch(k: int) -> float:
    # the rational part is summed exactly so only the log term is rounded
    rational = 2 * k * sum(Fraction((-1) ** (k + 1 - j), j) for j in range(1, k)) - 1
    return math.fsum([float(rational), (-1) ** (k + 1) * 2.0 * k * math.log(2.0)])


def pareto_tail_value(alpha: float) -> float:
    """Value of ``t(u)`` for a Pareto law with shape ``alpha``.

    Integers (within ``INTEGER_TOL``) use the finite alternating sum, all
    other shapes ``alpha * (psi((alpha+1)/2) - psi(alpha/2)) - 1``.
    """
    alpha = _check_alpha(alpha)
    k = round(alpha)
    if k >= 1 and abs(alpha - k) < INTEGER_TOL and k <= INTEGER_BRANCH_MAX:
        return _integer_branch(k)
    return _digamma_branch(alpha)


def _digamma_branch(alpha: float) -> float:
    return alpha * digamma_half_step(0.5 * alpha) - 1.0


def pareto_tail_value_quadrature(alpha: float) -> float:
    """``2 * int_0^1 y^alpha / (1 + y)^2 dy`` by adaptive quadrature."""
    alpha = _check_alpha(alpha)
    val, err = integrate.quad(
        lambda y: y**alpha / (1.0 + y) ** 2, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13, limit=200
    )
    if err > 1e-12:
        raise QuadratureError(f"quadrature error estimate {err:.3g} for alpha={alpha}")
    return 2.0 * val


def invert_tail_value(t: float) -> float:
    """Shape ``alpha`` with ``pareto_tail_value(alpha) == t``.

    Bisection on ``log(alpha)`` over ``ALPHA_BRACKET``; the tail value is
    strictly decreasing in ``alpha`` so the root is unique.
    """
    t = float(t)
    if not 0.0 < t < 1.0:
        raise ValueError(f"tail value must lie in (0, 1), got {t!r}")
    lo, hi = math.log(ALPHA_BRACKET[0]), math.log(ALPHA_BRACKET[1])
    # the integer branch is flat within INTEGER_TOL, which would stall the
    # bisection at the edge of that window; the digamma branch is strictly
    # decreasing everywhere
    t_lo, t_hi = _digamma_branch(ALPHA_BRACKET[0]), _digamma_branch(ALPHA_BRACKET[1])
    if not t_hi <= t <= t_lo:
        raise OutOfBracketError(
            f"tail value {t!r} outside [{t_hi:.3g}, {t_lo:.12g}] reachable on alpha in {ALPHA_BRACKET}"
        )
    while hi - lo >= LOG_BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if _digamma_branch(math.exp(mid)) > t:
            lo = mid
        else:
            hi = mid
    return math.exp(0.5 * (lo + hi))


def pareto_limit_density(alpha: float, z):
    """Limit density of ``Z = (X_(2) - X_(1)) / (X_(1) + X_(2))`` given ``X_(1) = u``.

    For Pareto this does not depend on ``u``.
    """
    alpha = _check_alpha(alpha)
    z = np.asarray(z, dtype=float)
    if np.any((z < 0.0) | (z >= 1.0)):
        raise ValueError("z must lie in [0, 1)")
    out = 2.0 * alpha * (1.0 + z) ** (-(alpha + 1.0)) * (1.0 - z) ** (alpha - 1.0)
    return float(out) if out.ndim == 0 else out


def huge_jump_density(dist: Distribution, u: float, z):
    """Conditional density ``g(z | u)`` of ``Z`` given the pair minimum equals ``u``."""
    u = float(u)
    if not u > dist.left_endpoint:
        raise ValueError(f"threshold {u} must exceed the left endpoint {dist.left_endpoint}")
    log_sf_u = float(dist.logsf(u))
    if not math.isfinite(log_sf_u):
        raise ValueError(f"degenerate conditioning: survival at u={u} is zero")
    z = np.asarray(z, dtype=float)
    if np.any((z < 0.0) | (z >= 1.0)):
        raise ValueError("z must lie in [0, 1)")
    x2 = u * (1.0 + z) / (1.0 - z)
    logval = math.log(2.0 * u) + dist.logpdf(x2) - 2.0 * np.log1p(-z) - log_sf_u
    out = np.exp(logval)
    return float(out) if out.ndim == 0 else out


# largest minimum the outer integral reaches
S_CAP = 1e150
# exp(-40) is below double resolution next to 1
W_CAP = 40.0


def _conditional_mean_z(dist: Distribution, s: float, log_sf_s: float) -> float:
    # E[Z | X_(1) = s] with z = 1 - exp(-w), i.e. x2 = s (2 e^w - 1); the
    # substitution removes the z -> 1 singularity of heavy tails
    log_2s = math.log(2.0 * s)

    def integrand(w: float) -> float:
        x2 = s * (2.0 * math.exp(w) - 1.0)
        lp = float(dist.logpdf(x2))
        if not math.isfinite(lp):
            return 0.0
        return -math.expm1(-w) * math.exp(log_2s + w + lp - log_sf_s)

    # beyond w_max, Z = 1 - exp(-w) is 1 to double precision: add the
    # remaining conditional mass in closed form instead of overflowing x2
    w_max = min(W_CAP, math.log(1e300 / s))
    tail = math.exp(float(dist.logsf(s * (2.0 * math.exp(w_max) - 1.0))) - log_sf_s)
    total = 0.0
    # split at w = 1 so quad sees the bulk for light and heavy tails alike
    for a, b in ((0.0, 1.0), (1.0, 8.0), (8.0, w_max)):
        val, _ = integrate.quad(integrand, a, b, epsabs=1e-11, epsrel=1e-10, limit=200)
        total += val
    return total + tail


def theoretical_tail_value(dist: Distribution, u: float, mass_tol: float = 1e-10) -> float:
    """``t(u)`` of a continuous law by nested quadrature.

    The outer variable is the pair minimum ``s`` with density
    ``2 f(s) S(s) / S(u)^2`` on ``[u, inf)``; it is integrated in ``log s``
    and truncated where the remaining minimum mass ``(S(s)/S(u))^2`` drops
    below ``mass_tol``.
    """
    u = float(u)
    u = max(u, dist.left_endpoint)
    log_sf_u = float(dist.logsf(u))
    if not math.isfinite(log_sf_u):
        raise ValueError(f"degenerate conditioning: survival at u={u} is zero")
    if u <= 0.0:
        raise ValueError("theoretical_tail_value needs a positive threshold")
    try:
        s_max = min(dist.isf_log(log_sf_u + 0.5 * math.log(mass_tol)), S_CAP)
    except OverflowError:
        s_max = S_CAP
    lo, hi = math.log(u), math.log(s_max)
    # super-heavy tails leave minimum mass past S_CAP; Z there is taken at its
    # conditional mean at S_CAP, which is already within 1e-3 of 1
    rest = math.exp(2.0 * (float(dist.logsf(s_max)) - log_sf_u))

    def outer(v: float) -> float:
        s = math.exp(v)
        lsf = float(dist.logsf(s))
        lp = float(dist.logpdf(s))
        if not (math.isfinite(lsf) and math.isfinite(lp)):
            return 0.0
        weight = 2.0 * s * math.exp(lp + lsf - 2.0 * log_sf_u)
        return _conditional_mean_z(dist, s, lsf) * weight

    # break points spread the log-range so quad does not miss the bulk
    points = np.linspace(lo, hi, 9)[1:-1]
    val, err = integrate.quad(outer, lo, hi, points=points, epsabs=1e-8, epsrel=1e-8, limit=400)
    if not math.isfinite(val) or err > 1e-6:
        raise QuadratureError(
            f"outer quadrature for {dist!r} at u={u}: value={val}, error estimate={err:.3g}"
        )
    if rest > mass_tol:
        val += rest * _conditional_mean_z(dist, s_max, float(dist.logsf(s_max)))
    return val
