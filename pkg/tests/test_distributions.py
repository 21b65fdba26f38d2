import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, stats

from ptail.distributions import (
    FAMILIES,
    GPD,
    LogCauchy,
    LogGamma,
    ParetoI,
    ParetoII,
    ParetoIII,
    ShiftedGamma,
    Weibull,
    density,
    make_distribution,
    min_survival,
    parse_distribution,
    quantile,
    sample,
    shifted_gamma_with_mean,
    survival,
)
from ptail.rng import RngStream

ALL = [
    ParetoI(1.0, 1.0),
    ParetoI(2.0, 0.5),
    GPD(1.0, 1.0),
    GPD(2.0, 0.3),
    ParetoII(5.0, 1.5),
    ParetoIII(5.0, 3.0),
    LogGamma(0.7, 2.0),
    LogGamma(1.5, 2.0),
    Weibull(1.0, 1.0),
    Weibull(0.5, 2.0),
    LogCauchy(),
    LogCauchy(truncated=True),
    ShiftedGamma(2.0, 4.5, 1.0),
    ShiftedGamma(0.5, 18.0, 1.0),
]
IDS = [str(d) for d in ALL]


def test_survival_examples():
    assert survival(ParetoI(1.0, 2.0), 2.0) == pytest.approx(0.25, abs=1e-15)
    assert survival(GPD(1.0, 1.0), 3.0) == pytest.approx(0.25, abs=1e-15)
    x = np.array([0.5, 2.0, 10.0])
    assert np.allclose(survival(GPD(1.0, 1.0), x), 1.0 / (1.0 + x), rtol=1e-14)
    assert density(ParetoII(5.0, 1.5), 1.0) == pytest.approx(0.3, abs=1e-15)


def test_out_of_support():
    d = ParetoI(1.0, 2.0)
    assert density(d, 0.5) == 0.0
    assert survival(d, 0.5) == 1.0
    assert survival(d, math.inf) == 0.0
    assert density(Weibull(2.0, 1.0), -1.0) == 0.0


@pytest.mark.parametrize("dist", ALL, ids=IDS)
def test_quantile_survival_consistency(dist):
    p = np.array([0.01, 0.1, 0.5, 0.9, 0.99, 0.9999])
    x = quantile(dist, p)
    # log-Cauchy quantiles leave the double range near p = 0.998
    p, x = p[np.isfinite(x)], x[np.isfinite(x)]
    assert p.size >= 5
    assert np.all(np.abs(survival(dist, x) - (1.0 - p)) <= 1e-10)
    assert np.all(np.diff(x) > 0)


@pytest.mark.parametrize("dist", ALL, ids=IDS)
def test_density_integrates_to_one(dist):
    # integrate in survival-probability coordinates x = quantile(p)
    levels = [0.002, 0.01, 0.1, 0.5, 0.9, 0.99, 0.999, 0.99999]
    edges = [q for q in quantile(dist, levels) if np.isfinite(q)]
    total = float(dist.cdf(edges[0]))
    for a, b in zip(edges[:-1], edges[1:]):
        if a > 0 and b / a > 100.0:
            # wide segments in log x
            val, _ = integrate.quad(
                lambda v: float(density(dist, math.exp(v))) * math.exp(v), math.log(a), math.log(b),
                epsabs=1e-12, epsrel=1e-11, limit=400,
            )
        else:
            val, _ = integrate.quad(lambda x: float(density(dist, x)), a, b, epsabs=1e-12, epsrel=1e-11, limit=400)
        total += val
    total += float(survival(dist, edges[-1]))
    assert total == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("dist", ALL, ids=IDS)
def test_kolmogorov_smirnov(dist):
    n = 100_000
    x = sample(dist, n, RngStream(2024, 5)).values
    d = stats.kstest(x, lambda v: dist.cdf(v)).statistic
    assert d < 1.5 * 1.36 / math.sqrt(n)


@pytest.mark.parametrize("dist", ALL, ids=IDS)
def test_sample_is_sorted_positive(dist):
    x = dist.sample(1000, RngStream(1)).values
    assert np.all(np.diff(x) >= 0)
    assert np.all(x > 0) and np.all(np.isfinite(x))


def test_determinism():
    d = LogGamma(0.7, 2.0)
    a = d.sample(500, RngStream(9, 3)).values
    b = d.sample(500, RngStream(9, 3)).values
    c = d.sample(500, RngStream(9, 4)).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_pareto_empirical_survival():
    x = sample(ParetoI(1.0, 1.0), 100_000, RngStream(11)).values
    assert np.mean(x >= 10.0) == pytest.approx(0.1, abs=0.01)


def test_weibull_k1_is_exponential():
    n = 100_000
    x = Weibull(1.0, 1.0).sample(n, RngStream(12)).values
    assert abs(x.mean() - 1.0) < 3.0 / math.sqrt(n)


def test_log_gamma_is_exp_gamma():
    d = LogGamma(0.7, 2.0)
    x = d.sample(100_000, RngStream(13)).values
    # Gamma(shape 2, rate 0.7) median, computed independently
    med = math.exp(stats.gamma(a=2.0, scale=1.0 / 0.7).median())
    assert d.quantile(0.5) == pytest.approx(med, rel=1e-10)
    # binomial band for the empirical CDF at the median
    assert abs(np.mean(x <= med) - 0.5) < 4 * 0.5 / math.sqrt(x.size)


def test_min_survival():
    assert min_survival(ParetoI(1.0, 1.0), 2.0) == pytest.approx(0.25)
    assert min_survival(ParetoI(1.0, 1.0), 1.0) == 1.0
    assert min_survival(GPD(1.0, 1.0), 1.0) == pytest.approx(0.25)


@pytest.mark.parametrize("shape", [0.5, 2.0, 8.0])
def test_shifted_gamma_mean(shape):
    d = shifted_gamma_with_mean(shape)
    assert d.shift + d.shape * d.scale == 10.0
    assert d.mean == 10.0
    assert d.left_endpoint == 1.0


def test_log_cauchy_truncated_is_conditioned():
    d, t = LogCauchy(), LogCauchy(truncated=True)
    for x in (1.5, 10.0, 1e6):
        assert survival(t, x) == pytest.approx(survival(d, x) / survival(d, 1.0), rel=1e-12)
    assert t.left_endpoint == 1.0


@pytest.mark.parametrize("text", ["pareto1 x_m=1 alpha=1", "gpd beta=1 xi=1", "weibull k=2", "logcauchy truncated=true"])
def test_parse_round_trip(text):
    d = parse_distribution(text)
    assert parse_distribution(str(d)) == d


def test_make_distribution_errors():
    with pytest.raises(ValueError):
        make_distribution("nope")
    with pytest.raises(ValueError):
        make_distribution("pareto1", alpha=-1.0)
    with pytest.raises(ValueError):
        parse_distribution("pareto1 alpha")
    assert set(FAMILIES) >= {"pareto1", "gpd", "pareto2", "pareto3", "loggamma", "weibull", "logcauchy", "shifted_gamma"}


@given(st.floats(0.05, 20.0), st.floats(1e-6, 1 - 1e-6))
def test_pareto_quantile_closed_form(alpha, p):
    d = ParetoI(1.0, alpha)
    assert d.quantile(p) == pytest.approx((1.0 - p) ** (-1.0 / alpha), rel=1e-10)
