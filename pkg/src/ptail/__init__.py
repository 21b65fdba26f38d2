"""Pareto tail plot: a tail functional that exists without moment conditions."""

from .curve import TailCurve, build_curve
from .distributions import (
    GPD,
    LogCauchy,
    LogGamma,
    ParetoI,
    ParetoII,
    ParetoIII,
    ShiftedGamma,
    Weibull,
    make_distribution,
    parse_distribution,
)
from .recipes import RECIPES
from .rng import RngStream
from .tail_math import (
    huge_jump_density,
    invert_tail_value,
    pareto_limit_density,
    pareto_tail_value,
    pareto_tail_value_quadrature,
    theoretical_tail_value,
)
from .ustat import SortedSample, brute_force_estimate, exceedance_count, tail_curve, tail_estimate
from .variance import VarianceMethod, bootstrap_variance, confidence_interval, jackknife_variance

__version__ = "0.1.0"

__all__ = [
    "GPD",
    "RECIPES",
    "LogCauchy",
    "LogGamma",
    "ParetoI",
    "ParetoII",
    "ParetoIII",
    "RngStream",
    "ShiftedGamma",
    "SortedSample",
    "TailCurve",
    "VarianceMethod",
    "Weibull",
    "brute_force_estimate",
    "bootstrap_variance",
    "build_curve",
    "confidence_interval",
    "exceedance_count",
    "huge_jump_density",
    "invert_tail_value",
    "jackknife_variance",
    "make_distribution",
    "parse_distribution",
    "pareto_limit_density",
    "pareto_tail_value",
    "pareto_tail_value_quadrature",
    "tail_curve",
    "tail_estimate",
    "theoretical_tail_value",
]
