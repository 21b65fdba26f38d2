"""Dataset recipes. File-based checks need PTAIL_DATA_DIR."""

import os

import pytest

from ptail.ingest import load_sample
from ptail.recipes import RECIPES
from ptail.tail_math import pareto_tail_value
from ptail.ustat import exceedance_count, tail_estimate

DATA_DIR = os.environ.get("PTAIL_DATA_DIR")
needs_data = pytest.mark.skipif(not DATA_DIR, reason="PTAIL_DATA_DIR not set")


@pytest.mark.parametrize("name", sorted(RECIPES))
def test_listed_alpha_matches_listed_value(name):
    # both are rounded to two or three digits; 0.0065 covers the rounding of each
    for cp in RECIPES[name].checkpoints:
        assert abs(pareto_tail_value(cp.alpha) - cp.t_hat) < 0.0065


@pytest.mark.parametrize("name", sorted(RECIPES))
def test_checkpoints_increase_in_u(name):
    us = [cp.u for cp in RECIPES[name].checkpoints]
    assert us == sorted(us)
    ms = [cp.m for cp in RECIPES[name].checkpoints if cp.m is not None]
    assert ms == sorted(ms, reverse=True)


def _sample(name):
    spec = RECIPES[name].spec_for(DATA_DIR)
    if not os.path.exists(spec.path):
        pytest.skip(f"{spec.path} not present")
    return load_sample(spec)


@needs_data
@pytest.mark.parametrize("name", sorted(RECIPES))
def test_sample_size(name):
    assert _sample(name).n == RECIPES[name].n_expected


@needs_data
@pytest.mark.parametrize("name", sorted(RECIPES))
def test_checkpoint_values(name):
    s = _sample(name)
    for cp in RECIPES[name].checkpoints:
        assert tail_estimate(s, cp.u).t_hat == pytest.approx(cp.t_hat, abs=0.01)
        if cp.m is not None:
            # one observation sitting exactly at u may be counted either way
            assert abs(exceedance_count(s, cp.u) - cp.m) <= 1
