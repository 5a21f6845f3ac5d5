"""Randomness, distribution checks, and confidence-interval tests."""

import math

import hypothesis
import numpy as np
import pytest
from hypothesis import strategies as st

from compdet import frames, gf2m, stats
from compdet.errors import DomainError
from compdet.model import ModelParams
from compdet.rng import RngStream


# --- streams ---

def test_streams_are_replayable():
    a = stats.sample_normal(RngStream(99, 5), 1000)
    b = stats.sample_normal(RngStream(99, 5), 1000)
    np.testing.assert_array_equal(a, b)


def test_distinct_streams_differ():
    a = stats.sample_normal(RngStream(99, 5), 1000)
    b = stats.sample_normal(RngStream(99, 6), 1000)
    c = stats.sample_normal(RngStream(98, 5), 1000)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_attempt_substreams_are_disjoint():
    base = RngStream(7, 3)
    a = base.generator(0).standard_normal(100)
    b = base.generator(1).standard_normal(100)
    assert not np.array_equal(a, b)


def test_stream_independence_correlation():
    a = stats.sample_normal(RngStream(123, 0), 100_000)
    b = stats.sample_normal(RngStream(123, 1), 100_000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.01


def test_normal_moments():
    x = stats.sample_normal(RngStream(123, 0), 100_000)
    assert abs(x.mean()) < 0.02
    assert abs(x.var() - 1.0) < 0.02


def test_sample_normal_edge_cases():
    assert stats.sample_normal(RngStream(0, 0), 0).size == 0
    with pytest.raises(DomainError):
        stats.sample_normal(RngStream(0, 0), -1)


# --- chi-squared ---

def test_chi2_mean_var():
    assert stats.chi2_mean_var(1) == (1.0, 2.0)
    assert stats.chi2_mean_var(9) == (9.0, 18.0)
    with pytest.raises(DomainError):
        stats.chi2_mean_var(0)


def test_chi2_empirical_mean():
    dof = 6
    gen = RngStream(55, 0).generator()
    sums = (gen.standard_normal((10_000, dof)) ** 2).sum(axis=1)
    mean, var = stats.chi2_mean_var(dof)
    assert abs(sums.mean() - mean) < 3 * math.sqrt(var / 10_000)


def test_chi2_cdf_matches_known_points():
    # chi2_2 is Exp(1/2): CDF(x) = 1 - exp(-x/2)
    for x in (0.1, 1.0, 3.0, 10.0):
        assert abs(float(stats.chi2_cdf(x, 2)) - (1 - math.exp(-x / 2))) < 1e-12


# --- KS machinery ---

def test_ks_statistic_uniform_exact():
    samples = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    d = stats.ks_statistic(samples, lambda x: x)
    assert abs(d - 0.1) < 1e-15


def test_ks_critical_value_formula():
    for n in (1000, 2000, 5000):
        expect = math.sqrt(-math.log(0.005) / 2) / math.sqrt(n)
        assert abs(stats.ks_critical_value(n, 0.01) - expect) < 1e-12 * expect
    assert stats.ks_critical_value(100, 0.01) > stats.ks_critical_value(100, 0.05)


# --- Wishart projection law ---

def _setup_16_5():
    params = ModelParams.from_snr(m=16, t=32, snr=1.0)
    frame = frames.build_group_hadamard(gf2m.FieldCtx.standard(4), 5)
    return params, frame


def test_wishart_projection_check_passes():
    params, frame = _setup_16_5()
    report = stats.wishart_projection_check(params, frame, (1, 2), 2000, RngStream(0, 900001))
    assert report.passed
    assert report.n_samples == 2000
    assert report.ks_statistic < report.critical_value_1pct


def test_wishart_projection_mean():
    params, frame = _setup_16_5()
    samples = stats.sample_pair_distance2(params, frame, (1, 2), 2000, RngStream(0, 900001))
    scale = stats.pair_scale(params.energy, frame, (1, 2))
    dof = params.t - params.m + frame.n
    assert abs(samples.mean() / (scale * dof) - 1.0) < 0.1


def test_wishart_projection_wrong_dof_control_fails():
    params, frame = _setup_16_5()
    report = stats.wishart_projection_check(
        params, frame, (1, 2), 2000, RngStream(0, 900001), dof=params.t - params.m
    )
    assert not report.passed


def test_wishart_projection_pass_rate_over_seeds():
    params, frame = _setup_16_5()
    passes = sum(
        stats.wishart_projection_check(params, frame, (1, 2), 600, RngStream(s, 1)).passed
        for s in range(10)
    )
    assert passes >= 9


def test_pair_scale_requires_distinct_indices():
    _, frame = _setup_16_5()
    with pytest.raises(DomainError):
        stats.pair_scale(1.0, frame, (3, 3))


# --- Clopper-Pearson ---

def test_clopper_pearson_values():
    lo, hi = stats.clopper_pearson(0, 100, 0.95)
    assert lo == 0.0
    assert abs(hi - (1 - 0.025 ** (1 / 100))) < 1e-12
    lo, hi = stats.clopper_pearson(100, 100, 0.95)
    assert hi == 1.0
    lo, hi = stats.clopper_pearson(50, 100, 0.95)
    assert lo < 0.5 < hi
    assert abs((hi - lo) - 0.2033577409933978) < 1e-12


def test_clopper_pearson_domain():
    with pytest.raises(DomainError):
        stats.clopper_pearson(-1, 100)
    with pytest.raises(DomainError):
        stats.clopper_pearson(5, 4)
    with pytest.raises(DomainError):
        stats.clopper_pearson(1, 10, 1.0)


@hypothesis.given(st.integers(0, 200), st.integers(1, 200))
def test_clopper_pearson_brackets_p_hat(errors, trials):
    hypothesis.assume(errors <= trials)
    lo, hi = stats.clopper_pearson(errors, trials, 0.95)
    assert 0.0 <= lo <= errors / trials <= hi <= 1.0


@hypothesis.given(st.integers(1, 100), st.integers(1, 400))
def test_clopper_pearson_narrows_with_confidence(errors, trials):
    hypothesis.assume(errors <= trials)
    lo90, hi90 = stats.clopper_pearson(errors, trials, 0.90)
    lo99, hi99 = stats.clopper_pearson(errors, trials, 0.99)
    assert lo99 <= lo90 and hi90 <= hi99
