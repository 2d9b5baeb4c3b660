import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gai_lab.rewards import BanditInstance
from gai_lab.theory import (
    admissible_mean_window, e_power_reference, growth_rate_bernoulli, kl_bernoulli,
    lambda_opt, minimax_bounds,
)

# 40-digit mpmath evaluations of the closed form
KL_06 = 0.0201355135506889
KL_055 = 0.00500836684635684
KL_0537 = 0.00274050437099497
K4_STOP = 498.658762815697
K4_STOP_SCALED = 1493.84814925749


def test_kl_values():
    assert kl_bernoulli(0.5, 0.5) == 0.0
    assert kl_bernoulli(0.6, 0.5) == pytest.approx(KL_06, rel=1e-12)
    assert kl_bernoulli(0.55, 0.5) == pytest.approx(kl_bernoulli(0.45, 0.5), rel=1e-12)
    assert kl_bernoulli(0.0, 0.3) == pytest.approx(math.log(1 / 0.7))
    assert kl_bernoulli(1.0, 0.3) == pytest.approx(math.log(1 / 0.3))


def test_kl_matches_grid_maximised_growth():
    # the KL is the best achievable log-growth against Bernoulli(0.5)
    lams = np.linspace(0, 1.96, 19601)
    rates = 0.6 * np.log1p(0.5 * lams) + 0.4 * np.log1p(-0.5 * lams)
    assert lams[rates.argmax()] == pytest.approx(0.4, abs=1e-4)
    assert rates.max() == pytest.approx(kl_bernoulli(0.6, 0.5), rel=1e-9)


def test_lambda_opt():
    assert lambda_opt(0.5, 0.5) == 0.0
    assert lambda_opt(0.6, 0.5) == pytest.approx(0.4)
    assert growth_rate_bernoulli(0.4, 0.6, 0.5) == pytest.approx(KL_06, rel=1e-12)


@pytest.mark.parametrize("mu, expected", [(0.6, KL_06), (0.5, 0.0), (0.537, KL_0537)])
def test_e_power_reference(mu, expected):
    assert e_power_reference(mu, 0.5) == pytest.approx(expected, rel=1e-10, abs=1e-15)


def test_e_power_endpoints_use_limit():
    assert e_power_reference(0.0, 0.4) == kl_bernoulli(0.0, 0.4)
    assert e_power_reference(1.0, 0.4) == kl_bernoulli(1.0, 0.4)


def test_forms_agree_on_grid():
    grid = np.linspace(0.001, 0.999, 32)
    for mu in grid:
        for xi in grid:
            assert abs(kl_bernoulli(mu, xi) - e_power_reference(mu, xi)) <= 1e-12


@given(st.floats(0.01, 0.99), st.floats(0.0, 0.49), st.floats(0.0, 0.49))
def test_kl_monotone_away_from_threshold(xi, u, v):
    lo, hi = sorted((u, v))
    if xi + hi <= 1.0:
        assert kl_bernoulli(xi + lo, xi) <= kl_bernoulli(xi + hi, xi) + 1e-15
    if xi - hi >= 0.0:
        assert kl_bernoulli(xi - lo, xi) <= kl_bernoulli(xi - hi, xi) + 1e-15
    if lo > 1e-6 and xi + lo <= 1.0:
        assert kl_bernoulli(xi + lo, xi) > 0


def test_bounds_k4():
    r = minimax_bounds(BanditInstance.from_means([0.6, 0.55, 0.45, 0.4], 0.5), 0.05)
    assert r.tau_stop_bound == pytest.approx(K4_STOP, rel=1e-10)
    assert r.scaled(r.tau_stop_bound) == pytest.approx(K4_STOP_SCALED, rel=1e-10)
    assert r.tau_g_bounds == pytest.approx([1 / KL_06, 1 / KL_06 + 1 / KL_055], rel=1e-10)
    assert r.tau_g_bounds == sorted(r.tau_g_bounds)
    assert r.tau_stop_bound >= r.tau_g_bounds[-1]
    assert r.valid


def test_bounds_single_arm():
    r = minimax_bounds(BanditInstance.from_means([0.6], 0.5), 0.05)
    assert r.tau_stop_bound == pytest.approx(49.6634961647545, rel=1e-10)


def test_arm_on_threshold_is_infinite_and_flagged():
    r = minimax_bounds(BanditInstance.from_means([0.6, 0.5], 0.5), 0.05)
    assert math.isinf(r.tau_stop_bound)
    assert not r.valid


def test_repeated_means_flagged():
    r = minimax_bounds(BanditInstance.from_means([0.6, 0.55, 0.45, 0.45, 0.4], 0.5), 0.05)
    assert any("distinct" in v for v in r.violations)


def test_experimental_means_inside_admissible_window():
    lo, hi = admissible_mean_window(0.5, 0.98)
    assert (lo, hi) == pytest.approx((0.01, 0.99))
    for mu in (0.6, 0.55, 0.45, 0.4, 0.36, 0.34, 0.469, 0.465, 0.537):
        assert lo < mu < hi
