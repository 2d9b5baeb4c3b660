import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gai_lab.engine import EngineConfig, run, run_batch
from gai_lab.policies import (
    PolicyKind, PolicyState, apt_g_index, hdoc_index, lucb_g_index, moss_index, observe,
    regret_anomaly_rate, select, ucb_index,
)

NON_ORACLE = [k for k in PolicyKind if k is not PolicyKind.ORACLE]


def test_moss_index_value():
    assert moss_index(0.6, 1, 10, 4, 0.05) == pytest.approx(1.29357958031788, rel=1e-12)


def test_moss_bonus_vanishes_when_well_sampled():
    # log(t / (K n)) <= 0 -> no exploration bonus
    assert moss_index(0.42, 100, 400, 4, 0.05) == 0.42
    assert moss_index(0.42, 100, 300, 4, 0.05) == 0.42


def test_other_indices():
    assert hdoc_index(0.5, 4, 100) == pytest.approx(0.5 + math.sqrt(math.log(100) / 8))
    assert ucb_index(0.5, 4, 100) == pytest.approx(
        0.5 + math.sqrt(math.log(1 + 100 * math.log(100) ** 2) / 8))
    assert lucb_g_index(0.5, 4, 4, 0.05) == pytest.approx(0.5 + math.sqrt(math.log(5120) / 8))
    assert apt_g_index(0.4, 9, 0.5) == pytest.approx(0.3)


def test_oracle_picks_best_dose(dose):
    p = PolicyState.for_instance("oracle", dose)
    assert select(p, range(5)) == 4
    assert select(p, [0, 1, 2, 3]) == 2
    assert not p.needs_initialization


def test_oracle_requires_means():
    with pytest.raises(ValueError):
        PolicyState("oracle", 3)


@pytest.mark.parametrize("kind", NON_ORACLE)
def test_unpulled_arms_first_in_order(kind):
    p = PolicyState(kind, 4)
    seen = []
    for _ in range(4):
        a = p.select([0, 1, 2, 3])
        seen.append(a)
        p.observe(a, 1.0 if a == 3 else 0.0)
    assert seen == [0, 1, 2, 3]


def test_observe_arithmetic():
    p = PolicyState("moss", 3)
    observe(p, 1, 0.25)
    observe(p, 1, 0.75)
    observe(p, 2, 1.0)
    assert p.pulls == [0, 2, 1]
    assert p.sums == [0.0, 1.0, 1.0]
    assert p.t == 4
    assert p.mean_estimate(1) == 0.5


@pytest.mark.parametrize("kind", NON_ORACLE)
def test_ties_break_to_smallest_arm(kind):
    p = PolicyState(kind, 3)
    for a in (2, 1, 0):
        p.observe(a, 0.5)
    assert p.select([0, 1, 2]) == 0
    assert p.select([2, 1]) == 1


def test_apt_g_prefers_arms_near_threshold():
    p = PolicyState("apt_g", 2, xi=0.5)
    p.observe(0, 1.0)
    p.observe(1, 0.6)
    assert p.select([0, 1]) == 1


def test_never_selects_labeled_arm():
    p = PolicyState("moss", 4)
    for a, x in enumerate((1.0, 1.0, 0.0, 0.0)):
        p.observe(a, x)
    assert p.select([2, 3]) in (2, 3)
    with pytest.raises(ValueError):
        p.select([])


@given(st.lists(st.tuples(st.integers(0, 3), st.floats(0, 1)), max_size=40),
       st.floats(0.01, 1.0))
def test_scale_invariance_of_choice(history, c):
    # APT-G ranks by |xi - mu| sqrt(n); scaling rewards and xi together keeps the order
    a = PolicyState("apt_g", 4, xi=0.5)
    b = PolicyState("apt_g", 4, xi=0.5 * c)
    for arm, x in history:
        a.observe(arm, x)
        b.observe(arm, x * c)
    vals_a = [a.index(k) if a.pulls[k] else None for k in range(4)]
    vals_b = [b.index(k) if b.pulls[k] else None for k in range(4)]
    for va, vb in zip(vals_a, vals_b):
        if va is not None:
            assert vb == pytest.approx(va * c, abs=1e-9)


def test_restart_clears_statistics():
    p = PolicyState("hdoc", 3)
    for a in (0, 1, 2, 1):
        p.observe(a, 1.0)
    p.restart([1, 2])
    assert p.pulls == [1, 0, 0] and p.sums == [1.0, 0.0, 0.0] and p.t == 1
    assert p.select([1, 2]) == 1


def test_regret_anomaly_decays_for_moss(k4):
    cfg = EngineConfig(k4, "moss", "none", max_rounds=1000, log_actions=True)
    traces = run_batch(cfg, 11, 500)
    early = regret_anomaly_rate(traces, k4, 10)
    late = regret_anomaly_rate(traces, k4, 1000)
    assert late < early
    assert early == pytest.approx(0.75, abs=0.1)


def test_regret_anomaly_oracle_is_zero(k4):
    cfg = EngineConfig(k4, "oracle", "none", max_rounds=50, log_actions=True)
    traces = [run(cfg, s) for s in range(5)]
    assert regret_anomaly_rate(traces, k4, 50) == 0.0


def test_regret_anomaly_needs_action_log(k4):
    trace = run(EngineConfig(k4, "oracle", "oracle_eprocess"), 0)
    with pytest.raises(ValueError):
        regret_anomaly_rate([trace], k4, 1)
    with pytest.raises(ValueError):
        regret_anomaly_rate([], k4, 0)
