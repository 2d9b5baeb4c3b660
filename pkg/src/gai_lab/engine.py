"""The good-arm identification loop and seeded batch execution."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .eprocess import DEFAULT_B, DEFAULT_PRIOR_WEIGHT, Decision, EvidenceState
from .labeling import StoppingKind, StoppingRule, judge
from .policies import DEFAULT_ALPHA, PolicyKind, PolicyState
from .rewards import BanditInstance, UniformStream

DEFAULT_MAX_ROUNDS = 10_000_000

GOOD, BAD, UNLABELED = "good", "bad", "unlabeled"
_LABEL_CHARS = {GOOD: "G", BAD: "B", UNLABELED: "U"}


@dataclass(frozen=True)
class EngineConfig:
    instance: BanditInstance
    policy: PolicyKind = PolicyKind.MOSS
    stopping: StoppingKind = StoppingKind.EPROCESS
    delta: float = 0.05
    b: float = DEFAULT_B
    alpha: float = DEFAULT_ALPHA
    prior_weight: float = DEFAULT_PRIOR_WEIGHT
    m: int | None = None
    reset_variant: bool = False
    max_rounds: int = DEFAULT_MAX_ROUNDS
    log_actions: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "policy", PolicyKind(self.policy))
        object.__setattr__(self, "stopping", StoppingKind(self.stopping))
        K = self.instance.K
        if self.m is None:
            object.__setattr__(self, "m", K)
        if not 1 <= self.m <= K:
            raise ValueError(f"m must lie in [1, K={K}], got {self.m}")
        if self.max_rounds < K:
            raise ValueError(f"max_rounds must be at least K={K}, got {self.max_rounds}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        # validates delta, b and prior_weight
        self.rule().schedule(0.5)

    @property
    def K(self) -> int:
        return self.instance.K

    def rule(self) -> StoppingRule:
        return StoppingRule(self.stopping, self.delta, self.K, self.instance.xi, self.b,
                            self.prior_weight)


@dataclass
class RunTrace:
    """Everything recorded about one run.

    Times are 1-based round numbers.  ``regret_at_tau_g1`` is the pseudo-regret
    ``sum_t (max mu - mu_{A_t})`` over rounds up to the first good label;
    ``realized_regret_at_tau_g1`` replaces ``mu_{A_t}`` by the observed reward.
    Both are ``None`` when no arm was labeled good.
    """

    seed: int
    tau_good: list[int]
    tau_arm: list[int | None]
    tau_stop: int | None
    labels: list[str]
    pulls_at_label: list[int | None]
    total_pulls: list[int]
    cumulative_reward: float
    regret_at_tau_g1: float | None
    realized_regret_at_tau_g1: float | None
    mislabeled: bool
    truncated: bool
    rounds: int
    actions: list[int] | None = field(default=None, repr=False)

    @property
    def tau_g1(self) -> int | None:
        return self.tau_good[0] if self.tau_good else None

    @property
    def tau_g2(self) -> int | None:
        return self.tau_good[1] if len(self.tau_good) > 1 else None

    @property
    def label_string(self) -> str:
        return "".join(_LABEL_CHARS[lab] for lab in self.labels)


def run(config: EngineConfig, seed: int) -> RunTrace:
    instance = config.instance
    K = instance.K
    arms = instance.arms
    means = instance.means
    best_mean = max(means)
    xi = instance.xi
    rule = config.rule()
    log_thr = rule.log_threshold
    use_evidence = rule.uses_evidence
    stop_kind = rule.kind

    rng = UniformStream(seed)
    policy = PolicyState.for_instance(config.policy, instance, config.alpha)
    evidence = [EvidenceState(rule.schedule(mu)) for mu in means] if use_evidence else None
    pulls, sums = policy.pulls, policy.sums
    select = policy.select_sorted
    observe = policy.observe

    unlabeled = list(range(K))
    labels = [UNLABELED] * K
    tau_arm: list[int | None] = [None] * K
    pulls_at_label: list[int | None] = [None] * K
    total_pulls = [0] * K
    tau_good: list[int] = []
    actions: list[int] | None = [] if config.log_actions else None

    m = config.m
    max_rounds = config.max_rounds
    t = 0
    reward_total = 0.0
    pseudo_regret = 0.0
    regret_g1 = realized_g1 = None

    while len(tau_good) < m and unlabeled and t < max_rounds:
        a = select(unlabeled)
        x = arms[a].sample(rng)
        t += 1
        reward_total += x
        total_pulls[a] += 1
        if not tau_good:
            pseudo_regret += best_mean - means[a]
        if actions is not None:
            actions.append(a)
        observe(a, x)

        if use_evidence:
            ev = evidence[a].update(x)
            decision = ev.decide_log(log_thr)
        elif stop_kind is StoppingKind.NONE:
            continue
        else:
            decision = judge(rule, pulls[a], sums[a] / pulls[a])
        if decision is Decision.NONE:
            continue

        unlabeled.remove(a)
        tau_arm[a] = t
        pulls_at_label[a] = pulls[a]
        if decision is Decision.GOOD:
            labels[a] = GOOD
            tau_good.append(t)
            if len(tau_good) == 1:
                regret_g1 = pseudo_regret
                realized_g1 = t * best_mean - reward_total
        else:
            labels[a] = BAD
        if config.reset_variant and unlabeled:
            policy.restart(unlabeled)
            if evidence is not None:
                for b_arm in unlabeled:
                    evidence[b_arm].reset()

    truncated = len(tau_good) < m and bool(unlabeled)
    mislabeled = any(
        (lab == GOOD and mu <= xi) or (lab == BAD and mu > xi)
        for lab, mu in zip(labels, means)
    )
    return RunTrace(
        seed=seed,
        tau_good=tau_good,
        tau_arm=tau_arm,
        tau_stop=None if truncated else t,
        labels=labels,
        pulls_at_label=pulls_at_label,
        total_pulls=total_pulls,
        cumulative_reward=reward_total,
        regret_at_tau_g1=regret_g1,
        realized_regret_at_tau_g1=realized_g1,
        mislabeled=mislabeled,
        truncated=truncated,
        rounds=t,
        actions=actions,
    )


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed of replication ``index``.

    Mixing is numpy's ``SeedSequence(entropy=master_seed, spawn_key=(index,))``
    with the first 64-bit word of its generated state taken as the seed.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def default_jobs() -> int:
    env = os.environ.get("GAI_LAB_JOBS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _run_many(config: EngineConfig, seeds: list[int]) -> list[RunTrace]:
    return [run(config, s) for s in seeds]


def run_batch(config: EngineConfig, master_seed: int, replications: int,
              jobs: int | None = 1) -> list[RunTrace]:
    """Run ``replications`` seeded runs; output order is the replication index."""
    if replications < 1:
        raise ValueError(f"replications must be at least 1, got {replications}")
    seeds = [derive_seed(master_seed, i) for i in range(replications)]
    jobs = default_jobs() if jobs is None else max(1, jobs)
    if jobs == 1 or replications == 1:
        return _run_many(config, seeds)
    chunks = list(_chunks(seeds, max(1, replications // (4 * jobs))))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(_run_many, [config] * len(chunks), chunks)
        return [trace for part in parts for trace in part]


def _chunks(items: list[int], size: int) -> Iterable[list[int]]:
    for i in range(0, len(items), size):
        yield items[i:i + size]
