"""Statistical self-checks shared by the ``validate`` command and the test suite."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import stats

from .engine import EngineConfig, run_batch
from .eprocess import (
    DEFAULT_B, BatchEvidence, EvidenceState, LambdaSchedule, lambda_minus, lambda_plus,
)
from .labeling import min_pulls_to_label
from .rewards import BanditInstance
from .theory import e_power_reference, kl_bernoulli


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def null_crossing_fraction(n_runs: int = 10_000, n_steps: int = 10_000, xi: float = 0.5,
                           b: float = DEFAULT_B, delta: float = 0.05, seed: int = 0,
                           chunk: int = 500, prior_weight: float = 1.0) -> tuple[int, int]:
    """Count Bernoulli(xi) streams whose "mean <= xi" e-process ever reaches 1/delta.

    Returns ``(crossings, n_runs)``.
    """
    rng = np.random.default_rng(seed)
    batch = BatchEvidence(n_runs, LambdaSchedule.plugin(xi, b, prior_weight))
    thr = math.log(1.0 / delta)
    crossed = np.zeros(n_runs, dtype=bool)
    done = 0
    while done < n_steps:
        steps = min(chunk, n_steps - done)
        x = (rng.random((n_runs, steps)) < xi).astype(float)
        path_m, _ = batch.extend(x)
        crossed |= (path_m >= thr).any(axis=1)
        done += steps
    return int(crossed.sum()), n_runs


def null_test_passes(crossings: int, n_runs: int, delta: float = 0.05,
                     confidence: float = 0.99) -> tuple[bool, float]:
    """One-sided exact binomial test of ``P(cross) <= delta``; pass unless rejected."""
    p = stats.binomtest(crossings, n_runs, delta, alternative="greater").pvalue
    return p >= 1.0 - confidence, float(p)


def growth_rate(mu: float, xi: float, n: int, schedule: LambdaSchedule, seed: int = 0,
                chunk: int = 200_000) -> float:
    """Average log-growth per pull of the "minus" e-process on a Bernoulli(mu) stream."""
    rng = np.random.default_rng(seed)
    batch = BatchEvidence(1, schedule)
    done = 0
    while done < n:
        steps = min(chunk, n - done)
        batch.extend((rng.random((1, steps)) < mu).astype(float))
        done += steps
    return float(batch.log_e_minus[0]) / n


def check_lambda_clamps(seed: int = 0, n: int = 20_000) -> CheckResult:
    rng = np.random.default_rng(seed)
    bad = 0
    for mu, xi, b in zip(rng.random(n), rng.uniform(0.01, 0.99, n), rng.uniform(0.01, 0.99, n)):
        lm, lp = lambda_minus(mu, xi, b), lambda_plus(mu, xi, b)
        if not (0.0 <= lm <= b / xi and -b / (1.0 - xi) <= lp <= 0.0):
            bad += 1
    return CheckResult("lambda clamps", bad == 0, f"{bad} out-of-range bets in {n} draws")


def check_log_domain_fidelity(seed: int = 0, trials: int = 500) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        xi = float(rng.uniform(0.05, 0.95))
        b = float(rng.uniform(0.05, 0.99))
        state = EvidenceState(LambdaSchedule.plugin(xi, b))
        prod_m = prod_p = 1.0
        for x in rng.random(int(rng.integers(1, 31))):
            lm, lp = state.lambdas()
            prod_m *= 1.0 + lm * (x - xi)
            prod_p *= 1.0 + lp * (x - xi)
            state.update(float(x))
        for log_v, prod in ((state.log_e_minus, prod_m), (state.log_e_plus, prod_p)):
            worst = max(worst, abs(math.exp(log_v) - prod) / prod)
    return CheckResult("log-domain fidelity", worst <= 1e-10,
                       f"max relative error {worst:.2e} (limit 1e-10)")


def check_null_supermartingale(n_runs: int = 10_000, n_steps: int = 10_000,
                               seed: int = 0) -> CheckResult:
    crossings, n = null_crossing_fraction(n_runs, n_steps, seed=seed)
    ok, p = null_test_passes(crossings, n)
    return CheckResult("null supermartingale",
                       ok, f"{crossings}/{n} = {crossings / n:.4f} crossed 1/0.05 "
                           f"(binomial p-value vs 0.05: {p:.3g})")


def check_pull_floor(replications: int = 100, seed: int = 0) -> CheckResult:
    inst = BanditInstance.from_means((0.6, 0.55, 0.45, 0.4), 0.5)
    violations = checked = 0
    for stopping in ("eprocess", "oracle_eprocess"):
        policy = "oracle" if stopping == "oracle_eprocess" else "moss"
        cfg = EngineConfig(inst, policy, stopping)
        floor = min_pulls_to_label(inst.K, cfg.delta, cfg.b, inst.xi)
        for trace in run_batch(cfg, seed, replications):
            for n in trace.pulls_at_label:
                if n is not None:
                    checked += 1
                    violations += n < floor
    return CheckResult("minimum-pull floor", violations == 0,
                       f"{violations} violations in {checked} labels")


def check_kl_forms(n: int = 1000) -> CheckResult:
    grid = np.linspace(0.001, 0.999, int(math.sqrt(n)) + 1)
    worst = max(abs(kl_bernoulli(mu, xi) - e_power_reference(mu, xi))
                for mu in grid for xi in grid)
    return CheckResult("KL identity", worst <= 1e-12, f"max |difference| {worst:.2e}")


SUITE: dict[str, Callable[[], CheckResult]] = {
    "lambda_clamps": check_lambda_clamps,
    "log_domain_fidelity": check_log_domain_fidelity,
    "null_supermartingale": check_null_supermartingale,
    "pull_floor": check_pull_floor,
    "kl_identity": check_kl_forms,
}


def run_suite() -> list[CheckResult]:
    return [check() for check in SUITE.values()]
