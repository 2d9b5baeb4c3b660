"""Closed-form reference quantities: Bernoulli KL, oracle bets, stopping-time bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .rewards import BanditInstance


def kl_bernoulli(mu: float, xi: float) -> float:
    """KL(Bernoulli(mu) || Bernoulli(xi)) in nats, with 0 log 0 = 0."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if not 0.0 < xi < 1.0:
        raise ValueError(f"xi must lie in (0, 1), got {xi}")
    total = 0.0
    if mu > 0.0:
        total += mu * math.log(mu / xi)
    if mu < 1.0:
        total += (1.0 - mu) * math.log((1.0 - mu) / (1.0 - xi))
    return max(total, 0.0)


def e_power_reference(mu: float, xi: float) -> float:
    """Worst-case optimal log-growth per pull, written in the e-power form

    ``log((1-mu)/(1-xi)) + mu * log(mu (1-xi) / (xi (1-mu)))``.

    The form is singular at mu in {0, 1}; there the KL limit is used.
    """
    if mu <= 0.0 or mu >= 1.0:
        return kl_bernoulli(mu, xi)
    return math.log((1.0 - mu) / (1.0 - xi)) + mu * math.log(
        mu * (1.0 - xi) / (xi * (1.0 - mu))
    )


def lambda_opt(mu: float, xi: float) -> float:
    return (mu - xi) / (xi * (1.0 - xi))


def growth_rate_bernoulli(lam: float, mu: float, xi: float) -> float:
    """E[log(1 + lam (X - xi))] for X ~ Bernoulli(mu)."""
    return mu * math.log1p(lam * (1.0 - xi)) + (1.0 - mu) * math.log1p(-lam * xi)


def admissible_mean_window(xi: float, b: float) -> tuple[float, float]:
    """Open interval of means for which the truncated plug-in bet can reach the optimum."""
    return xi * (1.0 - b), b * (1.0 - xi) + xi


@dataclass
class BoundReport:
    """Asymptotic lower-bound coefficients (multiply by log(1/delta)).

    ``tau_g_bounds[i]`` is the coefficient for the (i+1)-th good label:
    the sum of 1/d over all arms whose mean is at least the (i+1)-th largest.
    Arms sitting exactly on the threshold contribute ``math.inf``.
    """

    means: tuple[float, ...]
    xi: float
    delta: float
    kl: list[float]
    tau_g_bounds: list[float]
    tau_stop_bound: float
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def log_inv_delta(self) -> float:
        return math.log(1.0 / self.delta)

    @property
    def log_2k_delta(self) -> float:
        return math.log(2.0 * len(self.means) / self.delta)

    def scaled(self, coefficient: float) -> float:
        return coefficient * self.log_inv_delta

    def rows(self) -> list[dict[str, object]]:
        out: list[dict[str, object]] = []
        for i, coef in enumerate(self.tau_g_bounds, start=1):
            out.append({"quantity": f"tau_g{i}", "coefficient": coef,
                        "scaled_log_1_over_delta": coef * self.log_inv_delta,
                        "scaled_log_2k_over_delta": coef * self.log_2k_delta})
        out.append({"quantity": "tau_stop", "coefficient": self.tau_stop_bound,
                    "scaled_log_1_over_delta": self.tau_stop_bound * self.log_inv_delta,
                    "scaled_log_2k_over_delta": self.tau_stop_bound * self.log_2k_delta})
        return out


def _inv(d: float) -> float:
    return math.inf if d == 0.0 else 1.0 / d


def minimax_bounds(instance: BanditInstance, delta: float) -> BoundReport:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    xi = instance.xi
    means = instance.means
    kl = [kl_bernoulli(mu, xi) for mu in means]
    violations = []
    if any(mu == xi for mu in means):
        violations.append("some arm mean equals the threshold xi (its 1/d is infinite)")
    if len(set(means)) < len(means):
        violations.append("arm means are not pairwise distinct")

    n_good = sum(mu > xi for mu in means)
    ordered = sorted(means, reverse=True)
    tau_g = []
    for i in range(n_good):
        cutoff = ordered[i]
        tau_g.append(sum(_inv(d) for mu, d in zip(means, kl) if mu >= cutoff))
    tau_stop = sum(_inv(d) for d in kl)
    return BoundReport(means, xi, delta, kl, tau_g, tau_stop, violations)
