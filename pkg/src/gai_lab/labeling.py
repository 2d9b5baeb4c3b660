"""Stopping rules that turn per-arm statistics into good/bad labels."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .eprocess import (
    DEFAULT_B, DEFAULT_PRIOR_WEIGHT, Decision, EvidenceState, LambdaSchedule, log_threshold,
)


class StoppingKind(str, enum.Enum):
    EPROCESS = "eprocess"
    CONFIDENCE_BOUND = "confidence_bound"
    ORACLE_EPROCESS = "oracle_eprocess"
    # diagnostic only: never labels, so a run lasts until max_rounds
    NONE = "none"


def confidence_radius(n: int, K: int, delta: float) -> float:
    """Anytime Hoeffding radius sqrt(log(4 K n^2 / delta) / (2 n))."""
    return math.sqrt(math.log(4.0 * K * n * n / delta) / (2.0 * n))


@dataclass(frozen=True)
class StoppingRule:
    kind: StoppingKind
    delta: float
    K: int
    xi: float
    b: float = DEFAULT_B
    prior_weight: float = DEFAULT_PRIOR_WEIGHT

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", StoppingKind(self.kind))
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.K < 1:
            raise ValueError(f"K must be positive, got {self.K}")
        if not 0.0 < self.b < 1.0:
            raise ValueError(f"b must lie in (0, 1), got {self.b}")

    @property
    def uses_evidence(self) -> bool:
        return self.kind in (StoppingKind.EPROCESS, StoppingKind.ORACLE_EPROCESS)

    @property
    def log_threshold(self) -> float:
        return log_threshold(self.K, self.delta)

    def schedule(self, true_mean: float | None = None) -> LambdaSchedule:
        """Betting schedule for one arm under this rule."""
        if self.kind is StoppingKind.ORACLE_EPROCESS:
            if true_mean is None:
                raise ValueError("the oracle e-process rule needs the arm's true mean")
            return LambdaSchedule.oracle(true_mean, self.xi, self.b)
        return LambdaSchedule.plugin(self.xi, self.b, self.prior_weight)


def judge(rule: StoppingRule, n: int, mu_hat: float,
          evidence: EvidenceState | None = None) -> Decision:
    """Label decision for one arm from its post-pull statistics.

    The confidence-bound rule labels good when the lower bound
    ``mu_hat - r(n)`` clears ``xi`` and bad when the upper bound
    ``mu_hat + r(n)`` falls below it.
    """
    kind = rule.kind
    if kind is StoppingKind.NONE:
        return Decision.NONE
    if kind is StoppingKind.CONFIDENCE_BOUND:
        if n < 1:
            raise ValueError("the confidence-bound rule needs at least one pull")
        r = confidence_radius(n, rule.K, rule.delta)
        if mu_hat - r > rule.xi:
            return Decision.GOOD
        if mu_hat + r < rule.xi:
            return Decision.BAD
        return Decision.NONE
    if evidence is None:
        raise ValueError(f"the {kind.value} rule needs an evidence state")
    return evidence.decide_log(rule.log_threshold)


def min_pulls_to_label(K: int, delta: float, b: float, xi: float) -> int:
    """Fewest pulls of an arm before either e-process can reach 2K/delta.

    Each betting factor is at most ``1 + b * max(xi/(1-xi), (1-xi)/xi)``.
    """
    top = math.log(2.0 * K / delta)
    step = math.log1p(b * max(xi / (1.0 - xi), (1.0 - xi) / xi))
    return max(1, math.ceil(top / step))
