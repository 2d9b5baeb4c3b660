"""Arm-selection rules restricted to the currently unlabeled arms."""
from __future__ import annotations

import enum
import math
from typing import Callable, Iterable, Sequence

from .rewards import BanditInstance

DEFAULT_ALPHA = 0.05


class PolicyKind(str, enum.Enum):
    MOSS = "moss"
    UCB = "ucb"
    HDOC = "hdoc"
    LUCB_G = "lucb_g"
    APT_G = "apt_g"
    ORACLE = "oracle"


def moss_index(mu_hat: float, n: int, t: int, K: int, alpha: float) -> float:
    return mu_hat + math.sqrt((1.0 + alpha) / 2.0 * max(0.0, math.log(t / (K * n))) / n)


def ucb_index(mu_hat: float, n: int, t: int) -> float:
    lt = math.log(t)
    return mu_hat + math.sqrt(math.log(1.0 + t * lt * lt) / (2.0 * n))


def hdoc_index(mu_hat: float, n: int, t: int) -> float:
    return mu_hat + math.sqrt(math.log(t) / (2.0 * n))


def lucb_g_index(mu_hat: float, n: int, K: int, alpha: float) -> float:
    return mu_hat + math.sqrt(math.log(4.0 * K * n * n / alpha) / (2.0 * n))


def apt_g_index(mu_hat: float, n: int, xi: float) -> float:
    return math.sqrt(n) * abs(xi - mu_hat)


class PolicyState:
    """Sufficient statistics plus the index rule of one sampling policy.

    ``t`` is the global round about to be played (1 before any pull).  Arms
    that have never been pulled are always chosen first, lowest index first;
    this is the "sample each arm once" start and also the restart after a
    reset.  The oracle ignores statistics and needs no such start.
    """

    def __init__(
        self,
        kind: PolicyKind | str,
        K: int,
        *,
        alpha: float = DEFAULT_ALPHA,
        xi: float = 0.5,
        means: Sequence[float] | None = None,
    ) -> None:
        self.kind = PolicyKind(kind)
        if K < 1:
            raise ValueError("K must be positive")
        if alpha <= 0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        self.K = K
        self.alpha = alpha
        self.xi = xi
        self.pulls = [0] * K
        self.sums = [0.0] * K
        self.t = 1
        if self.kind is PolicyKind.ORACLE:
            if means is None or len(means) != K:
                raise ValueError("the oracle policy needs the K true means")
            self.means = tuple(float(m) for m in means)
        else:
            self.means = None
        self._index = self._make_index()

    @classmethod
    def for_instance(cls, kind: PolicyKind | str, instance: BanditInstance,
                     alpha: float = DEFAULT_ALPHA) -> "PolicyState":
        return cls(kind, instance.K, alpha=alpha, xi=instance.xi, means=instance.means)

    @property
    def needs_initialization(self) -> bool:
        return self.kind is not PolicyKind.ORACLE

    def _make_index(self) -> Callable[[float, int, int], float]:
        K, alpha, xi = self.K, self.alpha, self.xi
        kind = self.kind
        if kind is PolicyKind.MOSS:
            return lambda m, n, t: moss_index(m, n, t, K, alpha)
        if kind is PolicyKind.UCB:
            return ucb_index
        if kind is PolicyKind.HDOC:
            return hdoc_index
        if kind is PolicyKind.LUCB_G:
            return lambda m, n, t: lucb_g_index(m, n, K, alpha)
        if kind is PolicyKind.APT_G:
            # negated so that every rule is an argmax
            return lambda m, n, t: -apt_g_index(m, n, xi)
        return None  # type: ignore[return-value]

    def mean_estimate(self, arm: int) -> float:
        n = self.pulls[arm]
        return self.sums[arm] / n if n else self.xi

    def index(self, arm: int) -> float:
        """Raw index of ``arm`` (APT-G returns its un-negated score)."""
        if self.kind is PolicyKind.ORACLE:
            return self.means[arm]
        n = self.pulls[arm]
        if n == 0:
            return math.inf
        value = self._index(self.sums[arm] / n, n, self.t)
        return -value if self.kind is PolicyKind.APT_G else value

    def select(self, unlabeled: Iterable[int]) -> int:
        arms = sorted(unlabeled)
        if not arms:
            raise ValueError("select called with no unlabeled arms")
        return self.select_sorted(arms)

    def select_sorted(self, arms: Sequence[int]) -> int:
        """``select`` for a nonempty, ascending list of arms (no checks)."""
        if self.kind is PolicyKind.ORACLE:
            means = self.means
            best = arms[0]
            for a in arms:
                if means[a] > means[best]:
                    best = a
            return best
        pulls, sums, t, index = self.pulls, self.sums, self.t, self._index
        best = -1
        best_val = -math.inf
        for a in arms:
            n = pulls[a]
            if n == 0:
                return a
            val = index(sums[a] / n, n, t)
            if val > best_val:
                best, best_val = a, val
        return best

    def observe(self, arm: int, x: float) -> "PolicyState":
        self.pulls[arm] += 1
        self.sums[arm] += x
        self.t += 1
        return self

    def restart(self, arms: Iterable[int]) -> None:
        """Forget the statistics of ``arms`` and restart the round clock."""
        for a in arms:
            self.pulls[a] = 0
            self.sums[a] = 0.0
        self.t = 1


def select(state: PolicyState, unlabeled: Iterable[int]) -> int:
    return state.select(unlabeled)


def observe(state: PolicyState, arm: int, x: float) -> PolicyState:
    return state.observe(arm, x)


def regret_anomaly_rate(traces: Sequence, instance: BanditInstance, t: int) -> float:
    """Fraction of traces whose round-``t`` action is not the best arm.

    Only traces that lasted at least ``t`` rounds are counted.  Returns 0.0
    when none did.
    """
    if t < 1:
        raise ValueError("t must be a positive round number")
    means = instance.means
    best = max(range(instance.K), key=lambda a: (means[a], -a))
    considered = misses = 0
    for trace in traces:
        actions = getattr(trace, "actions", None)
        if actions is None:
            raise ValueError("trace has no action log; run with log_actions=True")
        if len(actions) >= t:
            considered += 1
            misses += actions[t - 1] != best
    return misses / considered if considered else 0.0
