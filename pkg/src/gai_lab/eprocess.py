"""Generalized Bernoulli e-processes with predictable plug-in betting.

For each arm two test supermartingales are run in parallel, both products of
factors ``1 + lam * (x - xi)``:

* the "minus" process bets ``lam >= 0`` and accumulates evidence against
  ``mean <= xi`` (its rejection labels the arm good);
* the "plus" process bets ``lam <= 0`` and accumulates evidence against
  ``mean > xi`` (its rejection labels the arm bad).

All evidence is kept in the log domain.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_B = 0.98
# weight of the pseudo-observation at xi that seeds the plug-in mean
DEFAULT_PRIOR_WEIGHT = 1.0


def lambda_minus(mu_hat: float, xi: float, b: float) -> float:
    return min(b / xi, max((mu_hat - xi) / (xi * (1.0 - xi)), 0.0))


def lambda_plus(mu_hat: float, xi: float, b: float) -> float:
    return min(0.0, max((mu_hat - xi) / (xi * (1.0 - xi)), -b / (1.0 - xi)))


class ScheduleKind(str, enum.Enum):
    PLUGIN = "plugin"
    ORACLE = "oracle"


@dataclass(frozen=True)
class LambdaSchedule:
    """How betting fractions are chosen.

    ``PLUGIN`` plugs in the running mean of the data seen so far, seeded with
    ``prior_weight`` pseudo-observations at ``xi`` so that an unpulled arm
    reads exactly ``xi`` and early bets are damped.  ``prior_weight=0`` gives
    the raw sample mean after the first pull.  ``ORACLE`` plugs in a known
    ``mean`` once and for all.
    """

    kind: ScheduleKind = ScheduleKind.PLUGIN
    b: float = DEFAULT_B
    xi: float = 0.5
    mean: float | None = None
    prior_weight: float = DEFAULT_PRIOR_WEIGHT

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ScheduleKind(self.kind))
        if not 0.0 < self.b < 1.0:
            raise ValueError(f"truncation constant b must lie in (0, 1), got {self.b}")
        if not 0.0 < self.xi < 1.0:
            raise ValueError(f"threshold xi must lie in (0, 1), got {self.xi}")
        if self.prior_weight < 0:
            raise ValueError(f"prior_weight must be nonnegative, got {self.prior_weight}")
        if self.kind is ScheduleKind.ORACLE:
            if self.mean is None or not 0.0 <= self.mean <= 1.0:
                raise ValueError("oracle schedule needs a mean in [0, 1]")

    @classmethod
    def plugin(cls, xi: float, b: float = DEFAULT_B,
               prior_weight: float = DEFAULT_PRIOR_WEIGHT) -> "LambdaSchedule":
        return cls(ScheduleKind.PLUGIN, b, xi, None, prior_weight)

    @classmethod
    def oracle(cls, mean: float, xi: float, b: float = DEFAULT_B) -> "LambdaSchedule":
        return cls(ScheduleKind.ORACLE, b, xi, mean)


class Decision(enum.IntEnum):
    NONE = 0
    GOOD = 1  # rejected the "mean <= xi" null
    BAD = 2  # rejected the "mean > xi" null


def log_threshold(K: int, delta: float) -> float:
    """Log of the union-bounded rejection level 2K/delta."""
    return math.log(2.0 * K / delta)


class EvidenceState:
    """Per-arm pair of log e-processes plus the running mean that drives them."""

    __slots__ = ("schedule", "log_e_minus", "log_e_plus", "n", "running_sum", "mean",
                 "_xi", "_b", "_w", "_fixed")

    def __init__(self, schedule: LambdaSchedule) -> None:
        self.schedule = schedule
        self._xi = schedule.xi
        self._b = schedule.b
        self._w = schedule.prior_weight
        if schedule.kind is ScheduleKind.ORACLE:
            self._fixed = (
                lambda_minus(schedule.mean, schedule.xi, schedule.b),
                lambda_plus(schedule.mean, schedule.xi, schedule.b),
            )
        else:
            self._fixed = None
        self.reset()

    def reset(self) -> "EvidenceState":
        self.log_e_minus = 0.0
        self.log_e_plus = 0.0
        self.n = 0
        self.running_sum = 0.0
        # an unpulled arm reads as sitting exactly on the threshold
        self.mean = self._xi
        return self

    def lambdas(self) -> tuple[float, float]:
        """Betting fractions for the next observation (uses data before it)."""
        if self._fixed is not None:
            return self._fixed
        return (lambda_minus(self.mean, self._xi, self._b),
                lambda_plus(self.mean, self._xi, self._b))

    def update(self, x: float) -> "EvidenceState":
        lam_m, lam_p = self.lambdas()
        dx = x - self._xi
        if lam_m != 0.0:
            self.log_e_minus += math.log1p(lam_m * dx)
        if lam_p != 0.0:
            self.log_e_plus += math.log1p(lam_p * dx)
        self.n += 1
        self.running_sum += x
        w = self._w
        self.mean = (self.running_sum + w * self._xi) / (self.n + w)
        return self

    def decide(self, K: int, delta: float) -> Decision:
        return self.decide_log(log_threshold(K, delta))

    def decide_log(self, log_thr: float) -> Decision:
        # >= for the good label and strict > for the bad label, as in the algorithm
        if self.log_e_minus >= log_thr:
            return Decision.GOOD
        if self.log_e_plus > log_thr:
            return Decision.BAD
        return Decision.NONE

    def copy(self) -> "EvidenceState":
        other = EvidenceState.__new__(EvidenceState)
        for name in EvidenceState.__slots__:
            setattr(other, name, getattr(self, name))
        return other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EvidenceState):
            return NotImplemented
        return all(getattr(self, s) == getattr(other, s) for s in EvidenceState.__slots__)

    def __repr__(self) -> str:
        return (f"EvidenceState(n={self.n}, mean={self.mean:.6g}, "
                f"log_e_minus={self.log_e_minus:.6g}, log_e_plus={self.log_e_plus:.6g})")


def update(state: EvidenceState, x: float) -> EvidenceState:
    return state.update(x)


def decide(state: EvidenceState, K: int, delta: float) -> Decision:
    return state.decide(K, delta)


def reset(state: EvidenceState) -> EvidenceState:
    return state.reset()


class BatchEvidence:
    """Vectorised e-processes for many independent single-arm streams.

    Every row sees one observation per call column, so all rows share the
    same pull count.  Used for the long null and e-power simulations where a
    per-observation Python loop would be far too slow.
    """

    def __init__(self, n_streams: int, schedule: LambdaSchedule) -> None:
        self.schedule = schedule
        self.n = 0
        self.sums = np.zeros(n_streams)
        self.log_e_minus = np.zeros(n_streams)
        self.log_e_plus = np.zeros(n_streams)

    def extend(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Feed ``x`` (shape ``(n_streams, steps)``); return both log paths."""
        x = np.asarray(x, dtype=float)
        xi, b = self.schedule.xi, self.schedule.b
        steps = x.shape[1]
        dx = x - xi
        if self.schedule.kind is ScheduleKind.ORACLE:
            lam_m = np.full_like(x, lambda_minus(self.schedule.mean, xi, b))
            lam_p = np.full_like(x, lambda_plus(self.schedule.mean, xi, b))
        else:
            csum = np.cumsum(x, axis=1)
            prev = np.empty_like(x)
            prev[:, 0] = self.sums
            prev[:, 1:] = self.sums[:, None] + csum[:, :-1]
            w = self.schedule.prior_weight
            counts = self.n + np.arange(steps, dtype=float)
            with np.errstate(invalid="ignore", divide="ignore"):
                mu_prev = np.where(counts > 0, (prev + w * xi) / (counts + w), xi)
            raw = (mu_prev - xi) / (xi * (1.0 - xi))
            lam_m = np.clip(raw, 0.0, b / xi)
            lam_p = np.clip(raw, -b / (1.0 - xi), 0.0)
        path_m = self.log_e_minus[:, None] + np.cumsum(np.log1p(lam_m * dx), axis=1)
        path_p = self.log_e_plus[:, None] + np.cumsum(np.log1p(lam_p * dx), axis=1)
        self.log_e_minus = path_m[:, -1].copy()
        self.log_e_plus = path_p[:, -1].copy()
        self.sums = self.sums + x.sum(axis=1)
        self.n += steps
        return path_m, path_p


def log_evidence_paths(
    x: np.ndarray, schedule: LambdaSchedule
) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative log e-process paths for one stream of observations."""
    batch = BatchEvidence(1, schedule)
    path_m, path_p = batch.extend(np.asarray(x, dtype=float)[None, :])
    return path_m[0], path_p[0]
