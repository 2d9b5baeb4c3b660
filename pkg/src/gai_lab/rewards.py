"""Bounded reward generators for bandit arms.

Two stationary reward kinds are supported:

* ``bernoulli``: rewards in {0, 1} with P(1) = mean.
* ``mixture``: an equal mixture of Bernoulli(2*mean - 1/2) and Uniform(0, 1).
  Each draw consumes exactly two uniforms (fair coin, then the inner draw) so
  seeded sequences are stable.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np


class RandomSource(Protocol):
    def random(self) -> float: ...


class ArmKind(str, enum.Enum):
    BERNOULLI = "bernoulli"
    MIXTURE = "mixture"


@dataclass(frozen=True)
class ArmModel:
    """A single arm with a fixed conditional mean in [0, 1]."""

    kind: ArmKind
    mean: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", ArmKind(self.kind))
        if not 0.0 <= self.mean <= 1.0:
            raise ValueError(f"arm mean must lie in [0, 1], got {self.mean}")
        if self.kind is ArmKind.MIXTURE and not 0.25 <= self.mean <= 0.75:
            raise ValueError(
                f"mixture arms need mean in [0.25, 0.75], got {self.mean}"
            )

    @property
    def inner_p(self) -> float:
        """Success probability of the Bernoulli component of a mixture arm."""
        return 2.0 * self.mean - 0.5

    def sample(self, rng: RandomSource) -> float:
        if self.kind is ArmKind.BERNOULLI:
            return 1.0 if rng.random() < self.mean else 0.0
        coin = rng.random()
        u = rng.random()
        if coin < 0.5:
            return 1.0 if u < self.inner_p else 0.0
        return u


def sample(model: ArmModel, rng: RandomSource) -> float:
    return model.sample(rng)


@dataclass(frozen=True)
class BanditInstance:
    arms: tuple[ArmModel, ...]
    xi: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "arms", tuple(self.arms))
        if len(self.arms) < 1:
            raise ValueError("a bandit instance needs at least one arm")
        if not 0.0 < self.xi < 1.0:
            raise ValueError(f"threshold xi must lie in (0, 1), got {self.xi}")

    @classmethod
    def from_means(
        cls, means: Sequence[float], xi: float, kind: ArmKind | str = ArmKind.BERNOULLI
    ) -> "BanditInstance":
        return cls(tuple(ArmModel(ArmKind(kind), float(m)) for m in means), xi)

    @property
    def K(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> tuple[float, ...]:
        return tuple(arm.mean for arm in self.arms)

    @property
    def best_mean(self) -> float:
        return max(self.means)


def true_labels(instance: BanditInstance) -> tuple[frozenset[int], frozenset[int]]:
    """Split arm indices (0-based) into (good, bad) by ``mean > xi``."""
    good = frozenset(a for a, arm in enumerate(instance.arms) if arm.mean > instance.xi)
    bad = frozenset(range(instance.K)) - good
    return good, bad


class UniformStream:
    """Block-buffered uniform source over a numpy ``Generator``.

    Pulling Python floats one at a time from numpy is slow; this draws blocks
    and hands them out in order, so the sequence depends only on the seed.
    """

    __slots__ = ("_gen", "_block", "_buf", "_pos")

    def __init__(self, seed: int | np.random.Generator, block: int = 4096) -> None:
        self._gen = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self._block = block
        self._buf: list[float] = []
        self._pos = 0

    def random(self) -> float:
        pos = self._pos
        if pos >= len(self._buf):
            self._buf = self._gen.random(self._block).tolist()
            pos = 0
        self._pos = pos + 1
        return self._buf[pos]
