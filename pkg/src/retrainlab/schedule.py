"""Linear decay of the restart mixing probability and the restart coin flip."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EpsSchedule:
    """Mixing probability: starts at 1.0, decays linearly to min_eps over
    decay_fraction of the total environment steps, then stays flat."""

    min_eps: float
    decay_fraction: float
    total_steps: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.min_eps <= 1.0:
            raise ValueError("min_eps must lie in [0, 1]")
        if not 0.0 < self.decay_fraction <= 1.0:
            raise ValueError("decay_fraction must lie in (0, 1]")
        if self.total_steps < 1:
            raise ValueError("total_steps must be >= 1")

    @property
    def eps_decay(self) -> float:
        """Per-step slope; <= 0 since the schedule never increases."""
        return (self.min_eps - 1.0) / (self.decay_fraction * self.total_steps)


def eps_at(schedule: EpsSchedule, global_step: int) -> float:
    """Mixing probability at a global environment-step count."""
    if global_step < 0:
        raise ValueError("global_step must be >= 0")
    return max(schedule.eps_decay * global_step + 1.0, schedule.min_eps)


def should_retrain(eps: float, buffer_nonempty: bool, rng: np.random.Generator) -> bool:
    """Restart coin: true with probability eps, and never on an empty buffer.

    The draw is consumed even when the buffer is empty so the coin stream
    advances identically regardless of buffer contents.
    """
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    draw = rng.random()
    return (draw < eps) and buffer_nonempty
