"""Environment protocol: resettable, reset-to-state capable, indicator costs."""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from ..intervals import Box

CONTINUOUS = "continuous"
DISCRETE = "discrete"


class InvalidStateError(ValueError):
    """A requested restart state is outside the valid state set."""


@dataclass(frozen=True)
class StepResult:
    obs: np.ndarray
    reward: float
    cost: int  # indicator: 1 on a behavioral violation, else 0
    done: bool


@dataclass(frozen=True)
class EnvSpec:
    name: str
    obs_dim: int
    act_dim: int
    action_kind: str  # CONTINUOUS or DISCRETE
    space_bounds: Box
    horizon: int
    reward_penalty: float
    cost_threshold: float
    default_omega: float


class Env(ABC):
    """Deterministic dynamics; randomness enters only through reset rngs."""

    spec: EnvSpec

    @abstractmethod
    def reset_uniform(self, rng: np.random.Generator) -> np.ndarray:
        """Start a fresh episode from the uniform restart distribution."""

    @abstractmethod
    def reset_to(self, state: np.ndarray) -> np.ndarray:
        """Start a fresh episode at a specific state; raises InvalidStateError."""

    @abstractmethod
    def observe(self) -> np.ndarray:
        """Current observation without advancing the environment."""

    @abstractmethod
    def step(self, action) -> StepResult:
        """Advance one step; continuous actions are clamped to the action box."""
