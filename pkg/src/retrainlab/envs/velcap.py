"""1-D point mass rewarded for forward progress, with a velocity cap.

Exceeding the cap triggers the indicator cost; in unconstrained mode the
reward additionally takes a fixed penalty. Observation (position, velocity)
is the full internal state, so reset-to-state is exact.
"""
from __future__ import annotations

import numpy as np

from ..intervals import Box, contains
from .base import CONTINUOUS, Env, EnvSpec, InvalidStateError, StepResult

X_MAX = 100.0
V_LIM = 2.0
DT = 0.1
FORCE_SCALE = 2.0
DRAG = 0.5
RESET_X_MAX = 50.0
RESET_V_MAX = 0.25


class VelCapEnv(Env):
    def __init__(
        self,
        v_cap: float = 0.7402,
        horizon: int = 200,
        reward_penalty: float = 0.1,
        cost_threshold: float = 5.0,
        penalty_active: bool = True,
    ):
        self.v_cap = v_cap
        self.penalty_active = penalty_active
        self.spec = EnvSpec(
            name="velcap",
            obs_dim=2,
            act_dim=1,
            action_kind=CONTINUOUS,
            space_bounds=Box([0.0, -V_LIM], [X_MAX, V_LIM]),
            horizon=horizon,
            reward_penalty=reward_penalty,
            cost_threshold=cost_threshold,
            default_omega=0.01,
        )
        self._x = 0.0
        self._v = 0.0
        self._t = 0

    def _obs(self) -> np.ndarray:
        return np.array([self._x, self._v])

    def reset_uniform(self, rng: np.random.Generator) -> np.ndarray:
        self._x = rng.uniform(0.0, RESET_X_MAX)
        self._v = rng.uniform(-RESET_V_MAX, RESET_V_MAX)
        self._t = 0
        return self._obs()

    def reset_to(self, state: np.ndarray) -> np.ndarray:
        state = np.asarray(state, dtype=np.float64)
        if state.shape != (2,):
            raise InvalidStateError("expected a (position, velocity) state")
        if not contains(self.spec.space_bounds, state):
            raise InvalidStateError(f"state {state} outside the track bounds")
        self._x, self._v = float(state[0]), float(state[1])
        self._t = 0
        return self._obs()

    def observe(self) -> np.ndarray:
        return self._obs()

    def step(self, action) -> StepResult:
        a = float(np.clip(np.asarray(action, dtype=np.float64).reshape(-1)[0], -1.0, 1.0))
        old_x = self._x
        self._v = float(np.clip(self._v + (a * FORCE_SCALE - DRAG * self._v) * DT, -V_LIM, V_LIM))
        self._x = float(np.clip(self._x + self._v * DT, 0.0, X_MAX))
        self._t += 1
        cost = 1 if self._v > self.v_cap else 0
        reward = (self._x - old_x) / (V_LIM * DT)
        if cost and self.penalty_active:
            reward -= self.spec.reward_penalty
        done = self._t >= self.spec.horizon
        return StepResult(obs=self._obs(), reward=reward, cost=cost, done=done)
