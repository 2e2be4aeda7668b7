"""Discrete chain with known transition structure, for exact-oracle tests.

States 0..n-1 observed one-hot; moving right is rewarded by the position
gain plus a terminal bonus at the right end. No cost channel.
"""
from __future__ import annotations

import numpy as np

from ..intervals import Box
from .base import DISCRETE, Env, EnvSpec, InvalidStateError, StepResult

LEFT, RIGHT = 0, 1
TERMINAL_BONUS = 1.0


class ChainEnv(Env):
    def __init__(self, n_states: int = 8, horizon: int = 32):
        if n_states < 2:
            raise ValueError("chain needs at least 2 states")
        self.n = n_states
        self.spec = EnvSpec(
            name="chain",
            obs_dim=n_states,
            act_dim=2,
            action_kind=DISCRETE,
            space_bounds=Box(np.zeros(n_states), np.ones(n_states)),
            horizon=horizon,
            reward_penalty=0.0,
            cost_threshold=float("inf"),
            default_omega=0.0,
        )
        self._state = 0
        self._t = 0

    def _obs(self) -> np.ndarray:
        obs = np.zeros(self.n)
        obs[self._state] = 1.0
        return obs

    def reset_uniform(self, rng: np.random.Generator) -> np.ndarray:
        self._state = int(rng.integers(self.n - 1))  # never start terminal
        self._t = 0
        return self._obs()

    def reset_to(self, state: np.ndarray) -> np.ndarray:
        state = np.asarray(state, dtype=np.float64)
        if state.shape != (self.n,):
            raise InvalidStateError(f"expected a {self.n}-dim one-hot state")
        idx = int(np.argmax(state))
        if state[idx] <= 0.0 or idx >= self.n - 1:
            raise InvalidStateError(f"state index {idx} is not a valid start")
        self._state = idx
        self._t = 0
        return self._obs()

    def observe(self) -> np.ndarray:
        return self._obs()

    def step(self, action) -> StepResult:
        a = int(action)
        nxt = self.transition(self._state, a)
        reward = self.reward(self._state, a)
        self._state = nxt
        self._t += 1
        done = nxt == self.n - 1 or self._t >= self.spec.horizon
        return StepResult(obs=self._obs(), reward=reward, cost=0, done=done)

    # Exact model, exposed for dynamic-programming oracles.

    def transition(self, state: int, action: int) -> int:
        if action == RIGHT:
            return min(state + 1, self.n - 1)
        return max(state - 1, 0)

    def reward(self, state: int, action: int) -> float:
        nxt = self.transition(state, action)
        r = (nxt - state) / (self.n - 1)
        if nxt == self.n - 1 and state != self.n - 1:
            r += TERMINAL_BONUS
        return r

    def optimal_return(self, horizon: int | None = None, gamma: float = 1.0) -> float:
        """Expected optimal return under the uniform start distribution,
        by exact finite-horizon dynamic programming."""
        h = self.spec.horizon if horizon is None else horizon
        values = self.optimal_values(h, gamma)
        return float(np.mean(values[: self.n - 1]))

    def optimal_values(self, horizon: int, gamma: float = 1.0) -> np.ndarray:
        v = np.zeros(self.n)
        for _ in range(horizon):
            nv = np.zeros(self.n)
            for s in range(self.n - 1):  # terminal state absorbs with 0
                nv[s] = max(
                    self.reward(s, a) + gamma * v[self.transition(s, a)] for a in (LEFT, RIGHT)
                )
            v = nv
        return v
