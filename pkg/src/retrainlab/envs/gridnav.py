"""2-D navigation: unicycle robot, fixed goal, axis-aligned obstacles.

Observation (all in [0, 1]): normalized goal distance, goal bearing relative
to heading, and 8 body-relative lidar ray distances. Touching an obstacle or
wall triggers the indicator cost and blocks the move.

Reset-to-state reconstructs a pose from an observation vector: goal distance
and bearing pin the robot to a circle around the goal; the angular position
on that circle is chosen to best match the requested lidar pattern. The
requested observation is then served verbatim until the first step.
"""
from __future__ import annotations

import math

import numpy as np

from ..intervals import Box
from .base import CONTINUOUS, Env, EnvSpec, InvalidStateError, StepResult

ARENA = 1.0
ROBOT_RADIUS = 0.02
LIDAR_MAX = 0.5
N_RAYS = 8
V_MAX = 0.02  # translation per step at full throttle
W_MAX = 0.4  # heading change per step at full throttle (rad)
GOAL_RADIUS = 0.05
GOAL_BONUS = 1.0
DIAG = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi

_RAY_OFFSETS = np.arange(N_RAYS) * (TWO_PI / N_RAYS)
_PHI_GRID = np.linspace(0.0, TWO_PI, 720, endpoint=False)

DEFAULT_OBSTACLES = (
    (0.30, 0.30, 0.45, 0.70),
    (0.55, 0.10, 0.70, 0.25),
    (0.15, 0.80, 0.35, 0.90),
    (0.60, 0.45, 0.90, 0.55),
)
DEFAULT_GOAL = (0.75, 0.75)


def _wrap(angle: float) -> float:
    return (angle + math.pi) % TWO_PI - math.pi


class GridNavEnv(Env):
    def __init__(
        self,
        obstacles=DEFAULT_OBSTACLES,
        goal=DEFAULT_GOAL,
        horizon: int = 500,
        reward_penalty: float = 0.1,
        cost_threshold: float = 20.0,
        penalty_active: bool = True,
    ):
        self.goal = np.asarray(goal, dtype=np.float64)
        rects = np.asarray(obstacles, dtype=np.float64).reshape(-1, 4)
        self.rect_lo = np.ascontiguousarray(rects[:, :2])
        self.rect_hi = np.ascontiguousarray(rects[:, 2:])
        if (self.rect_lo >= self.rect_hi).any():
            raise ValueError("obstacle rectangles must have positive extent")
        if self._contact(self.goal[0], self.goal[1]):
            raise ValueError("goal must lie in free space")
        self.penalty_active = penalty_active
        self.spec = EnvSpec(
            name="gridnav",
            obs_dim=2 + N_RAYS,
            act_dim=2,
            action_kind=CONTINUOUS,
            space_bounds=Box(np.zeros(2 + N_RAYS), np.ones(2 + N_RAYS)),
            horizon=horizon,
            reward_penalty=reward_penalty,
            cost_threshold=cost_threshold,
            default_omega=0.025,
        )
        self._x = self._y = 0.1
        self._th = 0.0
        self._t = 0
        self._obs_cache: np.ndarray | None = None

    # -- geometry ------------------------------------------------------

    def _contact(self, x: float, y: float) -> bool:
        r = ROBOT_RADIUS
        if x < r or x > ARENA - r or y < r or y > ARENA - r:
            return True
        cx = np.clip(x, self.rect_lo[:, 0], self.rect_hi[:, 0])
        cy = np.clip(y, self.rect_lo[:, 1], self.rect_hi[:, 1])
        return bool((((cx - x) ** 2 + (cy - y) ** 2) < r * r).any())

    def _ray_distances(self, pos: np.ndarray, dirs: np.ndarray) -> np.ndarray:
        """Distance along each ray to the first obstacle or wall surface."""
        d = np.where(np.abs(dirs) < 1e-12, np.where(dirs >= 0, 1e-12, -1e-12), dirs)
        t_hi = (ARENA - pos) / d
        t_lo = (0.0 - pos) / d
        best = np.minimum(
            np.where(t_hi > 0, t_hi, np.inf).min(axis=-1),
            np.where(t_lo > 0, t_lo, np.inf).min(axis=-1),
        )
        t1 = (self.rect_lo - pos[..., None, :]) / d[..., None, :]
        t2 = (self.rect_hi - pos[..., None, :]) / d[..., None, :]
        tmin = np.minimum(t1, t2).max(axis=-1)
        tmax = np.maximum(t1, t2).min(axis=-1)
        entry = np.maximum(tmin, 0.0)
        t_hit = np.where(tmax >= entry, entry, np.inf)
        return np.minimum(best, t_hit.min(axis=-1))

    def _lidar(self, x: float, y: float, th: float) -> np.ndarray:
        angles = th + _RAY_OFFSETS
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
        t = self._ray_distances(np.array([x, y]), dirs)
        return np.minimum(t, LIDAR_MAX) / LIDAR_MAX

    def _observe_at(self, x: float, y: float, th: float) -> np.ndarray:
        dx, dy = self.goal[0] - x, self.goal[1] - y
        dist = math.hypot(dx, dy)
        bearing = _wrap(math.atan2(dy, dx) - th)
        head = np.array([min(dist / DIAG, 1.0), bearing / TWO_PI + 0.5])
        return np.concatenate([head, self._lidar(x, y, th)])

    def _goal_dist(self) -> float:
        return math.hypot(self.goal[0] - self._x, self.goal[1] - self._y)

    # -- Env interface --------------------------------------------------

    def reset_uniform(self, rng: np.random.Generator) -> np.ndarray:
        while True:
            x = rng.uniform(ROBOT_RADIUS, ARENA - ROBOT_RADIUS)
            y = rng.uniform(ROBOT_RADIUS, ARENA - ROBOT_RADIUS)
            if self._contact(x, y):
                continue
            if math.hypot(self.goal[0] - x, self.goal[1] - y) < GOAL_RADIUS:
                continue
            break
        self._x, self._y = x, y
        self._th = rng.uniform(-math.pi, math.pi)
        self._t = 0
        self._obs_cache = None
        return self.observe()

    def reset_to(self, state: np.ndarray) -> np.ndarray:
        state = np.asarray(state, dtype=np.float64)
        if state.shape != (self.spec.obs_dim,):
            raise InvalidStateError(f"expected a {self.spec.obs_dim}-dim observation state")
        if (state < 0).any() or (state > 1).any():
            raise InvalidStateError("observation components must lie in [0, 1]")
        dist = float(state[0]) * DIAG
        if dist < GOAL_RADIUS:
            raise InvalidStateError("state starts inside the goal region")
        bearing = (float(state[1]) - 0.5) * TWO_PI
        phi = self._reconstruct_phi(dist, bearing, state[2:])
        if phi is None:
            raise InvalidStateError("no collision-free pose matches the state")
        self._x = self.goal[0] + dist * math.cos(phi)
        self._y = self.goal[1] + dist * math.sin(phi)
        self._th = _wrap(phi + math.pi - bearing)
        self._t = 0
        self._obs_cache = state.copy()
        return self.observe()

    def _reconstruct_phi(self, dist: float, bearing: float, lidar_target: np.ndarray):
        """Angular position around the goal whose pose best matches the
        requested lidar pattern; None when the whole circle is blocked."""
        pos = self.goal + dist * np.stack([np.cos(_PHI_GRID), np.sin(_PHI_GRID)], axis=-1)
        r = ROBOT_RADIUS
        ok = (pos >= r).all(axis=1) & (pos <= ARENA - r).all(axis=1)
        cx = np.clip(pos[:, 0:1], self.rect_lo[None, :, 0], self.rect_hi[None, :, 0])
        cy = np.clip(pos[:, 1:2], self.rect_lo[None, :, 1], self.rect_hi[None, :, 1])
        clear = (((cx - pos[:, 0:1]) ** 2 + (cy - pos[:, 1:2]) ** 2) >= r * r).all(axis=1)
        ok &= clear
        if not ok.any():
            return None

        th = (_PHI_GRID + math.pi - bearing)[:, None] + _RAY_OFFSETS[None, :]
        dirs = np.stack([np.cos(th), np.sin(th)], axis=-1)  # (P, 8, 2)
        t = self._ray_distances(pos[:, None, :], dirs)
        readings = np.minimum(t, LIDAR_MAX) / LIDAR_MAX
        score = ((readings - lidar_target) ** 2).sum(axis=1)
        score[~ok] = np.inf
        best = int(np.argmin(score))

        def eval_phi(phi: float) -> float:
            x = self.goal[0] + dist * math.cos(phi)
            y = self.goal[1] + dist * math.sin(phi)
            if self._contact(x, y):
                return math.inf
            lid = self._lidar(x, y, _wrap(phi + math.pi - bearing))
            return float(((lid - lidar_target) ** 2).sum())

        span = TWO_PI / _PHI_GRID.size
        lo, hi = _PHI_GRID[best] - span, _PHI_GRID[best] + span
        inv_gr = (math.sqrt(5.0) - 1.0) / 2.0
        a, b = lo, hi
        c = b - inv_gr * (b - a)
        e = a + inv_gr * (b - a)
        fc, fe = eval_phi(c), eval_phi(e)
        for _ in range(48):
            if fc < fe:
                b, e, fe = e, c, fc
                c = b - inv_gr * (b - a)
                fc = eval_phi(c)
            else:
                a, c, fc = c, e, fe
                e = a + inv_gr * (b - a)
                fe = eval_phi(e)
        phi = (a + b) / 2.0
        if not math.isfinite(eval_phi(phi)):
            phi = float(_PHI_GRID[best])
            if not math.isfinite(eval_phi(phi)):
                return None
        return phi

    def observe(self) -> np.ndarray:
        if self._obs_cache is not None:
            return self._obs_cache.copy()
        return self._observe_at(self._x, self._y, self._th)

    def step(self, action) -> StepResult:
        a = np.clip(np.asarray(action, dtype=np.float64).reshape(-1)[:2], -1.0, 1.0)
        self._obs_cache = None
        self._th = _wrap(self._th + float(a[1]) * W_MAX)
        v = float(a[0]) * V_MAX
        nx = self._x + v * math.cos(self._th)
        ny = self._y + v * math.sin(self._th)
        old_dist = self._goal_dist()
        cost = 0
        if self._contact(nx, ny):
            cost = 1  # move blocked at the contact attempt
        else:
            self._x, self._y = nx, ny
        new_dist = self._goal_dist()
        reward = (old_dist - new_dist) / V_MAX
        reached = new_dist < GOAL_RADIUS
        if reached:
            reward += GOAL_BONUS
        if cost and self.penalty_active:
            reward -= self.spec.reward_penalty
        self._t += 1
        done = reached or self._t >= self.spec.horizon
        return StepResult(obs=self.observe(), reward=reward, cost=cost, done=done)
