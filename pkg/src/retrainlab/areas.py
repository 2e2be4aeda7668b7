"""Violation-area collection: bubble generation, similarity refinement,
and the bounded area buffer behind the mixed restart distribution.

Every time the environment flags an unsafe step, the state that led to it
is inflated into a box ("bubble") of half-width omega, clipped to the
state-space bounds. A new bubble either merges into the first stored area
it is beta-similar to, or is appended; at capacity the oldest area is
evicted first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .intervals import Box, DimensionMismatchError, contains, merge, sample_uniform, similar

MERGED = "merged"
APPENDED = "appended"
EVICTED_APPENDED = "evicted+appended"


@dataclass
class RetrainArea:
    box: Box
    hits: int
    created_step: int


def generate_retrain_area(state, omega: float, space_bounds: Box) -> Box:
    """Box of half-width omega around a state, clipped to the space bounds."""
    if omega < 0:
        raise ValueError("bubble half-width omega must be >= 0")
    state = np.asarray(state, dtype=np.float64)
    if not contains(space_bounds, state):
        raise ValueError("state lies outside the state-space bounds")
    lo = np.maximum(state - omega, space_bounds.lo)
    hi = np.minimum(state + omega, space_bounds.hi)
    return Box(lo, hi)


class AreaBuffer:
    """Bounded list of violation areas with merge-on-insert refinement."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.areas: list[RetrainArea] = []

    def __len__(self) -> int:
        return len(self.areas)

    def insert_with_refinement(self, candidate: Box, beta: float, created_step: int) -> str:
        """Insert a candidate area, merging into the first beta-similar one.

        Exactly one merge happens per insert (no cascading); a fresh append
        that would exceed capacity first evicts the oldest area.
        Returns one of MERGED, APPENDED, EVICTED_APPENDED.
        """
        if self.areas and candidate.ndim != self.areas[0].box.ndim:
            raise DimensionMismatchError(
                f"candidate dimension {candidate.ndim} does not match buffer {self.areas[0].box.ndim}"
            )
        for area in self.areas:
            if similar(candidate, area.box, beta):
                area.box = merge(candidate, area.box)
                area.hits += 1
                return MERGED
        outcome = APPENDED
        if len(self.areas) >= self.capacity:
            oldest = min(range(len(self.areas)), key=lambda i: self.areas[i].created_step)
            self.areas.pop(oldest)
            outcome = EVICTED_APPENDED
        self.areas.append(RetrainArea(box=candidate, hits=1, created_step=created_step))
        return outcome

    def sample_restart_state(self, rng: np.random.Generator) -> np.ndarray:
        """Pick an area uniformly (one vote each), then a state uniformly in it."""
        if not self.areas:
            raise ValueError("cannot sample a restart state from an empty buffer")
        idx = int(rng.integers(len(self.areas)))
        return sample_uniform(self.areas[idx].box, rng)

    def dump_jsonl(self, path) -> None:
        import json

        with open(path, "w", encoding="utf-8") as fh:
            for area in self.areas:
                row = {
                    "lo": area.box.lo.tolist(),
                    "hi": area.box.hi.tolist(),
                    "hits": area.hits,
                    "created_step": area.created_step,
                }
                fh.write(json.dumps(row) + "\n")

    @classmethod
    def load_jsonl(cls, path, capacity: int | None = None) -> AreaBuffer:
        import json

        areas = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                obj = json.loads(line)
                areas.append(
                    RetrainArea(
                        box=Box(obj["lo"], obj["hi"]),
                        hits=int(obj["hits"]),
                        created_step=int(obj["created_step"]),
                    )
                )
        buf = cls(capacity=capacity if capacity is not None else max(1, len(areas)))
        buf.areas = areas
        return buf


def load_boxes_jsonl(path) -> list[Box]:
    """Read the boxes of an area dump, ignoring hit counts (verifier input)."""
    return [area.box for area in AreaBuffer.load_jsonl(path).areas]


def boxes(areas: Iterable[RetrainArea]) -> list[Box]:
    return [a.box for a in areas]
