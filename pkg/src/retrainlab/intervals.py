"""Closed intervals and axis-aligned boxes over state features.

The only algebra implemented is the part the restart machinery and the
verifier need: endpoint distance, per-dimension similarity, interval-hull
merge, uniform sampling, and the widest-dimension split heuristic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np


class DimensionMismatchError(ValueError):
    """Two boxes of different dimensionality were combined."""


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi]; endpoints finite, lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError(f"interval endpoints must be finite, got [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"interval lower bound {self.lo} exceeds upper bound {self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo


class Box:
    """Axis-aligned box: one closed interval per feature dimension."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ValueError("box bounds must be 1-D arrays of equal length")
        if lo.size == 0:
            raise ValueError("box must have at least one dimension")
        if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
            raise ValueError("box bounds must be finite")
        if (lo > hi).any():
            bad = int(np.argmax(lo > hi))
            raise ValueError(f"dimension {bad}: lower bound {lo[bad]} exceeds upper bound {hi[bad]}")
        self.lo = lo
        self.hi = hi
        self.lo.flags.writeable = False
        self.hi.flags.writeable = False

    @classmethod
    def from_intervals(cls, intervals) -> Box:
        return cls([iv.lo for iv in intervals], [iv.hi for iv in intervals])

    @property
    def ndim(self) -> int:
        return self.lo.size

    def __len__(self) -> int:
        return self.lo.size

    def __getitem__(self, i: int) -> Interval:
        return Interval(float(self.lo[i]), float(self.hi[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return (
            self.lo.shape == other.lo.shape
            and bool((self.lo == other.lo).all())
            and bool((self.hi == other.hi).all())
        )

    def __repr__(self) -> str:
        dims = ", ".join(f"[{lo:g}, {hi:g}]" for lo, hi in zip(self.lo, self.hi))
        return f"Box({dims})"

    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    def to_json(self) -> str:
        return json.dumps({"lo": self.lo.tolist(), "hi": self.hi.tolist()})

    @classmethod
    def from_json(cls, text: str) -> Box:
        obj = json.loads(text)
        return cls(obj["lo"], obj["hi"])


def _check_dims(x: Box, y: Box) -> None:
    if x.ndim != y.ndim:
        raise DimensionMismatchError(f"box dimensions differ: {x.ndim} vs {y.ndim}")


def distance(a: Interval, b: Interval) -> float:
    """Endpoint distance: max of the absolute lower- and upper-bound gaps."""
    return max(abs(a.lo - b.lo), abs(a.hi - b.hi))


def box_distances(x: Box, y: Box) -> np.ndarray:
    """Per-dimension endpoint distances between two boxes."""
    _check_dims(x, y)
    return np.maximum(np.abs(x.lo - y.lo), np.abs(x.hi - y.hi))


def similar(x: Box, y: Box, beta: float) -> bool:
    """True iff every per-dimension endpoint distance is <= beta."""
    if beta < 0:
        raise ValueError("similarity threshold must be >= 0")
    return bool((box_distances(x, y) <= beta).all())


def merge(x: Box, y: Box) -> Box:
    """Per-dimension interval hull: smallest box containing both inputs."""
    _check_dims(x, y)
    return Box(np.minimum(x.lo, y.lo), np.maximum(x.hi, y.hi))


def contains(box: Box, point) -> bool:
    point = np.asarray(point, dtype=np.float64)
    if point.shape != box.lo.shape:
        raise DimensionMismatchError(f"point dimension {point.shape} does not match box {box.lo.shape}")
    return bool((point >= box.lo).all() and (point <= box.hi).all())


def sample_uniform(box: Box, rng: np.random.Generator) -> np.ndarray:
    """Draw one point uniformly from the box; degenerate dims return lo exactly."""
    u = rng.random(box.ndim)
    return box.lo + u * (box.hi - box.lo)


def widest_dim(box: Box) -> tuple[int, float]:
    """Index and width of the widest dimension; ties go to the lowest index."""
    widths = box.widths()
    idx = int(np.argmax(widths))
    return idx, float(widths[idx])
