"""One global seed fanned out into fixed, independently re-seedable streams."""
from __future__ import annotations

import numpy as np

# Stable stream ids: changing these changes every artifact byte.
_STREAM_IDS = {
    "env": 1,
    "policy_init": 2,
    "restart_coin": 3,
    "restart_sample": 4,
    "action_sample": 5,
    "minibatch": 6,
    "eval": 7,
}


def stream(seed: int, name: str) -> np.random.Generator:
    """Named child generator of a global seed; streams are independent."""
    if name not in _STREAM_IDS:
        raise KeyError(f"unknown rng stream {name!r}; known: {sorted(_STREAM_IDS)}")
    return np.random.default_rng(np.random.SeedSequence(entropy=(int(seed), _STREAM_IDS[name])))


def streams(seed: int) -> dict[str, np.random.Generator]:
    return {name: stream(seed, name) for name in _STREAM_IDS}
