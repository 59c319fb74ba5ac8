"""Seed derivation.

Every random draw in the package comes from a numpy ``Generator`` built on a
``SeedSequence`` whose spawn key names *who* is drawing (replicate, purpose,
method, restart ...).  Two callers with different keys get independent
streams, and the stream a caller sees does not depend on execution order.
"""
from __future__ import annotations

import os

import numpy as np

SEED_ENV_VAR = "MLCOCLUSTER_SEED"

# purposes inside one simulation replicate
PARAMS = 0
NETWORK = 1
KMEANS = 2


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 0
    return int(raw)


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for ``(seed, *key)``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)))


def derive_seed(seed: int, *key: int) -> int:
    """A plain integer seed for ``(seed, *key)``, usable where an int is expected."""
    state = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key)).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])
