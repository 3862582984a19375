"""Deterministic seed derivation.

Every random choice in the package flows from one master seed through
``numpy.random.SeedSequence`` with explicit integer tags, so results are
bit-reproducible and independent of scheduling or worker count.

Tag layout (first element after the master seed):
  0 - network construction
  1 - sweep grid point (followed by the point index)
  2 - Monte Carlo run (followed by the run index)
"""

from __future__ import annotations

import numpy as np

DEFAULT_SEED = 1729

DOMAIN_NETWORK = 0
DOMAIN_POINT = 1
DOMAIN_RUN = 2


def rng_from(seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by (seed, *key)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


def derive_seed(seed: int, *key: int) -> int:
    """Collapse (seed, *key) into a fresh non-negative integer seed."""
    state = np.random.SeedSequence([int(seed), *map(int, key)]).generate_state(1, np.uint64)
    return int(state[0] >> 1)
