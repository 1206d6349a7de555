"""Seeded counter-based random streams.

Every random choice in the lab draws from a Philox generator keyed by
(seed, stream), so instance i of a sweep is reproducible on its own and
independent of how many instances ran before it.
"""

import numpy as np

BIT_GENERATOR = "Philox"


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator for the given seed and stream id."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))
