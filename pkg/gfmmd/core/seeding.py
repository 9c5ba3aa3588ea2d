"""
Seeded randomness.

All random draws go through ``make_rng``: a PCG64 generator built from a
``SeedSequence`` whose entropy is the 64-bit run seed plus an optional stream
number. Independent streams (dataset sampling, baseline subsampling, ...) use
distinct stream numbers so they never share state and no global RNG is touched.
"""

import numpy as np

DATASET_STREAM = 0
BASELINE_STREAM = 1
POWER_ITERATION_STREAM = 2


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """PCG64 generator for ``(seed, stream)``"""
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(stream)])))
