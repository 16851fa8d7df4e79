"""Seeded counter-based randomness.

Every random job is keyed by a tuple of integers: the run seed followed by
job indices. ``make_rng(seed, i)`` is independent of how many other jobs
run, and in what order, so results are reproducible job by job.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))
