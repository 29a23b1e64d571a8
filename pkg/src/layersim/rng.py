"""Seeding discipline.

Every sampling operation takes a ``seed`` argument and builds its generator
through :func:`make_rng`, so identical (parameters, seed) produce bit-identical
results.  The generator is numpy's default PCG64, a named, reproducible 64-bit
generator.

Experiments derive one independent substream per trial with :func:`trial_rng`;
trial ``t`` depends only on (master seed, t), never on execution order, so
trials can run in any order or concurrently and still aggregate identically.
"""

from __future__ import annotations

import numpy as np

SeedLike = "int | np.random.Generator | np.random.SeedSequence | None"


def make_rng(seed) -> np.random.Generator:
    """Return a PCG64 generator for ``seed`` (int, SeedSequence, or Generator)."""
    return np.random.default_rng(seed)


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent, reproducible substream for one trial of an experiment.

    The substream depends only on (seed, key), never on execution order;
    multi-part keys address phases within an experiment, e.g.
    ``trial_rng(seed, phase, trial)``.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))
