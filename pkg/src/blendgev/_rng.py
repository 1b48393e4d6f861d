"""Counter-based random streams keyed by (seed, *indices)."""

from __future__ import annotations

import numpy as np


def make_rng(seed, *key: int) -> np.random.Generator:
    """Philox generator for ``seed``, optionally forked along ``key``.

    Passing an existing ``Generator`` returns it unchanged, which lets callers
    thread their own stream through the sampling functions.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
