"""Seeded counter-based random streams.

Every consumer gets its own Philox substream keyed on ``(seed, *path)``, so
e.g. changing the noise draw never perturbs the sampling mask.
"""
from __future__ import annotations

import numpy as np

MASK_STREAM = 1
NOISE_STREAM = 2
SCENE_STREAM = 3


def substream(seed: int, *path: int) -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, path)])
    return np.random.Generator(np.random.Philox(ss))
