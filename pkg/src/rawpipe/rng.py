"""Deterministic seed derivation.

A single 64-bit master seed is mixed with integer stream identifiers
(stage id, source index, patch index, epoch ...) through splitmix64 so
that inserting or reordering one consumer never perturbs the draws of
another.
"""

from __future__ import annotations

import numpy as np

_MASK = 0xFFFFFFFFFFFFFFFF

# Stage identifiers for per-stage substreams.
STREAM_NOISE = 0x101
STREAM_SAMPLE = 0x202
STREAM_PATCH = 0x303


def splitmix64(x: int) -> int:
    """One splitmix64 finalization step (public-domain mixer)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK
    return (x ^ (x >> 31)) & _MASK


def mix_seed(master: int, *ids: int) -> int:
    """Derive a 64-bit substream seed from a master seed and stream ids."""
    s = splitmix64(master & _MASK)
    for i in ids:
        s = splitmix64((s ^ (i & _MASK)) & _MASK)
    return s


def derive_rng(master: int, *ids: int) -> np.random.Generator:
    """Seeded generator for the substream identified by ``ids``."""
    return np.random.default_rng(mix_seed(master, *ids))
