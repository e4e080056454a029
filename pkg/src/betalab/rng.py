"""Deterministic, named random substreams.

Every stochastic routine in the package draws from a counter-based
generator keyed by ``(seed, stream name)``.  Substreams are independent
by construction, so adding a new consumer never perturbs the draws of an
existing one, and results are bit-reproducible across platforms and
process counts.
"""

from __future__ import annotations

import hashlib

import numpy as np


def philox_key(seed: int, stream: str) -> int:
    """Stable 128-bit key for a named substream."""
    digest = hashlib.sha256(f"{int(seed)}\x1f{stream}".encode()).digest()
    return int.from_bytes(digest[:16], "little")


def rng_for(seed: int, stream: str) -> np.random.Generator:
    """Independent Philox generator for (seed, stream)."""
    return np.random.Generator(np.random.Philox(key=philox_key(seed, stream)))
