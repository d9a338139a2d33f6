"""Deterministic seed derivation for independent simulation jobs.

Every random draw in the package flows from a user-supplied master seed.
Sub-tasks (benchmark jobs, tomography settings, validation repeats) get
their own child seed derived from the master seed plus a stable integer
path, never from a shared stream, so results are identical regardless of
execution order or thread count.
"""

from __future__ import annotations

import hashlib

import numpy as np

_UINT64_MASK = (1 << 64) - 1


def spawn_seed(master_seed: int, *path: int) -> int:
    """Derive a child seed from a master seed and a fixed integer path."""
    ss = np.random.SeedSequence([int(master_seed) & _UINT64_MASK, *(int(p) & _UINT64_MASK for p in path)])
    return int(ss.generate_state(1, np.uint64)[0])


def rng_from(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & _UINT64_MASK)


def string_key(text: str) -> int:
    """Stable 63-bit integer for a string, for use as a seed-path component."""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1
