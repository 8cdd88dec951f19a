"""Deterministic random streams derived from a root seed plus integer tags.

Every source of randomness in the package draws from a generator built here,
so results depend only on the root seed and the logical position of the draw
(iteration number, candidate index, trial index), never on call order or
thread scheduling.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK = (1 << 63) - 1


def seed_sequence(*parts: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(p) & _MASK for p in parts])


def generator(*parts: int) -> np.random.Generator:
    """A PCG64 generator keyed by the given integer path."""
    return np.random.default_rng(seed_sequence(*parts))


def derived_seed(*parts: int) -> int:
    """A plain integer seed keyed by the given integer path."""
    return int(seed_sequence(*parts).generate_state(1, np.uint64)[0])


def stable_text_seed(text: str) -> int:
    """Platform-independent integer seed for a string key (e.g. a sequence id)."""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") & _MASK
