"""Deterministic seed splitting: every run derives all randomness from one seed."""

from __future__ import annotations

import numpy as np

__all__ = ["derive_seed"]


def derive_seed(*components: int) -> int:
    """Fold integer components into one 64-bit child seed.

    Fixed splitting via ``numpy.random.SeedSequence``, so any (master, index,
    ...) tuple always maps to the same child seed.
    """
    ss = np.random.SeedSequence([int(c) & 0xFFFFFFFFFFFFFFFF for c in components])
    return int(ss.generate_state(1, dtype=np.uint64)[0])
