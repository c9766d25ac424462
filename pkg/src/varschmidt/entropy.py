"""Entanglement entropies from a Schmidt spectrum, in bits (log base 2)."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["von_neumann_bits", "renyi_bits"]

_EIG_FLOOR = 1e-300


def von_neumann_bits(squared_weights) -> float:
    """-sum(w log2 w) over the squared Schmidt coefficients, with 0 log 0 = 0."""
    w = np.clip(np.asarray(squared_weights, dtype=float), 0.0, None)
    w = w[w > _EIG_FLOOR]
    if w.size == 0:
        return 0.0
    return float(-np.sum(w * np.log2(w)))


def renyi_bits(squared_weights, order: float) -> float:
    """Renyi entropy of the given order: log2(sum w^q) / (1 - q).

    ``order=1`` falls back to the von Neumann limit; ``order=inf`` gives
    the min-entropy -log2(max w).
    """
    if order < 0:
        raise ValueError("Renyi order must be non-negative")
    w = np.clip(np.asarray(squared_weights, dtype=float), 0.0, None)
    if math.isinf(order):
        return float(-np.log2(np.max(w)))
    if order == 1.0:
        return von_neumann_bits(w)
    return float(np.log2(np.sum(w**order)) / (1.0 - order))
