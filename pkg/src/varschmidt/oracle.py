"""Exact classical Schmidt decomposition, used as ground truth in tests and demos.

The amplitudes are reshaped into the coefficient matrix ``C[a, b]`` and
factored with a dense SVD (LAPACK bidiagonalization, deterministic); the
singular values are the Schmidt coefficients, taken non-negative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import von_neumann_bits
from .statevec import PureState, coefficient_matrix

__all__ = ["ExactSchmidt", "exact_schmidt", "exact_entropy"]


@dataclass(frozen=True)
class ExactSchmidt:
    """Full decomposition: descending coefficients and orthonormal local bases.

    ``left_vectors`` / ``right_vectors`` hold one vector per column, aligned
    with ``values``.
    """

    values: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    entropy_bits: float


def exact_schmidt(state: PureState) -> ExactSchmidt:
    c = coefficient_matrix(state)
    u, s, vh = np.linalg.svd(c, full_matrices=False)
    return ExactSchmidt(
        values=s,
        left_vectors=u,
        right_vectors=vh.T,
        entropy_bits=von_neumann_bits(s**2),
    )


def exact_entropy(state: PureState) -> float:
    """Von Neumann entropy of the bipartition in bits."""
    return exact_schmidt(state).entropy_bits
