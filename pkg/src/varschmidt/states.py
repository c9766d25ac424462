"""Test-state factory: random ensemble, product/GHZ/Bell states, file loading."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .statevec import PureState, from_amplitudes, from_coefficient_matrix, load_state

__all__ = [
    "random_coefficients",
    "random_state",
    "product_state",
    "ghz_state",
    "bell_state",
    "load_state",
    "ame_state",
]


def random_coefficients(n_a: int, n_b: int, seed: int) -> np.ndarray:
    """Raw coefficient matrix with real and imaginary parts uniform on [-0.5, 0.5].

    Unnormalized; :func:`random_state` applies the global normalization.
    Generated with numpy's seeded PCG64 generator, real parts first.
    """
    if n_a < 1 or n_b < 1:
        raise ValueError("subsystem sizes must be >= 1")
    rng = np.random.default_rng(seed)
    shape = (2**n_a, 2**n_b)
    real = rng.uniform(-0.5, 0.5, shape)
    imag = rng.uniform(-0.5, 0.5, shape)
    return real + 1j * imag


def random_state(n_a: int, n_b: int, seed: int) -> PureState:
    """Random bipartite state from the uniform-coefficient ensemble.

    These states are typically close to maximally entangled.
    """
    return from_coefficient_matrix(random_coefficients(n_a, n_b, seed), renormalize=True)


def product_state(n_a: int, n_b: int, seed: int) -> PureState:
    """Tensor product of independent random single-qubit states (zero entropy)."""
    if n_a < 1 or n_b < 1:
        raise ValueError("subsystem sizes must be >= 1")
    rng = np.random.default_rng(seed)
    amps = np.ones(1, dtype=np.complex128)
    for _ in range(n_a + n_b):
        qubit = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        qubit /= np.linalg.norm(qubit)
        amps = np.kron(qubit, amps)  # little-endian: later qubits are higher bits
    return from_amplitudes(amps, n_a, renormalize=True)


def ghz_state(n_qubits: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2) with the natural bipartition."""
    if n_qubits < 2:
        raise ValueError("GHZ needs at least two qubits")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(n_qubits, n_qubits // 2, amps)


def bell_state() -> PureState:
    return ghz_state(2)


def ame_state() -> PureState:
    """Bundled 6-qubit absolutely maximally entangled state, 3|3 bipartition."""
    fixture = resources.files("varschmidt").joinpath("data/ame_6_2.json")
    with resources.as_file(fixture) as path:
        return load_state(path)
