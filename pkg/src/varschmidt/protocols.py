"""Derived protocols: gate-free SWAP, state compression, spectrum synthesis.

All three reuse the trained coincidence circuit.  The SWAP never applies a
gate across the bipartition; the encoder's CNOT ladder and the synthesizer's
copy ladder are the only crossing gates in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ansatz import AnsatzConfig, adjoint_circuit, build_circuit, split_params
from .statevec import (
    Gate,
    PureState,
    apply_to_amplitudes,
    cnot,
    from_amplitudes,
)
from .variational import UntrainedCircuitError, cost_exact

__all__ = [
    "SpectrumSpec",
    "swap_circuit",
    "swap_without_connection",
    "encoder_circuit",
    "encode",
    "decode",
    "synthesize_state",
    "index_swapped",
]

WEIGHT_SUM_ATOL = 1e-9


@dataclass(frozen=True)
class SpectrumSpec:
    """Requested squared Schmidt coefficients, with optional phases."""

    squared_weights: tuple[float, ...]
    phases: tuple[float, ...] | None = None

    def __post_init__(self):
        weights = tuple(float(w) for w in self.squared_weights)
        if len(weights) == 0:
            raise ValueError("spectrum must contain at least one weight")
        if any(w < 0 for w in weights):
            raise ValueError("squared weights must be non-negative")
        if abs(sum(weights) - 1.0) > WEIGHT_SUM_ATOL:
            raise ValueError(f"squared weights must sum to 1, got {sum(weights)}")
        object.__setattr__(self, "squared_weights", weights)
        if self.phases is not None:
            phases = tuple(float(p) for p in self.phases)
            if len(phases) != len(weights):
                raise ValueError("phases must match squared_weights in length")
            object.__setattr__(self, "phases", phases)


def _shift(gates: list[Gate], offset: int) -> list[Gate]:
    if offset == 0:
        return gates
    return [Gate(g.kind, tuple(q + offset for q in g.qubits), g.angle) for g in gates]


def _require_trained(state, config_a, config_b, params, tolerance, what):
    cost = cost_exact(state, config_a, config_b, params)
    if cost > tolerance:
        raise UntrainedCircuitError(
            f"{what} needs trained parameters: cost {cost:.3e} > tolerance {tolerance:.1e}"
        )


def swap_circuit(
    config_a: AnsatzConfig, config_b: AnsatzConfig, params, n_a: int
) -> list[Gate]:
    """Gate list of the full SWAP protocol; no gate crosses the bipartition.

    Forward circuits on both halves, then the adjoint of each side's circuit
    applied to the *opposite* half (plain parameter reuse stands in for the
    classical communication of the angles).
    """
    if config_a.n_sub != config_b.n_sub:
        raise ValueError("swap is only defined for equal subsystem sizes")
    theta, omega = split_params(config_a, config_b, params)
    gates = build_circuit(config_a, theta)
    gates += _shift(build_circuit(config_b, omega), n_a)
    gates += adjoint_circuit(config_b, omega)  # V^dagger on A's qubits
    gates += _shift(adjoint_circuit(config_a, theta), n_a)  # U^dagger on B's
    return gates


def swap_without_connection(
    state: PureState,
    config_a: AnsatzConfig,
    config_b: AnsatzConfig,
    params,
    tolerance: float = 1e-6,
) -> PureState:
    """Exchange the two subsystem contents using only local gates."""
    if state.n_a != state.n_b:
        raise ValueError("swap requires equally sized subsystems")
    _require_trained(state, config_a, config_b, params, tolerance, "swap")
    amps = state.amplitudes
    for gate in swap_circuit(config_a, config_b, params, state.n_a):
        amps = apply_to_amplitudes(amps, state.n_qubits, gate)
    return PureState(state.n_qubits, state.n_a, amps)


def encoder_circuit(
    config_a: AnsatzConfig, config_b: AnsatzConfig, params, n_a: int
) -> list[Gate]:
    """Coincidence circuit followed by the compressing CNOT ladder.

    After coincidence both halves carry the same index, so CNOTs controlled
    on B's qubits reset A's qubits to zero, leaving the whole spectrum on B.
    """
    theta, omega = split_params(config_a, config_b, params)
    gates = build_circuit(config_a, theta)
    gates += _shift(build_circuit(config_b, omega), n_a)
    gates += [cnot(n_a + k, k) for k in range(n_a)]
    return gates


def encode(
    state: PureState,
    config_a: AnsatzConfig,
    config_b: AnsatzConfig,
    params,
    tolerance: float = 1e-6,
) -> PureState:
    """Compress the state onto subsystem B, driving A to ``|0...0>``."""
    if state.n_a > state.n_b:
        raise ValueError("encoder requires n_a <= n_b")
    _require_trained(state, config_a, config_b, params, tolerance, "encoder")
    amps = state.amplitudes
    for gate in encoder_circuit(config_a, config_b, params, state.n_a):
        amps = apply_to_amplitudes(amps, state.n_qubits, gate)
    return PureState(state.n_qubits, state.n_a, amps)


def decode(
    encoded: PureState, config_a: AnsatzConfig, config_b: AnsatzConfig, params
) -> PureState:
    """Exact inverse of :func:`encode` for the same parameters."""
    if config_a.n_sub != encoded.n_a or config_b.n_sub != encoded.n_b:
        raise ValueError("ansatz shapes do not match the encoded state")
    theta, omega = split_params(config_a, config_b, params)
    n_a = encoded.n_a
    gates = [cnot(n_a + k, k) for k in reversed(range(n_a))]
    gates += adjoint_circuit(config_a, theta)
    gates += _shift(adjoint_circuit(config_b, omega), n_a)
    amps = encoded.amplitudes
    for gate in gates:
        amps = apply_to_amplitudes(amps, encoded.n_qubits, gate)
    return PureState(encoded.n_qubits, encoded.n_a, amps)


def synthesize_state(
    spec: SpectrumSpec,
    n_a: int,
    n_b: int,
    randomizer_layers: int,
    seed: int,
) -> PureState:
    """Random state with the exact prescribed Schmidt spectrum.

    Loads ``sum_i lambda_i e^{i phase_i} |e_i>`` onto subsystem A, copies the
    basis index onto B with a CNOT ladder, and scrambles each half with a
    seeded ansatz circuit (local unitaries leave the spectrum untouched).
    ``randomizer_layers = 0`` skips the scrambling.
    """
    d_a, d_b = 2**n_a, 2**n_b
    weights = np.asarray(spec.squared_weights)
    if weights.shape[0] > min(d_a, d_b):
        raise ValueError(
            f"spectrum of length {weights.shape[0]} does not fit min(d_A, d_B) = "
            f"{min(d_a, d_b)}"
        )
    lam = np.sqrt(weights)
    if spec.phases is not None:
        lam = lam * np.exp(1j * np.asarray(spec.phases))
    amps = np.zeros(2 ** (n_a + n_b), dtype=np.complex128)
    amps[: lam.shape[0]] = lam  # |psi>_A (x) |0>_B occupies the low indices
    state = from_amplitudes(amps, n_a)
    for k in range(min(n_a, n_b)):
        state = PureState(
            state.n_qubits,
            state.n_a,
            apply_to_amplitudes(state.amplitudes, state.n_qubits, cnot(k, n_a + k)),
        )
    if randomizer_layers > 0:
        rng = np.random.default_rng(seed)
        gates = []
        for offset, n_sub in ((0, n_a), (n_a, n_b)):
            config = AnsatzConfig(n_sub, randomizer_layers)
            angles = rng.uniform(0.0, 2.0 * np.pi, config.param_count)
            gates += _shift(build_circuit(config, angles), offset)
        amps = state.amplitudes
        for gate in gates:
            amps = apply_to_amplitudes(amps, state.n_qubits, gate)
        state = PureState(state.n_qubits, state.n_a, amps)
    return state


def index_swapped(state: PureState) -> PureState:
    """Reference permutation that exchanges the A and B register contents."""
    if state.n_a != state.n_b:
        raise ValueError("index swap requires equally sized subsystems")
    m = state.n_a
    idx = np.arange(state.amplitudes.shape[0])
    a = idx & ((1 << m) - 1)
    b = idx >> m
    swapped = state.amplitudes[(a << m) | b]
    return PureState(state.n_qubits, state.n_a, swapped)
