"""Layered variational circuits applied independently to each subsystem.

One layer of the ansatz on ``n`` qubits is, in application order:

1. a rotation round: ``Rz(a) Rx(b) Rz(g)`` on every qubit,
2. for odd ``n > 1``, one CZ between qubit 0 and qubit ``n-1``,
3. CZ on neighbor pairs ``(i, i+1 mod n)`` for even ``i``,
4. a second rotation round,
5. for odd ``n > 1``, the qubit-0/qubit-``n-1`` CZ again,
6. CZ on neighbor pairs ``(i, i+1 mod n)`` for odd ``i``.

The circuit ends with one final rotation round.  With this layout the gate
counts are ``6*layers*n + 3*n`` rotations and ``layers*n`` CZs for even
``n > 1`` (``layers*n + 2*layers`` for odd ``n > 1``, none for ``n = 1``).
Depth is counted per stage: a rotation round contributes 3, each CZ group 1.

Parameter order is layer-major: rotation rounds in application order, qubits
ascending inside a round, then ``(a, b, g)`` inside each triple.  A joint
parameter vector for both subsystems stores all angles of the A circuit
followed by all angles of the B circuit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .statevec import Gate, PureState, apply_to_amplitudes, adjoint, cz, rx, rz

__all__ = [
    "AnsatzConfig",
    "build_circuit",
    "circuit_depth",
    "adjoint_circuit",
    "apply_split_circuit",
    "split_params",
    "circuit_unitary",
    "compiled",
    "format_circuit",
]


@dataclass(frozen=True)
class AnsatzConfig:
    """Shape of the circuit for one subsystem: qubit count and layer count."""

    n_sub: int
    layers: int

    def __post_init__(self):
        if self.n_sub < 1:
            raise ValueError("n_sub must be >= 1")
        if self.layers < 0:
            raise ValueError("layers must be >= 0")

    @property
    def param_count(self) -> int:
        return 6 * self.layers * self.n_sub + 3 * self.n_sub

    @property
    def two_qubit_gate_count(self) -> int:
        if self.n_sub == 1:
            return 0
        if self.n_sub % 2 == 0:
            return self.layers * self.n_sub
        return self.layers * self.n_sub + 2 * self.layers

    @property
    def depth(self) -> int:
        # Stage count; the single-qubit case has no entangling stages at all.
        if self.n_sub == 1:
            return 6 * self.layers + 3
        if self.n_sub % 2 == 0:
            return 8 * self.layers + 3
        return 10 * self.layers + 3


def _cz_pairs(n_sub: int, parity: int) -> tuple[tuple[int, int], ...]:
    """Neighbor pairs (i, i+1 mod n) starting at the given parity."""
    if n_sub < 2:
        return ()
    return tuple((i, (i + 1) % n_sub) for i in range(parity, n_sub, 2))


def _stages(config: AnsatzConfig) -> tuple[tuple, ...]:
    """Stage plan: ('rot', round_index) and ('cz', pairs) entries in order."""
    n = config.n_sub
    ring = (("cz", ((0, n - 1),)),) if (n % 2 == 1 and n > 1) else ()
    plan: list[tuple] = []
    rnd = 0
    for _ in range(config.layers):
        plan.append(("rot", rnd))
        rnd += 1
        plan.extend(ring)
        if n > 1:
            plan.append(("cz", _cz_pairs(n, 0)))
        plan.append(("rot", rnd))
        rnd += 1
        plan.extend(ring)
        if n > 1:
            plan.append(("cz", _cz_pairs(n, 1)))
    plan.append(("rot", rnd))
    return tuple(plan)


def build_circuit(config: AnsatzConfig, params) -> list[Gate]:
    """Gate list of the full circuit on local qubits 0 .. n_sub-1."""
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.shape[0] != config.param_count:
        raise ValueError(
            f"expected {config.param_count} angles, got {params.shape[0]}"
        )
    n = config.n_sub
    gates: list[Gate] = []
    pos = 0
    for kind, payload in _stages(config):
        if kind == "rot":
            for q in range(n):
                a, b, g = params[pos : pos + 3]
                gates.append(rz(q, a))
                gates.append(rx(q, b))
                gates.append(rz(q, g))
                pos += 3
        else:
            gates.extend(cz(i, j) for i, j in payload)
    return gates


def circuit_depth(config: AnsatzConfig) -> int:
    """Depth counted from the stage plan (3 per rotation round, 1 per CZ group)."""
    depth = 0
    for kind, _ in _stages(config):
        depth += 3 if kind == "rot" else 1
    return depth


def adjoint_circuit(config: AnsatzConfig, params) -> list[Gate]:
    """Inverse circuit: reversed gate order with negated rotation angles."""
    return [adjoint(g) for g in reversed(build_circuit(config, params))]


def split_params(config_a: AnsatzConfig, config_b: AnsatzConfig, params):
    """Split a joint parameter vector into the A and B angle blocks."""
    params = np.asarray(params, dtype=float).reshape(-1)
    expected = config_a.param_count + config_b.param_count
    if params.shape[0] != expected:
        raise ValueError(f"expected {expected} angles, got {params.shape[0]}")
    return params[: config_a.param_count], params[config_a.param_count :]


def _shift(gates: list[Gate], offset: int) -> list[Gate]:
    if offset == 0:
        return gates
    return [Gate(g.kind, tuple(q + offset for q in g.qubits), g.angle) for g in gates]


def split_circuit_gates(
    config_a: AnsatzConfig, config_b: AnsatzConfig, params, n_a: int
) -> list[Gate]:
    """Joint gate list: A circuit on qubits 0..n_a-1, B circuit above it."""
    theta, omega = split_params(config_a, config_b, params)
    gates = build_circuit(config_a, theta)
    gates += _shift(build_circuit(config_b, omega), n_a)
    return gates


def apply_split_circuit(
    state: PureState, config_a: AnsatzConfig, config_b: AnsatzConfig, params
) -> PureState:
    """Apply the two local circuits to a bipartite state.

    The A circuit acts on the low qubits, the B circuit on the high ones;
    no gate crosses the bipartition.
    """
    if config_a.n_sub != state.n_a or config_b.n_sub != state.n_b:
        raise ValueError(
            f"ansatz shapes ({config_a.n_sub}, {config_b.n_sub}) do not match "
            f"bipartition ({state.n_a}, {state.n_b})"
        )
    amps = state.amplitudes
    for gate in split_circuit_gates(config_a, config_b, params, state.n_a):
        amps = apply_to_amplitudes(amps, state.n_qubits, gate)
    return PureState(state.n_qubits, state.n_a, amps)


def format_circuit(gates) -> str:
    """Debug listing, one gate per line: 'RZ q3 1.570796' / 'CZ q0 q1'."""
    lines = []
    for g in gates:
        if g.angle is None:
            lines.append(f"{g.kind} " + " ".join(f"q{q}" for q in g.qubits))
        else:
            lines.append(f"{g.kind} q{g.qubits[0]} {g.angle:.6f}")
    return "\n".join(lines)


class CompiledAnsatz:
    """Matrix-level form of the circuit for one subsystem.

    Precomputes bit-gather tables and the parameter-free CZ stage diagonals
    so that the subsystem unitary (and unitaries under single-angle
    perturbations) can be assembled from small dense products.  Produces
    exactly the same unitary as applying :func:`build_circuit` gate by gate.
    """

    def __init__(self, config: AnsatzConfig):
        self.config = config
        n = config.n_sub
        self.dim = 2**n
        self.n_rounds = 2 * config.layers + 1
        idx = np.arange(self.dim)
        bits = (idx[:, None] >> np.arange(n)) & 1
        self._row = [bits[:, q][:, None] for q in range(n)]
        self._col = [bits[:, q][None, :] for q in range(n)]
        # stage list: ('rot', round_index) or ('diag', vector)
        self.stages: list[tuple] = []
        for kind, payload in _stages(config):
            if kind == "rot":
                self.stages.append(("rot", payload))
            else:
                diag = np.ones(self.dim)
                for i, j in payload:
                    diag = diag * np.where((bits[:, i] & bits[:, j]) == 1, -1.0, 1.0)
                self.stages.append(("diag", diag))

    def triplet_matrices(self, params: np.ndarray) -> np.ndarray:
        """2x2 unitaries of every Rz-Rx-Rz triple, shape (rounds, n_sub, 2, 2)."""
        ang = np.asarray(params, dtype=float).reshape(self.n_rounds, self.config.n_sub, 3)
        a, b, g = ang[..., 0], ang[..., 1], ang[..., 2]
        c = np.cos(0.5 * b)
        s = np.sin(0.5 * b)
        sum_half = 0.5 * (a + g)
        diff_half = 0.5 * (a - g)
        m = np.empty(ang.shape[:2] + (2, 2), dtype=np.complex128)
        m[..., 0, 0] = c * np.exp(-1j * sum_half)
        m[..., 0, 1] = -1j * s * np.exp(1j * diff_half)
        m[..., 1, 0] = -1j * s * np.exp(-1j * diff_half)
        m[..., 1, 1] = c * np.exp(1j * sum_half)
        return m

    def gathered_factors(self, triplets: np.ndarray) -> list[list[np.ndarray]]:
        """Per-round, per-qubit (dim, dim) factors of the round matrices."""
        return [
            [triplets[r, q][self._row[q], self._col[q]] for q in range(self.config.n_sub)]
            for r in range(self.n_rounds)
        ]

    @staticmethod
    def fold(factors) -> np.ndarray:
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out

    def round_matrices(self, triplets: np.ndarray) -> list[np.ndarray]:
        return [self.fold(fac) for fac in self.gathered_factors(triplets)]

    def unitary(self, params) -> np.ndarray:
        """Full (dim, dim) unitary of the circuit at the given angles."""
        rounds = self.round_matrices(self.triplet_matrices(params))
        u = np.eye(self.dim, dtype=np.complex128)
        for kind, payload in self.stages:
            if kind == "rot":
                u = rounds[payload] @ u
            else:
                u = payload[:, None] * u
        return u


@lru_cache(maxsize=None)
def compiled(config: AnsatzConfig) -> CompiledAnsatz:
    return CompiledAnsatz(config)


def circuit_unitary(config: AnsatzConfig, params) -> np.ndarray:
    """Dense unitary matrix of the subsystem circuit."""
    params = np.asarray(params, dtype=float).reshape(-1)
    if params.shape[0] != config.param_count:
        raise ValueError(
            f"expected {config.param_count} angles, got {params.shape[0]}"
        )
    return compiled(config).unitary(params)
