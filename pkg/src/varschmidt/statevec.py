"""Dense state vectors for n-qubit pure states with a fixed A|B bipartition.

Conventions used throughout the package:

* Little-endian bit order: qubit ``q`` is bit ``q`` of the basis index,
  so qubit 0 is the least significant bit.
* Subsystem A occupies qubits ``0 .. n_a-1`` (low bits), subsystem B the
  remaining high bits.  A basis index therefore splits as
  ``k = (b << n_a) | a`` with ``a < 2**n_a`` and ``b < 2**n_b``.
* Gate matrices::

      Rz(t) = diag(exp(-i t/2), exp(+i t/2))
      Rx(t) = cos(t/2) I - i sin(t/2) X
      CZ    = diag(1, 1, 1, -1)
      CNOT  = flips the target qubit when the control bit is 1
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Gate",
    "PureState",
    "rz",
    "rx",
    "cz",
    "cnot",
    "adjoint",
    "zero_state",
    "from_amplitudes",
    "apply_gate",
    "apply_circuit",
    "apply_to_amplitudes",
    "probabilities",
    "sample",
    "fidelity",
    "coefficient_matrix",
    "from_coefficient_matrix",
    "state_to_dict",
    "state_from_dict",
    "save_state",
    "load_state",
]

NORM_ATOL = 1e-10
INPUT_NORM_ATOL = 1e-6

_ROTATIONS = ("RZ", "RX")
_TWO_QUBIT = ("CZ", "CNOT")


@dataclass(frozen=True)
class Gate:
    """One gate from the fixed set {RZ, RX, CZ, CNOT}."""

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind in _ROTATIONS:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} acts on exactly one qubit")
            if self.angle is None:
                raise ValueError(f"{self.kind} requires an angle")
        elif self.kind in _TWO_QUBIT:
            if len(self.qubits) != 2:
                raise ValueError(f"{self.kind} acts on exactly two qubits")
            if self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.kind} qubits must be distinct")
            if self.angle is not None:
                raise ValueError(f"{self.kind} takes no angle")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")


def rz(qubit: int, angle: float) -> Gate:
    return Gate("RZ", (qubit,), float(angle))


def rx(qubit: int, angle: float) -> Gate:
    return Gate("RX", (qubit,), float(angle))


def cz(qubit_a: int, qubit_b: int) -> Gate:
    return Gate("CZ", (qubit_a, qubit_b))


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def adjoint(gate: Gate) -> Gate:
    """Adjoint of a gate: negated angle for rotations, CZ/CNOT are self-adjoint."""
    if gate.kind in _ROTATIONS:
        return Gate(gate.kind, gate.qubits, -gate.angle)
    return gate


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state of ``n_qubits`` qubits with bipartition ``(n_a, n_b)``.

    Treat instances as immutable: every operation returns a new state and
    the amplitude buffer is marked read-only.
    """

    n_qubits: int
    n_a: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 2:
            raise ValueError("states need at least two qubits (one per subsystem)")
        if not (1 <= self.n_a < self.n_qubits):
            raise ValueError(
                f"invalid bipartition: n_a={self.n_a} of {self.n_qubits} qubits"
            )
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.n_qubits,):
            raise ValueError(
                f"expected {2**self.n_qubits} amplitudes, got shape {amps.shape}"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_b(self) -> int:
        return self.n_qubits - self.n_a

    @property
    def dim_a(self) -> int:
        return 2**self.n_a

    @property
    def dim_b(self) -> int:
        return 2**self.n_b


def zero_state(n_qubits: int, n_a: int) -> PureState:
    """The all-zeros computational basis state |0...0> with bipartition n_a."""
    if n_qubits < 2 or not (1 <= n_a < n_qubits):
        raise ValueError(f"invalid bipartition sizes ({n_qubits=}, {n_a=})")
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return PureState(n_qubits, n_a, amps)


def from_amplitudes(values, n_a: int, renormalize: bool = False) -> PureState:
    """Build a state from raw amplitudes.

    The length must be a power of two >= 4.  Unless ``renormalize`` is set,
    the vector norm must already be within 1e-6 of 1; it is then rescaled to
    exact unit norm.
    """
    amps = np.asarray(values, dtype=np.complex128).reshape(-1)
    dim = amps.shape[0]
    if dim < 4 or (dim & (dim - 1)) != 0:
        raise ValueError(f"amplitude count must be a power of two >= 4, got {dim}")
    norm = np.linalg.norm(amps)
    if norm == 0.0:
        raise ValueError("zero vector cannot be normalized")
    if not renormalize and abs(norm - 1.0) > INPUT_NORM_ATOL:
        raise ValueError(
            f"|norm - 1| = {abs(norm - 1.0):.3e} exceeds {INPUT_NORM_ATOL}; "
            "pass renormalize=True to accept"
        )
    n_qubits = dim.bit_length() - 1
    return PureState(n_qubits, n_a, amps / norm)


def apply_to_amplitudes(amps: np.ndarray, n_qubits: int, gate: Gate) -> np.ndarray:
    """Apply one gate to a raw amplitude vector of ``2**n_qubits`` entries.

    Returns a new array; the input is not modified.  This is the kernel
    behind :func:`apply_gate` and is also usable on subsystem-local vectors
    that carry no bipartition.
    """
    for q in gate.qubits:
        if q >= n_qubits:
            raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")
    if gate.kind in _ROTATIONS:
        q = gate.qubits[0]
        half = 0.5 * gate.angle
        if gate.kind == "RZ":
            mat = np.array(
                [[np.exp(-1j * half), 0.0], [0.0, np.exp(1j * half)]],
                dtype=np.complex128,
            )
        else:
            c, s = np.cos(half), np.sin(half)
            mat = np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
        low = 1 << q
        high = 1 << (n_qubits - q - 1)
        view = amps.reshape(high, 2, low)
        return np.einsum("ij,ajb->aib", mat, view).reshape(-1)
    idx = np.arange(1 << n_qubits)
    if gate.kind == "CZ":
        qa, qb = gate.qubits
        both = ((idx >> qa) & 1) & ((idx >> qb) & 1)
        out = amps.copy()
        out[both == 1] *= -1.0
        return out
    # CNOT: permutation that flips the target bit wherever the control is set
    control, target = gate.qubits
    source = idx ^ (((idx >> control) & 1) << target)
    return amps[source]


def apply_gate(state: PureState, gate: Gate) -> PureState:
    """Apply a gate to a state, returning the transformed state."""
    amps = apply_to_amplitudes(state.amplitudes, state.n_qubits, gate)
    return PureState(state.n_qubits, state.n_a, amps)


def apply_circuit(state: PureState, gates) -> PureState:
    """Apply a gate sequence in order."""
    amps = state.amplitudes
    for gate in gates:
        amps = apply_to_amplitudes(amps, state.n_qubits, gate)
    return PureState(state.n_qubits, state.n_a, amps)


def probabilities(state: PureState) -> np.ndarray:
    """Measurement probabilities |amplitude|^2 per basis index."""
    p = np.abs(state.amplitudes) ** 2
    return p


def sample(state: PureState, shots: int, seed: int) -> list[tuple[str, str]]:
    """Draw computational-basis outcomes, split by the bipartition.

    Returns ``shots`` pairs of bitstrings ``(outcome_A, outcome_B)`` with the
    local most significant bit first.  Deterministic for a given seed.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = probabilities(state)
    p = p / p.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(p.shape[0], size=shots, p=p)
    mask_a = (1 << state.n_a) - 1
    out = []
    for k in draws:
        a = int(k) & mask_a
        b = int(k) >> state.n_a
        out.append((format(a, f"0{state.n_a}b"), format(b, f"0{state.n_b}b")))
    return out


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2 between two states of the same register size."""
    if a.n_qubits != b.n_qubits:
        raise ValueError("states have different qubit counts")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def coefficient_matrix(state: PureState) -> np.ndarray:
    """Amplitudes reshaped as the (dim_a, dim_b) matrix C[a, b]."""
    return state.amplitudes.reshape(state.dim_b, state.dim_a).T.copy()


def from_coefficient_matrix(matrix: np.ndarray, renormalize: bool = False) -> PureState:
    """Inverse of :func:`coefficient_matrix`."""
    mat = np.asarray(matrix, dtype=np.complex128)
    d_a, d_b = mat.shape
    n_a = d_a.bit_length() - 1
    n_b = d_b.bit_length() - 1
    if 2**n_a != d_a or 2**n_b != d_b:
        raise ValueError("matrix dimensions must be powers of two")
    return from_amplitudes(mat.T.reshape(-1), n_a, renormalize=renormalize)


def state_to_dict(state: PureState) -> dict:
    return {
        "n_qubits": state.n_qubits,
        "n_a": state.n_a,
        "amplitudes": [[float(c.real), float(c.imag)] for c in state.amplitudes],
    }


def state_from_dict(payload: dict) -> PureState:
    try:
        n_qubits = int(payload["n_qubits"])
        n_a = int(payload["n_a"])
        pairs = payload["amplitudes"]
        amps = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state payload: {exc}") from exc
    if amps.shape[0] != 2**n_qubits:
        raise ValueError(
            f"amplitude count {amps.shape[0]} does not match n_qubits={n_qubits}"
        )
    state = from_amplitudes(amps, n_a, renormalize=True)
    if state.n_qubits != n_qubits:
        raise ValueError("inconsistent n_qubits in state payload")
    return state


def save_state(state: PureState, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_dict(state), fh, indent=2)
        fh.write("\n")


def load_state(path) -> PureState:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    return state_from_dict(payload)
