"""State-vector core: gate conventions, invariants, sampling, file format."""

import json

import numpy as np
import pytest

from varschmidt import statevec as sv

S2 = 1.0 / np.sqrt(2.0)


def random_state_vector(n_qubits, seed, n_a=1):
    rng = np.random.default_rng(seed)
    amps = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return sv.from_amplitudes(amps, n_a, renormalize=True)


# --- construction -----------------------------------------------------------

def test_zero_state_two_qubits():
    state = sv.zero_state(2, 1)
    np.testing.assert_allclose(state.amplitudes, [1, 0, 0, 0])


def test_zero_state_six_qubits():
    state = sv.zero_state(6, 3)
    assert state.amplitudes.shape == (64,)
    assert state.amplitudes[0] == 1.0
    assert np.count_nonzero(state.amplitudes) == 1


def test_zero_state_rejects_empty_b():
    with pytest.raises(ValueError):
        sv.zero_state(2, 2)


def test_from_amplitudes_bell():
    state = sv.from_amplitudes([S2, 0, 0, S2], 1)
    np.testing.assert_allclose(state.amplitudes, [S2, 0, 0, S2])
    assert state.n_a == 1 and state.n_b == 1


def test_from_amplitudes_rejects_zero_vector():
    with pytest.raises(ValueError):
        sv.from_amplitudes([0, 0, 0, 0], 1)


def test_from_amplitudes_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        sv.from_amplitudes([1, 0, 0], 1)


def test_from_amplitudes_norm_gate():
    with pytest.raises(ValueError):
        sv.from_amplitudes([1, 1, 0, 0], 1)  # norm sqrt(2), not flagged
    state = sv.from_amplitudes([1, 1, 0, 0], 1, renormalize=True)
    np.testing.assert_allclose(np.linalg.norm(state.amplitudes), 1.0, atol=1e-15)


def test_amplitudes_are_read_only():
    state = sv.zero_state(2, 1)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


# --- gate matrices ----------------------------------------------------------

def test_rx_pi_is_minus_i_x():
    state = sv.apply_gate(sv.zero_state(2, 1), sv.rx(0, np.pi))
    np.testing.assert_allclose(state.amplitudes, [0, -1j, 0, 0], atol=1e-15)


def test_rz_phases():
    plus = sv.from_amplitudes([S2, S2, 0, 0], 1)
    state = sv.apply_gate(plus, sv.rz(0, np.pi / 2))
    expected = np.array([S2 * np.exp(-1j * np.pi / 4), S2 * np.exp(1j * np.pi / 4), 0, 0])
    np.testing.assert_allclose(state.amplitudes, expected, atol=1e-15)


def test_cz_trivial_on_00():
    state = sv.apply_gate(sv.zero_state(2, 1), sv.cz(0, 1))
    np.testing.assert_allclose(state.amplitudes, [1, 0, 0, 0])


def test_cz_sign_on_11():
    state = sv.from_amplitudes([0, 0, 0, 1], 1)
    out = sv.apply_gate(state, sv.cz(0, 1))
    np.testing.assert_allclose(out.amplitudes, [0, 0, 0, -1])


def test_cnot_creates_bell():
    plus = sv.from_amplitudes([S2, S2, 0, 0], 1)  # |+> on qubit 0
    bell = sv.apply_gate(plus, sv.cnot(0, 1))
    np.testing.assert_allclose(bell.amplitudes, [S2, 0, 0, S2], atol=1e-15)


def test_gate_validation():
    with pytest.raises(ValueError):
        sv.cz(1, 1)
    with pytest.raises(ValueError):
        sv.cnot(0, 0)
    with pytest.raises(ValueError):
        sv.Gate("RZ", (0,))  # missing angle
    with pytest.raises(ValueError):
        sv.Gate("H", (0,))
    with pytest.raises(ValueError):
        sv.apply_gate(sv.zero_state(2, 1), sv.rx(5, 0.3))


# --- probabilities / fidelity -----------------------------------------------

def test_probabilities_bell():
    bell = sv.from_amplitudes([S2, 0, 0, S2], 1)
    np.testing.assert_allclose(sv.probabilities(bell), [0.5, 0, 0, 0.5])


def test_probabilities_zero_state():
    np.testing.assert_allclose(sv.probabilities(sv.zero_state(2, 1)), [1, 0, 0, 0])


def test_probabilities_match_direct_moduli():
    state = random_state_vector(4, seed=11, n_a=2)
    expected = np.array([abs(c) ** 2 for c in state.amplitudes])
    np.testing.assert_allclose(sv.probabilities(state), expected, atol=1e-14)
    assert abs(sv.probabilities(state).sum() - 1.0) < 1e-10


def test_fidelity_self_and_orthogonal():
    state = random_state_vector(3, seed=5)
    assert sv.fidelity(state, state) == pytest.approx(1.0, abs=1e-12)
    s00 = sv.zero_state(2, 1)
    s11 = sv.from_amplitudes([0, 0, 0, 1], 1)
    assert sv.fidelity(s00, s11) == 0.0


def test_fidelity_rotation_closed_form():
    # |<0|Rx(theta)|0>|^2 = cos^2(theta/2); at theta = pi/3 this is 0.75
    base = sv.zero_state(2, 1)
    rotated = sv.apply_gate(base, sv.rx(0, np.pi / 3))
    assert sv.fidelity(base, rotated) == pytest.approx(0.75, abs=1e-12)


def test_fidelity_dimension_mismatch():
    with pytest.raises(ValueError):
        sv.fidelity(sv.zero_state(2, 1), sv.zero_state(3, 1))


# --- sampling ----------------------------------------------------------------

def test_sample_bell_only_coincident():
    bell = sv.from_amplitudes([S2, 0, 0, S2], 1)
    outcomes = sv.sample(bell, 1000, seed=3)
    assert set(outcomes) <= {("0", "0"), ("1", "1")}
    assert len(outcomes) == 1000


def test_sample_zero_state():
    outcomes = sv.sample(sv.zero_state(4, 2), 50, seed=1)
    assert set(outcomes) == {("00", "00")}


def test_sample_deterministic_per_seed():
    state = random_state_vector(3, seed=8, n_a=1)
    assert sv.sample(state, 200, seed=42) == sv.sample(state, 200, seed=42)
    assert sv.sample(state, 200, seed=42) != sv.sample(state, 200, seed=43)


def test_sample_rejects_zero_shots():
    with pytest.raises(ValueError):
        sv.sample(sv.zero_state(2, 1), 0, seed=0)


def test_sampling_frequencies_within_five_sigma():
    state = random_state_vector(4, seed=2, n_a=2)
    shots = 100_000
    counts = {}
    for a, b in sv.sample(state, shots, seed=9):
        counts[(a, b)] = counts.get((a, b), 0) + 1
    p = sv.probabilities(state)
    for k in range(16):
        a, b = format(k & 3, "02b"), format(k >> 2, "02b")
        freq = counts.get((a, b), 0) / shots
        sigma = np.sqrt(p[k] * (1 - p[k]) / shots)
        assert abs(freq - p[k]) <= 5 * sigma + 2 / shots


# --- norm and unitarity invariants -------------------------------------------

def test_norm_preserved_over_many_gates():
    rng = np.random.default_rng(17)
    state = random_state_vector(6, seed=17, n_a=3)
    amps = state.amplitudes
    for _ in range(10_000):
        kind = rng.integers(4)
        if kind < 2:
            gate = (sv.rz, sv.rx)[kind](int(rng.integers(6)), rng.uniform(0, 2 * np.pi))
        else:
            q1, q2 = rng.choice(6, size=2, replace=False)
            gate = (sv.cz, sv.cnot)[kind - 2](int(q1), int(q2))
        amps = sv.apply_to_amplitudes(amps, 6, gate)
    assert abs(np.linalg.norm(amps) - 1.0) < 1e-8


@pytest.mark.parametrize("make_gate", [
    lambda: sv.rz(1, 0.731),
    lambda: sv.rx(2, -1.234),
    lambda: sv.cz(0, 2),
    lambda: sv.cnot(2, 0),
])
def test_gate_unitarity_via_adjoint(make_gate):
    state = random_state_vector(3, seed=23, n_a=1)
    gate = make_gate()
    back = sv.apply_gate(sv.apply_gate(state, gate), sv.adjoint(gate))
    assert sv.fidelity(back, state) == pytest.approx(1.0, abs=1e-12)


def test_disjoint_gates_commute():
    state = random_state_vector(4, seed=31, n_a=2)
    g1, g2 = sv.rx(0, 0.4), sv.cz(2, 3)
    order_a = sv.apply_gate(sv.apply_gate(state, g1), g2)
    order_b = sv.apply_gate(sv.apply_gate(state, g2), g1)
    assert sv.fidelity(order_a, order_b) == pytest.approx(1.0, abs=1e-12)


# --- coefficient matrix -------------------------------------------------------

def test_coefficient_matrix_layout():
    # index k = (b << n_a) | a must land at C[a, b]
    amps = np.arange(8, dtype=complex)
    amps = amps / np.linalg.norm(amps)
    state = sv.from_amplitudes(amps, 1, renormalize=True)
    c = sv.coefficient_matrix(state)
    assert c.shape == (2, 4)
    for k in range(8):
        assert c[k & 1, k >> 1] == state.amplitudes[k]
    round_trip = sv.from_coefficient_matrix(c)
    np.testing.assert_allclose(round_trip.amplitudes, state.amplitudes)


# --- file format ---------------------------------------------------------------

def test_state_json_round_trip(tmp_path):
    state = random_state_vector(3, seed=77, n_a=2)
    path = tmp_path / "state.json"
    sv.save_state(state, path)
    loaded = sv.load_state(path)
    np.testing.assert_allclose(loaded.amplitudes, state.amplitudes, atol=1e-15)
    assert (loaded.n_qubits, loaded.n_a) == (3, 2)


def test_state_json_byte_identical_after_canonical_write(tmp_path):
    state = random_state_vector(3, seed=78, n_a=1)
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    sv.save_state(state, first)
    sv.save_state(sv.load_state(first), second)
    assert first.read_bytes() == second.read_bytes()


def test_load_rejects_empty_file(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    with pytest.raises(ValueError):
        sv.load_state(path)


def test_load_rejects_bad_length(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n_qubits": 2, "n_a": 1,
                                "amplitudes": [[1.0, 0.0]] * 3}))
    with pytest.raises(ValueError):
        sv.load_state(path)
