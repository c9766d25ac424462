"""State factory: random ensemble statistics, canonical states, fixture loading."""

import numpy as np
import pytest

from varschmidt import statevec as sv
from varschmidt.ansatz import AnsatzConfig
from varschmidt.oracle import exact_entropy, exact_schmidt
from varschmidt.states import (
    ame_state,
    bell_state,
    ghz_state,
    product_state,
    random_coefficients,
    random_state,
)
from varschmidt.variational import train

S2 = 1.0 / np.sqrt(2.0)


def test_random_state_deterministic():
    a = random_state(2, 2, seed=123)
    b = random_state(2, 2, seed=123)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    c = random_state(2, 2, seed=124)
    assert not np.allclose(a.amplitudes, c.amplitudes)


def test_random_state_normalized_and_shaped():
    state = random_state(1, 1, seed=0)
    assert state.n_qubits == 2
    assert exact_schmidt(state).values.shape[0] <= 2
    assert abs(np.linalg.norm(state.amplitudes) - 1.0) < 1e-12


def test_random_ensemble_is_highly_entangled():
    entropies = [exact_entropy(random_state(3, 3, seed)) for seed in range(100)]
    assert np.mean(entropies) > 2.0  # of the 3-bit maximum


def test_random_coefficients_mean_near_zero():
    # mean of one raw real coordinate over many seeds
    values = [random_coefficients(1, 1, seed)[0, 0].real for seed in range(10_000)]
    assert abs(np.mean(values)) < 0.01


def test_random_coefficients_range():
    c = random_coefficients(2, 3, seed=5)
    assert c.shape == (4, 8)
    assert np.max(np.abs(c.real)) <= 0.5
    assert np.max(np.abs(c.imag)) <= 0.5


def test_product_state_zero_entropy():
    for seed in range(5):
        assert exact_entropy(product_state(2, 3, seed)) < 1e-10


def test_product_state_trains_to_zero_cost():
    state = product_state(1, 2, seed=7)
    config_a, config_b = AnsatzConfig(1, 1), AnsatzConfig(2, 1)
    _, report = train(state, config_a, config_b, tolerance=1e-8, restarts=5, seed=0)
    assert report.final_cost < 1e-8


def test_product_differs_from_random_for_same_seed():
    assert sv.fidelity(product_state(1, 1, seed=3), random_state(1, 1, seed=3)) < 1 - 1e-6


def test_bell_state_oracle():
    np.testing.assert_allclose(exact_schmidt(bell_state()).values, [S2, S2], atol=1e-12)


def test_ghz_entropy_and_bipartition():
    state = ghz_state(6)
    assert (state.n_a, state.n_b) == (3, 3)
    assert exact_entropy(state) == pytest.approx(1.0, abs=1e-12)


def test_ghz_rejects_single_qubit():
    with pytest.raises(ValueError):
        ghz_state(1)


def test_ame_fixture_entropy():
    assert exact_entropy(ame_state()) == pytest.approx(3.0, abs=1e-9)


def test_ame_fixture_round_trips(tmp_path):
    state = ame_state()
    path = tmp_path / "copy.json"
    sv.save_state(state, path)
    reloaded = sv.load_state(path)
    np.testing.assert_array_equal(reloaded.amplitudes, state.amplitudes)
