"""Benchmarking circuits, ideal distributions, and the fidelity estimator."""

import numpy as np
import pytest

from surflab import attach_noise, xeb_circuit
from surflab.surface import PATTERNS
from surflab.xeb import (
    GATE_POOL,
    ideal_probabilities,
    predicted_fidelity,
    sample_trajectories,
    with_measurement,
    xeb_fidelity,
)


def test_layer_structure(layout):
    circ = xeb_circuit(layout, seed=0, n_1q_layers=5)
    by_slot = {}
    for ins in circ.instructions:
        by_slot.setdefault(ins.t, []).append(ins)
    assert sorted(by_slot) == list(range(9))
    for t in range(0, 9, 2):  # single-qubit layers cover all 17 qubits
        assert sorted(q for i in by_slot[t] for q in i.qubits) == list(range(17))
        assert all(i.name in GATE_POOL for i in by_slot[t])
    for j, t in enumerate(range(1, 9, 2)):  # CZ layers follow the cycle order
        pairs = [i for i in by_slot[t] if i.name == "CZ"]
        assert len(pairs) == len(layout.pattern_pairs(PATTERNS[j % 4]))
        idles = [i for i in by_slot[t] if i.name == "IDLE"]
        busy = {q for i in pairs for q in i.qubits}
        assert busy | {q for i in idles for q in i.qubits} == set(range(17))


def test_no_repeated_gate_on_same_qubit(layout):
    circ = xeb_circuit(layout, seed=3)
    seq = {}
    for ins in circ.instructions:
        if ins.name in GATE_POOL:
            seq.setdefault(ins.qubits[0], []).append(ins.name)
    for q, names in seq.items():
        assert len(names) == 21
        assert all(a != b for a, b in zip(names, names[1:])), f"qubit {q} repeats"


def test_circuit_deterministic_in_seed(layout):
    a = xeb_circuit(layout, seed=7).to_text()
    b = xeb_circuit(layout, seed=7).to_text()
    c = xeb_circuit(layout, seed=8).to_text()
    assert a == b
    assert a != c


def test_ideal_probabilities_normalised_small(layout):
    circ = xeb_circuit(layout, seed=1, n_1q_layers=3)
    p = ideal_probabilities(circ)
    assert p.shape == (2**17,)
    assert p.sum() == pytest.approx(1.0, abs=1e-9)
    # a quarter-turn-only circuit spreads weight over many bitstrings
    assert (p > 1e-12).sum() > 1000


def test_ideal_probabilities_rejects_noise(layout, cal):
    noisy = attach_noise(with_measurement(xeb_circuit(layout, seed=1, n_1q_layers=3)), cal)
    with pytest.raises(ValueError):
        ideal_probabilities(noisy)


def test_predicted_fidelity_hand_formula(layout, cal):
    noisy = attach_noise(with_measurement(xeb_circuit(layout, seed=2, n_1q_layers=3)), cal)
    expect = 1.0
    for ins in noisy.instructions:
        if ins.name in ("DEP1", "DEP2"):
            expect *= 1 - ins.params[0]
        elif ins.name == "PAULI":
            expect *= 1 - sum(ins.params)
        elif ins.name == "FLIP":
            expect *= 1 - (ins.params[0] + ins.params[1]) / 2
    assert predicted_fidelity(noisy) == pytest.approx(expect, rel=1e-12)
    assert 0.0 < predicted_fidelity(noisy) < 1.0


def test_xeb_fidelity_hand_cases():
    # ideal sampler on a known skewed distribution reproduces F = 1 in mean
    p = np.array([0.5, 0.25, 0.125, 0.125])
    rng = np.random.default_rng(0)
    samples = rng.choice(4, size=200_000, p=p)
    f, se = xeb_fidelity(p, samples)
    assert f == pytest.approx(np.sum(4 * p * p) - 1, abs=5 * se)
    # uniform sampling scores zero
    uniform = rng.integers(0, 4, size=200_000)
    f0, se0 = xeb_fidelity(p, uniform)
    assert abs(f0) < 5 * se0
    # degenerate: single repeated sample has spread zero but defined mean
    f1, _ = xeb_fidelity(p, np.zeros(10, dtype=np.int64))
    assert f1 == pytest.approx(4 * 0.5 - 1)


@pytest.fixture(scope="module")
def small_noisy(cal):
    from surflab import Layout

    layout = Layout.build(3)
    circ = with_measurement(xeb_circuit(layout, seed=5, n_1q_layers=5))
    return ideal_probabilities(circ), attach_noise(circ, cal)


def test_sample_trajectories_deterministic_and_worker_independent(small_noisy):
    _, noisy = small_noisy
    a = sample_trajectories(noisy, entropy=42, trajectories=10, samples_per_trajectory=50)
    b = sample_trajectories(noisy, entropy=42, trajectories=10, samples_per_trajectory=50)
    assert np.array_equal(a, b)
    assert len(a) == 500
    c = sample_trajectories(
        noisy, entropy=42, trajectories=10, samples_per_trajectory=50, workers=2
    )
    assert np.array_equal(a, c)
    d = sample_trajectories(noisy, entropy=43, trajectories=10, samples_per_trajectory=50)
    assert not np.array_equal(a, d)


def test_noisy_sampling_scores_between_zero_and_one(small_noisy):
    ideal_p, noisy = small_noisy
    idx = sample_trajectories(noisy, entropy=11, trajectories=40, samples_per_trajectory=250)
    f, se = xeb_fidelity(ideal_p, idx)
    assert 0.05 < f < 1.0  # five layers of calibrated noise: clearly degraded
    assert f == pytest.approx(predicted_fidelity(noisy), abs=max(5 * se, 0.1))
