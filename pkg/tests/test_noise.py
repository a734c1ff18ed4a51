"""Calibration-to-channel mapping: conversions, twirl, placement rules."""

import math

import numpy as np
import pytest

from surflab import Circuit
from surflab.calibration import Calibration
from surflab.noise import NoiseConfig, attach_noise, depolarizing_probability, idle_twirl


def test_average_conversion_factors():
    assert depolarizing_probability(0.02, 1) == pytest.approx(0.03)
    assert depolarizing_probability(0.02, 2) == pytest.approx(0.025)
    assert depolarizing_probability(0.02, 1, "direct") == 0.02
    assert depolarizing_probability(0.0, 1) == 0.0


def test_idle_twirl_reference_point():
    """3.9 us against T1=28.4 us / T2=5.3 us: strong dephasing, mild damping."""
    px, py, pz = idle_twirl(3900.0, 28.4, 5.3)
    assert px == py
    assert px == pytest.approx((1 - math.exp(-3.9 / 28.4)) / 4, rel=1e-12)
    assert px == pytest.approx(0.0322, abs=5e-4)
    assert pz == pytest.approx((1 - math.exp(-3.9 / 5.3)) / 2 - px, rel=1e-12)
    assert pz == pytest.approx(0.228, abs=5e-4)


def test_idle_twirl_clamps_negative_dephasing():
    # T2 at the 2*T1 limit drives the Z rate to (just above) zero; beyond it, clamp
    px, py, pz = idle_twirl(1000.0, 10.0, 1000.0)
    assert pz == 0.0
    assert px > 0.0


def test_idle_twirl_zero_duration():
    assert idle_twirl(0.0, 10.0, 10.0) == (0.0, 0.0, 0.0)


def test_idle_twirl_monotone_in_duration():
    ts = [100.0, 500.0, 2500.0, 12500.0]
    rates = [idle_twirl(t, 28.4, 5.3) for t in ts]
    for (x1, _, z1), (x2, _, z2) in zip(rates, rates[1:]):
        assert x2 > x1
        assert z2 > z1
    # saturation: p_x -> 1/4, p_z -> 1/2 - 1/4
    px, py, pz = idle_twirl(1e9, 28.4, 5.3)
    assert px == pytest.approx(0.25, abs=1e-6)
    assert pz == pytest.approx(0.25, abs=1e-6)


@pytest.fixture(scope="module")
def cal():
    return Calibration.load()


def toy_circuit():
    c = Circuit(("D2", "D3", "X1"))
    c.add(0, "RY+", 0)
    c.add(0, "IDLE", 1, params=(3900.0,))
    c.add(1, "CZ", 0, 2)
    c.add(2, "MZ", 0, 1)
    return c


def test_attach_noise_placement(cal):
    noisy = attach_noise(toy_circuit(), cal)
    names = [i.name for i in noisy.instructions]
    assert names == ["RY+", "DEP1", "IDLE", "PAULI", "CZ", "DEP2", "MZ", "FLIP", "FLIP"]
    # channels share the slot of their parent
    for prev, ins in zip(noisy.instructions, noisy.instructions[1:]):
        if ins.is_noise:
            assert ins.t == prev.t
    noisy.validate()


def test_attach_noise_uses_per_qubit_calibration(cal):
    noisy = attach_noise(toy_circuit(), cal)
    dep1 = next(i for i in noisy.instructions if i.name == "DEP1")
    assert dep1.params[0] == pytest.approx(1.5 * cal.qubits["D2"].e1)
    dep2 = next(i for i in noisy.instructions if i.name == "DEP2")
    assert dep2.params[0] == pytest.approx(1.25 * cal.e2("D2", "X1"))
    pauli = next(i for i in noisy.instructions if i.name == "PAULI")
    qc = cal.qubits["D3"]
    assert pauli.params == pytest.approx(idle_twirl(3900.0, qc.t1_us, qc.t2_us))
    flips = [i for i in noisy.instructions if i.name == "FLIP"]
    assert flips[0].params == (cal.qubits["D2"].p01, cal.qubits["D2"].p10)
    assert flips[1].params == (cal.qubits["D3"].p01, cal.qubits["D3"].p10)


def test_attach_noise_switches(cal):
    base = toy_circuit()
    no_gate = attach_noise(base, cal, NoiseConfig(gate_noise=False))
    assert not any(i.name in ("DEP1", "DEP2") for i in no_gate.instructions)
    assert any(i.name == "PAULI" for i in no_gate.instructions)
    no_idle = attach_noise(base, cal, NoiseConfig(idle_noise=False))
    assert not any(i.name == "PAULI" for i in no_idle.instructions)
    no_read = attach_noise(base, cal, NoiseConfig(readout_noise=False))
    assert not any(i.name == "FLIP" for i in no_read.instructions)


def test_attach_noise_direct_conversion(cal):
    direct = attach_noise(toy_circuit(), cal, NoiseConfig(conversion="direct"))
    dep1 = next(i for i in direct.instructions if i.name == "DEP1")
    assert dep1.params[0] == pytest.approx(cal.qubits["D2"].e1)


def test_attach_noise_rejects_noisy_input(cal):
    noisy = attach_noise(toy_circuit(), cal)
    with pytest.raises(ValueError):
        attach_noise(noisy, cal)


def test_noise_config_validation():
    with pytest.raises(ValueError):
        NoiseConfig(conversion="typo")
