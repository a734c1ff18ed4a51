"""Fidelity estimation, post-selection masks, and decay fitting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surflab import build_detectors, detection_events, fit_memory_curve, memory_circuit
from surflab.analysis import (
    ErrorEstimate,
    expected_logical_parity,
    lifetime_us,
    logical_errors,
    physical_reference_fidelity,
    post_selection_masks,
)
from surflab.engines import run


def test_expected_parity_pinned_by_simulation(layout):
    for basis, want in (("Z", 0), ("X", 1)):
        circ, meta = memory_circuit(layout, basis=basis, rounds=2)
        assert expected_logical_parity(meta) == want
        res = run(circ, shots=50, seed=9)
        assert not logical_errors(res.records, meta).any()


def test_logical_errors_applies_correction(layout):
    circ, meta = memory_circuit(layout, basis="Z", rounds=1)
    rec = run(circ, shots=10, seed=2).records
    corr = np.zeros(10, dtype=np.uint8)
    corr[3] = 1
    err = logical_errors(rec, meta, correction=corr)
    assert err[3] == 1 and err.sum() == 1


def test_post_selection_masks_hand_case(layout):
    circ, meta = memory_circuit(layout, basis="Z", rounds=2)
    dset = build_detectors(meta)
    rec = run(circ, shots=4, seed=1).records.copy()
    # shot 1: ancilla-chain event; shot 2: final data-comparison event; shot 3: both
    rec[1, meta.ancilla_bit(1, "Z1")] ^= 1
    rec[2, meta.data_bit("D1")] ^= 1
    rec[3, meta.ancilla_bit(1, "Z2")] ^= 1
    rec[3, meta.data_bit("D9")] ^= 1
    ev = detection_events(rec, dset)
    masks = post_selection_masks(ev, dset)
    assert masks["none"].tolist() == [True, True, True, True]
    # an ancilla flip in mid-chain also fires the final comparison round
    assert masks["ancilla_only"].tolist() == [True, False, True, False]
    assert masks["data_only"].tolist() == [True, False, False, False]
    assert masks["both"].tolist() == [True, False, False, False]
    assert set(masks) == {"none", "data_only", "ancilla_only", "both"}


def test_error_estimate_basics():
    err = np.array([0, 0, 1, 0], dtype=np.uint8)
    est = ErrorEstimate.from_indicator(err)
    assert est.p == 0.25 and est.n == 4
    assert est.fidelity == 0.75
    assert est.se == pytest.approx(math.sqrt(0.25 * 0.75 / 4))
    masked = ErrorEstimate.from_indicator(err, mask=np.array([True, True, False, True]))
    assert masked.p == 0.0 and masked.n == 3
    empty = ErrorEstimate.from_indicator(err, mask=np.zeros(4, dtype=bool))
    assert math.isnan(empty.p) and empty.n == 0


def synthetic_curve(eps, k0, ks):
    return 0.5 * (1 + (1 - 2 * eps) ** (np.asarray(ks, dtype=float) - k0))


def test_fit_recovers_clean_curves():
    ks = np.arange(1, 6)
    for eps in (0.01, 0.05, 0.2):
        fit = fit_memory_curve(ks, synthetic_curve(eps, 0.3, ks))
        assert fit.eps == pytest.approx(eps, rel=1e-6)
        assert fit.k0 == pytest.approx(0.3, abs=1e-6)
        assert fit.method == "linear"


def test_fit_profile_handles_points_below_half():
    ks = np.arange(1, 6)
    f = synthetic_curve(0.42, 0.0, ks)  # hugs one half within a few cycles
    f[-1] = 0.4996  # sampling noise pushes the tail below half
    fit = fit_memory_curve(ks, f)
    assert fit.method == "profile"
    assert fit.eps == pytest.approx(0.42, abs=0.03)


def test_fit_methods_agree_on_good_data():
    ks = np.arange(1, 8)
    f = synthetic_curve(0.08, 0.5, ks)
    lin = fit_memory_curve(ks, f, method="linear")
    prof = fit_memory_curve(ks, f, method="profile")
    assert prof.eps == pytest.approx(lin.eps, rel=1e-3)


@settings(max_examples=30, deadline=None)
@given(
    eps=st.floats(0.005, 0.3),
    k0=st.floats(-0.5, 1.0),
    seed=st.integers(0, 10**6),
)
def test_fit_recovery_under_binomial_noise(eps, k0, seed):
    rng = np.random.default_rng(seed)
    ks = np.arange(1, 6)
    shots = 200_000
    f = synthetic_curve(eps, k0, ks)
    fhat = rng.binomial(shots, f) / shots
    fit = fit_memory_curve(ks, fhat)
    assert fit.eps == pytest.approx(eps, rel=0.08, abs=0.002)


def test_fit_input_validation():
    with pytest.raises(ValueError):
        fit_memory_curve([1], [0.9])
    with pytest.raises(ValueError):
        fit_memory_curve([1, 1, 2], [0.9, 0.9, 0.8])
    with pytest.raises(ValueError):
        fit_memory_curve([1, 2], [0.9, 0.8], method="bogus")
    with pytest.raises(ValueError):
        fit_memory_curve([1, 2], [0.6, 0.4], method="linear")


def test_lifetime_conversion():
    # 4.153 us cycles at eps = 0.0322 sit a touch above 64 us
    assert lifetime_us(0.0322) == pytest.approx(64.49, abs=0.01)
    assert lifetime_us(0.5) == pytest.approx(4.153, abs=1e-9)
    assert lifetime_us(0.0) == math.inf


def test_physical_reference_fidelity():
    assert physical_reference_fidelity(0, t1_us=28.4) == pytest.approx(1.0)
    k = np.array([1.0, 10.0])
    f = physical_reference_fidelity(k, t1_us=28.4)
    assert f[0] == pytest.approx(0.5 * (1 + math.exp(-4.153 / 28.4)))
    assert f[1] < f[0]
