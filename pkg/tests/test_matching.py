"""Minimum-weight matching routes agree with brute-force enumeration."""

import numpy as np
import pytest

from surflab.decoder import build_decoder
from surflab.matching import (
    DP_CAP,
    _match_blossom,
    decode_batched,
    match_brute,
    match_single,
)


def random_instance(rng, m):
    """Self-consistent random matching instance over m fired detectors."""
    w = rng.uniform(0.5, 4.0, size=(m, m))
    w = (w + w.T) / 2
    np.fill_diagonal(w, 0.0)
    wb = rng.uniform(0.5, 4.0, size=m)
    par = rng.integers(0, 2, size=(m, m)).astype(np.uint8)
    par = par ^ par.T  # symmetric with zero diagonal
    par_b = rng.integers(0, 2, size=m).astype(np.uint8)
    return w, wb, par, par_b


def test_empty_and_single():
    assert match_single(np.zeros((0, 0)), np.zeros(0), np.zeros((0, 0), dtype=np.uint8), np.zeros(0, dtype=np.uint8)) == (0.0, 0)
    w, wb = np.zeros((1, 1)), np.array([2.5])
    par, par_b = np.zeros((1, 1), dtype=np.uint8), np.array([1], dtype=np.uint8)
    assert match_single(w, wb, par, par_b) == (2.5, 1)


def test_pair_hand_case():
    # edge cheaper than two boundary exits
    w = np.array([[0.0, 1.0], [1.0, 0.0]])
    wb = np.array([3.0, 3.0])
    par = np.array([[0, 1], [1, 0]], dtype=np.uint8)
    par_b = np.array([0, 0], dtype=np.uint8)
    assert match_single(w, wb, par, par_b) == (1.0, 1)
    # now make the boundary exits cheaper
    wb2 = np.array([0.25, 0.25])
    assert match_single(w, wb2, par, par_b) == (0.5, 0)


def test_dp_matches_brute_on_random_instances(rng):
    for m in range(2, 7):
        for _ in range(30):
            w, wb, par, par_b = random_instance(rng, m)
            bw, bp, unique = match_brute(w, wb, par, par_b)
            sw, sp = match_single(w, wb, par, par_b)
            assert sw == pytest.approx(bw)
            if unique:
                assert sp == bp


def test_blossom_matches_brute_on_random_instances(rng):
    for m in range(1, 7):
        for _ in range(20):
            w, wb, par, par_b = random_instance(rng, m)
            bw, bp, unique = match_brute(w, wb, par, par_b)
            gw, gp = _match_blossom(w, wb, par, par_b)
            assert gw == pytest.approx(bw)
            if unique:
                assert gp == bp


@pytest.fixture(scope="module")
def real_graph(noisy_memory):
    circ, meta = noisy_memory(basis="Z", rounds=3)
    return build_decoder(circ, meta)


def test_batched_agrees_with_per_shot_reference(real_graph, rng):
    g = real_graph
    d = g.w.shape[0]
    shots = 300
    events = (rng.random((shots, d)) < 0.22).astype(np.uint8)
    # force a few shots past the vectorised-DP cap into the cluster route
    events[:5] = (rng.random((5, d)) < 0.9).astype(np.uint8)
    sizes = events.sum(axis=1)
    assert sizes.max() > DP_CAP, "test should exercise the large-syndrome path"
    assert (sizes == 0).any() and (sizes == 1).any()
    out = decode_batched(g.w, g.wb, g.parity, g.parity_b, events)
    for s in range(shots):
        fired = np.flatnonzero(events[s])
        ix = np.ix_(fired, fired)
        ref_w, ref_p = match_single(g.w[ix], g.wb[fired], g.parity[ix], g.parity_b[fired])
        assert out[s] == ref_p, f"shot {s} fired {fired.tolist()}"


def test_batched_deterministic(real_graph, rng):
    g = real_graph
    events = (rng.random((64, g.w.shape[0])) < 0.3).astype(np.uint8)
    a = decode_batched(g.w, g.wb, g.parity, g.parity_b, events)
    b = decode_batched(g.w, g.wb, g.parity, g.parity_b, events.copy())
    assert np.array_equal(a, b)
