"""Layout geometry, schedule structure, and noiseless memory behaviour."""

import numpy as np
import pytest

from surflab import Layout, memory_circuit
from surflab.engines import run
from surflab.surface import CYCLE_NS, PATTERNS, T_1Q_NS, T_2Q_NS, T_WINDOW_NS


EXPECTED_SUPPORT = {
    "X1": {"D2", "D3"},
    "X2": {"D1", "D2", "D4", "D5"},
    "X3": {"D5", "D6", "D8", "D9"},
    "X4": {"D7", "D8"},
    "Z1": {"D1", "D4"},
    "Z2": {"D2", "D3", "D5", "D6"},
    "Z3": {"D4", "D5", "D7", "D8"},
    "Z4": {"D6", "D9"},
}


def test_counts_d3(layout):
    assert len(layout.data) == 9
    assert len(layout.ancillas) == 8
    assert layout.n_qubits == 17
    assert [q.name for q in layout.data] == [f"D{i}" for i in range(1, 10)]


def test_counts_scale_with_distance():
    for d in (3, 5, 7):
        lay = Layout.build(d)
        assert len(lay.data) == d * d
        assert len(lay.ancillas) == d * d - 1
        x = [q for q in lay.ancillas if q.name.startswith("X")]
        z = [q for q in lay.ancillas if q.name.startswith("Z")]
        assert len(x) == len(z) == (d * d - 1) // 2


def test_stabilizer_supports(layout):
    assert {a: set(layout.support[a]) for a in layout.support} == EXPECTED_SUPPORT


def test_checks_commute(layout):
    """X and Z plaquettes always overlap on an even number of data qubits."""
    for xa, xs in EXPECTED_SUPPORT.items():
        if not xa.startswith("X"):
            continue
        for za, zs in EXPECTED_SUPPORT.items():
            if not za.startswith("Z"):
                continue
            assert len(xs & zs) % 2 == 0, (xa, za)


def test_logical_operators(layout):
    assert set(layout.logical_support("Z")) == {"D1", "D2", "D3"}
    assert set(layout.logical_support("X")) == {"D1", "D4", "D7"}
    # anticommute: odd overlap
    assert len(set(layout.logical_support("Z")) & set(layout.logical_support("X"))) % 2 == 1
    # commute with every check
    for anc, sup in EXPECTED_SUPPORT.items():
        basis = "X" if anc.startswith("Z") else "Z"  # opposite-type logical could clash
        overlap = len(set(layout.logical_support(basis)) & sup)
        assert overlap % 2 == 0, (anc, basis)


def test_pattern_pairs_cover_every_coupling_once(layout):
    seen = {}
    for p in PATTERNS:
        pairs = layout.pattern_pairs(p)
        qubits_busy = set()
        for anc, dat in pairs:
            assert dat in EXPECTED_SUPPORT[anc]
            assert anc not in qubits_busy and dat not in qubits_busy
            qubits_busy.update((anc, dat))
            seen.setdefault(anc, []).append(dat)
    for anc, dats in seen.items():
        assert sorted(dats) == sorted(EXPECTED_SUPPORT[anc])


def test_frame_windows_structure(layout):
    counts = {"early": 0, "mid": 0, "late": 0}
    for q in layout.data:
        w = layout.frame_windows(q.name)
        assert set(w) == {"early", "mid", "late"}
        if w["mid"]:
            # the two diagonals carry opposite check types, so a mid window
            # never coexists with an early or late one
            assert not w["early"] and not w["late"]
        assert any(w.values()), f"{q.name} never meets an X check"
        for k, v in w.items():
            counts[k] += bool(v)
    assert counts["mid"] > 0 and counts["early"] > 0 and counts["late"] > 0


def test_ascii_diagram_mentions_every_qubit(layout):
    art = layout.ascii_diagram()
    for q in layout.qubits:
        assert q.name in art


def test_cycle_duration_constant():
    assert CYCLE_NS == 5 * T_1Q_NS + 4 * T_2Q_NS + T_WINDOW_NS
    assert CYCLE_NS == 4153.0


def test_memory_circuit_shapes(layout):
    for basis, extra in (("Z", 0), ("X", 1)):
        for rounds in (1, 3):
            circ, meta = memory_circuit(layout, basis=basis, rounds=rounds)
            circ.validate()
            assert circ.n_measurements == 8 * rounds + 9
            assert meta.n_measurements == circ.n_measurements
            assert circ.max_slot() == extra + 22 * (rounds - 1) + 9
            assert not circ.has_noise()


def test_memory_circuit_rejects_bad_args(layout):
    with pytest.raises(ValueError):
        memory_circuit(layout, basis="Y", rounds=3)
    with pytest.raises(ValueError):
        memory_circuit(layout, basis="Z", rounds=0)


def test_every_qubit_occupied_every_slot(layout):
    """No silent gaps: each qubit acts or idles in each slot of the schedule."""
    circ, _ = memory_circuit(layout, basis="Z", rounds=2)
    by_slot = {}
    for ins in circ.instructions:
        if ins.name == "MZ":
            for q in ins.qubits:
                by_slot.setdefault(ins.t, set()).add(q)
        elif not ins.is_noise:
            for q in ins.qubits:
                by_slot.setdefault(ins.t, set()).add(q)
    gate_slots = [t for t in sorted(by_slot) if t <= 9]  # first cycle body
    for t in gate_slots:
        assert by_slot[t] == set(range(17)), f"slot {t} leaves qubits unaccounted"


def _data_parity(rec, meta, names):
    cols = [meta.data_bit(n) for n in names]
    out = np.zeros(rec.shape[0], dtype=np.uint8)
    for c in cols:
        out ^= rec[:, c]
    return out


def test_noiseless_z_memory_records(layout):
    """Z checks read 0 every round; unreset X ancillas alternate their
    first-round projection; data parities agree with the checks."""
    circ, meta = memory_circuit(layout, basis="Z", rounds=4)
    res = run(circ, shots=200, seed=3)
    rec = res.records
    for name in meta.ancilla_names:
        m = rec[:, [meta.ancilla_bit(k, name) for k in range(1, 5)]]
        if name.startswith("Z"):
            assert np.all(m == 0)
        else:
            first = m[:, 0]
            assert not np.all(first == first[0])  # genuinely random projection
            for k in range(4):
                assert np.array_equal(m[:, k], first if k % 2 == 0 else 0 * first)
    for anc, sup in EXPECTED_SUPPORT.items():
        if anc.startswith("Z"):
            assert np.all(_data_parity(rec, meta, sup) == 0)
    assert np.all(_data_parity(rec, meta, layout.logical_support("Z")) == 0)


def test_noiseless_x_memory_records(layout):
    circ, meta = memory_circuit(layout, basis="X", rounds=3)
    res = run(circ, shots=100, seed=4)
    rec = res.records
    for name in meta.ancilla_names:
        cols = [meta.ancilla_bit(k, name) for k in range(1, 4)]
        if name.startswith("X"):
            assert np.all(rec[:, cols] == 0)
    for anc, sup in EXPECTED_SUPPORT.items():
        if anc.startswith("X"):
            assert np.all(_data_parity(rec, meta, sup) == 0)
    # |-> on each of the three logical-row qubits: the logical X reads -1
    assert np.all(_data_parity(rec, meta, layout.logical_support("X")) == 1)
