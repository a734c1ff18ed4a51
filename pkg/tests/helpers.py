"""Shared test utilities: random Clifford programs and single-fault injection."""

import numpy as np

from surflab import Circuit, Instruction
from surflab.engines import run

CLIFFORD_GATES = ("RX+", "RX-", "RY+", "RY-", "H", "X", "Y", "Z")

# non-identity single-qubit Pauli labels in channel-code order
PAULI_LABELS = {1: "X", 2: "Y", 3: "Z"}


def random_clifford_circuit(rng, max_qubits=4, max_meas=4, with_noise=False):
    """Small random stabilizer program with mid-circuit measurement."""
    n = int(rng.integers(1, max_qubits + 1))
    names = tuple(f"q{i}" for i in range(n))
    circ = Circuit(names)
    n_meas = 0
    t = 0
    depth = int(rng.integers(3, 12))
    for _ in range(depth):
        roll = rng.random()
        if roll < 0.55:
            for q in range(n):
                if rng.random() < 0.7:
                    circ.add(t, str(rng.choice(CLIFFORD_GATES)), q)
        elif roll < 0.75 and n >= 2:
            a, b = rng.choice(n, size=2, replace=False)
            circ.add(t, "CZ", int(a), int(b))
        elif n_meas < max_meas:
            q = int(rng.integers(0, n))
            circ.add(t, "MZ", q)
            n_meas += 1
            if with_noise and rng.random() < 0.5:
                circ.add(t, "FLIP", q, params=(float(rng.uniform(0, 0.1)), float(rng.uniform(0, 0.1))))
        if with_noise and rng.random() < 0.4:
            q = int(rng.integers(0, n))
            circ.add(t, "DEP1", q, params=(float(rng.uniform(0, 0.2)),))
        t += 1
    if n_meas == 0:
        circ.add(t, "MZ", 0)
    circ.validate()
    return circ


def measurement_column(circuit: Circuit, instr_index: int, qubit: int) -> int:
    """Record column of the most recent MZ of ``qubit`` before ``instr_index``."""
    col = -1
    pos = 0
    for j, ins in enumerate(circuit.instructions):
        if j >= instr_index:
            break
        if ins.name == "MZ":
            for q in ins.qubits:
                if q == qubit:
                    col = pos
                pos += 1
    if col < 0:
        raise ValueError("no measurement of that qubit precedes the channel")
    return col


def _forced_pauli(t: int, q: int, code: int) -> Instruction:
    """A PAULI channel that fires its ``code`` component with certainty."""
    params = [0.0, 0.0, 0.0]
    params[code - 1] = 1.0
    return Instruction(t, "PAULI", (q,), tuple(params))


def single_fault_variants(noisy: Circuit):
    """Yield (label, circuit, flip_column) for every fault location/component.

    Each variant is the noise-free circuit with one probability-1 Pauli
    channel where a stochastic channel sat (channels share slots with their
    parent gate, so slot exclusivity is preserved); readout faults return
    the record column to flip classically instead (flip_column >= 0).
    """
    base = [ins for ins in noisy.instructions if not ins.is_noise]
    for i, ins in enumerate(noisy.instructions):
        if not ins.is_noise:
            continue
        prefix = [b for b in noisy.instructions[:i] if not b.is_noise]
        suffix = [b for b in noisy.instructions[i:] if not b.is_noise]
        if ins.name in ("DEP1", "PAULI"):
            q = ins.qubits[0]
            for code, label in PAULI_LABELS.items():
                if ins.name == "PAULI" and ins.params[code - 1] == 0.0:
                    continue
                fault = _forced_pauli(ins.t, q, code)
                yield (
                    f"{ins.name}@{i} {label} q{q} t{ins.t}",
                    Circuit(noisy.qubit_names, prefix + [fault] + suffix),
                    -1,
                )
        elif ins.name == "DEP2":
            a, b = ins.qubits
            for pair in range(1, 16):
                pa, pb = pair // 4, pair % 4
                faults = []
                if pa:
                    faults.append(_forced_pauli(ins.t, a, pa))
                if pb:
                    faults.append(_forced_pauli(ins.t, b, pb))
                yield (
                    f"DEP2@{i} {PAULI_LABELS.get(pa, 'I')}{PAULI_LABELS.get(pb, 'I')} q{a},{b} t{ins.t}",
                    Circuit(noisy.qubit_names, prefix + faults + suffix),
                    -1,
                )
        elif ins.name == "FLIP":
            q = ins.qubits[0]
            col = measurement_column(noisy, i, q)
            yield (f"FLIP@{i} q{q} col{col}", Circuit(noisy.qubit_names, list(base)), col)


def run_single_shot(circuit: Circuit, flip_column: int = -1) -> np.ndarray:
    """One deterministic shot of a noise-free (possibly faulted) program."""
    res = run(circuit, shots=1, seed=0)
    records = res.records
    if flip_column >= 0:
        records = records.copy()
        records[0, flip_column] ^= 1
    return records
