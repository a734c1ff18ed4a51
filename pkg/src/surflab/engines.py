"""Circuit execution drivers and the packed shot-record file format.

``run`` executes a circuit for a number of shots on either the stabilizer
tableau engine or the dense statevector engine and returns the classical
measurement records.  Shots are split into fixed-size shards of 65536; each
shard draws from its own ``Philox`` stream keyed by ``(seed, shard_index)``,
so results are bit-for-bit reproducible and independent of how many worker
processes execute the shards.

Shot records are persisted in the ``QSHOT1`` format: a 30-byte little-endian
header (magic ``QSHOT1``, u32 qubit count, u32 measurement count, u64 shot
count, u64 seed) followed by one row per shot of little-endian packed bits,
``ceil(m/8)`` bytes each.
"""

from __future__ import annotations

import concurrent.futures
import os
import struct
from dataclasses import dataclass

import numpy as np

from .circuit import GATE_1Q_UNITARIES, Circuit
from .statevector import StatevectorRunner
from .tableau import BatchedTableau

SHARD_SHOTS = 65536

QSHOT_MAGIC = b"QSHOT1"
_HEADER = struct.Struct("<6sIIQQ")


@dataclass
class RunResult:
    """Classical output of a simulation.

    ``deterministic`` flags record columns whose pre-readout outcome is
    fixed by the circuit (a property of the program, not of the noise);
    meaningful for the tableau engine, where the branch structure is shared
    across shots.
    """

    records: np.ndarray  # (shots, m) uint8
    measured_qubits: list[int]
    deterministic: np.ndarray  # (m,) bool
    seed: int
    engine: str


def _run_tableau_shard(circuit: Circuit, shots: int, rng: np.random.Generator):
    sim = BatchedTableau(circuit.n_qubits, shots)
    records: list[np.ndarray] = []
    det_flags: list[bool] = []
    last_meas: dict[int, int] = {}
    for ins in circuit.instructions:
        name = ins.name
        if name == "MZ":
            for q in ins.qubits:
                out, det = sim.measure_z(q, rng)
                last_meas[q] = len(records)
                records.append(out)
                det_flags.append(det)
        elif name == "DEP1":
            (q,) = ins.qubits
            p = ins.params[0]
            u = rng.random(shots)
            idx = np.searchsorted(np.cumsum([1.0 - p, p / 3, p / 3]), u, side="right")
            fx = (idx == 1) | (idx == 2)
            fz = (idx == 2) | (idx == 3)
            sim.apply_pauli_flips(q, fx, fz)
        elif name == "PAULI":
            (q,) = ins.qubits
            px, py, pz = ins.params
            u = rng.random(shots)
            idx = np.searchsorted(np.cumsum([1.0 - px - py - pz, px, py]), u, side="right")
            fx = (idx == 1) | (idx == 2)
            fz = (idx == 2) | (idx == 3)
            sim.apply_pauli_flips(q, fx, fz)
        elif name == "DEP2":
            a, b = ins.qubits
            p = ins.params[0]
            u = rng.random(shots)
            if p > 0.0:
                c = np.minimum((u / (p / 15)).astype(np.int64), 14)
                # pair code 0 = II (no error); codes 1..15 row-major over IXYZ x IXYZ
                pair = np.where(u < p, c + 1, 0)
                pa = pair // 4
                pb = pair % 4
                fxa = (pa == 1) | (pa == 2)
                fza = (pa == 2) | (pa == 3)
                fxb = (pb == 1) | (pb == 2)
                fzb = (pb == 2) | (pb == 3)
                sim.apply_pauli_flips(a, fxa, fza)
                sim.apply_pauli_flips(b, fxb, fzb)
        elif name == "FLIP":
            (q,) = ins.qubits
            p01, p10 = ins.params
            u = rng.random(shots)
            col = records[last_meas[q]]
            flip = np.where(col == 0, u < p01, u < p10)
            col ^= flip.astype(np.uint8)
        else:
            sim.apply_gate(name, ins.qubits)
    rec = np.stack(records, axis=1) if records else np.zeros((shots, 0), np.uint8)
    return rec, np.asarray(det_flags, dtype=bool)


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(shard,))
    return np.random.Generator(np.random.Philox(ss))


def _run_one_shard(args) -> tuple[int, np.ndarray, np.ndarray]:
    circuit, shots, seed, shard, engine = args
    rng = _shard_rng(seed, shard)
    if engine == "tableau":
        rec, det = _run_tableau_shard(circuit, shots, rng)
    else:
        rec, det_list = StatevectorRunner(circuit, shots, rng).run()
        det = np.asarray(det_list, dtype=bool)
    return shard, rec, det


def run(
    circuit: Circuit,
    shots: int,
    seed: int,
    engine: str = "auto",
    workers: int = 1,
) -> RunResult:
    """Execute ``circuit`` for ``shots`` shots.

    engine: ``"tableau"`` (Clifford + Pauli noise only), ``"statevector"``
    (any gate, limited register size), or ``"auto"`` which picks the tableau
    engine whenever the circuit allows it.
    """
    circuit.validate()
    if engine == "auto":
        engine = "tableau" if circuit.is_clifford() else "statevector"
    if engine not in ("tableau", "statevector"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "tableau" and not circuit.is_clifford():
        raise ValueError("circuit contains non-Clifford gates; use the statevector engine")

    shard_sizes = [
        min(SHARD_SHOTS, shots - k * SHARD_SHOTS)
        for k in range((shots + SHARD_SHOTS - 1) // SHARD_SHOTS)
    ]
    jobs = [(circuit, size, seed, k, engine) for k, size in enumerate(shard_sizes)]
    if workers > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            parts = sorted(pool.map(_run_one_shard, jobs), key=lambda r: r[0])
    else:
        parts = [_run_one_shard(j) for j in jobs]
    records = np.concatenate([p[1] for p in parts], axis=0)
    det = parts[0][2]
    return RunResult(
        records=records,
        measured_qubits=circuit.measured_qubits(),
        deterministic=det,
        seed=seed,
        engine=engine,
    )


# ---------------------------------------------------------------------------
# QSHOT1 file IO


def write_qshot(path: str | os.PathLike, records: np.ndarray, n_qubits: int, seed: int) -> None:
    """Write a (shots, m) uint8 bit array to a QSHOT1 file."""
    records = np.ascontiguousarray(records, dtype=np.uint8)
    if records.ndim != 2:
        raise ValueError("records must be a 2-D (shots, measurements) array")
    shots, m = records.shape
    packed = np.packbits(records, axis=1, bitorder="little") if m else np.zeros((shots, 0), np.uint8)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(QSHOT_MAGIC, n_qubits, m, shots, seed))
        fh.write(packed.tobytes())


def read_qshot(path: str | os.PathLike) -> tuple[np.ndarray, dict]:
    """Read a QSHOT1 file, returning (records (shots, m) uint8, header dict)."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, n_qubits, m, shots, seed = _HEADER.unpack(head)
        if magic != QSHOT_MAGIC:
            raise ValueError(f"{path}: not a QSHOT1 file")
        row_bytes = (m + 7) // 8
        payload = fh.read()
    if len(payload) != shots * row_bytes:
        raise ValueError(f"{path}: payload size mismatch")
    if m:
        packed = np.frombuffer(payload, dtype=np.uint8).reshape(shots, row_bytes)
        records = np.unpackbits(packed, axis=1, bitorder="little")[:, :m]
    else:
        records = np.zeros((shots, 0), np.uint8)
    header = {"n_qubits": n_qubits, "n_measurements": m, "shots": shots, "seed": seed}
    return records, header
