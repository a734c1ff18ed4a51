"""Cross-entropy benchmarking of the full 17-qubit device circuit.

A benchmarking circuit interleaves layers of random single-qubit rotations
(drawn from {RX+, RY+, RXY}, never repeating on a qubit twice in a row)
with the four CZ layer patterns cycled in A, B, C, D order.  The linear
cross-entropy fidelity of sampled bitstrings x_i against the ideal output
distribution p(x) is

    F = 2**n * mean_i p(x_i) - 1,

which is 1 for perfect sampling of a scrambling circuit and 0 for the
uniform distribution.  Noisy estimates come from stochastic Pauli
trajectories of the statevector plus classical readout bit flips, and are
compared against the first-order prediction: the product of no-error
probabilities of every inserted channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calibration import Calibration
from .circuit import GATE_1Q_UNITARIES, Circuit
from .noise import NoiseConfig, attach_noise
from .statevector import apply_1q, apply_cz
from .surface import PATTERNS, T_2Q_NS, Layout

GATE_POOL = ("RX+", "RY+", "RXY")
DEFAULT_1Q_LAYERS = 21
_TRAJ_BATCH = 8


def xeb_circuit(layout: Layout, seed: int, n_1q_layers: int = DEFAULT_1Q_LAYERS) -> Circuit:
    """Random benchmarking circuit over every qubit of ``layout``.

    ``n_1q_layers`` single-qubit layers sandwich ``n_1q_layers - 1`` CZ
    layers whose patterns cycle A, B, C, D.  Qubits not in a CZ layer idle
    for its duration; single-qubit layers cover every qubit, so only CZ
    slots carry idles.
    """
    if n_1q_layers < 1:
        raise ValueError("need at least one single-qubit layer")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed)))
    names = layout.qubit_names
    n = len(names)
    circ = Circuit(names)
    prev = None
    t = 0
    for layer in range(n_1q_layers):
        if prev is None:
            pick = rng.integers(0, 3, size=n)
        else:
            pick = (prev + 1 + rng.integers(0, 2, size=n)) % 3
        for q in range(n):
            circ.add(t, GATE_POOL[pick[q]], q)
        prev = pick
        t += 1
        if layer == n_1q_layers - 1:
            break
        pattern = PATTERNS[layer % len(PATTERNS)]
        busy = set()
        for anc, dat in layout.pattern_pairs(pattern):
            circ.add(t, "CZ", layout.index(anc), layout.index(dat))
            busy.update((anc, dat))
        for q, nm in enumerate(names):
            if nm not in busy:
                circ.add(t, "IDLE", q, params=(T_2Q_NS,))
        t += 1
    circ.validate()
    return circ


def with_measurement(circ: Circuit) -> Circuit:
    """Copy of ``circ`` ending in a simultaneous Z measurement of all qubits."""
    out = Circuit(circ.qubit_names, list(circ.instructions))
    out.add(circ.max_slot() + 1, "MZ", *range(len(circ.qubit_names)))
    out.validate()
    return out


def ideal_probabilities(circ: Circuit) -> np.ndarray:
    """Exact output distribution |<x|U|0>|^2 of the unitary part of ``circ``."""
    n = len(circ.qubit_names)
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    for ins in circ.instructions:
        if ins.name in ("IDLE", "MZ"):
            continue
        if ins.is_noise:
            raise ValueError("ideal_probabilities expects a noise-free circuit")
        if ins.name == "CZ":
            for a, b in zip(ins.qubits[::2], ins.qubits[1::2]):
                apply_cz(state, a, b, n)
        else:
            u = GATE_1Q_UNITARIES[ins.name]
            for q in ins.qubits:
                apply_1q(state, u, q, n)
    return np.abs(state) ** 2


def predicted_fidelity(noisy_circ: Circuit) -> float:
    """First-order no-error estimate: product of (1 - p) over all channels.

    Depolarizing and Pauli-twirl channels contribute their total error
    probability; readout channels contribute the mean assignment error.
    """
    f = 1.0
    for ins in noisy_circ.instructions:
        if ins.name in ("DEP1", "DEP2"):
            f *= 1.0 - ins.params[0]
        elif ins.name == "PAULI":
            f *= 1.0 - sum(ins.params)
        elif ins.name == "FLIP":
            f *= 1.0 - 0.5 * (ins.params[0] + ins.params[1])
    return f


def readout_error_arrays(noisy_circ: Circuit) -> tuple[np.ndarray, np.ndarray]:
    """Per-qubit (p01, p10) arrays taken from the FLIP channels of a circuit."""
    n = len(noisy_circ.qubit_names)
    p01 = np.zeros(n)
    p10 = np.zeros(n)
    for ins in noisy_circ.instructions:
        if ins.name == "FLIP":
            p01[ins.qubits[0]] = ins.params[0]
            p10[ins.qubits[0]] = ins.params[1]
    return p01, p10


# ---------------------------------------------------------------------------
# trajectory sampler (throughput-oriented kernels on batched complex64 states)


def _apply_1q_batch(state: np.ndarray, u: np.ndarray, q: int, n: int) -> None:
    v = state.reshape(state.shape[0], 1 << (n - 1 - q), 2, 1 << q)
    v0 = v[:, :, 0, :]
    v1 = v[:, :, 1, :]
    t0 = v0 * u[0, 0] + v1 * u[0, 1]
    v1[...] = v0 * u[1, 0] + v1 * u[1, 1]
    v0[...] = t0


def _apply_cz_batch(state: np.ndarray, a: int, b: int, n: int) -> None:
    qh, ql = (a, b) if a > b else (b, a)
    v = state.reshape(
        state.shape[0], 1 << (n - 1 - qh), 2, 1 << (qh - ql - 1), 2, 1 << ql
    )
    sub = v[:, :, 1, :, 1, :]
    np.negative(sub, out=sub)


def _apply_pauli_row(row: np.ndarray, code: int, q: int, n: int) -> None:
    """Apply X (1), Y (2, up to global phase) or Z (3) to one state row."""
    v = row.reshape(1 << (n - 1 - q), 2, 1 << q)
    if code == 3:
        np.negative(v[:, 1, :], out=v[:, 1, :])
        return
    tmp = v[:, 0, :].copy()
    v[:, 0, :] = v[:, 1, :]
    v[:, 1, :] = tmp
    if code == 2:
        np.negative(v[:, 1, :], out=v[:, 1, :])


def _compile_ops(circ: Circuit) -> list[tuple]:
    """Flatten instructions into primitive ops; zero-probability channels drop."""
    ops: list[tuple] = []
    for ins in circ.instructions:
        if ins.name in ("IDLE", "MZ", "FLIP"):
            continue
        if ins.name == "CZ":
            for a, b in zip(ins.qubits[::2], ins.qubits[1::2]):
                ops.append(("cz", a, b))
        elif ins.name == "DEP1":
            if ins.params[0] > 0:
                ops.append(("dep1", ins.params[0], ins.qubits[0]))
        elif ins.name == "DEP2":
            if ins.params[0] > 0:
                ops.append(("dep2", ins.params[0], ins.qubits[0], ins.qubits[1]))
        elif ins.name == "PAULI":
            if sum(ins.params) > 0:
                ops.append(("pauli", *ins.params, ins.qubits[0]))
        elif ins.name in GATE_1Q_UNITARIES:
            u = GATE_1Q_UNITARIES[ins.name].astype(np.complex64)
            for q in ins.qubits:
                ops.append(("g1", u, q))
        else:
            raise ValueError(f"cannot simulate {ins.name} trajectories")
    return ops


def _run_trajectory_batch(ops: list[tuple], n: int, n_rows: int, rng: np.random.Generator) -> np.ndarray:
    state = np.zeros((n_rows, 1 << n), dtype=np.complex64)
    state[:, 0] = 1.0
    for op in ops:
        kind = op[0]
        if kind == "g1":
            _apply_1q_batch(state, op[1], op[2], n)
        elif kind == "cz":
            _apply_cz_batch(state, op[1], op[2], n)
        elif kind == "dep1":
            _, p, q = op
            u01 = rng.random(n_rows)
            hit = np.nonzero(u01 < p)[0]
            if len(hit):
                code = np.minimum((u01 / (p / 3.0)).astype(np.int64), 2) + 1
                for t in hit:
                    _apply_pauli_row(state[t], int(code[t]), q, n)
        elif kind == "pauli":
            _, px, py, pz, q = op
            u01 = rng.random(n_rows)
            for t in np.nonzero(u01 < px + py + pz)[0]:
                u = u01[t]
                c = 1 if u < px else (2 if u < px + py else 3)
                _apply_pauli_row(state[t], c, q, n)
        elif kind == "dep2":
            _, p, a, b = op
            u01 = rng.random(n_rows)
            hit = np.nonzero(u01 < p)[0]
            if len(hit):
                pair = np.minimum((u01 / (p / 15.0)).astype(np.int64), 14) + 1
                for t in hit:
                    ca, cb = int(pair[t]) // 4, int(pair[t]) % 4
                    if ca:
                        _apply_pauli_row(state[t], ca, a, n)
                    if cb:
                        _apply_pauli_row(state[t], cb, b, n)
    return state


def _sample_rows(state: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(np.abs(state) ** 2, axis=1, dtype=np.float64)
    u = rng.random((state.shape[0], m)) * cdf[:, -1:]
    idx = np.empty((state.shape[0], m), dtype=np.int64)
    for t in range(state.shape[0]):
        idx[t] = np.searchsorted(cdf[t], u[t], side="right")
    np.clip(idx, 0, state.shape[1] - 1, out=idx)
    return idx.reshape(-1)


def apply_readout_flips(idx: np.ndarray, p01: np.ndarray, p10: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Flip sampled bits classically with state-dependent probabilities."""
    qpos = np.arange(len(p01), dtype=np.int64)
    bits = (idx[:, None] >> qpos) & 1
    pe = np.where(bits == 1, p10[None, :], p01[None, :])
    flips = rng.random(bits.shape) < pe
    return idx ^ (flips.astype(np.int64) << qpos).sum(axis=1)


def _batch_rng(entropy: int, key: tuple[int, ...]) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=entropy, spawn_key=key)))


def _one_batch(args) -> tuple[int, np.ndarray]:
    ops, n, rows, m, entropy, key = args
    rng = _batch_rng(entropy, key)
    state = _run_trajectory_batch(ops, n, rows, rng)
    return key[-1], _sample_rows(state, m, rng)


def sample_trajectories(
    noisy_circ: Circuit,
    entropy: int,
    trajectories: int,
    samples_per_trajectory: int,
    key_prefix: tuple[int, ...] = (),
    workers: int = 1,
) -> np.ndarray:
    """Sampled bitstring indices from stochastic-Pauli statevector runs.

    Pauli insertions are drawn per trajectory; each trajectory is sampled
    ``samples_per_trajectory`` times; readout flips are applied to the
    samples classically using the circuit's FLIP channels.  Each batch of
    trajectories owns a counter-derived RNG stream, so results do not
    depend on ``workers``.
    """
    n = len(noisy_circ.qubit_names)
    ops = _compile_ops(noisy_circ)
    jobs = []
    done = 0
    batch = 0
    while done < trajectories:
        rows = min(_TRAJ_BATCH, trajectories - done)
        jobs.append((ops, n, rows, samples_per_trajectory, entropy, key_prefix + (batch,)))
        done += rows
        batch += 1
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = dict(pool.map(_one_batch, jobs))
        chunks = [parts[j] for j in range(batch)]
    else:
        chunks = [_one_batch(job)[1] for job in jobs]
    idx = np.concatenate(chunks)
    p01, p10 = readout_error_arrays(noisy_circ)
    if p01.any() or p10.any():
        flip_rng = _batch_rng(entropy, key_prefix + (1_000_000,))
        idx = apply_readout_flips(idx, p01, p10, flip_rng)
    return idx


def xeb_fidelity(ideal_p: np.ndarray, samples: np.ndarray) -> tuple[float, float]:
    """Linear cross-entropy fidelity and its standard error."""
    vals = len(ideal_p) * ideal_p[samples] - 1.0
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(len(vals)))


# ---------------------------------------------------------------------------
# full study


@dataclass
class XebSeedResult:
    seed: int
    fidelity_noiseless: float
    se_noiseless: float
    fidelity_noisy: float
    se_noisy: float
    n_samples: int


@dataclass
class XebStudy:
    results: list[XebSeedResult] = field(default_factory=list)
    predicted: float = 0.0

    @property
    def mean_noisy(self) -> float:
        return float(np.mean([r.fidelity_noisy for r in self.results]))

    @property
    def mean_noiseless(self) -> float:
        return float(np.mean([r.fidelity_noiseless for r in self.results]))

    @property
    def ratio(self) -> float:
        return self.mean_noisy / self.predicted


def run_xeb_study(
    layout: Layout,
    cal: Calibration,
    n_seeds: int = 9,
    noise: NoiseConfig = NoiseConfig(),
    trajectories: int = 160,
    samples_per_trajectory: int = 625,
    base_seed: int = 2026,
    workers: int = 1,
) -> XebStudy:
    study = XebStudy()
    for i in range(n_seeds):
        circ = xeb_circuit(layout, seed=base_seed + i)
        noisy = attach_noise(with_measurement(circ), cal, noise)
        if i == 0:
            study.predicted = predicted_fidelity(noisy)
        ideal_p = ideal_probabilities(circ)
        n_total = trajectories * samples_per_trajectory
        rng_clean = np.random.Generator(
            np.random.Philox(np.random.SeedSequence(entropy=base_seed, spawn_key=(i, 0)))
        )
        clean_idx = rng_clean.choice(len(ideal_p), size=n_total, p=ideal_p / ideal_p.sum())
        f0, se0 = xeb_fidelity(ideal_p, clean_idx)
        noisy_idx = sample_trajectories(
            noisy,
            entropy=base_seed,
            trajectories=trajectories,
            samples_per_trajectory=samples_per_trajectory,
            key_prefix=(i, 1),
            workers=workers,
        )
        f1, se1 = xeb_fidelity(ideal_p, noisy_idx)
        study.results.append(
            XebSeedResult(
                seed=base_seed + i,
                fidelity_noiseless=f0,
                se_noiseless=se0,
                fidelity_noisy=f1,
                se_noisy=se1,
                n_samples=n_total,
            )
        )
    return study
