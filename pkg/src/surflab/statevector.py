"""Dense state-vector simulation.

Three layers live here:

* in-place gate primitives on arrays of shape ``(..., 2**n)`` (computational
  index on the last axis, qubit ``q`` = bit ``q``, little-endian), reused by
  the benchmarking module for its large single-register runs;
* :class:`StatevectorRunner`, a shot-batched Monte-Carlo runner (stochastic
  Pauli unravelling of the noise channels) for modest register sizes;
* :func:`exact_distribution`, which evolves a density matrix and enumerates
  every measurement/readout branch, giving the exact classical record
  distribution of a small noisy circuit.  It shares no mechanism with the
  tableau engine, which makes it a genuinely independent cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import GATE_1Q_UNITARIES, Circuit

_PAULIS = {
    "X": GATE_1Q_UNITARIES["X"],
    "Y": GATE_1Q_UNITARIES["Y"],
    "Z": GATE_1Q_UNITARIES["Z"],
}


def apply_1q(state: np.ndarray, u: np.ndarray, q: int, n: int) -> None:
    """Apply a 2x2 unitary to qubit ``q`` of ``state`` (..., 2**n), in place."""
    lo = 1 << q
    hi = 1 << (n - 1 - q)
    v = state.reshape(state.shape[:-1] + (hi, 2, lo))
    s0 = v[..., 0, :].copy()
    s1 = v[..., 1, :]
    v[..., 0, :] = u[0, 0] * s0 + u[0, 1] * s1
    v[..., 1, :] = u[1, 0] * s0 + u[1, 1] * s1


def cz_mask(a: int, b: int, n: int) -> np.ndarray:
    """Boolean mask over 2**n basis states where both bits are set."""
    i = np.arange(1 << n)
    return ((i >> a) & 1).astype(bool) & ((i >> b) & 1).astype(bool)


def apply_cz(state: np.ndarray, a: int, b: int, n: int) -> None:
    state[..., cz_mask(a, b, n)] *= -1


class StatevectorRunner:
    """Shot-batched noisy state-vector execution of one circuit.

    Noise channels are unravelled stochastically per shot, so results agree
    with the tableau engine in distribution, not shot-for-shot.  Intended
    for small registers (the state array is ``shots * 2**n`` complex).
    """

    MAX_QUBITS = 12

    def __init__(self, circuit: Circuit, shots: int, rng: np.random.Generator):
        if circuit.n_qubits > self.MAX_QUBITS:
            raise ValueError(
                f"shot-batched statevector runner is limited to {self.MAX_QUBITS} qubits"
            )
        self.c = circuit
        self.n = circuit.n_qubits
        self.shots = shots
        self.rng = rng

    def _apply_pauli_subset(self, state: np.ndarray, rows: np.ndarray, name: str, q: int) -> None:
        if not rows.any():
            return
        lo = 1 << q
        hi = 1 << (self.n - 1 - q)
        v = state.reshape(self.shots, hi, 2, lo)
        if name in ("X", "Y"):
            v[rows] = v[rows][:, :, ::-1, :]
        if name in ("Z", "Y"):
            v[rows, :, 1, :] *= -1
        # the relative i phases of Y are a per-shot global phase; dropped

    def run(self) -> tuple[np.ndarray, list[bool]]:
        """Execute, returning (records (shots, m) uint8, deterministic flags).

        A record column is flagged deterministic when every shot agreed
        before readout errors; with stochastic noise present the flag is
        simply reported as False.
        """
        n, shots, rng = self.n, self.shots, self.rng
        state = np.zeros((shots, 1 << n), dtype=complex)
        state[:, 0] = 1.0
        records: list[np.ndarray] = []
        last_meas: dict[int, int] = {}
        noisy = self.c.has_noise()
        for ins in self.c.instructions:
            name = ins.name
            if name in ("IDLE", "I"):
                continue
            if name == "CZ":
                apply_cz(state, ins.qubits[0], ins.qubits[1], n)
            elif name in GATE_1Q_UNITARIES:
                apply_1q(state, GATE_1Q_UNITARIES[name], ins.qubits[0], n)
            elif name == "MZ":
                for q in ins.qubits:
                    lo = 1 << q
                    hi = 1 << (n - 1 - q)
                    v = state.reshape(shots, hi, 2, lo)
                    p1 = np.einsum("shl->s", np.abs(v[:, :, 1, :]) ** 2).real
                    out = (rng.random(shots) < p1).astype(np.uint8)
                    keep = np.where(out == 1, p1, 1.0 - p1)
                    v[:, :, 0, :] *= (1 - out)[:, None, None]
                    v[:, :, 1, :] *= out[:, None, None]
                    state /= np.sqrt(np.maximum(keep, 1e-300))[:, None]
                    last_meas[q] = len(records)
                    records.append(out)
            elif name == "DEP1":
                (q,) = ins.qubits
                p = ins.params[0]
                u = rng.random(shots)
                for k, pname in enumerate(("X", "Y", "Z")):
                    sel = (u >= k * p / 3) & (u < (k + 1) * p / 3)
                    self._apply_pauli_subset(state, sel, pname, q)
            elif name == "PAULI":
                (q,) = ins.qubits
                px, py, pz = ins.params
                u = rng.random(shots)
                edges = np.cumsum([px, py, pz])
                for k, pname in enumerate(("X", "Y", "Z")):
                    lo_edge = 0.0 if k == 0 else edges[k - 1]
                    sel = (u >= lo_edge) & (u < edges[k])
                    self._apply_pauli_subset(state, sel, pname, q)
            elif name == "DEP2":
                a, b = ins.qubits
                p = ins.params[0]
                u = rng.random(shots)
                if p <= 0.0:
                    continue
                idx = np.minimum((u / (p / 15)).astype(np.int64), 15)
                idx[u >= p] = 15  # identity sentinel
                combos = [(pa, pb) for pa in ("I", "X", "Y", "Z") for pb in ("I", "X", "Y", "Z")][1:]
                for k, (pa, pb) in enumerate(combos):
                    sel = idx == k
                    if pa != "I":
                        self._apply_pauli_subset(state, sel, pa, a)
                    if pb != "I":
                        self._apply_pauli_subset(state, sel, pb, b)
            elif name == "FLIP":
                (q,) = ins.qubits
                p01, p10 = ins.params
                col = records[last_meas[q]]
                u = rng.random(shots)
                flip = np.where(col == 0, u < p01, u < p10)
                col ^= flip.astype(np.uint8)
            else:
                raise ValueError(f"statevector runner cannot apply {name!r}")
        rec = np.stack(records, axis=1) if records else np.zeros((shots, 0), np.uint8)
        det = [bool((col == col[0]).all()) and not noisy for col in rec.T]
        return rec, det


# ---------------------------------------------------------------------------
# exact record distribution via density-matrix branch enumeration


@dataclass
class _Branch:
    rho: np.ndarray
    prob: float
    record: tuple[int, ...]


def _conj_1q(rho: np.ndarray, u: np.ndarray, q: int, n: int) -> np.ndarray:
    """u rho u-dagger for a single-qubit u."""
    out = np.ascontiguousarray(rho.T)
    apply_1q(out, u, q, n)  # rho^T u^T == (u rho)^T
    out = np.ascontiguousarray(out.T)
    apply_1q(out, u.conj(), q, n)  # (u rho) u-dagger
    return out


def _conj_cz(rho: np.ndarray, a: int, b: int, n: int) -> np.ndarray:
    m = cz_mask(a, b, n)
    out = rho.copy()
    out[m, :] *= -1
    out[:, m] *= -1
    return out


def _mix_paulis(rho: np.ndarray, terms: list[tuple[float, list[tuple[str, int]]]], n: int) -> np.ndarray:
    """Apply the channel rho -> sum_i p_i P_i rho P_i (+ leftover identity)."""
    total = sum(p for p, _ in terms)
    out = (1.0 - total) * rho
    for p, paulis in terms:
        if p == 0.0:
            continue
        term = rho
        for pname, q in paulis:
            term = _conj_1q(term, _PAULIS[pname], q, n)
        out = out + p * term
    return out


def exact_distribution(circuit: Circuit, tol: float = 1e-12) -> dict[tuple[int, ...], float]:
    """Exact probability of every classical record of a small noisy circuit.

    Evolves the density matrix and branches on each measurement outcome and
    each readout-flip alternative, so the result is exact up to floating
    point.  Cost grows as ``4**n`` in memory and ``2**measurements`` in
    branches; guarded accordingly.
    """
    n = circuit.n_qubits
    if n > 6:
        raise ValueError("exact_distribution is limited to 6 qubits")
    if circuit.n_measurements > 12:
        raise ValueError("exact_distribution is limited to 12 measured bits")
    rho0 = np.zeros((1 << n, 1 << n), dtype=complex)
    rho0[0, 0] = 1.0
    branches = [_Branch(rho0, 1.0, ())]
    last_meas: dict[int, int] = {}
    for ins in circuit.instructions:
        name = ins.name
        if name in ("IDLE", "I"):
            continue
        if name == "CZ":
            a, b = ins.qubits
            branches = [_Branch(_conj_cz(br.rho, a, b, n), br.prob, br.record) for br in branches]
        elif name in GATE_1Q_UNITARIES:
            u = GATE_1Q_UNITARIES[name]
            q = ins.qubits[0]
            branches = [_Branch(_conj_1q(br.rho, u, q, n), br.prob, br.record) for br in branches]
        elif name == "DEP1":
            (q,) = ins.qubits
            p = ins.params[0]
            terms = [(p / 3, [(pn, q)]) for pn in ("X", "Y", "Z")]
            branches = [_Branch(_mix_paulis(br.rho, terms, n), br.prob, br.record) for br in branches]
        elif name == "PAULI":
            (q,) = ins.qubits
            terms = [(pr, [(pn, q)]) for pr, pn in zip(ins.params, ("X", "Y", "Z"))]
            branches = [_Branch(_mix_paulis(br.rho, terms, n), br.prob, br.record) for br in branches]
        elif name == "DEP2":
            a, b = ins.qubits
            p = ins.params[0]
            combos = [(pa, pb) for pa in ("I", "X", "Y", "Z") for pb in ("I", "X", "Y", "Z")][1:]
            terms = []
            for pa, pb in combos:
                ops = [(pa, a)] if pa != "I" else []
                ops += [(pb, b)] if pb != "I" else []
                terms.append((p / 15, ops))
            branches = [_Branch(_mix_paulis(br.rho, terms, n), br.prob, br.record) for br in branches]
        elif name == "MZ":
            for q in ins.qubits:
                nxt: list[_Branch] = []
                i = np.arange(1 << n)
                bit = ((i >> q) & 1).astype(bool)
                for br in branches:
                    for outcome in (0, 1):
                        sel = bit == bool(outcome)
                        sub = np.where(sel[:, None] & sel[None, :], br.rho, 0.0)
                        pk = float(np.trace(sub).real)
                        if pk <= tol:
                            continue
                        nxt.append(_Branch(sub / pk, br.prob * pk, br.record + (outcome,)))
                branches = nxt
            pos = len(branches[0].record) - len(ins.qubits)
            for off, q in enumerate(ins.qubits):
                last_meas[q] = pos + off
        elif name == "FLIP":
            (q,) = ins.qubits
            p01, p10 = ins.params
            idx = last_meas[q]
            nxt = []
            for br in branches:
                b = br.record[idx]
                pf = p01 if b == 0 else p10
                if pf > 0.0:
                    rec = list(br.record)
                    rec[idx] = 1 - b
                    nxt.append(_Branch(br.rho, br.prob * pf, tuple(rec)))
                if pf < 1.0:
                    nxt.append(_Branch(br.rho, br.prob * (1.0 - pf), br.record))
            branches = nxt
        else:
            raise ValueError(f"exact_distribution cannot apply {name!r}")
        if len(branches) > 65536:
            raise RuntimeError("branch tree exploded; circuit too large for exact mode")
    dist: dict[tuple[int, ...], float] = {}
    for br in branches:
        dist[br.record] = dist.get(br.record, 0.0) + br.prob
    total = sum(dist.values())
    return {k: v / total for k, v in dist.items()}
