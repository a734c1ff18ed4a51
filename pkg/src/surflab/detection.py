"""From raw measurement records to detection events and their statistics.

Ancillas are not reset between cycles, so the stabilizer value of round
``k`` is the difference of consecutive raw outcomes::

    s_1 = m_1,   s_k = m_k XOR m_{k-1}  (k = 2..n)

The final round measures the data qubits directly: the ancilla reading it
*would* have produced is (last outcome XOR data parity), so differencing
against the last actual outcome leaves the data parity itself as the final
stabilizer value::

    s_{n+1} = parity of the final data measurements over the check support

Detection events difference the stabilizer values once more::

    e_1 = s_1,   e_k = s_k XOR s_{k-1}  (k = 2..n+1)

Every single physical fault then touches at most two events (a data error
fires one event per flagged check; an ancilla readout flip fires events two
rounds apart, since it corrupts two consecutive stabilizer values), which
is what lets a pairwise-matching decoder correct any single fault exactly.

For a noiseless run every *basis-consistent* detector (Z checks for a
Z-basis memory, X checks for an X-basis memory) is zero — any set bit marks
a physical fault nearby.  The whole map from record bits to events is
GF(2)-linear, which the decoder exploits to turn single-fault record flips
directly into detector flips.

Inconsistent checks see a random first-round projection: with
``include="all"`` they contribute the differenced detectors ``k = 2..n``
only, and the final data comparison is unavailable for them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .surface import MemoryMeta


@dataclass
class DetectorSet:
    """Flat indexing of detectors, round-major then ancilla reading order."""

    meta: MemoryMeta
    include: str
    index: list[tuple[int, str]]  # (round k, ancilla name)
    positions: dict[tuple[int, str], int]

    @property
    def n_detectors(self) -> int:
        return len(self.index)

    def rounds_of(self) -> np.ndarray:
        return np.array([k for k, _ in self.index])

    def final_round(self) -> int:
        return self.meta.rounds + 1


def build_detectors(meta: MemoryMeta, include: str = "consistent") -> DetectorSet:
    if include not in ("consistent", "all"):
        raise ValueError("include must be 'consistent' or 'all'")
    consistent = set(meta.consistent_ancillas())
    index: list[tuple[int, str]] = []
    for k in range(1, meta.rounds + 2):
        for name in meta.ancilla_names:
            if name in consistent:
                index.append((k, name))
            elif include == "all" and 2 <= k <= meta.rounds:
                index.append((k, name))
    positions = {key: i for i, key in enumerate(index)}
    return DetectorSet(meta=meta, include=include, index=index, positions=positions)


def detection_events(records: np.ndarray, dset: DetectorSet) -> np.ndarray:
    """Detection events, shape (shots, n_detectors) uint8.

    Linear over GF(2) in the record bits: feeding single-fault record flips
    through this function yields the fault's detector signature.
    """
    meta = dset.meta
    shots = records.shape[0]
    if records.shape[1] != meta.n_measurements:
        raise ValueError(
            f"record has {records.shape[1]} bits, circuit produces {meta.n_measurements}"
        )
    n = meta.rounds
    events = np.zeros((shots, dset.n_detectors), dtype=np.uint8)
    support = meta.layout.support
    for name in meta.ancilla_names:
        cols = [meta.ancilla_bit(k, name) for k in range(1, n + 1)]
        m = records[:, cols]
        s = np.empty((shots, n + 1), dtype=np.uint8)
        s[:, 0] = m[:, 0]
        s[:, 1:n] = m[:, 1:] ^ m[:, :-1]
        parity = np.zeros(shots, dtype=np.uint8)
        for dname in support[name]:
            parity ^= records[:, meta.data_bit(dname)]
        s[:, n] = parity
        e = s.copy()
        e[:, 1:] ^= s[:, :-1]
        for k in range(1, n + 2):
            pos = dset.positions.get((k, name))
            if pos is not None:
                events[:, pos] = e[:, k - 1]
    return events


def detection_fraction(events: np.ndarray, dset: DetectorSet) -> dict:
    """Mean event rate per detector and per round."""
    per_detector = events.mean(axis=0)
    per_round: dict[int, float] = {}
    rounds = dset.rounds_of()
    for k in sorted(set(rounds.tolist())):
        per_round[k] = float(per_detector[rounds == k].mean())
    return {
        "per_detector": per_detector,
        "per_round": per_round,
        "overall": float(per_detector.mean()),
    }


def correlation_matrix(events: np.ndarray) -> np.ndarray:
    """Pearson correlation between detector columns, minus the identity.

    Zero-variance columns correlate to 0; the diagonal is exactly 0 so the
    matrix highlights cross-detector structure only.
    """
    e = events.astype(np.float64)
    e -= e.mean(axis=0)
    cov = e.T @ e / max(len(e), 1)
    sd = np.sqrt(np.diag(cov))
    denom = np.outer(sd, sd)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(denom > 0, cov / np.where(denom > 0, denom, 1.0), 0.0)
    np.fill_diagonal(corr, 0.0)
    return corr


def logical_readout(records: np.ndarray, meta: MemoryMeta) -> np.ndarray:
    """Parity of the logical operator's data qubits, per shot."""
    out = np.zeros(records.shape[0], dtype=np.uint8)
    for name in meta.layout.logical_support(meta.basis):
        out ^= records[:, meta.data_bit(name)]
    return out
