"""Mapping calibration numbers onto circuit-level stochastic channels.

The pass :func:`attach_noise` turns a clean, timing-annotated circuit into a
self-contained noisy program:

* every single-qubit gate is followed by ``DEP1(p1)``;
* every ``CZ`` by ``DEP2(p2)`` with the pair's own strength;
* every ``IDLE(dt)`` by the amplitude/phase Pauli twirl for that duration;
* every measured qubit by ``FLIP(p01, p10)`` acting on its classical bit.

Depolarizing strengths come from tabulated *average gate infidelities*
``e``; with ``conversion="average"`` the total Pauli probability is
``e * (d+1)/d`` (``d = 2**n_qubits``, so 3/2 for one qubit and 5/4 for
two), while ``conversion="direct"`` reads the table value directly as the
total Pauli probability.

The idle twirl for duration ``t`` uses the standard amplitude+dephasing
Pauli approximation with the echo time as the dephasing scale::

    p_x = p_y = (1 - exp(-t/T1)) / 4
    p_z = (1 - exp(-t/T2)) / 2 - p_x      (clamped at 0)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .calibration import Calibration
from .circuit import CLIFFORD_1Q, Circuit

_GATE_1Q = set(CLIFFORD_1Q | {"RXY"}) - {"I"}


@dataclass(frozen=True)
class NoiseConfig:
    """Switches for the noise pass; defaults reproduce the full model."""

    conversion: str = "average"  # or "direct"
    gate_noise: bool = True
    idle_noise: bool = True
    readout_noise: bool = True

    def __post_init__(self) -> None:
        if self.conversion not in ("average", "direct"):
            raise ValueError(f"unknown conversion {self.conversion!r}")


def depolarizing_probability(e: float, n_qubits: int, conversion: str = "average") -> float:
    """Total Pauli-error probability of a depolarizing channel of infidelity ``e``."""
    if conversion == "direct":
        return e
    d = 2.0**n_qubits
    return e * (d + 1.0) / d


def idle_twirl(t_ns: float, t1_us: float, t2_us: float) -> tuple[float, float, float]:
    """(p_x, p_y, p_z) for idling ``t_ns`` nanoseconds."""
    if t_ns <= 0.0:
        return (0.0, 0.0, 0.0)
    t1 = t1_us * 1000.0
    t2 = t2_us * 1000.0
    p_x = (1.0 - math.exp(-t_ns / t1)) / 4.0
    p_z = (1.0 - math.exp(-t_ns / t2)) / 2.0 - p_x
    return (p_x, p_x, max(p_z, 0.0))


def attach_noise(circuit: Circuit, cal: Calibration, config: NoiseConfig = NoiseConfig()) -> Circuit:
    """Return a copy of ``circuit`` with noise channels inserted.

    The input must be noise-free; channels are placed immediately after the
    instruction they decorate, in the same time slot.
    """
    if circuit.has_noise():
        raise ValueError("circuit already carries noise channels")
    names = circuit.qubit_names
    out = Circuit(names)
    for ins in circuit.instructions:
        out.instructions.append(ins)
        if ins.name in _GATE_1Q and config.gate_noise:
            (q,) = ins.qubits
            p = depolarizing_probability(cal.qubits[names[q]].e1, 1, config.conversion)
            if p > 0.0:
                out.add(ins.t, "DEP1", q, params=(p,))
        elif ins.name == "CZ" and config.gate_noise:
            a, b = ins.qubits
            p = depolarizing_probability(cal.e2(names[a], names[b]), 2, config.conversion)
            if p > 0.0:
                out.add(ins.t, "DEP2", a, b, params=(p,))
        elif ins.name == "IDLE" and config.idle_noise:
            (q,) = ins.qubits
            qc = cal.qubits[names[q]]
            px, py, pz = idle_twirl(ins.params[0], qc.t1_us, qc.t2_us)
            if px + py + pz > 0.0:
                out.add(ins.t, "PAULI", q, params=(px, py, pz))
        elif ins.name == "MZ" and config.readout_noise:
            for q in ins.qubits:
                qc = cal.qubits[names[q]]
                if qc.p01 > 0.0 or qc.p10 > 0.0:
                    out.add(ins.t, "FLIP", q, params=(qc.p01, qc.p10))
    return out
