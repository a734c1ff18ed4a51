"""Time-slotted circuit container shared by all simulation engines.

A :class:`Circuit` is a fixed qubit register plus a flat list of
:class:`Instruction` objects.  Each instruction carries an integer time slot
``t``; instructions sharing a slot are simultaneous.  Engines still apply
them in list order, which only matters for noise channels, which by
convention immediately follow the operation they decorate in the same slot.

Two instruction families exist:

* unitary / measurement operations (``RY+``, ``CZ``, ``MZ``, ...), and
* stochastic noise channels (``DEP1``, ``DEP2``, ``PAULI``, ``FLIP``),
  which are first-class instructions so that a noisy circuit is a single
  self-describing object.

``IDLE`` is a timing marker: a no-op carrying its duration in nanoseconds as
a parameter, so that a noise pass can later convert waiting time into a
Pauli twirl without re-deriving the schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_SQ2 = 1.0 / math.sqrt(2.0)

#: Unitaries for the single-qubit gate alphabet (computational basis).
GATE_1Q_UNITARIES: dict[str, np.ndarray] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) * _SQ2,
    # quarter-turn rotations exp(-i * angle/2 * P), angle = +-pi/2
    "RX+": np.array([[1, -1j], [-1j, 1]], dtype=complex) * _SQ2,
    "RX-": np.array([[1, 1j], [1j, 1]], dtype=complex) * _SQ2,
    "RY+": np.array([[1, -1], [1, 1]], dtype=complex) * _SQ2,
    "RY-": np.array([[1, 1], [-1, 1]], dtype=complex) * _SQ2,
    # quarter turn about the diagonal axis (X+Y)/sqrt(2); not a Clifford.
    "RXY": np.array(
        [[1, -(1 + 1j) / math.sqrt(2)], [(1 - 1j) / math.sqrt(2), 1]],
        dtype=complex,
    )
    * _SQ2,
}

#: Single-qubit gates that map Paulis to Paulis.
CLIFFORD_1Q = frozenset({"I", "X", "Y", "Z", "H", "RX+", "RX-", "RY+", "RY-"})

#: Stochastic channels.  params: DEP1(p), DEP2(p), PAULI(px,py,pz), FLIP(p01,p10).
NOISE_NAMES = frozenset({"DEP1", "DEP2", "PAULI", "FLIP"})

#: name -> number of qubits each application acts on (None = variable, for MZ).
_ARITY: dict[str, int | None] = {name: 1 for name in GATE_1Q_UNITARIES}
_ARITY.update({"CZ": 2, "MZ": None, "IDLE": 1, "DEP1": 1, "DEP2": 2, "PAULI": 1, "FLIP": 1})

_N_PARAMS = {"IDLE": 1, "DEP1": 1, "DEP2": 1, "PAULI": 3, "FLIP": 2}


@dataclass(frozen=True)
class Instruction:
    """One operation at time slot ``t`` on the listed qubits."""

    t: int
    name: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.name not in _ARITY:
            raise ValueError(f"unknown instruction {self.name!r}")
        arity = _ARITY[self.name]
        if arity is not None and len(self.qubits) != arity:
            raise ValueError(f"{self.name} acts on {arity} qubit(s), got {self.qubits}")
        if self.name == "MZ" and not self.qubits:
            raise ValueError("MZ needs at least one qubit")
        if len(self.params) != _N_PARAMS.get(self.name, 0):
            raise ValueError(f"{self.name} takes {_N_PARAMS.get(self.name, 0)} parameter(s)")

    @property
    def is_noise(self) -> bool:
        return self.name in NOISE_NAMES


@dataclass
class Circuit:
    """A register of named qubits and an ordered instruction list.

    ``qubit_names`` fixes both the register size and the index of each
    qubit; instruction qubit references are integer indices into it.
    """

    qubit_names: tuple[str, ...]
    instructions: list[Instruction] = field(default_factory=list)

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_names)

    def index_of(self, name: str) -> int:
        return self.qubit_names.index(name)

    def add(self, t: int, name: str, *qubits: int, params: tuple[float, ...] = ()) -> None:
        self.instructions.append(Instruction(t, name, tuple(qubits), tuple(params)))

    # -- structure ---------------------------------------------------------

    def measured_qubits(self) -> list[int]:
        """Qubit index for each recorded bit, in record order."""
        out: list[int] = []
        for ins in self.instructions:
            if ins.name == "MZ":
                out.extend(ins.qubits)
        return out

    @property
    def n_measurements(self) -> int:
        return sum(len(i.qubits) for i in self.instructions if i.name == "MZ")

    def is_clifford(self) -> bool:
        """True when the tableau engine can run every instruction."""
        for ins in self.instructions:
            if ins.name == "RXY":
                return False
        return True

    def max_slot(self) -> int:
        return max((i.t for i in self.instructions), default=-1)

    def validate(self) -> None:
        """Raise ``ValueError`` on malformed programs.

        Checks qubit indices, probability ranges, non-decreasing slots and
        slot exclusivity: a qubit may appear in at most one non-noise
        instruction per slot (noise channels ride along with their parent).
        """
        n = self.n_qubits
        busy: set[tuple[int, int]] = set()
        prev_t = -(10**9)
        for ins in self.instructions:
            if ins.t < prev_t:
                raise ValueError(f"instruction slots must be non-decreasing, got t={ins.t} after t={prev_t}")
            prev_t = ins.t
            for q in ins.qubits:
                if not 0 <= q < n:
                    raise ValueError(f"qubit index {q} out of range in {ins}")
            if len(set(ins.qubits)) != len(ins.qubits):
                raise ValueError(f"repeated qubit in {ins}")
            if ins.name in ("DEP1", "DEP2", "FLIP", "PAULI"):
                if not all(0.0 <= p <= 1.0 for p in ins.params):
                    raise ValueError(f"channel probability out of range in {ins}")
                if ins.name == "PAULI" and sum(ins.params) > 1.0 + 1e-12:
                    raise ValueError(f"PAULI probabilities exceed 1 in {ins}")
            if ins.name == "IDLE" and ins.params[0] < 0:
                raise ValueError(f"negative idle duration in {ins}")
            if not ins.is_noise:
                for q in ins.qubits:
                    key = (ins.t, q)
                    if key in busy:
                        raise ValueError(f"qubit {self.qubit_names[q]} used twice in slot {ins.t}")
                    busy.add(key)

    def has_noise(self) -> bool:
        return any(i.is_noise for i in self.instructions)

    def without_noise(self) -> "Circuit":
        """Copy with every stochastic channel removed (timing markers kept)."""
        return Circuit(self.qubit_names, [i for i in self.instructions if not i.is_noise])

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        """Render to the plain-text circuit format.

        One header line ``qubits: <names...>`` then one line per
        instruction group.  Adjacent instructions with equal slot, name and
        parameters are merged onto one line (pairwise for two-qubit
        entries), purely for readability; parsing expands them back, so
        ``from_text(to_text(c)) == c`` for circuits built in emission order.
        """
        lines = ["qubits: " + " ".join(self.qubit_names)]
        i = 0
        ins_list = self.instructions
        while i < len(ins_list):
            ins = ins_list[i]
            group = [ins]
            if ins.name != "MZ":
                while (
                    i + len(group) < len(ins_list)
                    and ins_list[i + len(group)].t == ins.t
                    and ins_list[i + len(group)].name == ins.name
                    and ins_list[i + len(group)].params == ins.params
                ):
                    group.append(ins_list[i + len(group)])
            qubits = [q for g in group for q in g.qubits]
            head = ins.name
            if ins.params:
                head += "(" + ",".join(repr(p) for p in ins.params) + ")"
            names = " ".join(self.qubit_names[q] for q in qubits)
            lines.append(f"t={ins.t} {head} {names}")
            i += len(group)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Circuit":
        """Parse the plain-text circuit format (inverse of :meth:`to_text`)."""
        names: tuple[str, ...] | None = None
        index: dict[str, int] = {}
        out: list[Instruction] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if names is None:
                if not line.startswith("qubits:"):
                    raise ValueError(f"line {lineno}: expected 'qubits:' header")
                names = tuple(line[len("qubits:"):].split())
                if len(set(names)) != len(names):
                    raise ValueError("duplicate qubit names")
                index = {nm: k for k, nm in enumerate(names)}
                continue
            if not line.startswith("t="):
                raise ValueError(f"line {lineno}: expected 't=<slot>'")
            slot_str, _, rest = line.partition(" ")
            t = int(slot_str[2:])
            head, *qnames = rest.split()
            if "(" in head:
                gname, _, ptail = head.partition("(")
                if not ptail.endswith(")"):
                    raise ValueError(f"line {lineno}: malformed parameters")
                params = tuple(float(p) for p in ptail[:-1].split(",") if p)
            else:
                gname, params = head, ()
            try:
                qs = [index[nm] for nm in qnames]
            except KeyError as exc:
                raise ValueError(f"line {lineno}: unknown qubit {exc.args[0]!r}") from None
            arity = _ARITY.get(gname)
            if gname not in _ARITY:
                raise ValueError(f"line {lineno}: unknown instruction {gname!r}")
            if gname == "MZ":
                out.append(Instruction(t, gname, tuple(qs), params))
            elif arity == 2:
                if len(qs) % 2:
                    raise ValueError(f"line {lineno}: odd qubit count for {gname}")
                for a, b in zip(qs[::2], qs[1::2]):
                    out.append(Instruction(t, gname, (a, b), params))
            else:
                for q in qs:
                    out.append(Instruction(t, gname, (q,), params))
        if names is None:
            raise ValueError("empty circuit text")
        return cls(names, out)
