"""Rotated planar surface-code layout and its measurement schedule.

Geometry lives on a doubled integer grid (y grows downward): data qubits of
a distance-``d`` patch sit at odd coordinates ``(2c+1, 2r+1)`` and are named
``D1..D{d*d}`` in row-major reading order; parity-check ancillas sit at even
coordinates ``(2a, 2b)``, X-type where ``a+b`` is even.  Edge positions
keep only one type (top/bottom edges X-type, left/right edges Z-type) and
corners are dropped, which yields the usual ``d*d - 1`` checks.  Ancillas
are named ``X1.., Z1..`` in reading order within each type.

Each check couples to its diagonal data neighbours through four CZ layers,
``A``..``D``, fixed by one geometric rule (verified to generalize to any
odd ``d``):

* ``A``: every ancilla couples to its north-east data neighbour;
* ``B``: X-ancillas north-west, Z-ancillas south-east;
* ``C``: X-ancillas south-east, Z-ancillas north-west;
* ``D``: every ancilla couples south-west.

A cycle packs those layers into nine gate slots —
``R | A | R | B | idle | C | R | D | R`` — where the rotation slots carry
the basis changes that let the same CZs read X-type checks: data qubits
briefly rotate into the X frame exactly while they talk to X ancillas.
Whether a data qubit needs the early (``A``), middle (``B``/``C``) or late
(``D``) window follows from its diagonal neighbourhood; the slots above are
provably sufficient for all of them simultaneously.  The measurement slot
appends readout plus resonator-depletion waiting; idling data qubits spend
it in a 7-segment idle chain interleaved with 6 Y pulses (dynamical
decoupling).  Ancillas are not reset between cycles, so consecutive raw
outcomes are differenced downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit

# gate/readout durations in nanoseconds
T_1Q_NS = 25.0
T_2Q_NS = 32.0
T_MEASURE_NS = 1500.0
T_DEPLETION_NS = 2400.0
T_WINDOW_NS = T_MEASURE_NS + T_DEPLETION_NS
DD_SEGMENTS = 7
DD_PULSES = 6

#: wall-clock duration of one full cycle
CYCLE_NS = 5 * T_1Q_NS + 4 * T_2Q_NS + T_WINDOW_NS

PATTERNS = ("A", "B", "C", "D")

# (dx, dy) of the data qubit each ancilla couples to, per pattern and type
_PATTERN_STEP = {
    ("A", "X"): (1, -1),
    ("A", "Z"): (1, -1),
    ("B", "X"): (-1, -1),
    ("B", "Z"): (1, 1),
    ("C", "X"): (1, 1),
    ("C", "Z"): (-1, -1),
    ("D", "X"): (-1, 1),
    ("D", "Z"): (-1, 1),
}


@dataclass(frozen=True)
class Qubit:
    name: str
    x: int
    y: int
    index: int
    kind: str  # "data", "X" or "Z"


@dataclass
class Layout:
    """A distance-``d`` patch: qubits, checks, CZ layers, frame windows."""

    d: int
    qubits: list[Qubit]
    by_name: dict[str, Qubit]
    by_coord: dict[tuple[int, int], Qubit]
    data: list[Qubit]
    ancillas: list[Qubit]  # reading order; register order = data + ancillas
    support: dict[str, tuple[str, ...]]  # ancilla name -> data names

    @classmethod
    def build(cls, d: int = 3) -> "Layout":
        if d < 3 or d % 2 == 0:
            raise ValueError("distance must be an odd integer >= 3")
        data: list[Qubit] = []
        for r in range(d):
            for c in range(d):
                idx = r * d + c
                data.append(Qubit(f"D{idx + 1}", 2 * c + 1, 2 * r + 1, idx, "data"))
        anc_raw: list[tuple[int, int, str]] = []
        for b in range(d + 1):
            for a in range(d + 1):
                kind = "X" if (a + b) % 2 == 0 else "Z"
                on_lr = a in (0, d)
                on_tb = b in (0, d)
                if on_lr and on_tb:
                    continue  # corner
                if on_tb and kind != "X":
                    continue
                if on_lr and kind != "Z":
                    continue
                anc_raw.append((2 * a, 2 * b, kind))
        # reading order overall; names number each type in that same order
        anc_raw.sort(key=lambda t: (t[1], t[0]))
        counters = {"X": 0, "Z": 0}
        ancillas: list[Qubit] = []
        for x, y, kind in anc_raw:
            counters[kind] += 1
            ancillas.append(Qubit(f"{kind}{counters[kind]}", x, y, d * d + len(ancillas), kind))
        qubits = data + ancillas
        by_name = {q.name: q for q in qubits}
        by_coord = {(q.x, q.y): q for q in qubits}
        support: dict[str, tuple[str, ...]] = {}
        for a in ancillas:
            nbrs = []
            for dx in (-1, 1):
                for dy in (-1, 1):
                    q = by_coord.get((a.x + dx, a.y + dy))
                    if q is not None and q.kind == "data":
                        nbrs.append(q)
            nbrs.sort(key=lambda q: q.index)
            support[a.name] = tuple(q.name for q in nbrs)
        lay = cls(
            d=d,
            qubits=qubits,
            by_name=by_name,
            by_coord=by_coord,
            data=data,
            ancillas=ancillas,
            support=support,
        )
        assert len(ancillas) == d * d - 1
        return lay

    # -- register ----------------------------------------------------------

    @property
    def qubit_names(self) -> tuple[str, ...]:
        return tuple(q.name for q in self.qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    def index(self, name: str) -> int:
        return self.by_name[name].index

    # -- code structure ----------------------------------------------------

    def logical_support(self, basis: str) -> tuple[str, ...]:
        """Data qubits carrying the logical Z (top row) or X (left column)."""
        if basis == "Z":
            return tuple(q.name for q in self.data if q.y == 1)
        if basis == "X":
            return tuple(q.name for q in self.data if q.x == 1)
        raise ValueError("basis must be 'Z' or 'X'")

    def pattern_pairs(self, pattern: str) -> list[tuple[str, str]]:
        """CZ pairs (ancilla, data) of one layer, in ancilla reading order."""
        if pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {pattern!r}")
        pairs = []
        for a in self.ancillas:
            dx, dy = _PATTERN_STEP[(pattern, a.kind)]
            q = self.by_coord.get((a.x + dx, a.y + dy))
            if q is not None and q.kind == "data":
                pairs.append((a.name, q.name))
        return pairs

    def frame_windows(self, data_name: str) -> dict[str, bool]:
        """Which X-frame windows a data qubit opens during a cycle.

        ``early`` spans slots 0-2 (layer A), ``mid`` spans 2-6 (B and C),
        ``late`` spans 6-8 (layer D).  A window exists when the matching
        diagonal ancilla is X-type, i.e. the CZ must read the data qubit in
        the X basis.  ``early``/``late`` exclude ``mid`` structurally: the
        two diagonals of any data qubit carry opposite check types.
        """
        q = self.by_name[data_name]
        main = [self.by_coord.get((q.x + s, q.y + s)) for s in (-1, 1)]
        anti_sw = self.by_coord.get((q.x - 1, q.y + 1))
        anti_ne = self.by_coord.get((q.x + 1, q.y - 1))
        main_kinds = {a.kind for a in main if a is not None}
        if len(main_kinds) != 1:
            raise AssertionError(f"{data_name}: mixed main-diagonal check types")
        main_x = main_kinds == {"X"}
        return {
            "early": (not main_x) and anti_sw is not None,
            "mid": main_x,
            "late": (not main_x) and anti_ne is not None,
        }

    def ascii_diagram(self) -> str:
        """Plain-text picture of the patch (data 'o', checks 'x'/'z')."""
        width = 2 * self.d + 1
        grid = [["." for _ in range(width)] for _ in range(width)]
        for q in self.qubits:
            glyph = "o" if q.kind == "data" else q.kind.lower()
            grid[q.y][q.x] = glyph
        rows = [" ".join(row) for row in grid]
        labels = [f"{q.name}=({q.x},{q.y})" for q in self.qubits]
        wrapped = [", ".join(labels[k : k + 6]) for k in range(0, len(labels), 6)]
        return "\n".join(rows) + "\n\n" + "\n".join(wrapped)


# ---------------------------------------------------------------------------
# memory-experiment schedule


@dataclass
class MemoryMeta:
    """Record bookkeeping for a repeated-measurement memory circuit.

    The record has ``rounds`` blocks of ancilla bits (reading order) and a
    trailing block of data bits; the last ancilla block comes from the same
    readout slot as the data block.
    """

    layout: Layout
    basis: str
    rounds: int
    ancilla_names: tuple[str, ...]
    data_names: tuple[str, ...]

    @property
    def n_ancillas(self) -> int:
        return len(self.ancilla_names)

    @property
    def n_measurements(self) -> int:
        return self.rounds * self.n_ancillas + len(self.data_names)

    def ancilla_bit(self, round_k: int, anc: str) -> int:
        """Record column of ancilla ``anc`` in round ``round_k`` (1-based)."""
        if not 1 <= round_k <= self.rounds:
            raise IndexError(f"round {round_k} outside 1..{self.rounds}")
        return (round_k - 1) * self.n_ancillas + self.ancilla_names.index(anc)

    def data_bit(self, name: str) -> int:
        return self.rounds * self.n_ancillas + self.data_names.index(name)

    def consistent_ancillas(self) -> tuple[str, ...]:
        """Checks whose outcomes are deterministic for this preparation."""
        kind = self.basis
        return tuple(n for n in self.ancilla_names if self.layout.by_name[n].kind == kind)


def memory_circuit(layout: Layout, basis: str, rounds: int) -> tuple[Circuit, MemoryMeta]:
    """Build the ``rounds``-cycle memory experiment in the given basis.

    Z basis starts from the all-zeros product state; X basis prepends a
    global data rotation into the X frame and ends with the matching
    readout rotation, so the final data bits report X eigenvalues.  Every
    qubit receives an explicit instruction (gate or ``IDLE``) in every gate
    slot it lives through; idle durations are what the noise pass turns
    into decoherence.
    """
    if basis not in ("Z", "X"):
        raise ValueError("basis must be 'Z' or 'X'")
    if rounds < 1:
        raise ValueError("need at least one cycle")
    c = Circuit(layout.qubit_names)
    anc = [q.name for q in layout.ancillas]
    dat = [q.name for q in layout.data]
    idx = layout.index
    windows = {name: layout.frame_windows(name) for name in dat}
    early = [n for n in dat if windows[n]["early"]]
    mid = [n for n in dat if windows[n]["mid"]]
    late = [n for n in dat if windows[n]["late"]]

    def one_q_slot(t: int, rotations: dict[str, str]) -> None:
        """Emit a 25 ns slot: named rotations plus idles for everyone else."""
        for name, gate in rotations.items():
            c.add(t, gate, idx(name))
        for q in layout.qubits:
            if q.name not in rotations:
                c.add(t, "IDLE", q.index, params=(T_1Q_NS,))

    def cz_slot(t: int, pattern: str) -> None:
        busy = set()
        for a_name, d_name in layout.pattern_pairs(pattern):
            c.add(t, "CZ", idx(d_name), idx(a_name))
            busy.update((a_name, d_name))
        for q in layout.qubits:
            if q.name not in busy:
                c.add(t, "IDLE", q.index, params=(T_2Q_NS,))

    t = 0
    if basis == "X":
        one_q_slot(t, {n: "RY-" for n in dat})
        t += 1

    for cycle in range(rounds):
        final = cycle == rounds - 1
        one_q_slot(t + 0, {**{n: "RY-" for n in anc}, **{n: "RY-" for n in early}})
        cz_slot(t + 1, "A")
        one_q_slot(t + 2, {**{n: "RY+" for n in early}, **{n: "RY-" for n in mid}})
        cz_slot(t + 3, "B")
        one_q_slot(t + 4, {})
        cz_slot(t + 5, "C")
        one_q_slot(t + 6, {**{n: "RY+" for n in mid}, **{n: "RY-" for n in late}})
        cz_slot(t + 7, "D")
        if final and basis == "X":
            # stay in / rotate into the X frame for data readout
            rot = {n: "RY+" for n in anc}
            rot.update({n: "RY-" for n in dat if n not in late})
        else:
            rot = {n: "RY+" for n in anc}
            rot.update({n: "RY+" for n in late})
        one_q_slot(t + 8, rot)
        if final:
            c.add(t + 9, "MZ", *[idx(n) for n in anc + dat])
            t += 10
        else:
            c.add(t + 9, "MZ", *[idx(n) for n in anc])
            # data ride out readout + depletion under dynamical decoupling
            for j in range(2 * DD_SEGMENTS - 1):
                if j % 2 == 0:
                    for n in dat:
                        c.add(t + 9 + j, "IDLE", idx(n), params=(T_WINDOW_NS / DD_SEGMENTS,))
                else:
                    for n in dat:
                        c.add(t + 9 + j, "Y", idx(n))
            t += 9 + 2 * DD_SEGMENTS - 1
    meta = MemoryMeta(
        layout=layout,
        basis=basis,
        rounds=rounds,
        ancilla_names=tuple(anc),
        data_names=tuple(dat),
    )
    return c, meta
