"""Device calibration data: per-qubit coherence/readout and per-pair CZ errors.

A calibration is a plain JSON document::

    {
      "meta": {"name": "..."},
      "qubits": {"D1": {"t1_us": 35.9, "t2_us": 4.9,
                         "f00": 0.976, "f11": 0.923, "e1": 0.00087}, ...},
      "pairs": {"D1-Z1": 0.0070, ...}
    }

``t2_us`` is the echo decay time.  ``e1``/``e2`` are average gate
infidelities as fractions (not percent).  ``f00``/``f11`` are readout
assignment fidelities for prepared 0/1.  Pair keys join the two qubit names
with ``-`` in either order.

The bundled ``default_calibration.json`` is a 17-qubit snapshot matching the
distance-3 layout.  ``Calibration.load`` resolves, in order: an explicit
path, the ``SURFLAB_CALIBRATION`` environment variable, then the bundled
file.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources

ENV_VAR = "SURFLAB_CALIBRATION"


@dataclass(frozen=True)
class QubitCal:
    t1_us: float
    t2_us: float
    f00: float
    f11: float
    e1: float

    def __post_init__(self) -> None:
        if self.t1_us <= 0 or self.t2_us <= 0:
            raise ValueError("coherence times must be positive")
        for f in (self.f00, self.f11):
            if not 0.5 <= f <= 1.0:
                raise ValueError(f"readout fidelity {f} outside [0.5, 1]")
        if not 0.0 <= self.e1 <= 0.5:
            raise ValueError(f"gate infidelity {self.e1} outside [0, 0.5]")

    @property
    def p01(self) -> float:
        """Probability of reading 1 when the qubit was 0."""
        return 1.0 - self.f00

    @property
    def p10(self) -> float:
        return 1.0 - self.f11

    @property
    def mean_assignment_error(self) -> float:
        return 0.5 * (self.p01 + self.p10)


@dataclass
class Calibration:
    qubits: dict[str, QubitCal]
    pairs: dict[frozenset, float] = field(default_factory=dict)
    name: str = ""

    def e2(self, a: str, b: str) -> float:
        key = frozenset((a, b))
        if key not in self.pairs:
            raise KeyError(f"no CZ calibration for pair {a}-{b}")
        return self.pairs[key]

    def require(self, names: list[str], pairs: list[tuple[str, str]]) -> None:
        """Raise if any qubit or pair used by a layout is missing."""
        missing = [n for n in names if n not in self.qubits]
        if missing:
            raise KeyError(f"calibration missing qubits: {missing}")
        missing_pairs = [f"{a}-{b}" for a, b in pairs if frozenset((a, b)) not in self.pairs]
        if missing_pairs:
            raise KeyError(f"calibration missing CZ pairs: {missing_pairs}")

    def best_t1_us(self) -> float:
        return max(q.t1_us for q in self.qubits.values())

    # -- IO ----------------------------------------------------------------

    @classmethod
    def from_dict(cls, doc: dict) -> "Calibration":
        qubits = {name: QubitCal(**vals) for name, vals in doc["qubits"].items()}
        pairs: dict[frozenset, float] = {}
        for key, e2 in doc.get("pairs", {}).items():
            a, _, b = key.partition("-")
            if not b or a not in qubits or b not in qubits:
                raise ValueError(f"bad pair key {key!r}")
            pairs[frozenset((a, b))] = float(e2)
        return cls(qubits=qubits, pairs=pairs, name=doc.get("meta", {}).get("name", ""))

    def to_dict(self) -> dict:
        pair_items = sorted(
            ("-".join(sorted(k)), v) for k, v in self.pairs.items()
        )
        return {
            "meta": {"name": self.name},
            "qubits": {
                n: {
                    "t1_us": q.t1_us,
                    "t2_us": q.t2_us,
                    "f00": q.f00,
                    "f11": q.f11,
                    "e1": q.e1,
                }
                for n, q in sorted(self.qubits.items())
            },
            "pairs": dict(pair_items),
        }

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "Calibration":
        if path is None:
            path = os.environ.get(ENV_VAR)
        if path is None:
            text = resources.files("surflab.data").joinpath("default_calibration.json").read_text()
        else:
            with open(path) as fh:
                text = fh.read()
        return cls.from_dict(json.loads(text))
