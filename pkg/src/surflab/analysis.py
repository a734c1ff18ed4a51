"""Logical-fidelity estimation, post-selection, and memory-lifetime fits.

The memory fidelity after ``k`` cycles is modelled as

    F(k) = (1 + (1 - 2*eps)**(k - k0)) / 2

with ``eps`` the logical error per cycle and ``k0`` an offset absorbing
preparation/readout transients.  ``eps`` converts to a lifetime through the
cycle duration, ``T = t_cycle / (2*eps)``, and is compared against the
best single physical qubit idling for the same wall time,
``F_phys(k) = (1 + exp(-k * t_cycle / T1)) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .detection import DetectorSet, logical_readout
from .surface import CYCLE_NS, MemoryMeta

POST_SELECTIONS = ("none", "data_only", "ancilla_only", "both")


def expected_logical_parity(meta: MemoryMeta) -> int:
    """Noiseless value of the logical readout parity.

    Zero for a Z-basis memory (all-zeros preparation).  For an X-basis
    memory every data qubit is prepared pointing opposite to the logical X
    axis, and the logical operator has odd weight (``d``), so the parity
    is one.  Unit tests pin this against direct simulation of both engines.
    """
    return 0 if meta.basis == "Z" else 1


def logical_errors(records: np.ndarray, meta: MemoryMeta, correction: np.ndarray | None = None) -> np.ndarray:
    """Per-shot logical-error indicator (uint8), optionally after correction."""
    err = logical_readout(records, meta) ^ expected_logical_parity(meta)
    if correction is not None:
        err = err ^ correction
    return err


def post_selection_masks(events: np.ndarray, dset: DetectorSet) -> dict[str, np.ndarray]:
    """Shot-keeping masks for the four post-selection policies.

    ``ancilla_only`` discards shots with any event in the repeated
    (ancilla-chain) detectors, ``data_only`` in the final data-comparison
    detectors, ``both`` in either; ``none`` keeps everything.
    """
    rounds = dset.rounds_of()
    final = dset.final_round()
    anc_quiet = ~events[:, rounds < final].any(axis=1)
    data_quiet = ~events[:, rounds == final].any(axis=1)
    return {
        "none": np.ones(len(events), dtype=bool),
        "data_only": data_quiet,
        "ancilla_only": anc_quiet,
        "both": anc_quiet & data_quiet,
    }


@dataclass
class ErrorEstimate:
    p: float
    se: float
    n: int

    @property
    def fidelity(self) -> float:
        return 1.0 - self.p

    @classmethod
    def from_indicator(cls, err: np.ndarray, mask: np.ndarray | None = None) -> "ErrorEstimate":
        if mask is not None:
            err = err[mask]
        n = len(err)
        if n == 0:
            return cls(p=math.nan, se=math.nan, n=0)
        p = float(err.mean())
        return cls(p=p, se=math.sqrt(max(p * (1 - p), 0.0) / n), n=n)


# ---------------------------------------------------------------------------
# decay fitting


@dataclass
class MemoryFit:
    eps: float
    k0: float
    method: str
    sse: float

    def fidelity(self, k: np.ndarray | float) -> np.ndarray | float:
        return 0.5 * (1.0 + (1.0 - 2.0 * self.eps) ** (np.asarray(k, dtype=float) - self.k0))


def fit_memory_curve(ks, fids, method: str = "auto") -> MemoryFit:
    """Fit ``eps`` and ``k0`` to fidelity-vs-cycles data.

    ``auto`` linearises ``ln(2F - 1)`` against ``k`` when every point
    allows it, otherwise minimises least squares over the decay rate with
    the amplitude profiled out (golden-section refinement of a coarse
    scan), which tolerates points at or below F = 1/2.
    """
    ks = np.asarray(ks, dtype=float)
    fids = np.asarray(fids, dtype=float)
    if ks.ndim != 1 or ks.shape != fids.shape or len(ks) < 2:
        raise ValueError("need matching 1-D arrays with at least two points")
    if len(np.unique(ks)) != len(ks):
        raise ValueError("duplicate cycle counts")
    y = 2.0 * fids - 1.0
    if method not in ("auto", "linear", "profile"):
        raise ValueError(f"unknown fit method {method!r}")
    use_linear = method == "linear" or (method == "auto" and (y > 0).all())
    if use_linear:
        if (y <= 0).any():
            raise ValueError("linearised fit needs every fidelity above one half")
        b, a = np.polyfit(ks, np.log(y), 1)
        rho = math.exp(b)
        eps = (1.0 - rho) / 2.0
        k0 = -a / b if b != 0 else 0.0
        sse = float(np.sum((fids - 0.5 * (1 + rho ** (ks - k0))) ** 2))
        return MemoryFit(eps=eps, k0=k0, method="linear", sse=sse)

    def sse_of(rho: float) -> tuple[float, float]:
        rk = rho**ks
        denom = float(rk @ rk)
        c = float(rk @ y) / denom if denom > 0 else 0.0
        return float(np.sum((y - c * rk) ** 2)), c

    grid = np.linspace(1e-6, 1.0 - 1e-6, 400)
    losses = [sse_of(r)[0] for r in grid]
    i = int(np.argmin(losses))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - golden * (hi - lo)
    x2 = lo + golden * (hi - lo)
    f1, f2 = sse_of(x1)[0], sse_of(x2)[0]
    for _ in range(80):
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - golden * (hi - lo)
            f1 = sse_of(x1)[0]
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + golden * (hi - lo)
            f2 = sse_of(x2)[0]
    rho = 0.5 * (lo + hi)
    sse, c = sse_of(rho)
    eps = (1.0 - rho) / 2.0
    k0 = -math.log(c) / math.log(rho) if c > 0 and 0 < rho < 1 else 0.0
    return MemoryFit(eps=eps, k0=k0, method="profile", sse=sse)


def lifetime_us(eps: float, cycle_ns: float = CYCLE_NS) -> float:
    """Memory lifetime implied by a per-cycle logical error rate."""
    if eps <= 0:
        return math.inf
    return cycle_ns * 1e-3 / (2.0 * eps)


def physical_reference_fidelity(k, t1_us: float, cycle_ns: float = CYCLE_NS):
    """Idling fidelity of the best single qubit over ``k`` cycles."""
    k = np.asarray(k, dtype=float)
    return 0.5 * (1.0 + np.exp(-k * cycle_ns * 1e-3 / t1_us))
