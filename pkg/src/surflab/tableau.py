"""Batched stabilizer-tableau simulator.

The simulator follows the standard destabilizer/stabilizer tableau
construction, with one structural observation doing all the heavy lifting:
under Clifford gates and stochastic *Pauli* noise, the binary X/Z part of
the tableau evolves identically for every shot — Pauli errors and
measurement outcomes only ever touch row *signs*.  So the tableau bits are
stored once, while the per-shot state is a single machine word per shot
(``shots`` x one sign bit for each of the ``2n`` rows, packed into a
``uint64``).  A million shots of a 17-qubit circuit are then just a stream
of vectorized XOR/multiply passes over one 8-byte-per-shot array.

The measurement branch structure (whether an outcome is random or
determined) depends only on the shared bits, hence is identical across
shots, which is what makes the batching exact rather than approximate.

Only Z-basis measurements exist (``MZ``); they are projective and do not
reset the qubit.  Readout assignment errors (``FLIP``) are applied to the
classical record by the driver in :mod:`surflab.engines`.
"""

from __future__ import annotations

import numpy as np

_U64_ONE = np.uint64(1)


def _parity_u64(words: np.ndarray) -> np.ndarray:
    """Bit parity of each uint64 in ``words`` (returns uint64 of 0/1)."""
    return np.bitwise_count(words).astype(np.uint64) & _U64_ONE


class BatchedTableau:
    """Stabilizer state of ``n_qubits`` <= 32, batched over ``shots``.

    Rows ``0..n-1`` are destabilizers, ``n..2n-1`` stabilizers.  The initial
    state is |0...0> for every shot: destabilizer i = X_i, stabilizer
    i = Z_i, all signs +1.
    """

    def __init__(self, n_qubits: int, shots: int):
        if n_qubits > 32:
            raise ValueError("packed tableau supports at most 32 qubits")
        self.n = n_qubits
        self.shots = shots
        n = n_qubits
        self.x = np.zeros((2 * n, n), dtype=np.uint8)
        self.z = np.zeros((2 * n, n), dtype=np.uint8)
        self.x[np.arange(n), np.arange(n)] = 1
        self.z[n + np.arange(n), np.arange(n)] = 1
        # per-shot sign words, bit h = sign bit of row h
        self.r = np.zeros(shots, dtype=np.uint64)

    # -- helpers -----------------------------------------------------------

    def _pack_rows(self, flags: np.ndarray) -> np.uint64:
        """Pack a per-row bit vector (length 2n) into one uint64 mask."""
        bits = np.asarray(flags, dtype=np.uint64)
        return np.uint64((bits << np.arange(2 * self.n, dtype=np.uint64)).sum())

    def _row_bit(self, h: int) -> np.ndarray:
        return (self.r >> np.uint64(h)) & _U64_ONE

    def _set_row_bit(self, h: int, bit: np.ndarray) -> None:
        mask = np.uint64(1 << h)
        self.r &= ~mask
        self.r |= bit.astype(np.uint64) << np.uint64(h)

    # -- Clifford gates ----------------------------------------------------

    def apply_gate(self, name: str, qubits: tuple[int, ...]) -> None:
        x, z = self.x, self.z
        if name in ("I", "IDLE"):
            return
        if name == "CZ":
            a, b = qubits
            flip = x[:, a] & x[:, b] & (z[:, a] ^ z[:, b])
            self.r ^= self._pack_rows(flip)
            z[:, a] ^= x[:, b]
            z[:, b] ^= x[:, a]
            return
        (q,) = qubits
        xq, zq = x[:, q], z[:, q]
        if name == "RY+":
            flip = xq & (1 - zq)
            swap = True
        elif name == "RY-":
            flip = zq & (1 - xq)
            swap = True
        elif name == "H":
            flip = xq & zq
            swap = True
        elif name == "RX+":
            flip = zq & (1 - xq)
            swap = False
        elif name == "RX-":
            flip = xq & zq
            swap = False
        elif name == "X":
            self.r ^= self._pack_rows(zq)
            return
        elif name == "Y":
            self.r ^= self._pack_rows(xq ^ zq)
            return
        elif name == "Z":
            self.r ^= self._pack_rows(xq)
            return
        else:
            raise ValueError(f"tableau engine cannot apply {name!r}")
        self.r ^= self._pack_rows(flip)
        if swap:
            x[:, q], z[:, q] = zq.copy(), xq.copy()
        else:  # RX+-: Z <-> Y, i.e. x ^= z
            x[:, q] = xq ^ zq

    # -- stochastic sign flips --------------------------------------------

    def apply_pauli_flips(self, q: int, fx: np.ndarray, fz: np.ndarray) -> None:
        """Apply per-shot Pauli errors X^fx Z^fz on qubit ``q``.

        ``fx``/``fz`` are 0/1 arrays of shape (shots,).  An X error flips
        the sign of every row anticommuting with X_q (those with a Z
        component on q), and symmetrically for Z.
        """
        zmask = self._pack_rows(self.z[:, q])
        xmask = self._pack_rows(self.x[:, q])
        self.r ^= fx.astype(np.uint64) * zmask ^ fz.astype(np.uint64) * xmask

    # -- phase bookkeeping -------------------------------------------------

    def _g_sum(self, x1: np.ndarray, z1: np.ndarray, x2: np.ndarray, z2: np.ndarray) -> int:
        """Sum over qubits of the i-power picked up multiplying P1 * P2."""
        x1 = x1.astype(np.int8)
        z1 = z1.astype(np.int8)
        x2 = x2.astype(np.int8)
        z2 = z2.astype(np.int8)
        g = (
            x1 * z1 * (z2 - x2)
            + x1 * (1 - z1) * z2 * (2 * x2 - 1)
            + (1 - x1) * z1 * x2 * (1 - 2 * z2)
        )
        return int(g.sum())

    def _rowsum(self, h: int, i: int) -> None:
        """Row h <- (row i) * (row h), with per-shot sign update."""
        g = self._g_sum(self.x[i], self.z[i], self.x[h], self.z[h])
        if g % 2:
            raise AssertionError("rowsum applied to anticommuting rows")
        g2 = np.uint64((g % 4) // 2)
        bit_i = self._row_bit(i)
        bit_h = self._row_bit(h)
        self._set_row_bit(h, bit_h ^ bit_i ^ g2)
        self.x[h] ^= self.x[i]
        self.z[h] ^= self.z[i]

    # -- measurement -------------------------------------------------------

    def measure_z(self, q: int, rng: np.random.Generator) -> tuple[np.ndarray, bool]:
        """Projectively measure Z on qubit ``q`` for every shot.

        Returns ``(outcomes, deterministic)`` where ``outcomes`` is a
        (shots,) uint8 array.  The ``deterministic`` flag is a property of
        the circuit position, not of any single shot.
        """
        n = self.n
        stab_x = self.x[n:, q]
        if stab_x.any():
            p = n + int(np.argmax(stab_x))
            for h in range(2 * n):
                if h != p and h != p - n and self.x[h, q]:
                    self._rowsum(h, p)
            # destabilizer p-n becomes the old row p
            self.x[p - n] = self.x[p]
            self.z[p - n] = self.z[p]
            self._set_row_bit(p - n, self._row_bit(p))
            # row p becomes +-Z_q with a fresh random outcome
            self.x[p] = 0
            self.z[p] = 0
            self.z[p, q] = 1
            outcome = rng.integers(0, 2, size=self.shots, dtype=np.uint64)
            self._set_row_bit(p, outcome)
            return outcome.astype(np.uint8), False
        # deterministic: multiply the stabilizers singled out by the
        # destabilizer rows that anticommute with Z_q
        sel = np.nonzero(self.x[:n, q])[0]
        xs = np.zeros(n, dtype=np.uint8)
        zs = np.zeros(n, dtype=np.uint8)
        g_total = 0
        sel_mask = np.uint64(0)
        for h in sel:
            row = n + int(h)
            g = self._g_sum(self.x[row], self.z[row], xs, zs)
            if g % 2:
                raise AssertionError("deterministic outcome accumulated an i phase")
            g_total += g
            xs ^= self.x[row]
            zs ^= self.z[row]
            sel_mask |= np.uint64(1 << row)
        outcome = _parity_u64(self.r & sel_mask) ^ np.uint64((g_total % 4) // 2)
        return outcome.astype(np.uint8), True

    # -- diagnostics -------------------------------------------------------

    def check_invariants(self) -> None:
        """Assert the symplectic invariants of a valid tableau.

        Stabilizer rows commute pairwise, destabilizer rows commute
        pairwise, and destabilizer i anticommutes with stabilizer j exactly
        when i == j.  Cheap enough to call from tests after every gate.
        """
        n = self.n
        x = self.x.astype(np.int64)
        z = self.z.astype(np.int64)
        sym = (x @ z.T + z @ x.T) % 2
        expect = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expect[:n, n:] = np.eye(n, dtype=np.int64)
        expect[n:, :n] = np.eye(n, dtype=np.int64)
        if not np.array_equal(sym, expect):
            raise AssertionError("tableau lost its symplectic structure")
