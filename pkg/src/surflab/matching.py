"""Exact minimum-weight matching of fired detectors against the boundary.

Every fired detector must be paired with another fired detector or matched
to the boundary; the solver minimises total path weight and reports the
logical parity of the chosen pairing.  Three routes, all exact:

* a subset-DP over fired detectors, vectorised across all shots that fired
  the same number of detectors (the workhorse — ``2**m`` states);
* for rarer large syndromes, a per-shot split into independent clusters
  (an edge can only be optimal when cheaper than sending both endpoints to
  the boundary, so the graph restricted to such edges decomposes), each
  cluster solved by the same DP;
* a blossom-algorithm fallback (networkx) for any cluster still too large,
  via the standard boundary-doubling construction.

Ties are broken deterministically: the lowest-index unmatched detector
chooses first, boundary before partners, then the smallest partner index.
"""

from __future__ import annotations

import numpy as np

DP_CAP = 12  # vectorised-DP limit on fired detectors per shot
CLUSTER_CAP = 20  # per-cluster DP limit before falling back to blossom


# ---------------------------------------------------------------------------
# reference implementations (also used for the rare-path fallbacks)


def match_single(w: np.ndarray, wb: np.ndarray, par: np.ndarray, par_b: np.ndarray) -> tuple[float, int]:
    """Exact DP for one instance; returns (total weight, logical parity)."""
    m = len(wb)
    if m == 0:
        return 0.0, 0
    size = 1 << m
    dp = np.full(size, np.inf)
    pr = np.zeros(size, dtype=np.uint8)
    dp[0] = 0.0
    for mask in range(1, size):
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        best = dp[rest] + wb[i]
        bpar = pr[rest] ^ par_b[i]
        jj = rest
        while jj:
            j = (jj & -jj).bit_length() - 1
            jj &= jj - 1
            cand = dp[rest ^ (1 << j)] + w[i, j]
            if cand < best:
                best = cand
                bpar = pr[rest ^ (1 << j)] ^ par[i, j]
        dp[mask] = best
        pr[mask] = bpar
    return float(dp[size - 1]), int(pr[size - 1])


def match_brute(w: np.ndarray, wb: np.ndarray, par: np.ndarray, par_b: np.ndarray) -> tuple[float, int, bool]:
    """Enumerate every pairing; returns (weight, parity, unique_optimum).

    Exponential; intended as an independent test oracle for small m.
    """
    m = len(wb)

    def go(avail: tuple[int, ...]) -> list[tuple[float, int]]:
        if not avail:
            return [(0.0, 0)]
        i, rest = avail[0], avail[1:]
        out = []
        for cost, parity in go(rest):
            out.append((cost + wb[i], parity ^ int(par_b[i])))
        for k, j in enumerate(rest):
            rem = rest[:k] + rest[k + 1 :]
            for cost, parity in go(rem):
                out.append((cost + w[i, j], parity ^ int(par[i, j])))
        return out

    sols = go(tuple(range(m)))
    best = min(s[0] for s in sols)
    winners = {s[1] for s in sols if s[0] <= best + 1e-9}
    parities = [s[1] for s in sols if s[0] <= best + 1e-9]
    return best, parities[0], len(winners) == 1


def _match_blossom(w: np.ndarray, wb: np.ndarray, par: np.ndarray, par_b: np.ndarray) -> tuple[float, int]:
    """Boundary-doubled exact blossom matching; returns (weight, parity)."""
    import networkx as nx

    m = len(wb)
    g = nx.Graph()
    for i in range(m):
        g.add_edge(i, m + i, weight=float(wb[i]))
        for j in range(i + 1, m):
            g.add_edge(i, j, weight=float(w[i, j]))
            g.add_edge(m + i, m + j, weight=0.0)
    pairs = nx.min_weight_matching(g)
    parity = 0
    weight = 0.0
    for u, v in pairs:
        u, v = min(u, v), max(u, v)
        if u < m <= v:
            if v - m == u:
                parity ^= int(par_b[u])
                weight += float(wb[u])
            else:
                raise AssertionError("boundary shadow matched across detectors")
        elif v < m:
            parity ^= int(par[u, v])
            weight += float(w[u, v])
    return weight, parity


# ---------------------------------------------------------------------------
# batched decoding


def _dp_batched(wm: np.ndarray, wbm: np.ndarray, pm: np.ndarray, pbm: np.ndarray) -> np.ndarray:
    """Vectorised subset DP; wm (S, m, m), wbm (S, m).  Returns parities."""
    s, m = wbm.shape
    size = 1 << m
    dp = np.empty((s, size), dtype=np.float64)
    pr = np.zeros((s, size), dtype=np.uint8)
    dp[:, 0] = 0.0
    for mask in range(1, size):
        i = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << i)
        best = dp[:, rest] + wbm[:, i]
        bpar = pr[:, rest] ^ pbm[:, i]
        jj = rest
        while jj:
            j = (jj & -jj).bit_length() - 1
            jj &= jj - 1
            prev = rest ^ (1 << j)
            cand = dp[:, prev] + wm[:, i, j]
            take = cand < best
            if take.any():
                best = np.where(take, cand, best)
                bpar = np.where(take, pr[:, prev] ^ pm[:, i, j], bpar)
        dp[:, mask] = best
        pr[:, mask] = bpar
    return pr[:, size - 1]


def _decode_large(fired: np.ndarray, w: np.ndarray, wb: np.ndarray, par: np.ndarray, par_b: np.ndarray) -> int:
    """Cluster split + per-cluster DP for one large syndrome."""
    m = len(fired)
    wm = w[np.ix_(fired, fired)]
    wbm = wb[fired]
    allowed = wm < (wbm[:, None] + wbm[None, :])
    # connected components of the 'possibly matched together' graph
    label = np.full(m, -1)
    n_lab = 0
    for start in range(m):
        if label[start] >= 0:
            continue
        stack = [start]
        label[start] = n_lab
        while stack:
            u = stack.pop()
            for v in np.nonzero(allowed[u])[0]:
                if label[v] < 0:
                    label[v] = n_lab
                    stack.append(v)
        n_lab += 1
    parity = 0
    for lab in range(n_lab):
        members = np.nonzero(label == lab)[0]
        sub = fired[members]
        if len(sub) <= CLUSTER_CAP:
            _, p = match_single(w[np.ix_(sub, sub)], wb[sub], par[np.ix_(sub, sub)], par_b[sub])
        else:
            _, p = _match_blossom(w[np.ix_(sub, sub)], wb[sub], par[np.ix_(sub, sub)], par_b[sub])
        parity ^= p
    return parity


def decode_batched(
    w: np.ndarray,
    wb: np.ndarray,
    par: np.ndarray,
    par_b: np.ndarray,
    events: np.ndarray,
    dp_cap: int = DP_CAP,
) -> np.ndarray:
    """Logical correction for every shot of detection events (S, D)."""
    events = np.asarray(events, dtype=bool)
    shots, n_det = events.shape
    counts = events.sum(axis=1)
    corrections = np.zeros(shots, dtype=np.uint8)
    # fired-detector indices, front-packed per shot by a stable argsort
    order = np.argsort(~events, axis=1, kind="stable")
    for m in range(1, int(counts.max()) + 1 if shots else 0):
        rows = np.nonzero(counts == m)[0]
        if rows.size == 0:
            continue
        idx = order[rows, :m]
        if m == 1:
            corrections[rows] = par_b[idx[:, 0]]
            continue
        if m <= dp_cap:
            chunk = max(1, (1 << 22) // (1 << m))
            for lo in range(0, rows.size, chunk):
                sl = slice(lo, lo + chunk)
                sub = idx[sl]
                wm = w[sub[:, :, None], sub[:, None, :]]
                pm = par[sub[:, :, None], sub[:, None, :]]
                corrections[rows[sl]] = _dp_batched(wm, wb[sub], pm, par_b[sub])
        else:
            for r, fired in zip(rows, idx):
                corrections[r] = _decode_large(fired, w, wb, par, par_b)
    return corrections
