"""Vectorized evaluation of the characteristic function over all coalitions.

The exact solvers enumerate all 2^n coalitions. Rather than running one graph
traversal per coalition in Python, reachability is propagated for a whole
block of coalitions at once: each coalition's reached-set is an int64 bitmask
over vertices, and one numpy pass per vertex ORs its neighborhood into every
coalition whose reached-set already contains it. Results are memoized on the
domain instance, so repeated queries on the same domain reuse the table.
"""

from __future__ import annotations

import numpy as np

from .domain import ConnectivityDomain, _value_of_mask

_CHUNK_BITS = 18  # bounds the int64 working arrays to 2 MB per chunk
_WIN_CACHE_KEY = "_win_table_cache"


def win_table(domain: ConnectivityDomain) -> np.ndarray:
    """Boolean array of length 2^n; entry ``m`` is the value of coalition ``m``."""
    cached = domain.__dict__.get(_WIN_CACHE_KEY)
    if cached is not None:
        return cached
    domain.ensure_valid()
    table = _compute_win_table(domain)
    table.setflags(write=False)
    domain.__dict__[_WIN_CACHE_KEY] = table
    return table


def _compute_win_table(domain: ConnectivityDomain) -> np.ndarray:
    n = domain.n_agents
    total = 1 << n
    pm = domain._primary_mask
    if pm & (pm - 1) == 0:
        return np.ones(total, dtype=bool)
    if domain.vertex_count > 62:
        # Vertex bitmasks no longer fit an int64 lane; fall back to the
        # per-coalition kernel.
        return np.fromiter(
            (_value_of_mask(domain, m) for m in range(total)), dtype=bool, count=total
        )

    adj = domain._adjacency_masks
    base = domain._base_usable_mask
    standard = domain.standard
    start = pm & -pm
    out = np.empty(total, dtype=bool)
    chunk = 1 << min(_CHUNK_BITS, n)
    for lo in range(0, total, chunk):
        hi = min(lo + chunk, total)
        masks = np.arange(lo, hi, dtype=np.int64)
        usable = np.full(hi - lo, base, dtype=np.int64)
        for i in range(n):
            usable |= ((masks >> i) & 1) << standard[i]
        reached = np.full(hi - lo, start, dtype=np.int64)
        while True:
            nbr = np.zeros(hi - lo, dtype=np.int64)
            for v in range(domain.vertex_count):
                a = adj[v]
                if a:
                    hit = ((reached >> v) & 1).astype(bool)
                    nbr |= np.where(hit, a, 0)
            new = reached | (nbr & usable)
            if np.array_equal(new, reached):
                break
            reached = new
        out[lo:hi] = (reached & pm) == pm
    return out


def size_table(n: int) -> np.ndarray:
    """uint8 array of length 2^n holding the popcount of each mask."""
    sizes = np.zeros(1 << n, dtype=np.uint8)
    for i in range(n):
        sizes[1 << i: 1 << (i + 1)] = sizes[: 1 << i] + 1
    return sizes


def criticality_counts(win: np.ndarray, n: int) -> list[int]:
    """Per agent, the number of coalitions containing it in which it is critical."""
    counts = []
    for i in range(n):
        view = win.reshape(-1, 2, 1 << i)
        counts.append(int(np.count_nonzero(view[:, 1, :] & ~view[:, 0, :])))
    return counts


def criticality_size_counts(win: np.ndarray, n: int) -> list[np.ndarray]:
    """Per agent, a histogram over |C| of coalitions where the agent is critical."""
    sizes = size_table(n)
    out = []
    for i in range(n):
        w = win.reshape(-1, 2, 1 << i)
        s = sizes.reshape(-1, 2, 1 << i)
        crit = w[:, 1, :] & ~w[:, 0, :]
        out.append(np.bincount(s[:, 1, :][crit], minlength=n + 1))
    return out


def minimal_winning_masks(win: np.ndarray, n: int) -> np.ndarray:
    """Masks of winning coalitions in which every member is critical."""
    minimal = win.copy()
    for i in range(n):
        m = minimal.reshape(-1, 2, 1 << i)
        w = win.reshape(-1, 2, 1 << i)
        m[:, 1, :] &= ~w[:, 0, :]
    return np.flatnonzero(minimal)
