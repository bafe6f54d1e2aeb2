"""Bitmask dynamic-programming kernels (numba-compiled).

The path table ``g[mask, v]`` holds the minimum length of a path that starts
at local vertex ``v``, visits exactly the vertices of ``mask`` (with
``v in mask``), and ends at a fixed terminal ``t``.  One table per terminal
serves every endpoint pair anchored there, so a full frequency subgraph costs
O(i^3 2^i) for i vertices.

Tie-breaking is the lexicographically smallest vertex sequence, realised by a
greedy walk over the table: at each step the smallest next vertex whose edge
plus remaining table value reproduces the table entry is taken.  The float
comparisons are exact because the walk re-evaluates the same IEEE additions
the table was built from.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True, nogil=True)
def path_table(D, t, g):
    """Fill g[mask, v] = min length of a v -> ... -> t path visiting mask."""
    i = D.shape[0]
    size = 1 << i
    for mask in range(size):
        for v in range(i):
            g[mask, v] = INF
    g[1 << t, t] = 0.0
    for mask in range(size):
        if not (mask >> t) & 1:
            continue
        for v in range(i):
            if v == t or not (mask >> v) & 1:
                continue
            rest = mask ^ (1 << v)
            best = INF
            for y in range(i):
                if (rest >> y) & 1:
                    c = D[v, y] + g[rest, y]
                    if c < best:
                        best = c
            g[mask, v] = best


@njit(cache=True, nogil=True)
def walk_path(D, g, u, t, out):
    """Lexicographically smallest optimal u -> t path over all vertices.

    Writes the vertex sequence into ``out`` and returns its length.
    """
    i = D.shape[0]
    mask = (1 << i) - 1
    cur = u
    k = 0
    out[k] = cur
    k += 1
    total = 0.0
    while cur != t:
        rest = mask ^ (1 << cur)
        target = g[mask, cur]
        for y in range(i):
            if (rest >> y) & 1:
                if D[cur, y] + g[rest, y] == target:
                    total += D[cur, y]
                    out[k] = y
                    k += 1
                    mask = rest
                    cur = y
                    break
    return total


@njit(cache=True, nogil=True)
def freq_matrix(D):
    """Edge frequencies over the C(i,2) optimal fixed-endpoint paths of D."""
    i = D.shape[0]
    freq = np.zeros((i, i), dtype=np.int64)
    g = np.empty(((1 << i), i), dtype=np.float64)
    for t in range(1, i):
        path_table(D, t, g)
        for u in range(t):
            mask = (1 << i) - 1
            cur = u
            while cur != t:
                rest = mask ^ (1 << cur)
                target = g[mask, cur]
                for y in range(i):
                    if (rest >> y) & 1:
                        if D[cur, y] + g[rest, y] == target:
                            freq[cur, y] += 1
                            freq[y, cur] += 1
                            mask = rest
                            cur = y
                            break
    return freq


@njit(cache=True, nogil=True)
def accumulate_freq(D, sel, total):
    """Add the frequency matrix of the subset ``sel`` of D into ``total``.

    ``sel`` is a sorted array of global vertex ids; ``total`` is an n x n
    int64 accumulator.
    """
    i = sel.shape[0]
    sub = np.empty((i, i), dtype=np.float64)
    for a in range(i):
        for b in range(i):
            sub[a, b] = D[sel[a], sel[b]]
    f = freq_matrix(sub)
    for a in range(i):
        for b in range(i):
            total[sel[a], sel[b]] += f[a, b]


@njit(cache=True, nogil=True)
def cycle_table(D, h):
    """h[mask, v] = min length of a path v -> (mask) -> 0, mask over bits 1..i-1."""
    i = D.shape[0]
    size = 1 << i
    for mask in range(size):
        for v in range(i):
            h[mask, v] = INF
    for v in range(1, i):
        h[1 << v, v] = D[v, 0]
    for mask in range(size):
        if mask & 1:
            continue
        for v in range(1, i):
            if not (mask >> v) & 1:
                continue
            rest = mask ^ (1 << v)
            if rest == 0:
                continue
            best = INF
            for y in range(1, i):
                if (rest >> y) & 1:
                    c = D[v, y] + h[rest, y]
                    if c < best:
                        best = c
            h[mask, v] = best


@njit(cache=True, nogil=True)
def cycle_solve(D, order):
    """Minimum Hamiltonian cycle of D, lexicographically smallest sequence.

    The cycle is written into ``order`` starting at local vertex 0; returns
    the cycle length (inf when D has no finite Hamiltonian cycle, e.g. on a
    masked distance matrix).
    """
    i = D.shape[0]
    h = np.empty(((1 << i), i), dtype=np.float64)
    cycle_table(D, h)
    full = ((1 << i) - 1) ^ 1
    best = INF
    for v in range(1, i):
        c = D[0, v] + h[full, v]
        if c < best:
            best = c
    if best == INF:
        return INF
    order[0] = 0
    mask = full
    cur = -1
    for v in range(1, i):
        if D[0, v] + h[full, v] == best:
            cur = v
            break
    k = 1
    order[k] = cur
    k += 1
    while mask ^ (1 << cur):
        rest = mask ^ (1 << cur)
        target = h[mask, cur]
        for y in range(1, i):
            if (rest >> y) & 1:
                if D[cur, y] + h[rest, y] == target:
                    order[k] = y
                    k += 1
                    mask = rest
                    cur = y
                    break
    return best


def warmup() -> None:
    """Force-compile the kernels on a toy input (one-time cost per process)."""
    D = np.array(
        [[0.0, 1.0, 2.0, 3.0],
         [1.0, 0.0, 4.0, 5.0],
         [2.0, 4.0, 0.0, 6.0],
         [3.0, 5.0, 6.0, 0.0]]
    )
    freq_matrix(D)
    g = np.empty((16, 4), dtype=np.float64)
    path_table(D, 3, g)
    walk_path(D, g, 0, 3, np.empty(4, dtype=np.int64))
    accumulate_freq(D, np.arange(4, dtype=np.int64), np.zeros((4, 4), dtype=np.int64))
    cycle_solve(D, np.empty(4, dtype=np.int64))
