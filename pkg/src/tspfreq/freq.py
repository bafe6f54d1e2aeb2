"""Frequency subgraphs and per-edge frequency statistics.

A frequency subgraph of an i-vertex selection labels each edge with the
number of the C(i,2) optimal fixed-endpoint paths that contain it.  Three
identities pin the object down exactly:

* the labels sum to C(i,2) * (i-1)  (each path contributes i-1 edges),
* the labels on the i-1 edges at any vertex sum to (i-1)^2,
* no label exceeds C(i,2) - 1  (a pair's own path avoids its endpoint edge).

For i = 4 the six-case closed form applies: order the three pairing sums
d(a,b)+d(c,d), d(a,c)+d(b,d), d(a,d)+d(b,c); the two edges of the smallest
pairing get label 5, the middle pairing 3, the largest 1.

Per-edge statistics aggregate labels over the subsets containing an edge,
either exhaustively or by seeded random sampling; sampling streams are
derived per (seed, edge, i) so results are independent of evaluation order
and worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .instances import Instance, all_edges
from .subset_dp import OptimalPath, SubsetSelection, _as_selection

DEFAULT_WORK_BUDGET = 1 << 30  # subset-count * 2^i guard for exhaustive sweeps
_MAX_SAMPLABLE_RANKS = 1 << 62  # beyond this, fall back to with-replacement draws


class DegenerateQuartetError(ValueError):
    """Tied pairing sums: the six-case quartet table is undefined."""


class BudgetExceededError(ValueError):
    """Exhaustive enumeration would exceed the configured work budget."""


@dataclass
class FrequencyGraph:
    """Edge labels over one selection: counts of containing optimal paths."""

    sel: SubsetSelection
    freq: dict[tuple[int, int], int]

    @property
    def i(self) -> int:
        return self.sel.i

    def total(self) -> int:
        return sum(self.freq.values())

    def vertex_total(self, w: int) -> int:
        return sum(f for (u, v), f in self.freq.items() if w in (u, v))

    def max_freq(self) -> int:
        return max(self.freq.values())

    def average(self) -> float:
        return self.total() / len(self.freq)

    def check_invariants(self) -> None:
        i = self.i
        pairs = math.comb(i, 2)
        if self.total() != pairs * (i - 1):
            raise ValueError(f"total frequency {self.total()} != {pairs * (i - 1)}")
        for w in self.sel.vertices:
            s = self.vertex_total(w)
            if s != (i - 1) ** 2:
                raise ValueError(f"vertex {w} incident sum {s} != {(i - 1) ** 2}")
        if self.max_freq() > pairs - 1:
            raise ValueError(f"max frequency {self.max_freq()} > {pairs - 1}")


@dataclass
class SupportGraph:
    """Positive-frequency edges of a frequency subgraph, with vertex degrees."""

    edges: list[tuple[int, int]]
    degrees: dict[int, int]

    @property
    def min_degree(self) -> int:
        return min(self.degrees.values())

    @property
    def max_degree(self) -> int:
        return max(self.degrees.values())


def frequency_graph(inst: Instance, sel) -> FrequencyGraph:
    """Frequency subgraph of a selection, computed by subset DP."""
    sel = _as_selection(inst, sel)
    D = inst.dist_submatrix(sel.vertices)
    f = kernels.freq_matrix(D)
    verts = sel.vertices
    freq = {}
    for a in range(sel.i):
        for b in range(a + 1, sel.i):
            freq[(verts[a], verts[b])] = int(f[a, b])
    return FrequencyGraph(sel=sel, freq=freq)


def freq_from_paths(paths: Sequence[OptimalPath], sel) -> FrequencyGraph:
    """Frequency subgraph from an explicit complete set of optimal paths."""
    if isinstance(sel, SubsetSelection):
        selection = sel
    else:
        verts = tuple(sorted(sel))
        selection = SubsetSelection(verts)
    i = selection.i
    expected = math.comb(i, 2)
    if len(paths) != expected:
        raise ValueError(f"expected {expected} paths for i={i}, got {len(paths)}")
    seen_pairs = {p.endpoints for p in paths}
    if len(seen_pairs) != expected:
        raise ValueError("paths do not cover every endpoint pair exactly once")
    freq = {(u, v): 0 for u, v in combinations(selection.vertices, 2)}
    for p in paths:
        for e in p.edges():
            freq[e] += 1
    return FrequencyGraph(sel=selection, freq=freq)


def freq_k4_closed(inst: Instance, sel) -> FrequencyGraph:
    """Closed-form frequency subgraph of a 4-vertex selection.

    Keyed on the ordering of the three pairing sums; raises
    DegenerateQuartetError on ties (perturb the instance instead).
    """
    sel = _as_selection(inst, sel)
    if sel.i != 4:
        raise ValueError(f"closed form needs exactly 4 vertices, got {sel.i}")
    a, b, c, d = sel.vertices
    dist = inst.distance
    pairings = [
        (dist(a, b) + dist(c, d), ((a, b), (c, d))),
        (dist(a, c) + dist(b, d), ((a, c), (b, d))),
        (dist(a, d) + dist(b, c), ((a, d), (b, c))),
    ]
    sums = [s for s, _ in pairings]
    if len({sums[0], sums[1], sums[2]}) < 3:
        raise DegenerateQuartetError(
            f"tied pairing sums {sums} on selection {sel.vertices}; "
            "perturb the instance to break ties"
        )
    order = sorted(range(3), key=lambda k: sums[k])
    label_by_rank = (5, 3, 1)  # smallest pairing sum -> both its edges in 5 paths
    freq: dict[tuple[int, int], int] = {}
    for rank, k in enumerate(order):
        for e in pairings[k][1]:
            freq[e] = label_by_rank[rank]
    return FrequencyGraph(sel=sel, freq=freq)


def support_graph(fg: FrequencyGraph) -> SupportGraph:
    """Subgraph of positive-frequency edges with a per-vertex degree report."""
    edges = sorted(e for e, f in fg.freq.items() if f > 0)
    degrees = {w: 0 for w in fg.sel.vertices}
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    return SupportGraph(edges=edges, degrees=degrees)


# ---------------------------------------------------------------------------
# Per-edge statistics over many subsets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeStats:
    """Aggregated frequency of one edge over N frequency subgraphs of size i."""

    edge: tuple[int, int]
    i: int
    N: int
    F: int

    @property
    def f(self) -> float:
        return self.F / self.N

    @property
    def p(self) -> float:
        return self.f / math.comb(self.i, 2)


def _edge_rng(seed: int, edge: tuple[int, int], i: int) -> np.random.Generator:
    u, v = edge
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(u), int(v), int(i)]))


def _unrank_combination(rank: int, m: int, k: int) -> list[int]:
    """Lexicographic unranking of a k-combination of range(m)."""
    combo = []
    x = 0
    for slot in range(k, 0, -1):
        while True:
            c = math.comb(m - 1 - x, slot - 1)
            if rank < c:
                combo.append(x)
                x += 1
                break
            rank -= c
            x += 1
    return combo


def _distinct_ranks(rng: np.random.Generator, count: int, total: int) -> list[int]:
    """Floyd's algorithm: ``count`` distinct uniform ranks from range(total)."""
    chosen: set[int] = set()
    for j in range(total - count, total):
        t = int(rng.integers(0, j + 1))
        if t in chosen:
            chosen.add(j)
        else:
            chosen.add(t)
    return sorted(chosen)


def _validate_edge(inst: Instance, edge: tuple[int, int]) -> tuple[int, int]:
    u, v = edge
    if u == v or not (0 <= u < inst.n and 0 <= v < inst.n):
        raise ValueError(f"bad edge {edge} for n={inst.n}")
    return (u, v) if u < v else (v, u)


def sample_edge_stats(
    inst: Instance, edge: tuple[int, int], i: int, N: int, seed: int = 0
) -> EdgeStats:
    """Aggregate F, f, p for an edge over N random size-i subsets containing it.

    Subsets are distinct (sampled without replacement by rank) whenever the
    rank space fits 64-bit arithmetic, otherwise uniform with replacement.
    N is clamped to the number of available subsets, so i = n degenerates to
    the single full-graph frequency subgraph.  Deterministic per
    (seed, edge, i) regardless of evaluation order or worker count.
    """
    edge = _validate_edge(inst, edge)
    if not (4 <= i <= inst.n):
        raise ValueError(f"subgraph size i={i} out of range [4, {inst.n}]")
    if N < 1:
        raise ValueError(f"sample count must be >= 1, got {N}")
    u, v = edge
    others = [w for w in range(inst.n) if w not in (u, v)]
    total = math.comb(len(others), i - 2)
    n_eff = min(N, total)
    rng = _edge_rng(seed, edge, i)
    D = inst.matrix()
    acc = np.zeros((inst.n, inst.n), dtype=np.int64)
    if total <= _MAX_SAMPLABLE_RANKS:
        ranks = _distinct_ranks(rng, n_eff, total)
        for rank in ranks:
            picks = _unrank_combination(rank, len(others), i - 2)
            sel = np.array(sorted([u, v] + [others[x] for x in picks]), dtype=np.int64)
            kernels.accumulate_freq(D, sel, acc)
    else:
        others_arr = np.array(others)
        for _ in range(n_eff):
            picks = rng.choice(others_arr, size=i - 2, replace=False)
            sel = np.array(sorted([u, v] + picks.tolist()), dtype=np.int64)
            kernels.accumulate_freq(D, sel, acc)
    return EdgeStats(edge=edge, i=i, N=n_eff, F=int(acc[u, v]))


def exhaustive_edge_stats(
    inst: Instance, edge: tuple[int, int], i: int, budget: int = DEFAULT_WORK_BUDGET
) -> EdgeStats:
    """Exact aggregation of an edge over all C(n-2, i-2) containing subsets."""
    edge = _validate_edge(inst, edge)
    if not (4 <= i <= inst.n):
        raise ValueError(f"subgraph size i={i} out of range [4, {inst.n}]")
    u, v = edge
    others = [w for w in range(inst.n) if w not in (u, v)]
    total = math.comb(len(others), i - 2)
    if total * (1 << i) > budget:
        raise BudgetExceededError(
            f"exhaustive sweep needs {total} subsets of size {i} "
            f"({total * (1 << i)} work units > budget {budget})"
        )
    D = inst.matrix()
    acc = np.zeros((inst.n, inst.n), dtype=np.int64)
    for picks in combinations(others, i - 2):
        sel = np.array(sorted((u, v) + picks), dtype=np.int64)
        kernels.accumulate_freq(D, sel, acc)
    return EdgeStats(edge=edge, i=i, N=total, F=int(acc[u, v]))


def exhaustive_stats_all_edges(
    inst: Instance, i: int, budget: int = DEFAULT_WORK_BUDGET
) -> dict[tuple[int, int], EdgeStats]:
    """Exact EdgeStats for every edge at size i, sharing one subset sweep."""
    n = inst.n
    if not (4 <= i <= n):
        raise ValueError(f"subgraph size i={i} out of range [4, {n}]")
    n_subsets = math.comb(n, i)
    if n_subsets * (1 << i) > budget:
        raise BudgetExceededError(
            f"exhaustive sweep needs {n_subsets} subsets of size {i} "
            f"({n_subsets * (1 << i)} work units > budget {budget})"
        )
    D = inst.matrix()
    acc = np.zeros((n, n), dtype=np.int64)
    for sel in combinations(range(n), i):
        kernels.accumulate_freq(D, np.array(sel, dtype=np.int64), acc)
    per_edge = math.comb(n - 2, i - 2)
    return {
        (u, v): EdgeStats(edge=(u, v), i=i, N=per_edge, F=int(acc[u, v]))
        for u, v in all_edges(n)
    }


def sampled_stats_all_edges(
    inst: Instance, i: int, N: int, seed: int = 0, workers: int = 1
) -> dict[tuple[int, int], EdgeStats]:
    """Sampled EdgeStats for every edge at size i (parallelizable per edge).

    Output is identical for any worker count: each edge draws from its own
    (seed, edge, i) stream and results are merged in edge order.
    """
    edges = list(all_edges(inst.n))
    inst.matrix()  # materialize once before the pool shares it
    if workers <= 1:
        results = [sample_edge_stats(inst, e, i, N, seed) for e in edges]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda e: sample_edge_stats(inst, e, i, N, seed), edges)
            )
    return {s.edge: s for s in results}


def stats_csv(stats: Iterable[EdgeStats]) -> str:
    """CSV rows ``u,v,i,N,F,f_avg,p`` ordered by (edge, i)."""
    lines = ["u,v,i,N,F,f_avg,p"]
    for s in sorted(stats, key=lambda s: (s.edge, s.i)):
        lines.append(
            f"{s.edge[0]},{s.edge[1]},{s.i},{s.N},{s.F},{s.f!r},{s.p!r}"
        )
    return "\n".join(lines) + "\n"
