"""Exact optimal fixed-endpoint paths and Hamiltonian cycles on vertex subsets.

The workhorse is a (visited-bitmask, last-vertex) dynamic program; one sweep
per terminal vertex serves every endpoint pair anchored there, so all C(i,2)
optimal paths of an i-vertex subset cost O(i^3 2^i).  Equal-length paths are
tie-broken to the lexicographically smallest vertex sequence, which makes
every result reproducible without perturbation.

Brute-force enumeration oracles (`oracle_path`, `oracle_cycle`) are kept
deliberately independent of the DP so they can verify it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .instances import Instance, Tour

EXACT_CAP_DEFAULT = 22  # 2^22-state tables stay under ~1 GiB
ORACLE_CAP = 10


class CapExceededError(ValueError):
    """Subset too large for the configured exact-solve cap."""


@dataclass(frozen=True)
class SubsetSelection:
    """A sorted selection of distinct vertex ids from a parent instance."""

    vertices: tuple[int, ...]

    @property
    def i(self) -> int:
        return len(self.vertices)

    def local_index(self, v: int) -> int:
        return self.vertices.index(v)


@dataclass(frozen=True)
class OptimalPath:
    """Minimum-length Hamiltonian path on a subset with fixed endpoints."""

    endpoints: tuple[int, int]  # (min, max)
    order: tuple[int, ...]
    length: float

    def edges(self) -> set[tuple[int, int]]:
        out = set()
        for a, b in zip(self.order, self.order[1:]):
            out.add((a, b) if a < b else (b, a))
        return out


def select(inst: Instance, vertices: Iterable[int]) -> SubsetSelection:
    """Validate and build a SubsetSelection for ``inst``."""
    verts = tuple(sorted(int(v) for v in vertices))
    if len(verts) != len(set(verts)):
        raise ValueError("selection vertices must be distinct")
    if len(verts) < 4:
        raise ValueError(f"selection needs at least 4 vertices, got {len(verts)}")
    if len(verts) > inst.n:
        raise ValueError("selection larger than instance")
    if verts[0] < 0 or verts[-1] >= inst.n:
        raise ValueError(f"selection vertices out of range 0..{inst.n - 1}")
    return SubsetSelection(verts)


def _as_selection(inst: Instance, sel) -> SubsetSelection:
    if isinstance(sel, SubsetSelection):
        return sel
    return select(inst, sel)


def path_length(inst: Instance, order: Sequence[int]) -> float:
    """Length of a path, summed left to right (canonical summation order)."""
    total = 0
    for a, b in zip(order, order[1:]):
        total += inst.distance(a, b)
    return total


def canonical_cycle(order: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of a cycle: start at the smallest vertex and
    take the lexicographically smaller of the two traversal directions.

    Both directions of one cycle always have exactly equal true length, so
    float arithmetic cannot be trusted to pick between them; this makes the
    choice explicit.
    """
    order = list(order)
    k = order.index(min(order))
    order = order[k:] + order[:k]
    rev = [order[0]] + order[1:][::-1]
    return tuple(min(order, rev))


def op_path(inst: Instance, sel, u: int, v: int) -> OptimalPath:
    """Optimal Hamiltonian path on the selection with endpoints u, v.

    The returned order starts at ``u`` and ends at ``v``; among equal-length
    paths the lexicographically smallest sequence is chosen.
    """
    sel = _as_selection(inst, sel)
    if u == v:
        raise ValueError("endpoints must be distinct")
    if u not in sel.vertices or v not in sel.vertices:
        raise ValueError(f"endpoints ({u},{v}) not in selection {sel.vertices}")
    i = sel.i
    D = inst.dist_submatrix(sel.vertices)
    lu, lv = sel.local_index(u), sel.local_index(v)
    g = np.empty((1 << i, i), dtype=np.float64)
    kernels.path_table(D, lv, g)
    out = np.empty(i, dtype=np.int64)
    kernels.walk_path(D, g, lu, lv, out)
    order = tuple(sel.vertices[k] for k in out)
    ends = (u, v) if u < v else (v, u)
    return OptimalPath(endpoints=ends, order=order, length=path_length(inst, order))


def all_op_paths(inst: Instance, sel) -> list[OptimalPath]:
    """All C(i,2) optimal fixed-endpoint paths of the selection.

    One DP sweep per terminal vertex serves every endpoint pair anchored at
    it; each path is oriented from its smaller endpoint.
    """
    sel = _as_selection(inst, sel)
    i = sel.i
    D = inst.dist_submatrix(sel.vertices)
    g = np.empty((1 << i, i), dtype=np.float64)
    out = np.empty(i, dtype=np.int64)
    paths = []
    for t in range(1, i):
        kernels.path_table(D, t, g)
        for s in range(t):
            kernels.walk_path(D, g, s, t, out)
            order = tuple(sel.vertices[k] for k in out)
            paths.append(
                OptimalPath(
                    endpoints=(sel.vertices[s], sel.vertices[t]),
                    order=order,
                    length=path_length(inst, order),
                )
            )
    paths.sort(key=lambda p: p.endpoints)
    return paths


def ohc(inst: Instance, sel=None, cap: int = EXACT_CAP_DEFAULT) -> Tour:
    """Minimum Hamiltonian cycle on the selection (defaults to all vertices).

    Deterministic lexicographic tie-break; the order starts at the smallest
    selected vertex.
    """
    if sel is None:
        sel = range(inst.n)
    sel = _as_selection(inst, sel)
    if sel.i > cap:
        raise CapExceededError(
            f"subset size {sel.i} exceeds the exact-solve cap {cap}; "
            "raise the cap explicitly if you have the memory for it"
        )
    D = inst.dist_submatrix(sel.vertices)
    order = np.empty(sel.i, dtype=np.int64)
    length = kernels.cycle_solve(D, order)
    if not np.isfinite(length):
        raise ValueError("no finite Hamiltonian cycle (masked distances?)")
    global_order = canonical_cycle(sel.vertices[k] for k in order)
    exact = inst.tour_length(global_order)
    return Tour(order=global_order, length=exact)


def oracle_path(inst: Instance, sel, u: int, v: int) -> OptimalPath:
    """Brute-force optimal path: enumerate all (i-2)! middle orders."""
    sel = _as_selection(inst, sel)
    if sel.i > ORACLE_CAP:
        raise CapExceededError(f"oracle capped at {ORACLE_CAP} vertices, got {sel.i}")
    if u == v or u not in sel.vertices or v not in sel.vertices:
        raise ValueError(f"bad endpoints ({u},{v}) for selection {sel.vertices}")
    D = inst.dist_submatrix(sel.vertices)
    lu, lv = sel.local_index(u), sel.local_index(v)
    middles = [k for k in range(sel.i) if k not in (lu, lv)]
    perms = np.array(list(itertools.permutations(middles)), dtype=np.intp)
    seq = np.hstack(
        [
            np.full((len(perms), 1), lu, dtype=np.intp),
            perms,
            np.full((len(perms), 1), lv, dtype=np.intp),
        ]
    )
    lengths = D[seq[:, :-1], seq[:, 1:]].sum(axis=1)
    best = int(np.argmin(lengths))  # first minimum = lexicographically smallest
    order = tuple(sel.vertices[k] for k in seq[best])
    ends = (u, v) if u < v else (v, u)
    return OptimalPath(endpoints=ends, order=order, length=path_length(inst, order))


def oracle_cycle(inst: Instance, sel=None) -> Tour:
    """Brute-force optimal Hamiltonian cycle: enumerate (i-1)! orders."""
    if sel is None:
        sel = range(inst.n)
    sel = _as_selection(inst, sel)
    if sel.i > ORACLE_CAP:
        raise CapExceededError(f"oracle capped at {ORACLE_CAP} vertices, got {sel.i}")
    D = inst.dist_submatrix(sel.vertices)
    rest = list(range(1, sel.i))
    perms = np.array(list(itertools.permutations(rest)), dtype=np.intp)
    seq = np.hstack(
        [
            np.zeros((len(perms), 1), dtype=np.intp),
            perms,
            np.zeros((len(perms), 1), dtype=np.intp),
        ]
    )
    lengths = D[seq[:, :-1], seq[:, 1:]].sum(axis=1)
    best = int(np.argmin(lengths))
    global_order = canonical_cycle(sel.vertices[k] for k in seq[best][:-1])
    return Tour(order=global_order, length=inst.tour_length(global_order))


def subsets_of(vertices: Sequence[int], i: int) -> Iterable[tuple[int, ...]]:
    """All sorted i-subsets of the given vertices."""
    return itertools.combinations(sorted(vertices), i)
