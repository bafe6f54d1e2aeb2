"""Edge classification, sparsification, and cycle recovery from frequency stats.

An edge's probability trajectory over growing subset sizes separates cycle
edges from ordinary edges: a cycle edge never loses more than
2 p_i / (i (i-1)) per step, so any step with a larger drop (err > 0) marks an
ordinary edge.  Frequency thresholds (C(i,2)/2, or the k-th smallest value
over a reference tour's edges) give a second, single-size filter.

The recovery pipeline samples statistics at i_eval = min(2 * i_d, n), drops
every edge whose average frequency falls below C(i_eval,2)/2, and extracts
the shortest cycle restricted to the survivors by subset DP.  Degree
violations are reported, never silently repaired.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .analytics import decrement_law, solve_id
from .freq import EdgeStats, exhaustive_stats_all_edges, sampled_stats_all_edges
from .instances import Instance, Tour, all_edges
from .subset_dp import EXACT_CAP_DEFAULT, CapExceededError, canonical_cycle, ohc

KEEP = "KEEP"
DROP = "DROP"

ERR_POSITIVE = "ERR_POSITIVE"
RATIO_BELOW = "RATIO_BELOW"
BELOW_THRESHOLD = "BELOW_THRESHOLD"
ZERO_FREQ = "ZERO_FREQ"

DEFAULT_ERR_SLACK = 1e-9  # absolute slack over the exact law for sampled stats
DEFAULT_RECOVERY_SAMPLES = 32


class SurvivorGraphError(ValueError):
    """The sparsified graph cannot carry a Hamiltonian cycle."""

    def __init__(self, message: str, vertices: list[int]):
        super().__init__(message)
        self.vertices = vertices


@dataclass
class EdgeTrajectory:
    """One edge's statistics across subset sizes, with a keep/drop verdict."""

    edge: tuple[int, int]
    stats_by_i: list[EdgeStats]
    verdict: str = KEEP
    drop_reason: str | None = None
    drop_step: int | None = None  # the i of the step that fired

    def stat_at(self, i: int) -> EdgeStats:
        for s in self.stats_by_i:
            if s.i == i:
                return s
        raise KeyError(f"no stats at i={i} for edge {self.edge}")


@dataclass
class SparsifiedGraph:
    """Surviving candidate edges after a filtering rule."""

    n: int
    kept_edges: list[tuple[int, int]]
    degrees: dict[int, int]
    provenance: dict

    @property
    def min_degree(self) -> int:
        return min(self.degrees.values())

    def degree_violations(self) -> list[int]:
        """Vertices with fewer than the two edges a Hamiltonian cycle needs."""
        return [v for v, d in sorted(self.degrees.items()) if d < 2]


def _apply_decrement_rule(
    stats: Sequence[EdgeStats],
    rule: str = "err",
    err_tol: float = 0.0,
    slack: float = DEFAULT_ERR_SLACK,
    consecutive: int = 1,
) -> tuple[str, str | None, int | None]:
    """Evaluate the decline law along one trajectory.

    Returns (verdict, drop_reason, drop_step).  ``rule`` is "err" for the
    2 p/(i(i-1)) law or "harmonic" for the stricter i/(i+1) ratio law.
    """
    streak = 0
    for prev, nxt in zip(stats, stats[1:]):
        dec = decrement_law(prev.p, nxt.p, prev.i)
        fired = dec.err > err_tol + slack if rule == "err" else dec.harmonic_drop
        if fired:
            streak += 1
            if streak >= consecutive:
                reason = ERR_POSITIVE if rule == "err" else RATIO_BELOW
                return DROP, reason, prev.i
        else:
            streak = 0
    if stats and stats[-1].F == 0:
        return DROP, ZERO_FREQ, stats[-1].i
    return KEEP, None, None


def classify_by_decrement(
    inst: Instance,
    i_range: tuple[int, int],
    N: int = 1000,
    seed: int = 0,
    *,
    exhaustive: bool = False,
    rule: str = "err",
    err_tol: float = 0.0,
    slack: float = DEFAULT_ERR_SLACK,
    consecutive: int = 1,
    workers: int = 1,
) -> list[EdgeTrajectory]:
    """Classify every edge by its probability decrements over i_range.

    An edge is dropped as soon as ``consecutive`` steps violate the cycle-edge
    decline law (err > err_tol + slack), or when its frequency is zero at the
    final size; otherwise it is kept.  More steps can only add violations, so
    verdicts are monotone in evidence.
    """
    lo, hi = i_range
    if not (4 <= lo < hi <= inst.n):
        raise ValueError(f"bad i range [{lo},{hi}] for n={inst.n}")
    if N < 1:
        raise ValueError(f"sample count must be >= 1, got {N}")
    if rule not in ("err", "harmonic"):
        raise ValueError(f"unknown rule {rule!r}")
    per_i = {}
    for i in range(lo, hi + 1):
        if exhaustive:
            per_i[i] = exhaustive_stats_all_edges(inst, i)
        else:
            per_i[i] = sampled_stats_all_edges(inst, i, N, seed, workers=workers)
    out = []
    for e in all_edges(inst.n):
        stats = [per_i[i][e] for i in range(lo, hi + 1)]
        verdict, reason, step = _apply_decrement_rule(
            stats, rule=rule, err_tol=err_tol, slack=slack, consecutive=consecutive
        )
        out.append(
            EdgeTrajectory(
                edge=e, stats_by_i=stats, verdict=verdict,
                drop_reason=reason, drop_step=step,
            )
        )
    return out


def _build_sparsified(
    n: int, kept: Iterable[tuple[int, int]], provenance: dict
) -> SparsifiedGraph:
    kept = sorted(kept)
    degrees = {v: 0 for v in range(n)}
    for u, v in kept:
        degrees[u] += 1
        degrees[v] += 1
    sg = SparsifiedGraph(n=n, kept_edges=kept, degrees=degrees, provenance=provenance)
    violations = sg.degree_violations()
    if violations:
        sg.provenance["degree_violations"] = violations
    return sg


def classify_by_threshold(
    inst: Instance,
    i: int,
    N: int,
    seed: int = 0,
    threshold_rule="f_lb",
    tour: Tour | None = None,
    *,
    exhaustive: bool = False,
    workers: int = 1,
) -> SparsifiedGraph:
    """Keep edges whose average frequency at size i reaches a threshold.

    ``threshold_rule`` is "f_lb" (C(i,2)/2), ("fixed", value), or
    ("kth_ohc", k) which uses the k-th smallest average frequency over the
    reference tour's edges and therefore requires ``tour``.
    """
    if exhaustive:
        stats = exhaustive_stats_all_edges(inst, i)
    else:
        stats = sampled_stats_all_edges(inst, i, N, seed, workers=workers)
    if threshold_rule == "f_lb":
        threshold = math.comb(i, 2) / 2
        rule_desc = {"rule": "f_lb", "i": i}
    elif isinstance(threshold_rule, tuple) and threshold_rule[0] == "fixed":
        threshold = float(threshold_rule[1])
        rule_desc = {"rule": "fixed", "value": threshold, "i": i}
    elif isinstance(threshold_rule, tuple) and threshold_rule[0] == "kth_ohc":
        k = int(threshold_rule[1])
        if tour is None:
            raise ValueError("kth-smallest rule needs a reference tour")
        tour_f = sorted(stats[e].f for e in tour.edges())
        if not (1 <= k <= len(tour_f)):
            raise ValueError(f"k={k} out of range 1..{len(tour_f)}")
        threshold = tour_f[k - 1]
        rule_desc = {"rule": "kth_ohc", "k": k, "i": i}
    else:
        raise ValueError(f"unknown threshold rule {threshold_rule!r}")

    kept = [e for e, s in stats.items() if s.f >= threshold]
    prov = {
        **rule_desc,
        "threshold": threshold,
        "N": 0 if exhaustive else N,
        "seed": seed,
        "exhaustive": exhaustive,
    }
    if tour is not None:
        tour_edges = tour.edges()
        kept_set = set(kept)
        n_ord = inst.n * (inst.n - 3) // 2
        kept_ord = sum(1 for e in kept_set if e not in tour_edges)
        prov["kept_ohc"] = len(kept_set & tour_edges)
        prov["kept_ordinary"] = kept_ord
        prov["pct_ordinary_kept"] = 100.0 * kept_ord / n_ord
    return _build_sparsified(inst.n, kept, prov)


# ---------------------------------------------------------------------------
# Cycle recovery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryConfig:
    i_eval: int | None = None       # default min(2 * solve_id(n), n)
    samples: int = DEFAULT_RECOVERY_SAMPLES
    seed: int = 0
    cap: int = EXACT_CAP_DEFAULT
    exhaustive: bool = False
    workers: int = 1


@dataclass
class RecoveryResult:
    tour: Tour
    graph: SparsifiedGraph
    i_eval: int
    threshold: float


def recover_ohc(inst: Instance, config: RecoveryConfig | None = None) -> RecoveryResult:
    """Recover the optimal cycle through frequency sparsification plus DP.

    Samples per-edge statistics at i_eval, drops edges with average frequency
    below C(i_eval,2)/2, verifies the survivors can carry a Hamiltonian cycle,
    and extracts the shortest cycle restricted to them by subset DP.
    """
    cfg = config or RecoveryConfig()
    n = inst.n
    if n > cfg.cap:
        raise CapExceededError(
            f"n={n} exceeds the exact-solve cap {cfg.cap} for the recovery DP"
        )
    if cfg.i_eval is not None:
        i_eval = cfg.i_eval
    elif n >= 8:
        i_eval = min(2 * solve_id(n), n)
    else:
        i_eval = n
    if i_eval >= n:
        # degenerate: the single full-size subgraph is the whole problem
        tour = ohc(inst, cap=cfg.cap)
        prov = {"rule": "exact", "i": n}
        sg = _build_sparsified(n, all_edges(n), prov)
        return RecoveryResult(tour=tour, graph=sg, i_eval=n, threshold=0.0)

    if cfg.exhaustive:
        stats = exhaustive_stats_all_edges(inst, i_eval)
    else:
        stats = sampled_stats_all_edges(
            inst, i_eval, cfg.samples, cfg.seed, workers=cfg.workers
        )
    threshold = math.comb(i_eval, 2) / 2
    kept = [e for e, s in stats.items() if s.f >= threshold]
    prov = {
        "rule": "f_lb",
        "i": i_eval,
        "threshold": threshold,
        "N": 0 if cfg.exhaustive else cfg.samples,
        "seed": cfg.seed,
        "exhaustive": cfg.exhaustive,
    }
    sg = _build_sparsified(n, kept, prov)
    violations = sg.degree_violations()
    if violations:
        raise SurvivorGraphError(
            f"survivor graph cannot be Hamiltonian: vertices {violations} "
            "have degree < 2",
            vertices=violations,
        )
    masked = np.full((n, n), np.inf)
    m = inst.matrix()
    for u, v in kept:
        masked[u, v] = masked[v, u] = m[u, v]
    order = np.empty(n, dtype=np.int64)
    length = kernels.cycle_solve(masked, order)
    if not np.isfinite(length):
        raise SurvivorGraphError(
            "survivor graph admits no Hamiltonian cycle", vertices=[]
        )
    global_order = canonical_cycle(int(v) for v in order)
    tour = Tour(order=global_order, length=inst.tour_length(global_order))
    return RecoveryResult(tour=tour, graph=sg, i_eval=i_eval, threshold=threshold)


# ---------------------------------------------------------------------------
# Evaluation against a reference tour
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrajectoryRow:
    i: int
    F_tot: int
    F_ohc: int
    p_ohc_pct: float
    p_e: float       # mean probability over cycle edges
    p_g: float       # mean probability over ordinary edges
    p_min_e: float
    p_max_g: float


@dataclass(frozen=True)
class ErrRow:
    i_from: int
    i_to: int
    err_max_ohc: float
    n_pos_ohc: int
    err_max_ord: float
    n_pos_ord: int


@dataclass
class TrajectoryReport:
    rows: list[TrajectoryRow]
    err_rows: list[ErrRow]

    def summary_csv(self) -> str:
        lines = ["i,F_tot,F_ohc,p_ohc_pct,p_e,p_g,p_min_e,p_max_g"]
        for r in self.rows:
            lines.append(
                f"{r.i},{r.F_tot},{r.F_ohc},{r.p_ohc_pct!r},{r.p_e!r},"
                f"{r.p_g!r},{r.p_min_e!r},{r.p_max_g!r}"
            )
        return "\n".join(lines) + "\n"

    def err_csv(self) -> str:
        lines = ["i_from,i_to,err_max_ohc,n_pos_ohc,err_max_ord,n_pos_ord"]
        for r in self.err_rows:
            lines.append(
                f"{r.i_from},{r.i_to},{r.err_max_ohc!r},{r.n_pos_ohc},"
                f"{r.err_max_ord!r},{r.n_pos_ord}"
            )
        return "\n".join(lines) + "\n"


def evaluate_against_tour(
    trajectories: Sequence[EdgeTrajectory], tour: Tour
) -> TrajectoryReport:
    """Per-size class summary of trajectories labelled by a reference tour."""
    if not trajectories:
        raise ValueError("no trajectories to evaluate")
    n = max(max(t.edge) for t in trajectories) + 1
    if sorted(tour.order) != list(range(n)):
        raise ValueError(
            f"reference tour has {len(tour.order)} vertices, trajectories span {n}"
        )
    tour_edges = tour.edges()
    sizes = sorted({s.i for t in trajectories for s in t.stats_by_i})
    rows = []
    for i in sizes:
        f_tot = f_ohc = 0
        pe, pg = [], []
        for t in trajectories:
            s = t.stat_at(i)
            f_tot += s.F
            if t.edge in tour_edges:
                f_ohc += s.F
                pe.append(s.p)
            else:
                pg.append(s.p)
        rows.append(
            TrajectoryRow(
                i=i,
                F_tot=f_tot,
                F_ohc=f_ohc,
                p_ohc_pct=100.0 * f_ohc / f_tot if f_tot else math.nan,
                p_e=float(np.mean(pe)) if pe else math.nan,
                p_g=float(np.mean(pg)) if pg else math.nan,
                p_min_e=min(pe) if pe else math.nan,
                p_max_g=max(pg) if pg else math.nan,
            )
        )
    err_rows = []
    for i_from, i_to in zip(sizes, sizes[1:]):
        best: dict[bool, float] = {True: -math.inf, False: -math.inf}
        count = {True: 0, False: 0}
        for t in trajectories:
            dec = decrement_law(t.stat_at(i_from).p, t.stat_at(i_to).p, i_from)
            is_ohc = t.edge in tour_edges
            best[is_ohc] = max(best[is_ohc], dec.err)
            if dec.err > 0:
                count[is_ohc] += 1
        err_rows.append(
            ErrRow(
                i_from=i_from,
                i_to=i_to,
                err_max_ohc=best[True],
                n_pos_ohc=count[True],
                err_max_ord=best[False],
                n_pos_ord=count[False],
            )
        )
    return TrajectoryReport(rows=rows, err_rows=err_rows)


# ---------------------------------------------------------------------------
# Text emissions
# ---------------------------------------------------------------------------

def sparsified_text(sg: SparsifiedGraph) -> str:
    """Edge list, one ``u v`` per line, with a provenance comment header."""
    prov = json.dumps(sg.provenance, sort_keys=True)
    lines = [f"# sparsified graph n={sg.n} edges={len(sg.kept_edges)}", f"# {prov}"]
    lines.extend(f"{u} {v}" for u, v in sg.kept_edges)
    return "\n".join(lines) + "\n"


def candidate_set_text(
    sg: SparsifiedGraph, stats: dict[tuple[int, int], EdgeStats]
) -> str:
    """Per-vertex kept neighbors, sorted by average frequency descending."""
    neighbors: dict[int, list[tuple[float, int]]] = {v: [] for v in range(sg.n)}
    for u, v in sg.kept_edges:
        f = stats[(u, v)].f
        neighbors[u].append((-f, v))
        neighbors[v].append((-f, u))
    lines = []
    for v in range(sg.n):
        ordered = [str(w) for _, w in sorted(neighbors[v])]
        lines.append(f"{v}: {' '.join(ordered)}")
    return "\n".join(lines) + "\n"
