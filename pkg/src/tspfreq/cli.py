"""Command-line experiment harness.

Subcommands reproduce the standard experiment families: full-graph frequency
rankings (``freqgraph``), per-edge trajectories over subset sizes
(``trajectory``), sampled statistics against a reference tour (``sample``),
analytic model curves (``analytics``), candidate-edge filtering
(``sparsify``), the recovery pipeline (``solve``), and the decline-threshold
solver (``idsolve``).

Every CSV starts with a provenance comment (tool, version, seed, flags) and
is byte-identical across reruns with the same seed and flags.

Exit codes: 0 success; 2 usage; 3 bad input or configuration; 4 cap or work
budget exceeded; 5 verification/recovery failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, analytics
from .classify import (
    DEFAULT_RECOVERY_SAMPLES,
    KEEP,
    RecoveryConfig,
    SurvivorGraphError,
    _build_sparsified,
    candidate_set_text,
    classify_by_decrement,
    classify_by_threshold,
    evaluate_against_tour,
    recover_ohc,
    sparsified_text,
)
from .freq import (
    BudgetExceededError,
    exhaustive_stats_all_edges,
    frequency_graph,
    sampled_stats_all_edges,
    stats_csv,
)
from .instances import ParseError, Tour, gen_random, parse_tour, parse_tsplib, perturb, tour_to_text
from .subset_dp import EXACT_CAP_DEFAULT, CapExceededError, ohc

E_OK = 0
E_INPUT = 3
E_CAP = 4
E_VERIFY = 5


class CliError(Exception):
    def __init__(self, message: str, code: int = E_INPUT):
        super().__init__(message)
        self.code = code


def _provenance(args, command: str) -> str:
    skip = {"func", "out", "command"}
    flags = []
    for key in sorted(vars(args)):
        if key in skip:
            continue
        val = getattr(args, key)
        if val is None or val is False:
            continue
        flags.append(f"{key}={val}")
    return f"# tspfreq {__version__} cmd={command} {' '.join(flags)}"


def _write(path: Path, provenance: str, body: str) -> None:
    path.write_text(provenance + "\n" + body)


def _out_dir(args) -> Path:
    out = Path(args.out)
    if not out.is_dir():
        raise CliError(f"output directory {out} does not exist", E_INPUT)
    return out


def _load_instance(args):
    if bool(args.instance) == bool(args.random):
        raise CliError("exactly one of --instance or --random is required", E_INPUT)
    if args.instance:
        path = Path(args.instance)
        if not path.is_file():
            raise CliError(f"instance file {path} not found", E_INPUT)
        try:
            inst = parse_tsplib(path.read_text(), name=path.stem)
        except ParseError as exc:
            raise CliError(f"cannot parse {path}: {exc}", E_INPUT) from exc
    else:
        try:
            n_str, seed_str = args.random.split(",")
            inst = gen_random(int(n_str), int(seed_str))
        except ValueError as exc:
            raise CliError(f"--random expects 'n,seed', got {args.random!r}", E_INPUT) from exc
    if getattr(args, "perturb", None) is not None:
        mag = None if args.perturb == "auto" else float(args.perturb)
        if mag is not None and mag <= 0:
            raise CliError(f"--perturb must be positive, got {mag}", E_INPUT)
        inst = perturb(inst, seed=getattr(args, "seed", 0), magnitude=mag)
    return inst


def _load_tour(args, inst) -> Tour | None:
    if not getattr(args, "tour", None):
        return None
    path = Path(args.tour)
    if not path.is_file():
        raise CliError(f"tour file {path} not found", E_INPUT)
    try:
        return parse_tour(path.read_text(), inst)
    except ParseError as exc:
        raise CliError(f"cannot parse tour {path}: {exc}", E_INPUT) from exc


def _parse_i_range(text: str, n: int) -> tuple[int, int]:
    try:
        lo_str, hi_str = text.split("..")
        lo, hi = int(lo_str), int(hi_str)
    except ValueError as exc:
        raise CliError(f"--i-range expects 'a..b', got {text!r}", E_INPUT) from exc
    if not (4 <= lo <= hi <= n):
        raise CliError(f"empty or invalid i range [{lo},{hi}] for n={n}", E_INPUT)
    return lo, hi


def _stats_over_range(inst, lo, hi, args):
    per_i = {}
    for i in range(lo, hi + 1):
        if args.exhaustive:
            per_i[i] = exhaustive_stats_all_edges(inst, i)
        else:
            reps = getattr(args, "repeats", 1)
            if reps <= 1:
                per_i[i] = sampled_stats_all_edges(
                    inst, i, args.samples, args.seed, workers=args.workers
                )
            else:
                # average over independent repeats: pool the sampled subgraphs
                from .freq import EdgeStats

                pooled: dict[tuple[int, int], list] = {}
                for rep in range(reps):
                    stats = sampled_stats_all_edges(
                        inst, i, args.samples, args.seed + rep, workers=args.workers
                    )
                    for e, s in stats.items():
                        pooled.setdefault(e, []).append(s)
                per_i[i] = {
                    e: EdgeStats(
                        edge=e, i=i,
                        N=sum(s.N for s in ss), F=sum(s.F for s in ss),
                    )
                    for e, ss in pooled.items()
                }
    return per_i


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_freqgraph(args) -> int:
    out = _out_dir(args)
    inst = _load_instance(args)
    if inst.n > args.cap:
        raise CliError(
            f"n={inst.n} exceeds the exact cap {args.cap}; raise it with --cap",
            E_CAP,
        )
    fg = frequency_graph(inst, range(inst.n))
    tour = ohc(inst, cap=args.cap)
    tour_edges = tour.edges()
    prov = _provenance(args, "freqgraph")

    ranked = sorted(
        ((f, e) for e, f in fg.freq.items() if f > 0), key=lambda t: (-t[0], t[1])
    )
    smallest_ohc = min(f for e, f in fg.freq.items() if e in tour_edges)
    lines = [
        f"# n={inst.n} f_lb={math.comb(inst.n, 2) / 2!r} "
        f"N_f={len(ranked)} N_tot={math.comb(inst.n, 2)} smallest_ohc_freq={smallest_ohc}",
        "rank,freq,is_ohc",
    ]
    for rank, (f, e) in enumerate(ranked, start=1):
        lines.append(f"{rank},{f},{int(e in tour_edges)}")
    _write(out / "freq_ranks.csv", prov, "\n".join(lines) + "\n")

    lines = ["vertex,ohc_sum,ord_sum"]
    for w in range(inst.n):
        ohc_sum = sum(f for e, f in fg.freq.items() if w in e and e in tour_edges)
        ord_sum = sum(f for e, f in fg.freq.items() if w in e and e not in tour_edges)
        lines.append(f"{w},{ohc_sum},{ord_sum}")
    _write(out / "vertex_split.csv", prov, "\n".join(lines) + "\n")
    print(f"freqgraph: n={inst.n} smallest ohc freq {smallest_ohc} -> {out}")
    return E_OK


def cmd_trajectory(args) -> int:
    out = _out_dir(args)
    inst = _load_instance(args)
    lo, hi = _parse_i_range(args.i_range, inst.n)
    tour = _load_tour(args, inst)
    per_i = _stats_over_range(inst, lo, hi, args)
    prov = _provenance(args, "trajectory")
    flat = [s for stats in per_i.values() for s in stats.values()]
    body = "u,v,i,F,f,p\n" + "".join(
        f"{s.edge[0]},{s.edge[1]},{s.i},{s.F},{s.f!r},{s.p!r}\n"
        for s in sorted(flat, key=lambda s: (s.edge, s.i))
    )
    _write(out / "trajectories.csv", prov, body)
    if tour is not None:
        from .classify import EdgeTrajectory

        trajectories = [
            EdgeTrajectory(edge=e, stats_by_i=[per_i[i][e] for i in range(lo, hi + 1)])
            for e in sorted(per_i[lo])
        ]
        report = evaluate_against_tour(trajectories, tour)
        _write(out / "class_summary.csv", prov, report.summary_csv())
        _write(out / "err.csv", prov, report.err_csv())
    print(f"trajectory: i in [{lo},{hi}] -> {out}")
    return E_OK


def cmd_sample(args) -> int:
    out = _out_dir(args)
    inst = _load_instance(args)
    tour = _load_tour(args, inst)
    if tour is None:
        raise CliError("sample needs --tour for class labeling", E_INPUT)
    if not args.exhaustive and args.samples < 1:
        raise CliError(f"--samples must be >= 1, got {args.samples}", E_INPUT)
    lo, hi = _parse_i_range(args.i_range, inst.n)
    per_i = _stats_over_range(inst, lo, hi, args)
    prov = _provenance(args, "sample")

    tour_edges = tour.edges()
    lines = ["i,fs1,fs2,fs3,fs4,fs5,fs6,fs7,fs8,f_avg,f_lb,f_oavg"]
    for i in range(lo, hi + 1):
        fvals = sorted(per_i[i][e].f for e in tour_edges)
        smallest = fvals[:8] + [math.nan] * max(0, 8 - len(fvals))
        b = analytics.bounds(inst.n, i)
        cells = ",".join(repr(x) for x in smallest)
        lines.append(f"{i},{cells},{float(np.mean(fvals))!r},{b.f_lb!r},{b.f_oavg!r}")
    _write(out / "smallest_ohc.csv", prov, "\n".join(lines) + "\n")

    from .classify import EdgeTrajectory

    trajectories = [
        EdgeTrajectory(edge=e, stats_by_i=[per_i[i][e] for i in range(lo, hi + 1)])
        for e in sorted(per_i[lo])
    ]
    report = evaluate_against_tour(trajectories, tour)
    _write(out / "err.csv", prov, report.err_csv())
    _write(out / "stats.csv", prov, stats_csv(flat_stats(per_i)))
    print(f"sample: i in [{lo},{hi}] N={args.samples} -> {out}")
    return E_OK


def flat_stats(per_i):
    return [s for stats in per_i.values() for s in stats.values()]


def cmd_analytics(args) -> int:
    out = _out_dir(args)
    n = args.n
    if n < 8:
        raise CliError(f"analytic models need n >= 8, got {n}", E_INPUT)
    prov = _provenance(args, "analytics")
    model = analytics.pd_model(n)
    cov = analytics.coverage_fractions(n)

    def curve(name: str, values) -> None:
        body = "n,i,value\n" + "".join(
            f"{n},{i},{v!r}\n" for i, v in zip(model.i_values, values)
        )
        _write(out / name, prov, body)

    curve("p.csv", model.p)
    curve("pd.csv", model.pd)
    curve("j_pct.csv", cov.j_pct)
    curve("k_pct.csv", cov.k_pct)
    curve("l_pct.csv", cov.l_pct)
    curve("jl_pct.csv", cov.jl_pct)
    eps_r = [
        (analytics.bounds(n, int(i)).epsilon, analytics.bounds(n, int(i)).r)
        for i in model.i_values
    ]
    body = "n,i,eps,r,one_minus_r\n" + "".join(
        f"{n},{i},{e!r},{r!r},{1.0 - r!r}\n"
        for i, (e, r) in zip(model.i_values, eps_r)
    )
    _write(out / "r.csv", prov, body)

    i_d = analytics.solve_id(n)
    thr = analytics.sparsify_threshold(n)
    summary = [
        ("i_d", i_d),
        ("p0", analytics.p0(n)),
        ("peak_i", model.peak_i),
        ("pd_turn_i", model.pd_turn_i),
        ("first_p_at_most_half", model.first_p_at_most_half),
        ("first_cum_drop_over_half", model.first_cum_drop_over_half),
        ("first_k_over_j", cov.first_k_over_j),
        ("approx_k_over_j", cov.approx_k_over_j),
        ("first_l_over_j", cov.first_l_over_j),
        ("approx_l_over_j", cov.approx_l_over_j),
        ("threshold_index", thr.index),
        ("two_i_d", thr.two_i_d),
        ("constants_agree", int(cov.constants_agree and thr.constant_agrees)),
    ]
    if args.residual_corrected:
        summary.insert(1, ("i_d_residual_corrected", analytics.solve_id(n, True)))
    body = "key,value\n" + "".join(f"{k},{v}\n" for k, v in summary)
    _write(out / "summary.csv", prov, body)

    if args.grid:
        try:
            lo_str, hi_str, count_str = args.grid.split(",")
            lo, hi, count = int(float(lo_str)), int(float(hi_str)), int(count_str)
        except ValueError as exc:
            raise CliError(f"--grid expects 'lo,hi,count', got {args.grid!r}") from exc
        ns = np.unique(
            np.logspace(math.log10(lo), math.log10(hi), count).astype(np.int64)
        )
        body = "n,id,bound\n" + "".join(
            f"{int(g)},{analytics.solve_id(int(g))},{4.0 * float(g) ** (4 / 7)!r}\n"
            for g in ns
        )
        _write(out / "minid.csv", prov, body)
    print(f"analytics: n={n} i_d={i_d} -> {out}")
    return E_OK


def _parse_threshold_rule(text: str):
    if text == "f_lb":
        return "f_lb"
    if text.startswith("fixed:"):
        return ("fixed", float(text.split(":", 1)[1]))
    if text.startswith("kth:"):
        return ("kth_ohc", int(text.split(":", 1)[1]))
    raise CliError(f"unknown threshold rule {text!r}; use f_lb, fixed:<v>, kth:<k>")


def cmd_sparsify(args) -> int:
    out = _out_dir(args)
    inst = _load_instance(args)
    tour = _load_tour(args, inst)
    prov = _provenance(args, "sparsify")
    if args.mode == "decrement":
        lo, hi = _parse_i_range(args.i_range, inst.n)
        trajectories = classify_by_decrement(
            inst, (lo, hi), N=args.samples, seed=args.seed,
            exhaustive=args.exhaustive, rule=args.rule, workers=args.workers,
        )
        kept = [t.edge for t in trajectories if t.verdict == KEEP]
        sg = _build_sparsified(
            inst.n, kept,
            {"mode": "decrement", "rule": args.rule, "i_range": [lo, hi],
             "N": args.samples, "seed": args.seed, "exhaustive": args.exhaustive},
        )
        stats = {t.edge: t.stats_by_i[-1] for t in trajectories}
        if tour is not None:
            tour_edges = tour.edges()
            kept_set = set(kept)
            sg.provenance["kept_ohc"] = len(kept_set & tour_edges)
            sg.provenance["kept_ordinary"] = len(kept_set - tour_edges)
    else:
        if args.i is None:
            raise CliError("threshold mode needs --i", E_INPUT)
        rule = _parse_threshold_rule(args.threshold_rule)
        sg = classify_by_threshold(
            inst, args.i, args.samples, args.seed, rule, tour,
            exhaustive=args.exhaustive, workers=args.workers,
        )
        if args.exhaustive:
            stats = exhaustive_stats_all_edges(inst, args.i)
        else:
            stats = sampled_stats_all_edges(
                inst, args.i, args.samples, args.seed, workers=args.workers
            )
    _write(out / "sparsified.txt", prov, sparsified_text(sg))
    if args.candidates:
        _write(out / "candidates.txt", prov, candidate_set_text(sg, stats))
    kept_n = len(sg.kept_edges)
    total = math.comb(inst.n, 2)
    print(f"sparsify: kept {kept_n}/{total} edges -> {out}")
    if sg.degree_violations():
        print(f"warning: degree<2 at vertices {sg.degree_violations()}", file=sys.stderr)
    return E_OK


def cmd_solve(args) -> int:
    out = _out_dir(args)
    inst = _load_instance(args)
    reference = _load_tour(args, inst)
    cfg = RecoveryConfig(
        i_eval=args.i_eval, samples=args.samples, seed=args.seed,
        cap=args.cap, exhaustive=args.exhaustive, workers=args.workers,
    )
    result = recover_ohc(inst, cfg)
    prov = _provenance(args, "solve")
    (out / "recovered.tour").write_text(tour_to_text(result.tour, name="recovered"))
    _write(out / "sparsified.txt", prov, sparsified_text(result.graph))
    lines = [
        f"i_eval: {result.i_eval}",
        f"threshold: {result.threshold!r}",
        f"kept_edges: {len(result.graph.kept_edges)}",
        f"recovered_length: {result.tour.length!r}",
    ]
    if reference is not None:
        lines.append(f"reference_length: {reference.length!r}")
        lines.append(f"edges_match: {int(result.tour.edges() == reference.edges())}")
    _write(out / "verdict.txt", prov, "\n".join(lines) + "\n")
    print(f"solve: length {result.tour.length!r} via i_eval={result.i_eval} -> {out}")
    return E_OK


def cmd_idsolve(args) -> int:
    i_d = analytics.solve_id(args.n)
    print(f"i_d({args.n}) = {i_d}")
    if args.residual_corrected:
        print(f"i_d({args.n}, residual-corrected) = {analytics.solve_id(args.n, True)}")
    return E_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--instance", help="TSPLIB .tsp file")
    p.add_argument("--random", help="synthetic instance as 'n,seed'")
    p.add_argument("--perturb", nargs="?", const="auto", default=None,
                   help="tie-breaking noise magnitude (or 'auto')")


def _add_common(p: argparse.ArgumentParser, out: bool = True) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--exhaustive", action="store_true")
    if out:
        p.add_argument("--out", required=True, help="output directory (must exist)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tspfreq",
        description="frequency-subgraph analysis and sparsification for symmetric TSP",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("freqgraph", help="full-size frequency subgraph ranking")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--cap", type=int, default=EXACT_CAP_DEFAULT)
    p.set_defaults(func=cmd_freqgraph)

    p = sub.add_parser("trajectory", help="per-edge stats across subset sizes")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--i-range", required=True, help="inclusive range 'a..b'")
    p.add_argument("--tour", help="reference tour for class summaries")
    p.add_argument("--repeats", type=int, default=1)
    p.set_defaults(func=cmd_trajectory)

    p = sub.add_parser("sample", help="sampled stats against a reference tour")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--i-range", default="4..8", help="inclusive range 'a..b'")
    p.add_argument("--tour", help="reference tour (required)")
    p.add_argument("--repeats", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("analytics", help="model curves and solved thresholds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", help="minid curve grid 'lo,hi,count' (log-spaced)")
    p.add_argument("--residual-corrected", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analytics)

    p = sub.add_parser("sparsify", help="filter candidate edges")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--mode", choices=("decrement", "threshold"), default="decrement")
    p.add_argument("--i-range", default="4..8")
    p.add_argument("--i", type=int, help="subset size for threshold mode")
    p.add_argument("--rule", choices=("err", "harmonic"), default="err")
    p.add_argument("--threshold-rule", default="f_lb")
    p.add_argument("--tour")
    p.add_argument("--candidates", action="store_true",
                   help="emit per-vertex candidate lists")
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("solve", help="recover the optimal cycle via sparsification")
    _add_instance_args(p)
    _add_common(p)
    p.add_argument("--i-eval", type=int, default=None)
    p.add_argument("--cap", type=int, default=EXACT_CAP_DEFAULT)
    p.add_argument("--tour", help="reference tour for the verdict")
    p.set_defaults(func=cmd_solve, samples=DEFAULT_RECOVERY_SAMPLES)

    p = sub.add_parser("idsolve", help="decline-threshold index")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--residual-corrected", action="store_true")
    p.set_defaults(func=cmd_idsolve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CapExceededError, BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return E_CAP
    except SurvivorGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return E_VERIFY
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return E_INPUT


if __name__ == "__main__":
    sys.exit(main())
