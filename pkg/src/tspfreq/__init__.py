"""Frequency-subgraph analysis for symmetric TSP.

Builds the frequency subgraph of every i-vertex selection (edge labels count
the C(i,2) optimal fixed-endpoint paths containing each edge), aggregates
per-edge frequency and probability statistics across sampled selections,
evaluates the analytic bounds and decline laws those statistics obey, and
uses them to sparsify instances and recover optimal cycles at desk scale.
"""

__version__ = "0.1.0"

from .analytics import (
    AnalyticParams,
    Coverage,
    Decrement,
    PdModel,
    ProbabilityModel,
    bounds,
    bracket,
    coverage_fractions,
    decrement_law,
    fit_probability_model,
    p0,
    pd_model,
    solve_id,
    sparsify_threshold,
)
from .classify import (
    EdgeTrajectory,
    RecoveryConfig,
    RecoveryResult,
    SparsifiedGraph,
    SurvivorGraphError,
    classify_by_decrement,
    classify_by_threshold,
    evaluate_against_tour,
    recover_ohc,
)
from .freq import (
    BudgetExceededError,
    DegenerateQuartetError,
    EdgeStats,
    FrequencyGraph,
    SupportGraph,
    exhaustive_edge_stats,
    exhaustive_stats_all_edges,
    freq_from_paths,
    freq_k4_closed,
    frequency_graph,
    sample_edge_stats,
    sampled_stats_all_edges,
    support_graph,
    stats_csv,
)
from .instances import (
    Instance,
    ParseError,
    Perturbation,
    Tour,
    dump_csv,
    gen_random,
    load_csv,
    parse_tour,
    parse_tsplib,
    perturb,
    tour_to_text,
)
from .subset_dp import (
    EXACT_CAP_DEFAULT,
    CapExceededError,
    OptimalPath,
    SubsetSelection,
    all_op_paths,
    ohc,
    op_path,
    oracle_cycle,
    oracle_path,
    select,
)

__all__ = [
    "AnalyticParams",
    "BudgetExceededError",
    "CapExceededError",
    "Coverage",
    "Decrement",
    "DegenerateQuartetError",
    "EXACT_CAP_DEFAULT",
    "EdgeStats",
    "EdgeTrajectory",
    "FrequencyGraph",
    "Instance",
    "OptimalPath",
    "ParseError",
    "PdModel",
    "Perturbation",
    "ProbabilityModel",
    "RecoveryConfig",
    "RecoveryResult",
    "SparsifiedGraph",
    "SubsetSelection",
    "SupportGraph",
    "SurvivorGraphError",
    "Tour",
    "all_op_paths",
    "bounds",
    "bracket",
    "classify_by_decrement",
    "classify_by_threshold",
    "coverage_fractions",
    "decrement_law",
    "dump_csv",
    "evaluate_against_tour",
    "exhaustive_edge_stats",
    "exhaustive_stats_all_edges",
    "fit_probability_model",
    "freq_from_paths",
    "freq_k4_closed",
    "frequency_graph",
    "gen_random",
    "load_csv",
    "ohc",
    "op_path",
    "oracle_cycle",
    "oracle_path",
    "p0",
    "parse_tour",
    "parse_tsplib",
    "pd_model",
    "perturb",
    "recover_ohc",
    "sample_edge_stats",
    "sampled_stats_all_edges",
    "select",
    "solve_id",
    "sparsify_threshold",
    "stats_csv",
    "support_graph",
    "tour_to_text",
]
