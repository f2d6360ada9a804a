"""Find small dense bipartite-like subgraphs by minimising the bipartiteness ratio."""

from .detect import (
    DetectionResult,
    DetectParams,
    eigen_sweep,
    locdb,
    locdb_theta_grid,
    profile_estimate,
    swpdb,
    theta_grid,
)
from .errors import BudgetExceededError, GraphFormatError, ValidationError
from .graph import Graph, PairSubgraph, bipartiteness_ratio, load_graph, parse_edgelist, set_metrics
from .oracle import brute_force_beta, brute_force_beta_of_set, brute_force_profile, dense_spectrum
from .potential import check_convergence_lemma, check_truncation_proposition, upper_bound_audit
from .sweep import partition_by_sign, sweep
from .synth import PlantSpec, generate, write_instance
from .vecops import SignedVec, TruncationSchedule, WorkCounter, indicator, multiply_m, truncate

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError", "DetectParams", "DetectionResult", "Graph", "GraphFormatError",
    "PairSubgraph", "PlantSpec", "SignedVec", "TruncationSchedule", "ValidationError",
    "WorkCounter", "bipartiteness_ratio", "brute_force_beta", "brute_force_beta_of_set",
    "brute_force_profile", "check_convergence_lemma", "check_truncation_proposition",
    "dense_spectrum", "eigen_sweep", "generate", "indicator", "load_graph", "locdb",
    "locdb_theta_grid", "multiply_m", "parse_edgelist", "partition_by_sign",
    "profile_estimate", "set_metrics", "sweep", "swpdb", "theta_grid", "truncate",
    "upper_bound_audit", "write_instance",
]
