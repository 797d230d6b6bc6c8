"""Summarize the high-valued answers of an aggregate query as at most k
diverse wildcard clusters covering the top-L original tuples."""

from .algorithms import (
    AlgoParams,
    MergeState,
    bottom_up,
    delta_eval,
    fixed_order,
    hybrid,
    merge,
    run_algorithm,
    seed_clusters,
    trivial_solution,
    update_solution,
)
from .ingest import IngestConfig, load_csv, load_sql, rank_topL
from .model import (
    STAR,
    Cluster,
    CoverageIndex,
    Dataset,
    Element,
    FeasibilityReport,
    Solution,
    avg_value,
    check_feasible,
    coverage,
    covers,
    decode,
    distance,
    encode,
    generate_candidates,
    lca,
)
from .oracle import OracleLimits, OracleResult, brute_force
from .store import ParamStore, guidance_matrix, load_store, precompute, retrieve, save_store
from .matchviz import OverlapMatrix, Placement, crossing_cost, optimal_order, overlap_matrix

__version__ = "0.1.0"

__all__ = [
    "AlgoParams", "MergeState", "bottom_up", "delta_eval", "fixed_order",
    "hybrid", "merge", "run_algorithm", "seed_clusters", "trivial_solution",
    "update_solution", "IngestConfig", "load_csv", "load_sql", "rank_topL",
    "STAR", "Cluster", "CoverageIndex", "Dataset", "Element",
    "FeasibilityReport", "Solution", "avg_value", "check_feasible",
    "coverage", "covers", "decode", "distance", "encode",
    "generate_candidates", "lca", "OracleLimits", "OracleResult",
    "brute_force", "ParamStore", "guidance_matrix", "load_store",
    "precompute", "retrieve", "save_store", "OverlapMatrix", "Placement",
    "crossing_cost", "optimal_order", "overlap_matrix",
]
