"""Schedulability toolkit for typed DAG parallel tasks on heterogeneous
multi-cores: exact WCRT bounds, a work-conserving scheduling simulator,
workload generators and benchmark sweeps."""

from .bounds import (
    AbstractTuple,
    AnalysisOptions,
    BoundReport,
    ResourceLimit,
    analyze,
    new_b_1,
    new_b_2,
    new_b_2_bruteforce,
    old_b,
    path_bound,
    scaled_graph,
)
from .generate import GenConfig, gen_dag, gen_instance, gen_platform, sat_reduction, uunifast
from .graph import (
    Platform,
    TypedDag,
    Weight,
    longest_path,
    normalize,
    reachability,
    validate,
    vol,
    vol_s,
)
from .simulator import ExecutionScenario, ExecutionSequence, simulate

__all__ = [
    "AbstractTuple", "AnalysisOptions", "BoundReport", "ResourceLimit",
    "analyze", "new_b_1", "new_b_2", "new_b_2_bruteforce", "old_b",
    "path_bound", "scaled_graph", "GenConfig", "gen_dag", "gen_instance",
    "gen_platform", "sat_reduction", "uunifast", "Platform", "TypedDag",
    "Weight", "longest_path", "normalize", "reachability", "validate",
    "vol", "vol_s", "ExecutionScenario", "ExecutionSequence", "simulate",
]

__version__ = "0.1.0"
