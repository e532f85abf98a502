"""Exact ratio partitioning (normalized cut, ratio regions, densest subgraph)
by reduction to parametric minimum s,t-cut."""

from .constructions import (
    Densest,
    NormalizedCut,
    NormalizedCutPrime,
    RatioRegions,
    build_densest,
    build_lambda_nc,
    build_lambda_rr,
    evaluate_ratio,
)
from .errors import (
    InfeasibleError,
    InstanceTooLargeError,
    NoFiniteCutError,
    RatioCutError,
    UndefinedRatioError,
)
from .flow import FlowNetwork, cut_value, max_flow, min_cut
from .graph import INF, WeightedGraph, capacity, node_weight_sum, validate_graph
from .parametric import ParametricNetwork, breakpoints, instantiate, min_cut_at
from .solver import (
    RatioSolution,
    binary_search_lambda,
    nested_solutions,
    solve,
    solve_auto_seeds,
)

__all__ = [
    "Densest",
    "FlowNetwork",
    "INF",
    "InfeasibleError",
    "InstanceTooLargeError",
    "NoFiniteCutError",
    "NormalizedCut",
    "NormalizedCutPrime",
    "ParametricNetwork",
    "RatioCutError",
    "RatioRegions",
    "RatioSolution",
    "UndefinedRatioError",
    "WeightedGraph",
    "binary_search_lambda",
    "breakpoints",
    "build_densest",
    "build_lambda_nc",
    "build_lambda_rr",
    "capacity",
    "cut_value",
    "evaluate_ratio",
    "instantiate",
    "max_flow",
    "min_cut",
    "min_cut_at",
    "nested_solutions",
    "node_weight_sum",
    "solve",
    "solve_auto_seeds",
    "validate_graph",
]
