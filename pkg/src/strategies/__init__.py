"""Uniform strategies, their outcomes and strategy search."""

from .csp import UniformCSP
from .partial import (
    SEMANTICS,
    BoundedStrategy,
    PartialStrategy,
    StrategySpace,
    StrategyVariable,
    audit_uniformity,
    bounded_strategy,
    enumerate_partial,
    outcomes,
    start_set,
    succ_by,
)
from .reachable import ReachableStrategy, count_safe_strategies, enumerate_reachable, safe_strategies

__all__ = [
    "UniformCSP",
    "SEMANTICS",
    "BoundedStrategy",
    "PartialStrategy",
    "StrategySpace",
    "StrategyVariable",
    "audit_uniformity",
    "bounded_strategy",
    "enumerate_partial",
    "outcomes",
    "start_set",
    "succ_by",
    "ReachableStrategy",
    "count_safe_strategies",
    "enumerate_reachable",
    "safe_strategies",
]
