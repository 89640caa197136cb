"""Approximate and exact rooted min-max cycle covers for multi-depot routing."""

from .cyclegen import Cycle, CycleCover, cover_from_forest
from .decompose import DecomposedForest, decompose_forest, split_tree
from .errors import (
    CoverError,
    DisconnectedGraph,
    InstanceTooLarge,
    NoFeasibleSolution,
    ParseError,
    PreconditionViolation,
    ValidationError,
)
from .forest import (
    ConnectorEdgeSet,
    ForestCandidate,
    RootedForest,
    RootedTree,
    build_connector_edges,
    build_rooted_spanning_forest,
    enumerate_candidates,
)
from .instance import (
    MetricInstance,
    RawSiteGraph,
    close_instance,
    euclidean_instance,
    line_instance,
    load_instance,
    metric_closure,
    validate_instance,
)
from .oracle import ExactSolution, exact_solve, exact_tsp_cycle
from .planner import SearchIteration, SearchTrace, Solution, solve, validate_cover

__version__ = "0.1.0"
