"""Exact solver for the TV broadcaster-repacking problem."""

__version__ = "0.1.0"

from .model import (
    Constraint,
    Instance,
    OffsetProfile,
    StationChannel,
    Violation,
    check,
    cost,
    encode_k_coloring,
    normalize,
    offsets_of,
    restrict_channels,
    restrict_stations,
)
from .graph import (
    ConstraintGraph,
    GraphStats,
    GraphView,
    InterferenceGraph,
    augment_within_components,
    build_constraint_graph,
    build_interference_graph,
    components,
    interference_subgraph,
    stats,
)
from .mis import MisResult, solve_mis
from .preprocess import ComponentPlan, PeelResult, early_infeasible, extend, peel_underconstrained, plan_components
from .solver import SolveReport, combine, feasibility, optimize

__all__ = [
    "ComponentPlan",
    "Constraint",
    "ConstraintGraph",
    "GraphStats",
    "GraphView",
    "Instance",
    "InterferenceGraph",
    "MisResult",
    "OffsetProfile",
    "PeelResult",
    "SolveReport",
    "StationChannel",
    "Violation",
    "augment_within_components",
    "build_constraint_graph",
    "build_interference_graph",
    "check",
    "combine",
    "components",
    "cost",
    "early_infeasible",
    "encode_k_coloring",
    "extend",
    "feasibility",
    "interference_subgraph",
    "normalize",
    "offsets_of",
    "optimize",
    "peel_underconstrained",
    "plan_components",
    "restrict_channels",
    "restrict_stations",
    "solve_mis",
    "stats",
]
