"""
Route planners: quad-tree decomposition, routing network search and the
force-following baselines.
"""
from larpkit.planning.baselines import (
    BaselinePlanner,
    PlannerKind,
    PlannerParams,
    Termination,
    TraceResult,
)
from larpkit.planning.decomposition import (
    CellDecomposer,
    DecompositionParams,
    QuadNode,
    ZoneConfig,
)
from larpkit.planning.larp_planner import LarpPlanner, LarpResult
from larpkit.planning.network import RoutingGraph, SearchConfig, build_network, find_route

__all__ = [
    "BaselinePlanner",
    "CellDecomposer",
    "DecompositionParams",
    "LarpPlanner",
    "LarpResult",
    "PlannerKind",
    "PlannerParams",
    "QuadNode",
    "RoutingGraph",
    "SearchConfig",
    "Termination",
    "TraceResult",
    "ZoneConfig",
    "build_network",
    "find_route",
]
