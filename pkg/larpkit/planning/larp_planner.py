"""
Larp route planning: cell decomposition, routing network, safety-weighted search.
"""
from dataclasses import dataclass
from typing import Optional

from larpkit.analysis.route_metrics import Route
from larpkit.field.potential_field import PotentialField
from larpkit.field.units import ArrayLike
from larpkit.planning.decomposition import (
    DEFAULT_MAX_DEPTH,
    CellDecomposer,
    DecompositionParams,
    QuadNode,
    ZoneConfig,
)
from larpkit.planning.network import RoutingGraph, SearchConfig, SearchResult, build_network, search
from larpkit.utils.logger import setup_logger


@dataclass
class LarpResult:
    """Route plus the tree and network it was searched on."""

    route: Route
    tree: QuadNode
    graph: RoutingGraph
    search: SearchResult


class LarpPlanner:
    """Plans routes over the quad-tree routing network of a field."""

    def __init__(self, decomposition: DecompositionParams,
                 zone_config: Optional[ZoneConfig] = None,
                 search_config: Optional[SearchConfig] = None,
                 max_depth: int = DEFAULT_MAX_DEPTH):
        self.decomposer = CellDecomposer(decomposition, zone_config, max_depth)
        self.search_config = search_config or SearchConfig()
        self.logger = setup_logger(__name__)

    def build(self, field: PotentialField):
        """Decompose the field and build its routing network."""
        tree = self.decomposer.build(field.units)
        graph = build_network(tree, self.search_config, field)
        return tree, graph

    def plan(self, field: PotentialField, start: ArrayLike, goal: ArrayLike) -> LarpResult:
        """
        Plan a route from start to goal.

        Raises:
            DecompositionError: If the tree exceeds the depth cap
            OutOfFieldError: If an endpoint is outside the field or blocked
            NoPathError: If start and goal are disconnected
        """
        tree, graph = self.build(field)
        result = search(graph, start, goal, self.search_config)
        self.logger.info(
            f"Larp route: {len(result.route)} points through {len(result.node_path)} cells"
        )
        return LarpResult(route=result.route, tree=tree, graph=graph, search=result)
