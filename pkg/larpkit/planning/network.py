"""
Routing network over quad-tree leaves and the safety-weighted A* search.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from larpkit.analysis.route_metrics import DEFAULT_MAX_STEP, Route, segment_areas
from larpkit.errors import BlockedEndpointError, NoPathError, OutOfFieldError
from larpkit.field.units import ArrayLike
from larpkit.planning.decomposition import NE, NW, SE, SW, QuadNode, leaves, locate_leaf
from larpkit.utils.logger import setup_logger

logger = setup_logger(__name__)

ADJACENCY_EPS = 1e-9
BOUNDS_TOLERANCE = 1e-9
COST_MODELS = ("integrated", "zone")

# Children touching each side of a cell
_EAST = (NE, SE)
_WEST = (NW, SW)
_NORTH = (NW, NE)
_SOUTH = (SW, SE)


@dataclass(frozen=True)
class SearchConfig:
    """
    Search weighting and connectivity options.

    Two step costs are available. "zone" charges s(q_b)·d with the scale
    s(q) = exp(β·σ_ub(q)) of the entered cell. "integrated" charges
    d + (e^β - 1)·A, where A is the line integral of σ along the step, so the
    premium over plain distance is the chord of exp(β·σ) between σ = 0 and
    σ = 1. Its route area never grows when β grows.

    Attributes:
        beta: Safety weight β ≥ 0
        corner_adjacency: Also connect cells that touch at a single corner point
        zone_block_threshold: Nodes with zone below this value are untraversable
        cost_model: "integrated" or "zone"
        sample_step: Quadrature spacing for the integrated step areas
    """

    beta: float = 5.0
    corner_adjacency: bool = False
    zone_block_threshold: Optional[int] = None
    cost_model: str = "integrated"
    sample_step: float = DEFAULT_MAX_STEP

    def __post_init__(self):
        if not math.isfinite(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be finite and non-negative, got {self.beta}")
        if self.zone_block_threshold is not None and self.zone_block_threshold < 0:
            raise ValueError("zone_block_threshold must be non-negative")
        if self.cost_model not in COST_MODELS:
            raise ValueError(
                f"cost_model must be one of {', '.join(COST_MODELS)}, got {self.cost_model!r}"
            )
        if not self.sample_step > 0:
            raise ValueError(f"sample_step must be positive, got {self.sample_step}")

    def scale(self, sigma_ub: float) -> float:
        return math.exp(self.beta * sigma_ub)

    @property
    def safety_gain(self) -> float:
        """Weight e^β - 1 of the potential integral in the integrated cost."""
        return math.expm1(self.beta)


@dataclass(frozen=True)
class NetNode:
    id: int
    center: Tuple[float, float]
    sigma_ub: float
    zone: int
    size: float
    cell: QuadNode = field(repr=False, compare=False)


@dataclass(frozen=True)
class NetEdge:
    """
    Undirected edge with a < b.

    length is the center-to-center distance and area the line integral of σ
    along it, or None when the network was built without a field.
    """

    a: int
    b: int
    length: float
    area: Optional[float] = None


class RoutingGraph:
    """Leaf cells as nodes, boundary-sharing cells as edges."""

    def __init__(self, root: QuadNode, nodes: List[NetNode], edges: List[NetEdge]):
        self.root = root
        self.nodes = nodes
        self.edges = edges
        self._adjacency: Dict[int, List[int]] = {node.id: [] for node in nodes}
        for edge in edges:
            self._adjacency[edge.a].append(edge.b)
            self._adjacency[edge.b].append(edge.a)
        for neighbors in self._adjacency.values():
            neighbors.sort()
        self._by_cell = {id(node.cell): node for node in nodes}
        self._by_pair = {(edge.a, edge.b): edge for edge in edges}

    def __len__(self) -> int:
        return len(self.nodes)

    def neighbors(self, node_id: int) -> List[int]:
        return self._adjacency[node_id]

    def node_for_cell(self, cell: QuadNode) -> NetNode:
        return self._by_cell[id(cell)]

    def edge(self, a: int, b: int) -> NetEdge:
        return self._by_pair[(min(a, b), max(a, b))]

    def edge_set(self) -> Set[Tuple[int, int]]:
        return {(edge.a, edge.b) for edge in self.edges}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": [
                {"id": node.id, "center": list(node.center), "sigma_ub": node.sigma_ub}
                for node in self.nodes
            ],
            "edges": [[edge.a, edge.b] for edge in self.edges],
        }


def _side_leaves(node: QuadNode, side: Tuple[int, int]) -> List[QuadNode]:
    if node.is_leaf:
        return [node]
    result = []
    for index in side:
        result.extend(_side_leaves(node.children[index], side))
    return result


def _corner_leaf(node: QuadNode, corner: int) -> QuadNode:
    while not node.is_leaf:
        node = node.children[corner]
    return node


def _interval(cell: QuadNode, axis: int) -> Tuple[float, float]:
    half = cell.size / 2.0
    return cell.center[axis] - half, cell.center[axis] + half


def _match_across(first: List[QuadNode], second: List[QuadNode], axis: int,
                  corner_adjacency: bool, pairs: Set[Tuple[int, int]],
                  ids: Dict[int, int]) -> None:
    """Pair leaves on either side of a shared edge whose extents along axis meet."""
    for a in first:
        a_lo, a_hi = _interval(a, axis)
        for b in second:
            b_lo, b_hi = _interval(b, axis)
            overlap = min(a_hi, b_hi) - max(a_lo, b_lo)
            if overlap > ADJACENCY_EPS or (corner_adjacency and abs(overlap) <= ADJACENCY_EPS):
                i, j = ids[id(a)], ids[id(b)]
                pairs.add((min(i, j), max(i, j)))


def _collect_adjacency(node: QuadNode, corner_adjacency: bool,
                       pairs: Set[Tuple[int, int]], ids: Dict[int, int]) -> None:
    stack = [node]
    while stack:
        current = stack.pop()
        if current.is_leaf:
            continue
        nw, ne, sw, se = current.children
        # vertical split line: compare extents along y
        _match_across(_side_leaves(nw, _EAST), _side_leaves(ne, _WEST), 1,
                      corner_adjacency, pairs, ids)
        _match_across(_side_leaves(sw, _EAST), _side_leaves(se, _WEST), 1,
                      corner_adjacency, pairs, ids)
        # horizontal split line: compare extents along x
        _match_across(_side_leaves(nw, _SOUTH), _side_leaves(sw, _NORTH), 0,
                      corner_adjacency, pairs, ids)
        _match_across(_side_leaves(ne, _SOUTH), _side_leaves(se, _NORTH), 0,
                      corner_adjacency, pairs, ids)
        if corner_adjacency:
            for first, second, c1, c2 in ((nw, se, SE, NW), (ne, sw, SW, NE)):
                i = ids[id(_corner_leaf(first, c1))]
                j = ids[id(_corner_leaf(second, c2))]
                pairs.add((min(i, j), max(i, j)))
        stack.extend(current.children)


def build_network(root: QuadNode, cfg: Optional[SearchConfig] = None,
                  field=None) -> RoutingGraph:
    """
    Build the routing network of a finished quad tree.

    Node ids follow the depth-first leaf order. Neighbors are collected per
    internal node by pairing the leaves that face each other across the two
    split lines, so every shared edge is visited once at its common ancestor.

    Args:
        root: Decomposition root
        cfg: Search options (corner adjacency, cost model)
        field: Potential field; with the integrated cost model every edge
            gets the line integral of σ between its cell centers

    Returns:
        RoutingGraph
    """
    cfg = cfg or SearchConfig()
    cells = leaves(root)
    ids = {id(cell): index for index, cell in enumerate(cells)}
    nodes = [
        NetNode(id=index, center=cell.center, sigma_ub=cell.zone_upper_potential,
                zone=cell.zone, size=cell.size, cell=cell)
        for index, cell in enumerate(cells)
    ]
    pairs: Set[Tuple[int, int]] = set()
    _collect_adjacency(root, cfg.corner_adjacency, pairs, ids)
    ordered = sorted(pairs)
    areas: List[Optional[float]] = [None] * len(ordered)
    if field is not None and cfg.cost_model == "integrated" and ordered:
        starts = np.array([nodes[i].center for i, _ in ordered], dtype=float)
        ends = np.array([nodes[j].center for _, j in ordered], dtype=float)
        areas = segment_areas(starts, ends, field, cfg.sample_step).tolist()
    edges = [
        NetEdge(a=i, b=j, length=_center_distance(nodes[i], nodes[j]), area=area)
        for (i, j), area in zip(ordered, areas)
    ]
    logger.info(f"Built routing network: {len(nodes)} nodes, {len(edges)} edges")
    return RoutingGraph(root, nodes, edges)


def _center_distance(q_a: NetNode, q_b: NetNode) -> float:
    return math.hypot(q_a.center[0] - q_b.center[0], q_a.center[1] - q_b.center[1])


def edge_cost(q_a: NetNode, q_b: NetNode, cfg: SearchConfig) -> float:
    """Directed cost s(q_b)·‖q_a.center - q_b.center‖."""
    return cfg.scale(q_b.sigma_ub) * _center_distance(q_a, q_b)


def step_cost(graph: RoutingGraph, a: int, b: int, cfg: SearchConfig) -> float:
    """
    Cost of moving from node a to node b under cfg.cost_model.

    Raises:
        ValueError: If the integrated model needs an edge area the network lacks
    """
    if cfg.cost_model == "zone":
        return edge_cost(graph.nodes[a], graph.nodes[b], cfg)
    edge = graph.edge(a, b)
    gain = cfg.safety_gain
    if gain == 0.0:
        return edge.length
    if edge.area is None:
        raise ValueError(
            "The integrated cost model needs edge areas; build the network with a field"
        )
    return edge.length + gain * edge.area


def route_cost(graph: RoutingGraph, node_path: Sequence[int], cfg: SearchConfig) -> float:
    """Summed step cost along a node path."""
    return sum(step_cost(graph, a, b, cfg) for a, b in zip(node_path, node_path[1:]))


@dataclass
class SearchResult:
    """
    Outcome of one network search.

    Attributes:
        route: [start, cell centers..., goal]
        node_path: Node ids from the start cell to the goal cell
        cost: Network cost of node_path
        expanded: Node ids in expansion order
        heuristics: Heuristic value of every expanded node
    """

    route: Route
    node_path: List[int]
    cost: float
    expanded: List[int] = field(default_factory=list)
    heuristics: Dict[int, float] = field(default_factory=dict)


def _check_inside(graph: RoutingGraph, point: np.ndarray, label: str) -> None:
    if not graph.root.contains(point, tol=BOUNDS_TOLERANCE):
        xmin, ymin, xmax, ymax = graph.root.bounds
        raise OutOfFieldError(
            f"{label} {tuple(point.tolist())} lies outside the field "
            f"[{xmin}, {xmax}] x [{ymin}, {ymax}]"
        )


def search(graph: RoutingGraph, start: ArrayLike, goal: ArrayLike,
           cfg: Optional[SearchConfig] = None) -> SearchResult:
    """
    Safety-weighted A* between the cells containing start and goal.

    The heuristic is the Euclidean distance from a cell center to the goal
    cell center. Every step costs at least its length, so it never
    overestimates the remaining cost.
    Open-set ties go to the smaller node id.

    Raises:
        OutOfFieldError: If start or goal is outside the field
        BlockedEndpointError: If start or goal lies in a zone-blocked cell
        NoPathError: If the goal cell is unreachable
        ValueError: If the integrated cost model meets an edge without an area
    """
    cfg = cfg or SearchConfig()
    start = np.asarray(start, dtype=float)
    goal = np.asarray(goal, dtype=float)
    _check_inside(graph, start, "Start")
    _check_inside(graph, goal, "Goal")

    if np.array_equal(start, goal):
        return SearchResult(route=Route([start, goal]), node_path=[], cost=0.0)

    source = graph.node_for_cell(locate_leaf(graph.root, start))
    target = graph.node_for_cell(locate_leaf(graph.root, goal))

    def blocked(node: NetNode) -> bool:
        return cfg.zone_block_threshold is not None and node.zone < cfg.zone_block_threshold

    for label, node in (("Start", source), ("Goal", target)):
        if blocked(node):
            raise BlockedEndpointError(
                f"{label} lies in cell {node.id} with zone {node.zone}, "
                f"below the block threshold {cfg.zone_block_threshold}"
            )

    def heuristic(node: NetNode) -> float:
        return _center_distance(node, target)

    g_cost = {source.id: 0.0}
    parent: Dict[int, int] = {}
    closed: Set[int] = set()
    expanded: List[int] = []
    heuristics: Dict[int, float] = {}
    open_heap = [(heuristic(source), source.id)]

    while open_heap:
        _, current_id = heapq.heappop(open_heap)
        if current_id in closed:
            continue
        closed.add(current_id)
        current = graph.nodes[current_id]
        expanded.append(current_id)
        heuristics[current_id] = heuristic(current)
        if current_id == target.id:
            break
        for neighbor_id in graph.neighbors(current_id):
            neighbor = graph.nodes[neighbor_id]
            if neighbor_id in closed or blocked(neighbor):
                continue
            tentative = g_cost[current_id] + step_cost(graph, current_id, neighbor_id, cfg)
            if tentative < g_cost.get(neighbor_id, math.inf):
                g_cost[neighbor_id] = tentative
                parent[neighbor_id] = current_id
                heapq.heappush(open_heap, (tentative + heuristic(neighbor), neighbor_id))

    if target.id not in closed:
        raise NoPathError(
            f"No route between cell {source.id} and cell {target.id}: "
            f"{len(expanded)} cells reachable from the start"
        )

    node_path = [target.id]
    while node_path[-1] != source.id:
        node_path.append(parent[node_path[-1]])
    node_path.reverse()

    points = [start] + [graph.nodes[i].center for i in node_path] + [goal]
    logger.info(
        f"Search finished: {len(expanded)} expansions, {len(node_path)} cells, "
        f"cost {g_cost[target.id]:.4f}"
    )
    return SearchResult(route=Route(points), node_path=node_path, cost=g_cost[target.id],
                        expanded=expanded, heuristics=heuristics)


def find_route(graph: RoutingGraph, start: ArrayLike, goal: ArrayLike,
               cfg: Optional[SearchConfig] = None) -> Route:
    """Route [start, c₁, …, c_k, goal] through the searched cell centers."""
    return search(graph, start, goal, cfg).route
