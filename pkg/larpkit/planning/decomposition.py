"""
Quad-tree cell decomposition of a square field into distance zones.

Cells near restrictions are subdivided down to n_min while cells whose zone
classification is uniform stop early, so the leaf set is fine where the field
changes and coarse where it does not. Every node carries the upper-bound
potential of its zone, which the routing network uses as the cell's safety cost.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from larpkit.errors import DecompositionError
from larpkit.field.units import ArrayLike, FieldUnit
from larpkit.utils.logger import setup_logger

DEFAULT_BOUNDARIES = (0.105, 0.357, 0.693, 1.386, 2.996)
DEFAULT_MAX_DEPTH = 32

# Child order used everywhere: NW, NE, SW, SE
NW, NE, SW, SE = range(4)
_CHILD_OFFSETS = ((-1.0, 1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0))


@dataclass(frozen=True)
class ZoneConfig:
    """
    Ascending scaled-squared-distance boundaries that bin units into zones.

    Zone 0 means the cell contains the restriction, zones 1..len(boundaries)+1
    come from binning d̃², and the highest index is the farthest zone.
    """

    boundaries: Tuple[float, ...] = DEFAULT_BOUNDARIES

    def __post_init__(self):
        bds = tuple(float(b) for b in self.boundaries)
        if not bds:
            raise ValueError("zone boundaries must be non-empty")
        if any(b <= 0 or not math.isfinite(b) for b in bds):
            raise ValueError("zone boundaries must be finite and positive")
        if any(b2 <= b1 for b1, b2 in zip(bds, bds[1:])):
            raise ValueError("zone boundaries must be strictly ascending")
        object.__setattr__(self, "boundaries", bds)

    @property
    def farthest_zone(self) -> int:
        return len(self.boundaries) + 1

    @property
    def zone_count(self) -> int:
        return len(self.boundaries) + 2

    def bin(self, scaled_squared_distance: float) -> int:
        """Zone for a unit outside the cell: 1 + number of boundaries ≤ d̃²."""
        return 1 + bisect_right(self.boundaries, scaled_squared_distance)

    def lower_edge(self, zone: int) -> float:
        """Smallest d̃² a unit in this zone can have."""
        if zone <= 1:
            return 0.0
        return self.boundaries[min(zone - 2, len(self.boundaries) - 1)]

    def upper_potential(self, zone: int) -> float:
        """Largest potential a unit in this zone can produce."""
        return math.exp(-self.lower_edge(zone))


@dataclass(frozen=True)
class DecompositionParams:
    """Cell size limits and the square field being decomposed."""

    n_min: float
    n_max: float
    field_center: Tuple[float, float]
    field_size: float

    def __post_init__(self):
        center = tuple(float(c) for c in self.field_center)
        if len(center) != 2:
            raise ValueError("field_center must be a 2D point")
        object.__setattr__(self, "field_center", center)
        if not 0 < self.n_min <= self.n_max <= self.field_size:
            raise ValueError(
                f"cell sizes must satisfy 0 < n_min <= n_max <= field_size, "
                f"got n_min={self.n_min}, n_max={self.n_max}, field_size={self.field_size}"
            )

    @classmethod
    def for_field(cls, center: ArrayLike, size: float, n_min: Optional[float] = None,
                  n_max: Optional[float] = None, n_min_fraction: float = 1 / 64,
                  n_max_fraction: float = 1 / 8) -> "DecompositionParams":
        """Fill missing cell sizes from fractions of the field size."""
        return cls(
            n_min=float(n_min) if n_min is not None else size * n_min_fraction,
            n_max=float(n_max) if n_max is not None else size * n_max_fraction,
            field_center=tuple(center),
            field_size=float(size),
        )

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        half = self.field_size / 2.0
        cx, cy = self.field_center
        return (cx - half, cy - half, cx + half, cy + half)


@dataclass(frozen=True)
class QuadNode:
    """Square cell of the decomposition; children are ordered NW, NE, SW, SE."""

    center: Tuple[float, float]
    size: float
    zone: int
    zone_upper_potential: float
    children: Optional[Tuple["QuadNode", "QuadNode", "QuadNode", "QuadNode"]] = field(
        default=None, repr=False)

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        half = self.size / 2.0
        return (self.center[0] - half, self.center[1] - half,
                self.center[0] + half, self.center[1] + half)

    def contains(self, x: ArrayLike, tol: float = 0.0) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return (xmin - tol <= x[0] <= xmax + tol) and (ymin - tol <= x[1] <= ymax + tol)

    def child_centers(self) -> List[Tuple[float, float]]:
        return child_centers(self.center, self.size)


def child_centers(center: Tuple[float, float], size: float) -> List[Tuple[float, float]]:
    quarter = size / 4.0
    return [(center[0] + dx * quarter, center[1] + dy * quarter) for dx, dy in _CHILD_OFFSETS]


def square_bounds(xmin: float, ymin: float, xmax: float,
                  ymax: float) -> Tuple[Tuple[float, float], float]:
    """
    Square bounding box of a rectangular extent, padded symmetrically.

    Returns:
        Tuple of (center, side length)
    """
    if xmax <= xmin or ymax <= ymin:
        raise ValueError("field bounds must have positive width and height")
    center = ((xmin + xmax) / 2.0, (ymin + ymax) / 2.0)
    return center, float(max(xmax - xmin, ymax - ymin))


def _zones_and_distances(x: Tuple[float, float], n: float, units: Sequence[FieldUnit],
                         cfg: ZoneConfig) -> Tuple[List[int], List[float]]:
    containment = n * n / 2.0
    zones, squared = [], []
    for unit in units:
        evaluation = unit.evaluate(x)
        d2 = evaluation.squared_distance
        squared.append(d2)
        if d2 <= containment:
            zones.append(0)
        else:
            zones.append(cfg.bin(evaluation.scaled_squared_distance))
    return zones, squared


def approx_distance_zones(x: ArrayLike, n: float, units: Sequence[FieldUnit],
                          cfg: ZoneConfig) -> List[int]:
    """
    Classify each unit relative to a cell centered at x with side n.

    Args:
        x: Cell center
        n: Cell side length in meters
        units: Candidate units
        cfg: Zone boundaries

    Returns:
        Zone per unit, aligned with the input order
    """
    if n <= 0:
        raise ValueError("cell side must be positive")
    return _zones_and_distances(tuple(x), n, units, cfg)[0]


def uniformity_probe(quad: QuadNode, same_zone_units: Sequence[FieldUnit],
                     cfg: ZoneConfig) -> bool:
    """
    Check that the cell extremity nearest each unit stays in the cell's zone.

    The probe point for unit u is c⁻ = x - (n/√2)·x̄_u(x)/‖x̄_u(x)‖, the point of
    the circumscribed circle closest to u. The cell is uniform when d̃²_u(c⁻)
    is at least the zone's lower edge for every u. A unit touching the center
    (zero repulsion vector) fails the probe.
    """
    if quad.zone == 0:
        return False
    lower = cfg.lower_edge(quad.zone)
    reach = quad.size / math.sqrt(2.0)
    center = np.asarray(quad.center, dtype=float)
    for unit in same_zone_units:
        direction = np.asarray(unit.repulsion_vector(center))
        norm = float(np.hypot(direction[0], direction[1]))
        if norm == 0.0:
            return False
        probe = center - reach * direction / norm
        if unit.scaled_squared_distance(probe) < lower:
            return False
    return True


class CellDecomposer:
    """Builds quad trees over a field of restriction units."""

    def __init__(self, params: DecompositionParams, zone_config: Optional[ZoneConfig] = None,
                 max_depth: int = DEFAULT_MAX_DEPTH):
        """
        Initialize the decomposer.

        Args:
            params: Cell size limits and field geometry
            zone_config: Zone boundaries, defaults to the standard five
            max_depth: Recursion cap; exceeding it raises DecompositionError
        """
        self.params = params
        self.zone_config = zone_config or ZoneConfig()
        self.max_depth = max_depth
        self.logger = setup_logger(__name__)

    def build(self, units: Sequence[FieldUnit]) -> QuadNode:
        """
        Decompose the whole field.

        Args:
            units: All units in the field

        Returns:
            Root QuadNode

        Raises:
            DecompositionError: If subdivision exceeds max_depth levels
        """
        root = self._build(self.params.field_center, self.params.field_size, list(units), 0)
        self.logger.info(
            f"Built quad tree: {len(leaves(root))} leaves, depth {tree_depth(root)}, "
            f"{len(units)} units"
        )
        return root

    def _build(self, x: Tuple[float, float], n: float, units: List[FieldUnit],
               depth: int) -> QuadNode:
        if depth > self.max_depth:
            raise DecompositionError(
                f"Quad tree exceeded {self.max_depth} levels at cell {x} (side {n}); "
                f"check n_min={self.params.n_min}"
            )
        cfg = self.zone_config
        farthest = cfg.farthest_zone
        zones, squared = _zones_and_distances(x, n, units, cfg)
        zone = min(zones) if zones else farthest
        quad = QuadNode(center=x, size=n, zone=zone,
                        zone_upper_potential=cfg.upper_potential(zone))

        if n <= self.params.n_max:
            if n <= self.params.n_min or zone == farthest:
                return quad
            if zone > 0:
                same_zone = [u for u, z in zip(units, zones) if z == zone]
                if uniformity_probe(quad, same_zone, cfg):
                    return quad

        remaining = [
            unit for unit, z, d2 in zip(units, zones, squared)
            if z != farthest or not self._stays_farthest(unit, d2, n)
        ]
        self.logger.debug(
            f"Subdividing cell {x} side {n} zone {zone}: {len(remaining)}/{len(units)} units kept"
        )
        children = tuple(
            self._build(center, n / 2.0, remaining, depth + 1) for center in child_centers(x, n)
        )
        return replace(quad, children=children)

    def _stays_farthest(self, unit: FieldUnit, d2: float, n: float) -> bool:
        # lower bound of d̃² anywhere in the cell via d̃² ≥ d² / λ_max; the unit must
        # also stay outside the containment circle of every child
        gap = max(math.sqrt(d2) - n / math.sqrt(2.0), 0.0)
        if gap <= n / (2.0 * math.sqrt(2.0)):
            return False
        return gap * gap / unit.max_eigenvalue >= self.zone_config.boundaries[-1]


def leaves(root: QuadNode) -> List[QuadNode]:
    """All leaves in depth-first NW, NE, SW, SE order."""
    result = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            result.append(node)
        else:
            stack.extend(reversed(node.children))
    return result


def tree_depth(root: QuadNode) -> int:
    if root.is_leaf:
        return 0
    return 1 + max(tree_depth(child) for child in root.children)


def locate_leaf(root: QuadNode, x: ArrayLike) -> QuadNode:
    """
    Leaf containing a point; points on a split line go to the east/north child.

    Raises:
        ValueError: If x lies outside the root cell
    """
    if not root.contains(x, tol=1e-9):
        raise ValueError(f"Point {tuple(x)} lies outside the field")
    node = root
    while not node.is_leaf:
        east = x[0] >= node.center[0]
        north = x[1] >= node.center[1]
        if north:
            node = node.children[NE if east else NW]
        else:
            node = node.children[SE if east else SW]
    return node


def tree_to_dict(root: QuadNode) -> Dict[str, Any]:
    """Nested {center, size, zone, zone_upper_potential, children} export."""
    data: Dict[str, Any] = {
        "center": list(root.center),
        "size": root.size,
        "zone": root.zone,
        "zone_upper_potential": root.zone_upper_potential,
    }
    data["children"] = None if root.is_leaf else [tree_to_dict(c) for c in root.children]
    return data
