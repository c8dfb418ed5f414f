"""
Route safety metrics.

A route is a line string. Its safety is measured by the line integral of the
field potential along it (route area), its length, their ratio (average
potential), the highest sampled potential, and whether it ends near the goal.
All potential-based metrics share one set of quadrature samples per segment.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

DEFAULT_MAX_STEP = 0.05
GOAL_TOLERANCE_SQ = 2.5
SAFETY_THRESHOLD = 0.35

ArrayLike = Union[Sequence[Sequence[float]], np.ndarray]


class Route:
    """Ordered line string of 2D points."""

    def __init__(self, points: Sequence[Sequence[float]]):
        pts = np.array(points, dtype=float)
        if pts.size == 0:
            raise ValueError("A route needs at least one point")
        pts = pts.reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise ValueError("Route points must be finite")
        pts.setflags(write=False)
        self._points = pts

    @property
    def points(self) -> np.ndarray:
        return self._points

    def __len__(self) -> int:
        return self._points.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Route):
            return NotImplemented
        return bool(np.array_equal(self._points, other._points))

    def __repr__(self) -> str:
        return f"Route({len(self)} points)"

    @property
    def last(self) -> np.ndarray:
        return self._points[-1]

    def reversed(self) -> "Route":
        return Route(self._points[::-1])

    def to_list(self) -> List[List[float]]:
        return self._points.tolist()


@dataclass(frozen=True)
class RouteMetrics:
    route_area: float
    route_distance: float
    average_potential: float
    highest_potential: float
    goal_found: bool

    def below_safety_threshold(self, threshold: float = SAFETY_THRESHOLD) -> bool:
        """Whether the average potential meets the empirical safety guidance."""
        return self.average_potential <= threshold

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _pair_samples(starts: np.ndarray, ends: np.ndarray,
                  max_step: float) -> List[Tuple[np.ndarray, float]]:
    """Sample points and spacing per segment; zero-length segments keep one point."""
    if max_step <= 0:
        raise ValueError(f"max_step must be positive, got {max_step}")
    samples = []
    for a, b in zip(starts, ends):
        length = float(np.hypot(*(b - a)))
        if length == 0.0:
            samples.append((a[None, :], 0.0))
            continue
        count = math.ceil(length / max_step)
        t = np.linspace(0.0, 1.0, count + 1)
        samples.append((a + t[:, None] * (b - a), length / count))
    return samples


def _segment_samples(route: Route, max_step: float) -> List[Tuple[np.ndarray, float]]:
    pts = route.points
    if len(pts) == 1:
        if max_step <= 0:
            raise ValueError(f"max_step must be positive, got {max_step}")
        return [(pts[:1], 0.0)]
    return _pair_samples(pts[:-1], pts[1:], max_step)


def _integrate(field, samples: List[Tuple[np.ndarray, float]]) -> Tuple[np.ndarray, float]:
    """Per-segment trapezoid areas and the highest sampled potential."""
    points = np.concatenate([s for s, _ in samples])
    sigma = np.atleast_1d(field.potential(points))
    areas = np.zeros(len(samples))
    offset = 0
    for index, (segment, dx) in enumerate(samples):
        values = sigma[offset:offset + len(segment)]
        offset += len(segment)
        if dx > 0.0:
            areas[index] = integrate.trapezoid(values, dx=dx)
    return areas, float(sigma.max())


def segment_areas(starts: ArrayLike, ends: ArrayLike, field,
                  max_step: float = DEFAULT_MAX_STEP) -> np.ndarray:
    """
    Line integral of σ over each segment starts[i] → ends[i].

    Uses the same quadrature as route_area, so the area of a route equals the
    sum of the areas of its segments.

    Args:
        starts: Segment start points of shape (n, 2)
        ends: Segment end points of shape (n, 2)
        field: Object exposing a batched potential(points)
        max_step: Largest quadrature spacing in meters

    Returns:
        Array of n areas
    """
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    ends = np.asarray(ends, dtype=float).reshape(-1, 2)
    if starts.shape != ends.shape:
        raise ValueError(f"Got {len(starts)} segment starts but {len(ends)} ends")
    if not len(starts):
        return np.zeros(0)
    return _integrate(field, _pair_samples(starts, ends, max_step))[0]


def route_distance(route: Route) -> float:
    """Sum of Euclidean segment lengths."""
    if len(route) < 2:
        return 0.0
    return float(np.sum(np.hypot(*np.diff(route.points, axis=0).T)))


def route_area(route: Route, field, max_step: float = DEFAULT_MAX_STEP) -> float:
    """Composite-trapezoid line integral of σ along the route."""
    return float(np.sum(_integrate(field, _segment_samples(route, max_step))[0]))


def route_average(route: Route, field, max_step: float = DEFAULT_MAX_STEP) -> float:
    """Route area over route distance, 0 for a zero-length route."""
    distance = route_distance(route)
    if distance == 0.0:
        return 0.0
    return route_area(route, field, max_step) / distance


def highest_potential(route: Route, field, max_step: float = DEFAULT_MAX_STEP) -> float:
    return _integrate(field, _segment_samples(route, max_step))[1]


def goal_found(route: Route, goal: Sequence[float],
               tolerance_sq: float = GOAL_TOLERANCE_SQ) -> bool:
    """Whether the last route point is within squared distance tolerance_sq of goal."""
    delta = route.last - np.asarray(goal, dtype=float)
    return bool(delta[0] * delta[0] + delta[1] * delta[1] <= tolerance_sq)


def evaluate_route(route: Route, field, goal: Sequence[float],
                   max_step: float = DEFAULT_MAX_STEP,
                   goal_tolerance_sq: float = GOAL_TOLERANCE_SQ) -> RouteMetrics:
    """
    Compute every route metric from one set of quadrature samples.

    Args:
        route: Route to meter
        field: Object exposing a batched potential(points)
        goal: Goal location for the goal-found test
        max_step: Largest quadrature spacing in meters
        goal_tolerance_sq: Squared goal radius

    Returns:
        RouteMetrics
    """
    areas, highest = _integrate(field, _segment_samples(route, max_step))
    area = float(np.sum(areas))
    distance = route_distance(route)
    return RouteMetrics(
        route_area=area,
        route_distance=distance,
        average_potential=area / distance if distance > 0.0 else 0.0,
        highest_potential=highest,
        goal_found=goal_found(route, goal, goal_tolerance_sq),
    )
