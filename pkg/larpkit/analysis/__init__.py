"""
Route safety metrics.
"""
from larpkit.analysis.route_metrics import (
    Route,
    RouteMetrics,
    evaluate_route,
    goal_found,
    highest_potential,
    route_area,
    route_average,
    route_distance,
    segment_areas,
)

__all__ = [
    "Route",
    "RouteMetrics",
    "evaluate_route",
    "goal_found",
    "highest_potential",
    "route_area",
    "route_average",
    "route_distance",
    "segment_areas",
]
