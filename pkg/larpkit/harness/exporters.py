"""JSON exporters for routes, decomposition trees and routing networks."""
import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

from larpkit.analysis.route_metrics import Route, RouteMetrics
from larpkit.errors import ArtifactWriteError
from larpkit.planning.decomposition import QuadNode, tree_to_dict
from larpkit.planning.network import RoutingGraph
from larpkit.utils.logger import setup_logger

logger = setup_logger(__name__)


def _write_json(payload: Dict[str, Any], path: Union[str, Path], label: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise ArtifactWriteError(f"Could not write {label} to {path}: {exc}") from exc
    logger.info(f"Wrote {label} to {path}")
    return path


def route_payload(route: Route, metrics: Optional[RouteMetrics] = None) -> Dict[str, Any]:
    return {
        "points": route.to_list(),
        "metrics": metrics.to_dict() if metrics is not None else {},
    }


def write_route_json(route: Route, metrics: Optional[RouteMetrics],
                     path: Union[str, Path]) -> Path:
    """Write {"points": [[x, y], ...], "metrics": {...}}."""
    return _write_json(route_payload(route, metrics), path, "route")


def write_tree_json(root: QuadNode, path: Union[str, Path]) -> Path:
    return _write_json(tree_to_dict(root), path, "quad tree")


def write_graph_json(graph: RoutingGraph, path: Union[str, Path]) -> Path:
    return _write_json(graph.to_dict(), path, "routing network")
