"""
SVG rendering of a field, its decomposition, the routing network and routes.

Every layer carries a stable SVG group id so plots can be inspected or
post-processed: ``potential-raster``, ``cell-<i>`` per leaf, ``network-edges``,
``route-<planner>``, ``start-marker`` and ``goal-marker``.
"""
from pathlib import Path
from typing import Dict, Optional, Union

import matplotlib
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure
from matplotlib.lines import Line2D
from matplotlib.patches import Rectangle

from larpkit.analysis.route_metrics import Route
from larpkit.errors import ArtifactWriteError
from larpkit.field.potential_field import PotentialField
from larpkit.harness.scenario import Scenario
from larpkit.planning.decomposition import QuadNode, leaves
from larpkit.planning.network import RoutingGraph
from larpkit.utils.logger import setup_logger

ROUTE_COLORS = {
    "Larp": "#2ca02c",
    "PM": "#1f77b4",
    "APF": "#ff7f0e",
    "APF*": "#9467bd",
    "M-APF": "#17becf",
}
DEFAULT_ROUTE_COLOR = "#e377c2"

_SVG_RC = {
    "path.simplify": False,
    "svg.hashsalt": "larpkit",
    "svg.fonttype": "none",
}


class FieldPlotter:
    """Renders scenario artifacts to SVG."""

    def __init__(self, resolution: int = 256, colormap: str = "magma"):
        """
        Initialize the plotter.

        Args:
            resolution: Potential samples per axis for the heat raster
            colormap: Matplotlib colormap name
        """
        if resolution < 1:
            raise ValueError("Raster resolution must be at least 1")
        self.resolution = resolution
        self.colormap = colormap
        self.logger = setup_logger(__name__)

    def render(self, scenario: Scenario, field: PotentialField, path: Union[str, Path],
               tree: Optional[QuadNode] = None, graph: Optional[RoutingGraph] = None,
               routes: Optional[Dict[str, Route]] = None) -> Path:
        """
        Draw the scenario and write an SVG file.

        Args:
            scenario: Scenario providing field extent, start and goal
            field: Potential field for the heat raster
            path: Output SVG path
            tree: Decomposition whose leaves are outlined
            graph: Routing network whose edges are drawn
            routes: Routes keyed by planner name

        Returns:
            Path of the written file

        Raises:
            ArtifactWriteError: If the file cannot be written
        """
        path = Path(path)
        half = scenario.field.size / 2.0
        cx, cy = scenario.field.center
        bounds = (cx - half, cy - half, cx + half, cy + half)

        with matplotlib.rc_context(_SVG_RC):
            fig = Figure(figsize=(7, 7))
            ax = fig.add_subplot()
            _, _, grid = field.potential_grid(bounds, self.resolution)
            extent = (bounds[0], bounds[2], bounds[1], bounds[3])
            raster = ax.imshow(grid, origin="lower", extent=extent,
                               cmap=self.colormap, vmin=0.0, vmax=1.0, interpolation="nearest")
            raster.set_gid("potential-raster")
            fig.colorbar(raster, ax=ax, label="potential")

            if tree is not None:
                for index, cell in enumerate(leaves(tree)):
                    xmin, ymin, _, _ = cell.bounds
                    outline = Rectangle((xmin, ymin), cell.size, cell.size, fill=False,
                                        edgecolor="white", linewidth=0.3, alpha=0.6)
                    outline.set_gid(f"cell-{index}")
                    ax.add_patch(outline)

            if graph is not None and graph.edges:
                segments = [
                    [graph.nodes[edge.a].center, graph.nodes[edge.b].center] for edge in graph.edges
                ]
                edges = LineCollection(segments, colors="#7fdbff", linewidths=0.3, alpha=0.7)
                edges.set_gid("network-edges")
                ax.add_collection(edges)

            for name, route in (routes or {}).items():
                points = route.points
                color = ROUTE_COLORS.get(name, DEFAULT_ROUTE_COLOR)
                (line,) = ax.plot(points[:, 0], points[:, 1], color=color, linewidth=1.2, label=name)
                line.set_gid(f"route-{name}")

            (start,) = ax.plot([scenario.start[0]], [scenario.start[1]], marker="o", color="red",
                               markersize=7, linestyle="none", label="start")
            start.set_gid("start-marker")
            (goal,) = ax.plot([scenario.goal[0]], [scenario.goal[1]], marker="*", color="#00e000",
                              markersize=10, linestyle="none", label="goal")
            goal.set_gid("goal-marker")

            ax.set_xlim(bounds[0], bounds[2])
            ax.set_ylim(bounds[1], bounds[3])
            ax.set_aspect("equal")
            ax.set_title(scenario.name)
            ax.set_xlabel("x [m]")
            ax.set_ylabel("y [m]")
            if routes:
                handles = [
                    Line2D([], [], color=ROUTE_COLORS.get(name, DEFAULT_ROUTE_COLOR), label=name)
                    for name in routes
                ]
                ax.legend(handles=handles, loc="upper right", fontsize="small")

            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                fig.savefig(path, format="svg", metadata={"Date": None})
            except OSError as exc:
                raise ArtifactWriteError(f"Could not write plot to {path}: {exc}") from exc

        self.logger.info(f"Plot written to {path}")
        return path


def render_plot(scenario: Scenario, field: PotentialField, path: Union[str, Path],
                tree: Optional[QuadNode] = None, graph: Optional[RoutingGraph] = None,
                routes: Optional[Dict[str, Route]] = None, resolution: int = 256,
                colormap: str = "magma") -> Path:
    return FieldPlotter(resolution, colormap).render(scenario, field, path, tree, graph, routes)
