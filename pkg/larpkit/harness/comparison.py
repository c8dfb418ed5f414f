"""
Planner comparison over one scenario.

Runs Larp and the force-following baselines on a shared field, meters every
route with the same quadrature and collects one report row per planner.
"""
import io
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import pandas as pd
from joblib import Parallel, delayed

from larpkit.analysis.route_metrics import Route, RouteMetrics, evaluate_route
from larpkit.config.config_manager import PLANNER_NAMES, ConfigManager
from larpkit.errors import (
    ArtifactWriteError,
    DecompositionError,
    InvalidForceStateError,
    NoPathError,
    OutOfFieldError,
)
from larpkit.field.potential_field import PotentialField
from larpkit.harness.scenario import Scenario
from larpkit.planning.baselines import BaselinePlanner, PlannerKind, Termination
from larpkit.planning.decomposition import QuadNode
from larpkit.planning.larp_planner import LarpPlanner
from larpkit.planning.network import RoutingGraph
from larpkit.utils.logger import setup_logger

REPORT_COLUMNS = [
    "planner",
    "goal_found",
    "route_distance",
    "route_area",
    "average_potential",
    "highest_potential",
    "runtime_ms",
]

PLANNER_FAILURES = (NoPathError, OutOfFieldError, DecompositionError, InvalidForceStateError)


@dataclass
class ComparisonRow:
    """
    One planner's outcome.

    Attributes:
        planner: Planner name
        metrics: Metrics of the route (partial trace on failure)
        runtime_ms: Wall-clock planning time, informational only
        route: Metered route
        terminated_by: Trace termination for baselines, None for Larp
        error: Failure message when the planner could not finish
    """

    planner: str
    metrics: RouteMetrics
    runtime_ms: float
    route: Route
    terminated_by: Optional[Termination] = None
    error: Optional[str] = None


@dataclass
class ComparisonReport:
    scenario: str
    rows: List[ComparisonRow]
    tree: Optional[QuadNode] = None
    graph: Optional[RoutingGraph] = None

    def routes(self) -> Dict[str, Route]:
        return {row.planner: row.route for row in self.rows}

    def row(self, planner: str) -> ComparisonRow:
        for row in self.rows:
            if row.planner == planner:
                return row
        raise KeyError(planner)

    def to_dataframe(self, include_timing: bool = True) -> pd.DataFrame:
        """Report table in the fixed column order."""
        records = [
            {
                "planner": row.planner,
                "goal_found": "true" if row.metrics.goal_found else "false",
                "route_distance": row.metrics.route_distance,
                "route_area": row.metrics.route_area,
                "average_potential": row.metrics.average_potential,
                "highest_potential": row.metrics.highest_potential,
                "runtime_ms": row.runtime_ms,
            }
            for row in self.rows
        ]
        columns = REPORT_COLUMNS if include_timing else REPORT_COLUMNS[:-1]
        return pd.DataFrame(records, columns=REPORT_COLUMNS)[columns]


class ComparisonRunner:
    """Runs several planners on one scenario and builds the report."""

    def __init__(self, config: Optional[ConfigManager] = None):
        """
        Initialize the runner.

        Args:
            config: Configuration (metric sampling, parallelism, planner list)
        """
        self.config = config or ConfigManager()
        self.logger = setup_logger(__name__)
        self.max_step = self.config.get("metrics.max_step", 0.05)
        self.goal_tolerance_sq = self.config.get("metrics.goal_tolerance_sq", 2.5)
        self.n_jobs = self.config.get("comparison.n_jobs", 1)

    def run(self, scenario: Scenario, planners: Optional[Sequence[str]] = None,
            beta: Optional[float] = None) -> ComparisonReport:
        """
        Run the requested planners.

        Args:
            scenario: Default-filled scenario
            planners: Planner names, the configured list when None
            beta: Search safety weight overriding the scenario

        Returns:
            ComparisonReport with one row per planner, in request order

        Raises:
            ValueError: If the planner list is empty or names an unknown planner
        """
        if planners is None:
            planners = self.config.get("comparison.planners", PLANNER_NAMES)
        kinds = [PlannerKind.parse(name) for name in planners]
        if not kinds:
            raise ValueError("At least one planner is required")

        field_ = scenario.build_field()
        self.logger.info(
            f"Comparing {[k.value for k in kinds]} on scenario '{scenario.name}'"
        )
        outcomes = Parallel(n_jobs=self.n_jobs, prefer="threads")(
            delayed(self._run_planner)(kind, scenario, field_, beta) for kind in kinds
        )

        report = ComparisonReport(scenario=scenario.name, rows=[row for row, _ in outcomes])
        for _, artifacts in outcomes:
            if artifacts is not None:
                report.tree, report.graph = artifacts
        return report

    def _run_planner(self, kind: PlannerKind, scenario: Scenario, field_: PotentialField,
                     beta: Optional[float]):
        started = time.perf_counter()
        terminated_by = None
        error = None
        artifacts = None
        try:
            if kind is PlannerKind.LARP:
                planner = LarpPlanner(
                    scenario.decomposition_params(),
                    scenario.zone_config(),
                    scenario.search_config(beta),
                    max_depth=scenario.decomposition.max_depth or 32,
                )
                result = planner.plan(field_, scenario.start, scenario.goal)
                route = result.route
                artifacts = (result.tree, result.graph)
            else:
                trace = BaselinePlanner(kind, scenario.planner_params_for(kind.value)).follow(
                    scenario.start, scenario.goal, field_
                )
                route = trace.route
                terminated_by = trace.terminated_by
        except PLANNER_FAILURES as exc:
            error = str(exc)
            route = getattr(exc, "partial_route", None) or Route([scenario.start])
            self.logger.warning(f"{kind.value} failed on '{scenario.name}': {error}")
        runtime_ms = (time.perf_counter() - started) * 1000.0

        metrics = evaluate_route(route, field_, scenario.goal, self.max_step,
                                 self.goal_tolerance_sq)
        if error is not None:
            metrics = RouteMetrics(**{**metrics.to_dict(), "goal_found": False})
        self.logger.info(
            f"{kind.value}: goal_found={metrics.goal_found} distance={metrics.route_distance:.4f} "
            f"area={metrics.route_area:.4f} average={metrics.average_potential:.4f}"
        )
        row = ComparisonRow(planner=kind.value, metrics=metrics, runtime_ms=runtime_ms,
                            route=route, terminated_by=terminated_by, error=error)
        return row, artifacts


def run_comparison(scenario: Scenario, planners: Sequence[str],
                   config: Optional[ConfigManager] = None,
                   beta: Optional[float] = None) -> ComparisonReport:
    return ComparisonRunner(config).run(scenario, planners, beta)


def emit_report(report: ComparisonReport, path: Union[str, Path, None] = None,
                include_timing: bool = True) -> str:
    """
    Render the report as CSV with four decimals, optionally writing it.

    Args:
        report: Comparison report
        path: Output file; nothing is written when None
        include_timing: Keep the runtime_ms column

    Returns:
        CSV text

    Raises:
        ArtifactWriteError: If the file cannot be written
    """
    buffer = io.StringIO()
    report.to_dataframe(include_timing).to_csv(buffer, index=False, float_format="%.4f")
    text = buffer.getvalue()
    if path is not None:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ArtifactWriteError(f"Could not write report to {path}: {exc}") from exc
    return text
