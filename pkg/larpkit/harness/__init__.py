"""
Scenario harness: scenario files, planner comparison, reports and plots.
"""
from larpkit.harness.comparison import (
    ComparisonReport,
    ComparisonRow,
    ComparisonRunner,
    emit_report,
    run_comparison,
)
from larpkit.harness.exporters import write_graph_json, write_route_json, write_tree_json
from larpkit.harness.plotting import FieldPlotter, render_plot
from larpkit.harness.scenario import Scenario, dump_scenario, fill_defaults, load_scenario

__all__ = [
    "ComparisonReport",
    "ComparisonRow",
    "ComparisonRunner",
    "FieldPlotter",
    "Scenario",
    "dump_scenario",
    "emit_report",
    "fill_defaults",
    "load_scenario",
    "render_plot",
    "run_comparison",
    "write_graph_json",
    "write_route_json",
    "write_tree_json",
]
