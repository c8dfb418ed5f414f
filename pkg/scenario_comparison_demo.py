"""
Scenario Comparison Demo Script

This script runs every planner on the bundled scenarios, prints the route
metrics side by side, sweeps the safety weight of the Larp search, and writes
a CSV report and an SVG plot per scenario into ``output/``.
"""
import os
from pathlib import Path

from larpkit.config import ConfigManager
from larpkit.harness import ComparisonRunner, FieldPlotter, emit_report, load_scenario
from larpkit.planning import LarpPlanner, SearchConfig
from larpkit.analysis import evaluate_route

SCENARIOS = ['unobstructed', 'obstructed', 'walled_room']
OUTPUT_DIR = Path('output')


def compare(config, name):
    """Compare all planners on one scenario and save the artifacts."""
    scenario = load_scenario(Path('scenarios') / f'{name}.json', config)
    print(f"Scenario: {scenario.name} - {scenario.description}")
    print(f"  {len(scenario.units)} restriction units, "
          f"start {scenario.start} -> goal {scenario.goal}")

    report = ComparisonRunner(config).run(scenario)
    print(f"  Decomposition: {len(report.graph)} cells, {len(report.graph.edges)} network edges")
    print()
    print(report.to_dataframe().to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    print()

    for row in report.rows:
        if row.error:
            print(f"  ! {row.planner}: {row.error}")
        elif row.terminated_by is not None and not row.metrics.goal_found:
            print(f"  ! {row.planner} stopped: {row.terminated_by.value}")

    csv_path = OUTPUT_DIR / f'{name}_report.csv'
    emit_report(report, csv_path)
    svg_path = OUTPUT_DIR / f'{name}.svg'
    FieldPlotter(resolution=128).render(scenario, scenario.build_field(), svg_path,
                                        tree=report.tree, routes=report.routes())
    print(f"✓ Report saved to: {csv_path}")
    print(f"✓ Plot saved to: {svg_path}")
    print()


def beta_sweep(config):
    """Show how the safety weight trades distance for potential."""
    scenario = load_scenario(Path('scenarios') / 'obstructed.json', config)
    field = scenario.build_field()
    print(f"{'beta':>6} {'distance':>10} {'area':>10} {'average':>10}")
    for beta in (0.0, 1.0, 2.0, 5.0, 10.0):
        planner = LarpPlanner(scenario.decomposition_params(), scenario.zone_config(),
                              SearchConfig(beta=beta))
        route = planner.plan(field, scenario.start, scenario.goal).route
        metrics = evaluate_route(route, field, scenario.goal)
        print(f"{beta:>6.1f} {metrics.route_distance:>10.4f} {metrics.route_area:>10.4f} "
              f"{metrics.average_potential:>10.4f}")
    print()


def main():
    """Run the demo."""
    print("=" * 80)
    print("Larp Demo - Safety-Aware Routing over Restrictive Potential Fields")
    print("=" * 80)
    print()

    config = ConfigManager()
    os.makedirs(OUTPUT_DIR, exist_ok=True)

    for name in SCENARIOS:
        print("-" * 80)
        compare(config, name)

    print("-" * 80)
    print("Safety weight sweep on the obstructed scenario")
    print()
    beta_sweep(config)

    print("=" * 80)
    print("Demo complete!")
    print("=" * 80)


if __name__ == '__main__':
    main()
