#!/usr/bin/env python3
"""
larpkit CLI - Plan, compare and plot routes over restrictive potential fields.
"""
import argparse
import json
import sys
from pathlib import Path

# Add parent directory to path
sys.path.insert(0, str(Path(__file__).parent))

from larpkit.analysis import evaluate_route
from larpkit.config import ConfigManager
from larpkit.errors import (
    ArtifactWriteError,
    InvalidForceStateError,
    NoPathError,
    ScenarioParseError,
    ScenarioValidationError,
)
from larpkit.harness import (
    ComparisonRunner,
    FieldPlotter,
    emit_report,
    load_scenario,
    write_graph_json,
    write_route_json,
    write_tree_json,
)
from larpkit.harness.exporters import route_payload
from larpkit.planning import BaselinePlanner, LarpPlanner, PlannerKind
from larpkit.utils import configure_from

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_PATH = 3
EXIT_IO = 4


def _load(args):
    config = ConfigManager(args.config) if args.config else ConfigManager()
    configure_from(config)
    return config, load_scenario(args.scenario, config)


def _larp_planner(scenario, beta=None):
    return LarpPlanner(
        scenario.decomposition_params(),
        scenario.zone_config(),
        scenario.search_config(beta),
        max_depth=scenario.decomposition.max_depth or 32,
    )


def plan_route(args):
    """Plan one route and write it with its metrics."""
    config, scenario = _load(args)
    kind = PlannerKind.parse(args.planner)
    field = scenario.build_field()

    if kind is PlannerKind.LARP:
        route = _larp_planner(scenario, args.beta).plan(field, scenario.start, scenario.goal).route
    else:
        trace = BaselinePlanner(kind, scenario.planner_params_for(kind.value)).follow(
            scenario.start, scenario.goal, field
        )
        route = trace.route
        print(f"{kind.value} terminated: {trace.terminated_by.value} "
              f"after {trace.iterations} iterations", file=sys.stderr)

    metrics = evaluate_route(route, field, scenario.goal,
                             config.get('metrics.max_step', 0.05),
                             config.get('metrics.goal_tolerance_sq', 2.5))
    if args.out:
        write_route_json(route, metrics, args.out)
        print(f"✓ Route saved to: {args.out}", file=sys.stderr)
    else:
        print(json.dumps(route_payload(route, metrics), indent=2))

    threshold = config.get('metrics.safety_threshold', 0.35)
    if not metrics.below_safety_threshold(threshold):
        print(f"Note: average potential {metrics.average_potential:.4f} "
              f"exceeds the {threshold} safety guidance", file=sys.stderr)


def compare_planners(args):
    """Run several planners and emit the comparison CSV."""
    config, scenario = _load(args)
    planners = args.planner or config.get('comparison.planners')
    report = ComparisonRunner(config).run(scenario, planners, beta=args.beta)

    text = emit_report(report, args.out, include_timing=not args.no_timing)
    if args.out:
        print(f"✓ Report saved to: {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)

    for row in report.rows:
        if row.error:
            print(f"  {row.planner}: {row.error}", file=sys.stderr)


def plot_scenario(args):
    """Render the field, optional decomposition and routes to SVG."""
    config, scenario = _load(args)
    field = scenario.build_field()

    routes, tree, graph = {}, None, None
    if args.planner:
        report = ComparisonRunner(config).run(scenario, args.planner, beta=args.beta)
        routes = report.routes()
        tree, graph = report.tree, report.graph
    if (args.show_tree or args.show_network) and tree is None:
        tree, graph = _larp_planner(scenario, args.beta).build(field)

    plotter = FieldPlotter(config.get('plotting.resolution', 256),
                           config.get('plotting.colormap', 'magma'))
    plotter.render(scenario, field, args.out,
                   tree=tree if args.show_tree else None,
                   graph=graph if args.show_network else None,
                   routes=routes)
    print(f"✓ Plot saved to: {args.out}", file=sys.stderr)


def dump_tree(args):
    """Write the decomposition tree (and optionally the network) as JSON."""
    _, scenario = _load(args)
    tree, graph = _larp_planner(scenario, args.beta).build(scenario.build_field())
    write_tree_json(tree, args.out)
    print(f"✓ Quad tree saved to: {args.out}", file=sys.stderr)
    if args.network_out:
        write_graph_json(graph, args.network_out)
        print(f"✓ Routing network saved to: {args.network_out}", file=sys.stderr)


def _common(parser):
    parser.add_argument('--scenario', required=True, help='Path to scenario JSON file')
    parser.add_argument('--config', help='Path to config file')
    parser.add_argument('--beta', type=float,
                        help='Safety weight of the network search (overrides the scenario)')
    parser.add_argument('--seed-free', action='store_true',
                        help='Reserved; planning is deterministic and the flag is rejected')


def build_parser():
    parser = argparse.ArgumentParser(
        description='larpkit - Safety-aware route planning over restrictive potential fields',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Plan a Larp route and print it with its metrics
  python cli.py plan --scenario scenarios/walled_room.json

  # Plan with a baseline planner and save the route
  python cli.py plan --scenario scenarios/obstructed.json --planner APF --out apf.json

  # Compare all planners, without the timing column
  python cli.py compare --scenario scenarios/unobstructed.json --no-timing --out report.csv

  # Plot the field with the quad tree, network and Larp route
  python cli.py plot --scenario scenarios/walled_room.json --planner Larp \\
      --show-tree --show-network --out walled_room.svg

  # Dump the decomposition tree and routing network
  python cli.py tree --scenario scenarios/obstructed.json --out tree.json --network-out net.json

Exit codes: 0 success, 2 validation error, 3 no path, 4 I/O error
        """
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    plan_parser = subparsers.add_parser('plan', help='Plan one route')
    _common(plan_parser)
    plan_parser.add_argument('--planner', default='Larp',
                             help='Planner name: Larp, PM, APF, APF*, M-APF (default: Larp)')
    plan_parser.add_argument('--out', help='Route JSON path (default: stdout)')

    compare_parser = subparsers.add_parser('compare', help='Compare planners on one scenario')
    _common(compare_parser)
    compare_parser.add_argument('--planner', action='append',
                                help='Planner to include; repeat for several (default: all)')
    compare_parser.add_argument('--out', help='Report CSV path (default: stdout)')
    compare_parser.add_argument('--no-timing', action='store_true',
                                help='Omit the runtime_ms column for reproducible output')

    plot_parser = subparsers.add_parser('plot', help='Render the scenario to SVG')
    _common(plot_parser)
    plot_parser.add_argument('--planner', action='append',
                             help='Planner whose route is drawn; repeat for several')
    plot_parser.add_argument('--out', required=True, help='SVG output path')
    plot_parser.add_argument('--show-tree', action='store_true', help='Outline the leaf cells')
    plot_parser.add_argument('--show-network', action='store_true',
                             help='Draw the routing network edges')

    tree_parser = subparsers.add_parser('tree', help='Dump the decomposition tree')
    _common(tree_parser)
    tree_parser.add_argument('--out', required=True, help='Tree JSON path')
    tree_parser.add_argument('--network-out', help='Also write the routing network JSON')

    return parser


COMMANDS = {
    'plan': plan_route,
    'compare': compare_planners,
    'plot': plot_scenario,
    'tree': dump_tree,
}


def main(argv=None):
    """Main CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command not in COMMANDS:
        parser.print_help()
        return EXIT_VALIDATION
    if args.seed_free:
        parser.error('--seed-free is reserved: planning has no random state')

    try:
        COMMANDS[args.command](args)
    except (NoPathError, InvalidForceStateError) as exc:
        print(f"No path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except (ScenarioParseError, ScenarioValidationError) as exc:
        print(f"Invalid scenario: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ArtifactWriteError as exc:
        print(f"Write failed: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
