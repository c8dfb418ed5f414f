"""Unit tests for the command-line entry point."""
import io
import json
import os
import shutil
import sys
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import yaml

sys.path.insert(0, str(Path(__file__).resolve().parents[2]))

from cli import EXIT_IO, EXIT_NO_PATH, EXIT_OK, EXIT_VALIDATION, main  # noqa: E402
from larpkit.config import ConfigManager  # noqa: E402

SCENARIO_DIR = Path(__file__).resolve().parents[2] / 'scenarios'


class TestCli(unittest.TestCase):
    """Test cases for cli.main."""

    def setUp(self):
        """Set up a temporary directory with a config that logs into it."""
        self.temp_dir = tempfile.mkdtemp()
        settings = ConfigManager(config_path=os.path.join(self.temp_dir, 'absent.yaml')).config
        settings['logging']['file'] = os.path.join(self.temp_dir, 'larpkit.log')
        self.config_path = os.path.join(self.temp_dir, 'config.yaml')
        with open(self.config_path, 'w') as f:
            yaml.safe_dump(settings, f)

    def tearDown(self):
        """Clean up temporary files."""
        shutil.rmtree(self.temp_dir)

    def _run(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    def _scenario(self, data):
        path = os.path.join(self.temp_dir, f"{data['name']}.json")
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(data, handle)
        return path

    def _args(self, command, scenario, *extra):
        return (command, '--scenario', str(scenario), '--config', self.config_path, *extra)

    def test_plan_to_stdout(self):
        """The default planner prints the route and its metrics."""
        code, out, _ = self._run(*self._args('plan', SCENARIO_DIR / 'unobstructed.json'))
        self.assertEqual(code, EXIT_OK)
        payload = json.loads(out)
        self.assertEqual(payload['points'][0], [1.0, 32.0])
        self.assertTrue(payload['metrics']['goal_found'])

    def test_plan_baseline_to_file(self):
        out_path = os.path.join(self.temp_dir, 'routes', 'apf.json')
        code, _, err = self._run(*self._args('plan', SCENARIO_DIR / 'unobstructed.json',
                                             '--planner', 'apf', '--out', out_path))
        self.assertEqual(code, EXIT_OK)
        self.assertIn('APF terminated: GoalReached', err)
        with open(out_path, encoding='utf-8') as handle:
            self.assertIn('route_area', json.load(handle)['metrics'])

    def test_compare_without_timing(self):
        code, out, _ = self._run(*self._args('compare', SCENARIO_DIR / 'obstructed.json',
                                             '--no-timing'))
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertEqual(len(lines), 6)
        self.assertEqual(lines[0], 'planner,goal_found,route_distance,route_area,'
                                   'average_potential,highest_potential')
        self.assertEqual([line.split(',')[0] for line in lines[1:]],
                         ['PM', 'APF', 'APF*', 'M-APF', 'Larp'])

    def test_compare_selected_planners_with_beta(self):
        code, out, _ = self._run(*self._args('compare', SCENARIO_DIR / 'obstructed.json',
                                             '--planner', 'Larp', '--planner', 'PM',
                                             '--beta', '0'))
        self.assertEqual(code, EXIT_OK)
        lines = out.splitlines()
        self.assertTrue(lines[0].endswith('runtime_ms'))
        self.assertEqual([line.split(',')[0] for line in lines[1:]], ['Larp', 'PM'])

    def test_tree_and_plot_outputs(self):
        """tree and plot write their artifacts."""
        tree_path = os.path.join(self.temp_dir, 'tree.json')
        net_path = os.path.join(self.temp_dir, 'net.json')
        code, _, _ = self._run(*self._args('tree', SCENARIO_DIR / 'walled_room.json',
                                           '--out', tree_path, '--network-out', net_path))
        self.assertEqual(code, EXIT_OK)
        with open(tree_path, encoding='utf-8') as handle:
            self.assertEqual(json.load(handle)['size'], 64.0)
        with open(net_path, encoding='utf-8') as handle:
            self.assertTrue(json.load(handle)['edges'])

        svg_path = os.path.join(self.temp_dir, 'room.svg')
        code, _, _ = self._run(*self._args('plot', SCENARIO_DIR / 'walled_room.json',
                                           '--planner', 'Larp', '--show-tree',
                                           '--show-network', '--out', svg_path))
        self.assertEqual(code, EXIT_OK)
        with open(svg_path, encoding='utf-8') as handle:
            svg = handle.read()
        self.assertIn('id="route-Larp"', svg)
        self.assertIn('id="cell-0"', svg)
        self.assertIn('id="network-edges"', svg)

    def test_invalid_scenario_exit_code(self):
        path = self._scenario({
            'name': 'bad_rectangle',
            'field': {'center': [0, 0], 'size': 16},
            'start': [-5, 0],
            'goal': [5, 0],
            'units': [{'kind': 'rectangle', 'corner_1': [1, 1], 'corner_2': [1, 1]}],
        })
        code, _, err = self._run(*self._args('plan', path))
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('degenerate rectangle', err)

    def test_unparseable_scenario_exit_code(self):
        path = os.path.join(self.temp_dir, 'broken.json')
        with open(path, 'w') as f:
            f.write('{"name": ')
        code, _, err = self._run(*self._args('compare', path))
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('line 1', err)

    def test_undecodable_scenario_exit_code(self):
        path = os.path.join(self.temp_dir, 'binary.json')
        with open(path, 'wb') as f:
            f.write(b'\xff\xfe{}')
        code, _, err = self._run(*self._args('plan', path))
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('not valid UTF-8', err)

    def test_no_path_exit_code(self):
        """A sealed start cell with zone blocking has no route."""
        walls = [
            {'kind': 'rectangle', 'corner_1': [24, 24], 'corner_2': [40, 25]},
            {'kind': 'rectangle', 'corner_1': [24, 39], 'corner_2': [40, 40]},
            {'kind': 'rectangle', 'corner_1': [24, 24], 'corner_2': [25, 40]},
            {'kind': 'rectangle', 'corner_1': [39, 24], 'corner_2': [40, 40]},
        ]
        path = self._scenario({
            'name': 'sealed_box',
            'field': {'center': [32, 32], 'size': 64},
            'start': [32, 32],
            'goal': [5, 5],
            'units': walls,
            'search': {'zone_block_threshold': 1},
        })
        code, _, err = self._run(*self._args('plan', path))
        self.assertEqual(code, EXIT_NO_PATH)
        self.assertIn('No path', err)

    def test_force_on_restriction_exit_code(self):
        """APF started on a restriction unit cannot evaluate its force."""
        path = self._scenario({
            'name': 'start_on_unit',
            'field': {'center': [0, 0], 'size': 32},
            'start': [0, 0],
            'goal': [10, 0],
            'units': [{'kind': 'rectangle', 'corner_1': [-2, -2], 'corner_2': [2, 2]}],
        })
        code, _, _ = self._run(*self._args('plan', path, '--planner', 'APF'))
        self.assertEqual(code, EXIT_NO_PATH)

    def test_write_failure_exit_code(self):
        code, _, err = self._run(*self._args('compare', SCENARIO_DIR / 'unobstructed.json',
                                             '--out', self.temp_dir))
        self.assertEqual(code, EXIT_IO)
        self.assertIn('Write failed', err)

    def test_missing_scenario_exit_code(self):
        code, _, _ = self._run(*self._args('plan', os.path.join(self.temp_dir, 'absent.json')))
        self.assertEqual(code, EXIT_IO)

    def test_unknown_planner_exit_code(self):
        code, _, _ = self._run(*self._args('plan', SCENARIO_DIR / 'unobstructed.json',
                                           '--planner', 'RRT'))
        self.assertEqual(code, EXIT_VALIDATION)

    def test_seed_free_is_rejected(self):
        with redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as ctx:
                main(list(self._args('plan', SCENARIO_DIR / 'unobstructed.json', '--seed-free')))
        self.assertEqual(ctx.exception.code, 2)

    def test_no_command_prints_help(self):
        code, out, _ = self._run()
        self.assertEqual(code, EXIT_VALIDATION)
        self.assertIn('usage', out)


if __name__ == '__main__':
    unittest.main()
