"""Unit tests for scenario loading and validation."""
import json
import os
import shutil
import tempfile
import unittest
from pathlib import Path

from larpkit.config import ConfigManager
from larpkit.errors import ArtifactWriteError, ScenarioParseError, ScenarioValidationError
from larpkit.field import CollectionUnit, EllipseUnit, PointUnit, RectangleUnit
from larpkit.harness import dump_scenario, load_scenario
from larpkit.planning import PlannerParams

SCENARIO_DIR = Path(__file__).resolve().parents[2] / 'scenarios'


class TestLoadScenario(unittest.TestCase):
    """Test cases for load_scenario."""

    def setUp(self):
        """Set up a temporary directory for scenario files."""
        self.temp_dir = tempfile.mkdtemp()
        self.config = ConfigManager(config_path=os.path.join(self.temp_dir, 'config.yaml'))

    def tearDown(self):
        """Clean up temporary files."""
        shutil.rmtree(self.temp_dir)

    def _write(self, payload, name='scenario.json'):
        path = os.path.join(self.temp_dir, name)
        with open(path, 'w', encoding='utf-8') as handle:
            if isinstance(payload, str):
                handle.write(payload)
            else:
                json.dump(payload, handle)
        return path

    def _minimal(self, **overrides):
        data = {
            'name': 'minimal',
            'field': {'center': [0, 0], 'size': 64},
            'start': [-20, 0],
            'goal': [20, 0],
            'units': [{'kind': 'point', 'location': [0, 5]}],
        }
        data.update(overrides)
        return data

    def test_minimal_file_gets_defaults(self):
        """Absent sections are filled from the configuration."""
        scenario = load_scenario(self._write(self._minimal()), self.config)
        self.assertEqual(scenario.decomposition.n_min, 1.0)
        self.assertEqual(scenario.decomposition.n_max, 8.0)
        self.assertEqual(scenario.decomposition.boundaries, [0.105, 0.357, 0.693, 1.386, 2.996])
        self.assertEqual(scenario.decomposition.max_depth, 32)
        self.assertEqual(scenario.search.beta, 5.0)
        self.assertFalse(scenario.search.corner_adjacency)
        self.assertEqual(scenario.search.cost_model, 'integrated')
        self.assertEqual(scenario.search.sample_step, 0.05)
        self.assertEqual(set(scenario.planner_params), {'PM', 'APF', 'APF*', 'M-APF'})
        self.assertEqual(scenario.planner_params_for('APF'), PlannerParams())

        units = scenario.build_units()
        self.assertIsInstance(units[0], PointUnit)
        self.assertEqual(units[0].repulsion_matrix.tolist(), [[1.0, 0.0], [0.0, 1.0]])

    def test_scenario_values_win_over_config(self):
        data = self._minimal(search={'beta': 2.0}, planner_params={'PM': {'eta': 100.0}})
        scenario = load_scenario(self._write(data), self.config)
        self.assertEqual(scenario.search.beta, 2.0)
        self.assertEqual(scenario.search_config().beta, 2.0)
        self.assertEqual(scenario.search_config(beta=7.0).beta, 7.0)
        self.assertEqual(scenario.planner_params_for('PM').eta, 100.0)
        self.assertEqual(scenario.planner_params_for('APF').eta, 1.0)

    def test_cost_model_override(self):
        """The zone cost model is selectable; unknown models are rejected."""
        data = self._minimal(search={'cost_model': 'zone', 'sample_step': 0.1})
        cfg = load_scenario(self._write(data), self.config).search_config()
        self.assertEqual(cfg.cost_model, 'zone')
        self.assertEqual(cfg.sample_step, 0.1)
        for search in ({'cost_model': 'linear'}, {'sample_step': -1.0}):
            with self.assertRaises(ScenarioValidationError):
                load_scenario(self._write(self._minimal(search=search)), self.config)

    def test_every_unit_kind(self):
        data = self._minimal(units=[
            {'kind': 'line', 'start': [0, 0], 'end': [3, 4]},
            {'kind': 'rectangle', 'corner_1': [5, 5], 'corner_2': [5, 9], 'allow_degenerate': True},
            {'kind': 'ellipse', 'location': [-5, -5], 'shape_matrix': [[2, 0], [0, 1]],
             'repulsion_matrix': [[4, 0], [0, 4]]},
            {'kind': 'collection', 'units': [
                {'kind': 'point', 'location': [10, 10]},
                {'kind': 'collection', 'units': [{'kind': 'point', 'location': [12, 12]}]},
            ]},
        ])
        units = load_scenario(self._write(data), self.config).build_units()
        self.assertIsInstance(units[1], RectangleUnit)
        self.assertIsInstance(units[2], EllipseUnit)
        self.assertIsInstance(units[3], CollectionUnit)
        self.assertIsInstance(units[3].units[1], CollectionUnit)

    def test_bounds_field_is_squared(self):
        data = self._minimal(field={'bounds': [-30, -10, 30, 10]})
        scenario = load_scenario(self._write(data), self.config)
        self.assertEqual(tuple(scenario.field.center), (0.0, 0.0))
        self.assertEqual(scenario.field.size, 60.0)

    def test_degenerate_rectangle(self):
        data = self._minimal(units=[{'kind': 'rectangle', 'corner_1': [1, 1], 'corner_2': [1, 1]}])
        with self.assertRaisesRegex(ScenarioValidationError, 'degenerate rectangle'):
            load_scenario(self._write(data), self.config)

    def test_indefinite_repulsion_matrix(self):
        data = self._minimal(units=[{'kind': 'point', 'location': [0, 5],
                                     'repulsion_matrix': [[1, 2], [2, 1]]}])
        with self.assertRaisesRegex(ScenarioValidationError,
                                    'repulsion matrix not positive definite'):
            load_scenario(self._write(data), self.config)

    def test_schema_errors_name_the_field(self):
        """Validation messages carry the offending location."""
        cases = [
            self._minimal(units=[{'kind': 'spiral', 'location': [0, 0]}]),
            self._minimal(units=[{'kind': 'point'}]),
            self._minimal(start=[100, 0]),
            self._minimal(planner_params={'RRT': {'eta': 1}}),
            self._minimal(extra_key=1),
            self._minimal(units=[{'kind': 'collection', 'units': []}]),
            self._minimal(decomposition={'boundaries': [1.0, 0.5]}),
        ]
        for data in cases:
            with self.assertRaises(ScenarioValidationError):
                load_scenario(self._write(data), self.config)

        with self.assertRaisesRegex(ScenarioValidationError, 'units.0.point.location'):
            load_scenario(self._write(cases[1]), self.config)

    def test_cell_sizes_checked_after_defaults(self):
        """An n_min above the default n_max is caught once defaults are filled."""
        data = self._minimal(decomposition={'n_min': 16})
        with self.assertRaises(ScenarioValidationError):
            load_scenario(self._write(data), self.config)

    def test_parse_error_has_position(self):
        path = self._write('{\n  "name": "broken",\n  "field": }\n')
        with self.assertRaisesRegex(ScenarioParseError, r'line 3, column 12'):
            load_scenario(path, self.config)

    def test_invalid_utf8_is_a_parse_error(self):
        """Undecodable bytes raise ScenarioParseError naming the file."""
        path = os.path.join(self.temp_dir, 'latin1.json')
        with open(path, 'wb') as handle:
            handle.write(b'{"name": "caf\xe9"}')
        with self.assertRaisesRegex(ScenarioParseError, r'latin1\.json: not valid UTF-8 at byte 13'):
            load_scenario(path, self.config)

    def test_missing_file(self):
        with self.assertRaises(OSError):
            load_scenario(os.path.join(self.temp_dir, 'absent.json'), self.config)


class TestDumpScenario(unittest.TestCase):
    """Test cases for dump_scenario."""

    def setUp(self):
        """Set up a temporary directory."""
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        """Clean up temporary files."""
        shutil.rmtree(self.temp_dir)

    def test_round_trip_bundled_scenarios(self):
        """Dumping and reloading a filled scenario changes nothing."""
        for name in ('unobstructed.json', 'obstructed.json', 'walled_room.json'):
            scenario = load_scenario(SCENARIO_DIR / name)
            path = os.path.join(self.temp_dir, name)
            dump_scenario(scenario, path)
            self.assertEqual(load_scenario(path), scenario, name)

    def test_walled_room_carries_pm_override(self):
        scenario = load_scenario(SCENARIO_DIR / 'walled_room.json')
        self.assertEqual(scenario.planner_params_for('PM').eta, 100.0)
        self.assertEqual(len(scenario.units), 3)

    def test_unwritable_target(self):
        scenario = load_scenario(SCENARIO_DIR / 'unobstructed.json')
        with self.assertRaises(ArtifactWriteError):
            dump_scenario(scenario, self.temp_dir)


if __name__ == '__main__':
    unittest.main()
