"""Unit tests for SVG plot rendering."""
import os
import re
import shutil
import tempfile
import unittest
from pathlib import Path

from larpkit.analysis import Route
from larpkit.errors import ArtifactWriteError
from larpkit.harness import FieldPlotter, load_scenario, render_plot
from larpkit.planning import LarpPlanner
from larpkit.planning.decomposition import leaves

SCENARIO_DIR = Path(__file__).resolve().parents[2] / 'scenarios'


def _route_vertices(svg, name):
    match = re.search(rf'<g id="route-{re.escape(name)}">\s*<path d="([^"]+)"', svg)
    return len(re.findall(r'[ML]', match.group(1))) if match else 0


class TestFieldPlotter(unittest.TestCase):
    """Test cases for FieldPlotter."""

    @classmethod
    def setUpClass(cls):
        """Plan once on the obstructed scenario."""
        cls.scenario = load_scenario(SCENARIO_DIR / 'obstructed.json')
        cls.field = cls.scenario.build_field()
        planner = LarpPlanner(cls.scenario.decomposition_params(), cls.scenario.zone_config(),
                              cls.scenario.search_config())
        cls.result = planner.plan(cls.field, cls.scenario.start, cls.scenario.goal)

    def setUp(self):
        """Set up a temporary output directory."""
        self.temp_dir = tempfile.mkdtemp()
        self.plotter = FieldPlotter(resolution=32)

    def tearDown(self):
        """Clean up temporary files."""
        shutil.rmtree(self.temp_dir)

    def _render(self, **layers):
        path = os.path.join(self.temp_dir, 'plot.svg')
        self.plotter.render(self.scenario, self.field, path, **layers)
        with open(path, encoding='utf-8') as handle:
            return handle.read()

    def test_full_render_has_every_layer(self):
        """Raster, cells, network, routes and markers all carry their ids."""
        hand = Route([(5, 5), (20, 10), (40, 12), (60, 30)])
        svg = self._render(tree=self.result.tree, graph=self.result.graph,
                           routes={'Larp': self.result.route, 'hand': hand})
        self.assertIn('id="potential-raster"', svg)
        self.assertIn('id="network-edges"', svg)
        self.assertIn('id="start-marker"', svg)
        self.assertIn('id="goal-marker"', svg)
        self.assertEqual(svg.count('id="cell-'), len(leaves(self.result.tree)))
        self.assertIn('id="route-Larp"', svg)
        self.assertEqual(_route_vertices(svg, 'hand'), 4)

    def test_field_only_render(self):
        svg = self._render()
        self.assertIn('id="potential-raster"', svg)
        self.assertNotIn('id="route-', svg)
        self.assertNotIn('id="cell-', svg)
        self.assertNotIn('id="network-edges"', svg)

    def test_output_is_deterministic(self):
        """Two renders of the same inputs are byte-identical."""
        first = self._render(tree=self.result.tree, routes={'Larp': self.result.route})
        second = self._render(tree=self.result.tree, routes={'Larp': self.result.route})
        self.assertEqual(first, second)

    def test_creates_parent_directories(self):
        path = os.path.join(self.temp_dir, 'plots', 'field.svg')
        written = render_plot(self.scenario, self.field, path, resolution=16)
        self.assertTrue(written.exists())

    def test_unwritable_path(self):
        with self.assertRaises(ArtifactWriteError):
            self.plotter.render(self.scenario, self.field, self.temp_dir)

    def test_invalid_resolution(self):
        with self.assertRaises(ValueError):
            FieldPlotter(resolution=0)


if __name__ == '__main__':
    unittest.main()
