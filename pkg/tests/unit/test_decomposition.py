"""Unit tests for the quad-tree cell decomposition."""
import math
import unittest
from pathlib import Path

import numpy as np

from larpkit.errors import DecompositionError
from larpkit.field import PointUnit, RectangleUnit
from larpkit.harness import load_scenario
from larpkit.planning.decomposition import (
    CellDecomposer,
    DecompositionParams,
    QuadNode,
    ZoneConfig,
    approx_distance_zones,
    leaves,
    locate_leaf,
    square_bounds,
    tree_depth,
    tree_to_dict,
    uniformity_probe,
)

SCENARIO_DIR = Path(__file__).resolve().parents[2] / 'scenarios'
BUNDLED = ('unobstructed.json', 'obstructed.json', 'walled_room.json')


def _brute_force_zone(center, size, units, boundaries):
    """Zone of a cell from raw unit evaluations."""
    zones = []
    for unit in units:
        d2 = float(unit.squared_distance(center))
        if d2 <= size * size / 2.0:
            zones.append(0)
        else:
            s2 = float(unit.scaled_squared_distance(center))
            zones.append(1 + sum(1 for b in boundaries if b <= s2))
    return min(zones) if zones else len(boundaries) + 1


def _leaf_bounds(tree):
    return np.array([leaf.bounds for leaf in leaves(tree)])


class TestZoneConfig(unittest.TestCase):
    """Test cases for ZoneConfig."""

    def test_binning(self):
        """Zones count the boundaries at or below d̃²."""
        cfg = ZoneConfig((0.69, 1.61, 2.99))
        self.assertEqual(cfg.bin(0.5), 1)
        self.assertEqual(cfg.bin(0.69), 2)
        self.assertEqual(cfg.bin(2.0), 3)
        self.assertEqual(cfg.bin(5.0), 4)
        self.assertEqual(cfg.farthest_zone, 4)
        self.assertEqual(cfg.zone_count, 5)

    def test_lower_edges_and_upper_potentials(self):
        """Zone 0 and 1 reach σ = 1; higher zones start at their boundary."""
        cfg = ZoneConfig((0.69, 1.61, 2.99))
        self.assertEqual(cfg.lower_edge(0), 0.0)
        self.assertEqual(cfg.lower_edge(1), 0.0)
        self.assertEqual(cfg.lower_edge(2), 0.69)
        self.assertEqual(cfg.lower_edge(4), 2.99)
        self.assertEqual(cfg.upper_potential(0), 1.0)
        self.assertAlmostEqual(cfg.upper_potential(4), math.exp(-2.99))

    def test_validation(self):
        """Boundaries must be non-empty, positive and ascending."""
        for bad in ((), (0.5, 0.5), (1.0, 0.5), (-0.1, 1.0), (0.1, float('inf'))):
            with self.assertRaises(ValueError):
                ZoneConfig(bad)


class TestDecompositionParams(unittest.TestCase):
    """Test cases for DecompositionParams."""

    def test_defaults_from_field_size(self):
        """n_min and n_max default to 1/64 and 1/8 of the field."""
        params = DecompositionParams.for_field((32, 32), 64)
        self.assertEqual(params.n_min, 1.0)
        self.assertEqual(params.n_max, 8.0)
        self.assertEqual(params.bounds, (0.0, 0.0, 64.0, 64.0))

    def test_invalid_sizes(self):
        """0 < n_min ≤ n_max ≤ field size."""
        for n_min, n_max in ((0, 8), (8, 4), (1, 128)):
            with self.assertRaises(ValueError):
                DecompositionParams(n_min, n_max, (0, 0), 64)

    def test_square_bounds_pads_short_side(self):
        """Rectangular extents become a square around the same center."""
        center, side = square_bounds(0, 0, 10, 4)
        self.assertEqual(center, (5.0, 2.0))
        self.assertEqual(side, 10.0)
        with self.assertRaises(ValueError):
            square_bounds(0, 0, 0, 4)


class TestApproxDistanceZones(unittest.TestCase):
    """Test cases for approx_distance_zones."""

    def setUp(self):
        """Set up the three-boundary zone configuration."""
        self.cfg = ZoneConfig((0.69, 1.61, 2.99))

    def test_unit_inside_cell(self):
        """A point at the cell center is zone 0."""
        self.assertEqual(approx_distance_zones((0, 0), 4, [PointUnit((0, 0))], self.cfg), [0])

    def test_binned_zones_keep_unit_order(self):
        """Outside the circumscribed circle units are binned by d̃²."""
        near = PointUnit((2, 0), [[8, 0], [0, 8]])      # d² = 4, d̃² = 0.5
        far = PointUnit((0, 2), [[0.8, 0], [0, 0.8]])   # d̃² = 5
        inside = PointUnit((0.2, 0.2))
        zones = approx_distance_zones((0, 0), 1, [near, far, inside], self.cfg)
        self.assertEqual(zones, [1, 4, 0])

    def test_rejects_non_positive_side(self):
        with self.assertRaises(ValueError):
            approx_distance_zones((0, 0), 0, [PointUnit((1, 1))], self.cfg)


class TestUniformityProbe(unittest.TestCase):
    """Test cases for uniformity_probe."""

    def setUp(self):
        """Set up a zone-3 unit to the east of the origin."""
        self.cfg = ZoneConfig((0.69, 1.61, 2.99))
        self.unit = PointUnit((1.5, 0))   # d̃² = 2.25 at the origin → zone 3

    def _quad(self, size, zone=3):
        return QuadNode(center=(0.0, 0.0), size=size, zone=zone,
                        zone_upper_potential=self.cfg.upper_potential(zone))

    def test_large_cell_fails(self):
        """The cell extremity nearest the unit drops into a closer zone."""
        self.assertFalse(uniformity_probe(self._quad(1.0), [self.unit], self.cfg))

    def test_small_cell_passes(self):
        """A tiny cell keeps the zone of its center."""
        self.assertTrue(uniformity_probe(self._quad(0.01), [self.unit], self.cfg))

    def test_far_unit_passes(self):
        """Units far beyond the lower edge never fail the probe."""
        far = PointUnit((30, 0))
        self.assertTrue(uniformity_probe(self._quad(2.0, zone=4), [far], self.cfg))

    def test_unit_touching_center_fails(self):
        """A zero repulsion vector cannot be normalized and fails."""
        touching = RectangleUnit((-0.1, -0.1), (0.1, 0.1))
        self.assertFalse(uniformity_probe(self._quad(0.01), [touching], self.cfg))

    def test_zone_zero_never_uniform(self):
        self.assertFalse(uniformity_probe(self._quad(0.01, zone=0), [], self.cfg))


class TestCellDecomposer(unittest.TestCase):
    """Test cases for CellDecomposer on synthetic fields."""

    def test_empty_field(self):
        """An empty 64 m field with n_max = 16 gives 16 farthest-zone leaves."""
        params = DecompositionParams(n_min=1, n_max=16, field_center=(32, 32), field_size=64)
        cfg = ZoneConfig()
        root = CellDecomposer(params, cfg).build([])
        result = leaves(root)
        self.assertEqual(len(result), 16)
        for leaf in result:
            self.assertEqual(leaf.size, 16)
            self.assertEqual(leaf.zone, cfg.farthest_zone)
            self.assertAlmostEqual(leaf.zone_upper_potential, math.exp(-2.996))
        self.assertEqual(tree_depth(root), 2)

    def test_point_at_center_refines_to_n_min(self):
        """The four leaves touching a central point unit have side n_min and zone 0."""
        params = DecompositionParams(n_min=1, n_max=8, field_center=(32, 32), field_size=64)
        root = CellDecomposer(params).build([PointUnit((32, 32))])
        for offset in ((-0.25, 0.25), (0.25, 0.25), (-0.25, -0.25), (0.25, -0.25)):
            leaf = locate_leaf(root, (32 + offset[0], 32 + offset[1]))
            self.assertEqual(leaf.size, 1.0)
            self.assertEqual(leaf.zone, 0)
            self.assertEqual(leaf.zone_upper_potential, 1.0)

    def test_unit_farthest_at_root_center_still_refines(self):
        """Pruning keeps a unit that is farthest at a cell center but may come closer inside it."""
        params = DecompositionParams(n_min=1, n_max=8, field_center=(32, 32), field_size=64)
        cfg = ZoneConfig()
        far = PointUnit((60, 60))
        self.assertEqual(approx_distance_zones((32, 32), 64, [far], cfg), [cfg.farthest_zone])
        root = CellDecomposer(params, cfg).build([PointUnit((32, 32)), far])
        leaf = locate_leaf(root, (60.25, 60.25))
        self.assertEqual(leaf.zone, 0)
        self.assertEqual(leaf.size, 1.0)

    def test_all_far_root_is_single_leaf(self):
        """A root no larger than n_max with only farthest units stays a leaf."""
        params = DecompositionParams(n_min=1, n_max=8, field_center=(0, 0), field_size=8)
        root = CellDecomposer(params).build([PointUnit((1000, 1000))])
        self.assertTrue(root.is_leaf)
        self.assertEqual(leaves(root), [root])

    def test_one_subdivision_gives_four_leaves(self):
        """A root above n_max with nothing nearby splits exactly once."""
        params = DecompositionParams(n_min=1, n_max=4, field_center=(0, 0), field_size=8)
        root = CellDecomposer(params).build([])
        self.assertEqual([leaf.center for leaf in leaves(root)],
                         [(-2.0, 2.0), (2.0, 2.0), (-2.0, -2.0), (2.0, -2.0)])

    def test_depth_cap(self):
        """Runaway subdivision raises DecompositionError."""
        params = DecompositionParams(n_min=1, n_max=8, field_center=(32, 32), field_size=64)
        with self.assertRaises(DecompositionError):
            CellDecomposer(params, max_depth=3).build([PointUnit((32, 32))])

    def test_locate_leaf(self):
        """Split lines go east and north; outside points raise."""
        params = DecompositionParams(n_min=1, n_max=4, field_center=(0, 0), field_size=8)
        root = CellDecomposer(params).build([])
        self.assertEqual(locate_leaf(root, (0, 0)).center, (2.0, 2.0))
        self.assertEqual(locate_leaf(root, (-4, -4)).center, (-2.0, -2.0))
        with self.assertRaises(ValueError):
            locate_leaf(root, (4.5, 0))

    def test_tree_to_dict(self):
        """Export nests children in NW, NE, SW, SE order."""
        params = DecompositionParams(n_min=1, n_max=4, field_center=(0, 0), field_size=8)
        data = tree_to_dict(CellDecomposer(params).build([]))
        self.assertEqual(data['center'], [0.0, 0.0])
        self.assertEqual(data['size'], 8)
        self.assertEqual(len(data['children']), 4)
        self.assertEqual(data['children'][1]['center'], [2.0, 2.0])
        self.assertIsNone(data['children'][1]['children'])


class TestBundledScenarioTrees(unittest.TestCase):
    """Soundness checks on the shipped scenarios."""

    @classmethod
    def setUpClass(cls):
        """Build one tree per bundled scenario."""
        cls.cases = []
        for name in BUNDLED:
            scenario = load_scenario(SCENARIO_DIR / name)
            units = scenario.build_units()
            params = scenario.decomposition_params()
            cfg = scenario.zone_config()
            tree = CellDecomposer(params, cfg).build(units)
            cls.cases.append((name, scenario, units, params, cfg, tree))

    def test_leaves_tile_the_field(self):
        """Leaf areas sum to the field area and interiors never overlap."""
        for name, _, _, params, _, tree in self.cases:
            bounds = _leaf_bounds(tree)
            area = np.sum((bounds[:, 2] - bounds[:, 0]) * (bounds[:, 3] - bounds[:, 1]))
            self.assertLess(abs(area - params.field_size ** 2) / params.field_size ** 2, 1e-9, name)

            ox = (np.minimum(bounds[:, None, 2], bounds[None, :, 2])
                  - np.maximum(bounds[:, None, 0], bounds[None, :, 0]))
            oy = (np.minimum(bounds[:, None, 3], bounds[None, :, 3])
                  - np.maximum(bounds[:, None, 1], bounds[None, :, 1]))
            overlapping = (ox > 1e-12) & (oy > 1e-12)
            np.fill_diagonal(overlapping, False)
            self.assertFalse(overlapping.any(), name)

    def test_leaf_sizes(self):
        """Leaves never exceed n_max and zone-0 leaves are at most 2·n_min."""
        for name, _, _, params, _, tree in self.cases:
            for leaf in leaves(tree):
                self.assertLessEqual(leaf.size, params.n_max, name)
                if leaf.zone == 0:
                    self.assertLessEqual(leaf.size, 2 * params.n_min, name)

    def test_zone_soundness(self):
        """Leaf zones match a brute-force recomputation over all units."""
        for name, _, units, _, cfg, tree in self.cases:
            for leaf in leaves(tree):
                expected = _brute_force_zone(leaf.center, leaf.size, units, cfg.boundaries)
                self.assertEqual(leaf.zone, expected, f"{name} leaf at {leaf.center}")
                self.assertEqual(leaf.zone,
                                 min(approx_distance_zones(leaf.center, leaf.size, units, cfg)),
                                 name)

    def test_cells_with_restriction_are_zone_zero(self):
        """Every leaf holding an on-unit grid sample has zone 0."""
        for name, scenario, _, params, _, tree in self.cases:
            xmin, ymin, xmax, ymax = params.bounds
            xs = xmin + (np.arange(64) + 0.5) * (xmax - xmin) / 64
            ys = ymin + (np.arange(64) + 0.5) * (ymax - ymin) / 64
            gx, gy = np.meshgrid(xs, ys)
            samples = np.column_stack([gx.ravel(), gy.ravel()])
            sigma = scenario.build_field().potential(samples)
            on_unit = samples[sigma == 1.0]
            for point in on_unit:
                self.assertEqual(locate_leaf(tree, point).zone, 0, f"{name} at {point}")

    def test_obstructed_scenario_has_on_unit_samples(self):
        """The obstructed scenario's rectangle covers part of the sample grid."""
        scenario = next(case[1] for case in self.cases if case[0] == 'obstructed.json')
        self.assertEqual(scenario.build_field().potential((32.5, 30.5)), 1.0)

    def test_deterministic_rebuild(self):
        """Identical inputs give structurally identical trees."""
        for name, _, units, params, cfg, tree in self.cases:
            again = CellDecomposer(params, cfg).build(units)
            self.assertEqual(tree, again, name)

    def test_refinement_near_units(self):
        """Cells near restrictions are smaller than cells in open space."""
        for name, _, units, params, cfg, tree in self.cases:
            sizes = {leaf.zone: [] for leaf in leaves(tree)}
            for leaf in leaves(tree):
                sizes[leaf.zone].append(leaf.size)
            if 0 in sizes and cfg.farthest_zone in sizes:
                self.assertLess(max(sizes[0]), max(sizes[cfg.farthest_zone]), name)


if __name__ == '__main__':
    unittest.main()
