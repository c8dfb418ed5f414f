"""
Aggregate potential field over an ordered set of restriction units.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from larpkit.field.units import (
    DEFAULT_GRADIENT_STEP,
    ArrayLike,
    FieldUnit,
    as_points,
    central_difference,
)


@dataclass(frozen=True)
class NearestUnit:
    """Closest unit to a query point under the plain or scaled metric."""

    index: int
    unit: FieldUnit
    repulsion_vector: np.ndarray
    distance_sq: float


class PotentialField:
    """
    Collection of units whose field potential is the maximum unit potential.

    An empty field has zero potential everywhere.
    """

    def __init__(self, units: Sequence[FieldUnit] = ()):
        self.units: Tuple[FieldUnit, ...] = tuple(units)

    def __len__(self) -> int:
        return len(self.units)

    def _potential(self, pts: np.ndarray) -> np.ndarray:
        if not self.units:
            return np.zeros(pts.shape[0])
        scaled = np.stack([unit._evaluate(pts)[2] for unit in self.units])
        return np.exp(-scaled.min(axis=0))

    def potential(self, x: ArrayLike):
        pts, single = as_points(x)
        values = self._potential(pts)
        return float(values[0]) if single else values

    def potential_gradient(self, x: ArrayLike, h: float = DEFAULT_GRADIENT_STEP):
        """Central finite-difference gradient of the field potential."""
        pts, single = as_points(x)
        grad = central_difference(self._potential, pts, h)
        return grad[0] if single else grad

    def nearest(self, x: ArrayLike, scaled: bool = False) -> Optional[NearestUnit]:
        """
        Find the unit closest to a single point.

        Args:
            x: Query point of shape (2,)
            scaled: Rank by d̃² instead of d²

        Returns:
            NearestUnit (lowest index on ties), or None for an empty field
        """
        if not self.units:
            return None
        pts, _ = as_points(x)
        best = None
        for index, unit in enumerate(self.units):
            v, d2, s2 = unit._evaluate(pts[:1])
            metric = float(s2[0] if scaled else d2[0])
            if best is None or metric < best.distance_sq:
                best = NearestUnit(index=index, unit=unit, repulsion_vector=v[0],
                                   distance_sq=metric)
        return best

    def potential_grid(self, bounds: Tuple[float, float, float, float],
                       resolution: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Sample the potential at cell centers of a regular grid.

        Args:
            bounds: (xmin, ymin, xmax, ymax)
            resolution: Samples per axis

        Returns:
            (xs, ys, grid) with grid[row, col] = σ(xs[col], ys[row])
        """
        if resolution < 1:
            raise ValueError("Grid resolution must be at least 1")
        xmin, ymin, xmax, ymax = bounds
        xs = xmin + (np.arange(resolution) + 0.5) * (xmax - xmin) / resolution
        ys = ymin + (np.arange(resolution) + 0.5) * (ymax - ymin) / resolution
        gx, gy = np.meshgrid(xs, ys)
        values = self._potential(np.column_stack([gx.ravel(), gy.ravel()]))
        return xs, ys, values.reshape(resolution, resolution)
