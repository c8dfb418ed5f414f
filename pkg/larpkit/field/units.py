"""
Standardized restrictive potential field units.

Every unit kind shares one evaluation chain:

- repulsion vector x̄(x): displacement from the nearest point of the restriction to x
- squared distance d²(x) = x̄ᵀx̄
- scaled squared distance d̃²(x) = x̄ᵀA⁻¹x̄ under the unit's repulsion matrix A
- potential σ(x) = exp(-d̃²(x)), equal to 1 on the restriction and decaying away from it

All evaluation methods accept a single point of shape (2,) or a batch of shape
(N, 2) and return results with the matching leading shape.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

ArrayLike = Union[Sequence[float], np.ndarray]

DEFAULT_GRADIENT_STEP = 1e-4


class UnitKind(str, Enum):
    """Restriction primitive kinds."""

    POINT = "point"
    LINE = "line"
    RECTANGLE = "rectangle"
    ELLIPSE = "ellipse"
    COLLECTION = "collection"


def as_points(x: ArrayLike) -> Tuple[np.ndarray, bool]:
    """
    Normalize an input to an (N, 2) float array.

    Args:
        x: Point of shape (2,) or batch of shape (N, 2)

    Returns:
        Tuple of (points array, whether the input was a single point)
    """
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"Expected 2D point(s), got array of shape {np.shape(x)}")
    return pts, single


def _restore(values: np.ndarray, single: bool):
    if single:
        value = values[0]
        return float(value) if np.ndim(value) == 0 else value
    return values


def _dot_rows(v: np.ndarray) -> np.ndarray:
    return v[:, 0] * v[:, 0] + v[:, 1] * v[:, 1]


def central_difference(potential_fn, pts: np.ndarray, h: float) -> np.ndarray:
    """
    Central finite-difference gradient of a batched scalar field.

    Args:
        potential_fn: Callable mapping an (M, 2) array to M values
        pts: (N, 2) evaluation points
        h: Step in meters

    Returns:
        (N, 2) gradient estimates
    """
    if h <= 0:
        raise ValueError("Gradient step h must be positive")
    offsets = np.array([[h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
    stencil = (pts[:, None, :] + offsets[None, :, :]).reshape(-1, 2)
    values = np.asarray(potential_fn(stencil), dtype=float).reshape(-1, 4)
    grad = np.empty((pts.shape[0], 2))
    grad[:, 0] = (values[:, 0] - values[:, 1]) / (2.0 * h)
    grad[:, 1] = (values[:, 2] - values[:, 3]) / (2.0 * h)
    return grad


class RepulsionMatrix:
    """
    Symmetric positive-definite 2x2 matrix shaping a unit's decay.

    The inverse is formed in closed form so that the identity matrix yields a
    scaled squared distance bit-identical to the plain squared distance.
    """

    def __init__(self, matrix: Optional[ArrayLike] = None):
        a = np.eye(2) if matrix is None else np.array(matrix, dtype=float)
        if a.shape != (2, 2):
            raise ValueError(f"repulsion matrix must be 2x2, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("repulsion matrix has non-finite entries")
        if a[0, 1] != a[1, 0]:
            raise ValueError("repulsion matrix not symmetric")
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if det <= 0 or a[0, 0] + a[1, 1] <= 0:
            raise ValueError("repulsion matrix not positive definite")

        inverse = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]]) / det
        a.setflags(write=False)
        inverse.setflags(write=False)
        self._a = a
        self._inverse = inverse
        eigenvalues = np.linalg.eigvalsh(a)
        self.min_eigenvalue = float(eigenvalues[0])
        self.max_eigenvalue = float(eigenvalues[-1])

    @property
    def matrix(self) -> np.ndarray:
        return self._a

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse

    def scaled_norm_sq(self, v: np.ndarray) -> np.ndarray:
        """Quadratic form vᵀA⁻¹v over the rows of an (N, 2) array."""
        inv = self._inverse
        return (v[:, 0] * (inv[0, 0] * v[:, 0] + inv[0, 1] * v[:, 1])
                + v[:, 1] * (inv[1, 0] * v[:, 0] + inv[1, 1] * v[:, 1]))

    def tolist(self) -> List[List[float]]:
        return self._a.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RepulsionMatrix):
            return NotImplemented
        return bool(np.array_equal(self._a, other._a))

    def __repr__(self) -> str:
        return f"RepulsionMatrix({self.tolist()})"


@dataclass(frozen=True)
class FieldEvaluation:
    """
    One-pass evaluation of a unit at one or more points.

    Attributes:
        repulsion_vector: x̄(x), meters
        squared_distance: d²(x), square meters
        scaled_squared_distance: d̃²(x), dimensionless
        potential: σ(x) = exp(-d̃²(x))
    """

    repulsion_vector: Any
    squared_distance: Any
    scaled_squared_distance: Any
    potential: Any


class FieldUnit:
    """Base class for restriction units; subclasses supply the repulsion vector."""

    kind: UnitKind

    def __init__(self, repulsion_matrix: Union[RepulsionMatrix, ArrayLike, None] = None):
        if isinstance(repulsion_matrix, RepulsionMatrix):
            self.repulsion_matrix = repulsion_matrix
        else:
            self.repulsion_matrix = RepulsionMatrix(repulsion_matrix)

    # -- batched internals -------------------------------------------------
    def _repulsion(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _evaluate(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        v = self._repulsion(pts)
        return v, _dot_rows(v), self.repulsion_matrix.scaled_norm_sq(v)

    # -- public API --------------------------------------------------------
    def repulsion_vector(self, x: ArrayLike):
        pts, single = as_points(x)
        return _restore(self._evaluate(pts)[0], single)

    def squared_distance(self, x: ArrayLike):
        pts, single = as_points(x)
        return _restore(self._evaluate(pts)[1], single)

    def scaled_squared_distance(self, x: ArrayLike):
        pts, single = as_points(x)
        return _restore(self._evaluate(pts)[2], single)

    def potential(self, x: ArrayLike):
        pts, single = as_points(x)
        return _restore(np.exp(-self._evaluate(pts)[2]), single)

    def potential_gradient(self, x: ArrayLike, h: float = DEFAULT_GRADIENT_STEP):
        """Central finite-difference gradient of σ with step h meters."""
        pts, single = as_points(x)
        grad = central_difference(lambda p: np.exp(-self._evaluate(p)[2]), pts, h)
        return grad[0] if single else grad

    def evaluate(self, x: ArrayLike) -> FieldEvaluation:
        """Evaluate x̄, d², d̃² and σ in one pass."""
        pts, single = as_points(x)
        v, d2, s2 = self._evaluate(pts)
        return FieldEvaluation(
            repulsion_vector=v[0] if single else v,
            squared_distance=_restore(d2, single),
            scaled_squared_distance=_restore(s2, single),
            potential=_restore(np.exp(-s2), single),
        )

    @property
    def max_eigenvalue(self) -> float:
        return self.repulsion_matrix.max_eigenvalue

    def to_dict(self) -> Dict[str, Any]:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.to_dict()})"


def _point2(value: ArrayLike, label: str) -> np.ndarray:
    arr = np.array(value, dtype=float).reshape(-1)
    if arr.shape != (2,) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{label} must be a finite 2D point")
    arr.setflags(write=False)
    return arr


class PointUnit(FieldUnit):
    """Restriction at a single location x̂."""

    kind = UnitKind.POINT

    def __init__(self, location: ArrayLike, repulsion_matrix=None):
        super().__init__(repulsion_matrix)
        self.location = _point2(location, "point location")

    def _repulsion(self, pts: np.ndarray) -> np.ndarray:
        return pts - self.location

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "location": self.location.tolist(),
            "repulsion_matrix": self.repulsion_matrix.tolist(),
        }


class LineUnit(FieldUnit):
    """Restriction along the segment x̂₁–x̂₂."""

    kind = UnitKind.LINE

    def __init__(self, start: ArrayLike, end: ArrayLike, repulsion_matrix=None):
        super().__init__(repulsion_matrix)
        self.start = _point2(start, "line start")
        self.end = _point2(end, "line end")
        self._direction = self.end - self.start
        self._length_sq = float(_dot_rows(self._direction[None, :])[0])
        if self._length_sq == 0.0:
            raise ValueError("zero-length line")

    def _repulsion(self, pts: np.ndarray) -> np.ndarray:
        rho = ((pts - self.start) @ self._direction) / self._length_sq
        t = np.clip(rho, 0.0, 1.0)
        nearest = self.start + t[:, None] * self._direction
        # exact endpoint past the far end so the clamp matches a point unit at x̂₂
        nearest = np.where((rho >= 1.0)[:, None], self.end, nearest)
        return pts - nearest

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "start": self.start.tolist(),
            "end": self.end.tolist(),
            "repulsion_matrix": self.repulsion_matrix.tolist(),
        }


class RectangleUnit(FieldUnit):
    """
    Axis-aligned rectangular restriction given by two opposite corners.

    The repulsion vector is sign(x - c) ⊙ g(x), with c the rectangle center and
    g(x) = ½(|x - x̂₁| + |x - x̂₂| - |x̂₁ - x̂₂|) per component. g is evaluated in
    its clamp form so points on the closed rectangle get an exact zero vector.
    """

    kind = UnitKind.RECTANGLE

    def __init__(self, corner_1: ArrayLike, corner_2: ArrayLike, repulsion_matrix=None,
                 allow_degenerate: bool = False):
        super().__init__(repulsion_matrix)
        self.corner_1 = _point2(corner_1, "rectangle corner")
        self.corner_2 = _point2(corner_2, "rectangle corner")
        coincident = int(np.sum(self.corner_1 == self.corner_2))
        if coincident == 2 or (coincident == 1 and not allow_degenerate):
            raise ValueError("degenerate rectangle")
        self.lower = np.minimum(self.corner_1, self.corner_2)
        self.upper = np.maximum(self.corner_1, self.corner_2)
        self.center = (self.corner_1 + self.corner_2) / 2.0
        self.allow_degenerate = allow_degenerate

    def _repulsion(self, pts: np.ndarray) -> np.ndarray:
        g = np.maximum(self.lower - pts, 0.0) + np.maximum(pts - self.upper, 0.0)
        sign = np.where(pts - self.center >= 0.0, 1.0, -1.0)
        return sign * g

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "kind": self.kind.value,
            "corner_1": self.corner_1.tolist(),
            "corner_2": self.corner_2.tolist(),
            "repulsion_matrix": self.repulsion_matrix.tolist(),
        }
        if self.allow_degenerate:
            data["allow_degenerate"] = True
        return data


class EllipseUnit(FieldUnit):
    """Elliptic restriction {x : ‖B⁻¹(x - x̂)‖ ≤ 1}."""

    kind = UnitKind.ELLIPSE

    def __init__(self, location: ArrayLike, shape_matrix: ArrayLike, repulsion_matrix=None):
        super().__init__(repulsion_matrix)
        self.location = _point2(location, "ellipse location")
        b = np.array(shape_matrix, dtype=float)
        if b.shape != (2, 2) or not np.all(np.isfinite(b)):
            raise ValueError("ellipse shape matrix must be a finite 2x2 matrix")
        if abs(np.linalg.det(b)) <= 1e-12:
            raise ValueError("ellipse shape matrix not invertible")
        b.setflags(write=False)
        self.shape_matrix = b
        self._shape_inverse = np.linalg.inv(b)

    def _repulsion(self, pts: np.ndarray) -> np.ndarray:
        rel = pts - self.location
        radius = np.linalg.norm(rel @ self._shape_inverse.T, axis=1)
        factor = np.zeros_like(radius)
        outside = radius > 0.0
        factor[outside] = np.maximum(1.0 - 1.0 / radius[outside], 0.0)
        return factor[:, None] * rel

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "location": self.location.tolist(),
            "shape_matrix": self.shape_matrix.tolist(),
            "repulsion_matrix": self.repulsion_matrix.tolist(),
        }


class CollectionUnit(FieldUnit):
    """
    Ordered group of sub-units evaluated as one restriction.

    d̃² is the minimum over sub-units (ties go to the lowest index) and the
    repulsion vector is the one of that sub-unit; d² is the minimum sub-unit d².
    """

    kind = UnitKind.COLLECTION

    def __init__(self, units: Sequence[FieldUnit]):
        units = tuple(units)
        if not units:
            raise ValueError("empty collection")
        for unit in units:
            if not isinstance(unit, FieldUnit):
                raise TypeError(f"collection members must be field units, got {type(unit).__name__}")
        self.units = units
        self.repulsion_matrix = None

    def _evaluate(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        parts = [unit._evaluate(pts) for unit in self.units]
        vectors = np.stack([p[0] for p in parts])          # (K, N, 2)
        squared = np.stack([p[1] for p in parts])          # (K, N)
        scaled = np.stack([p[2] for p in parts])           # (K, N)
        chosen = np.argmin(scaled, axis=0)                  # first minimum wins
        columns = np.arange(pts.shape[0])
        return vectors[chosen, columns], squared.min(axis=0), scaled[chosen, columns]

    @property
    def max_eigenvalue(self) -> float:
        return max(unit.max_eigenvalue for unit in self.units)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "units": [unit.to_dict() for unit in self.units],
        }
