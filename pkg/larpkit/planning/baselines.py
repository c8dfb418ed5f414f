"""
Force-following baseline planners.

Four planners share one integrator that steps a fixed distance γ along the
normalized force until the goal test passes, the iteration budget runs out, or
the motion stalls:

- PM: penalty method, attraction ζ(x_g - x) plus -η·σ·∇σ
- APF: classic artificial potential field using the nearest unit by distance
- APF*: APF using the nearest unit by scaled distance
- M-APF: APF attraction with a goal-distance weighted repulsion
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from larpkit.analysis.route_metrics import GOAL_TOLERANCE_SQ, Route
from larpkit.errors import InvalidForceStateError
from larpkit.field.potential_field import PotentialField
from larpkit.field.units import ArrayLike, CollectionUnit
from larpkit.utils.logger import setup_logger

STALL_FORCE = 1e-9
STALL_WINDOW = 50


class PlannerKind(str, Enum):
    PM = "PM"
    APF = "APF"
    APF_STAR = "APF*"
    MAPF = "M-APF"
    LARP = "Larp"

    @classmethod
    def parse(cls, name: str) -> "PlannerKind":
        for kind in cls:
            if kind.value.lower() == name.lower():
                return kind
        valid = ", ".join(kind.value for kind in cls)
        raise ValueError(f"Unknown planner '{name}'. Valid planners: {valid}")


class Termination(str, Enum):
    GOAL_REACHED = "GoalReached"
    MAX_ITERS = "MaxIters"
    STALLED = "Stalled"


@dataclass(frozen=True)
class PlannerParams:
    """
    Hyperparameters of the force-following planners.

    Attributes:
        zeta: Attraction gain ζ
        eta: Repulsion gain η
        step_size: Step length γ in meters
        repulsion_distance: Distance d_o within which repulsion is active
        attraction_distance: Distance d_g beyond which attraction is capped
        m: M-APF goal-distance exponent
        max_iters: Iteration budget
        goal_snap_radius: PM appends the goal when ending within this radius
    """

    zeta: float = 1.0
    eta: float = 1.0
    step_size: float = 0.1
    repulsion_distance: float = 5.0
    attraction_distance: float = 5.0
    m: float = 2.0
    max_iters: int = 5000
    goal_snap_radius: float = math.sqrt(GOAL_TOLERANCE_SQ)

    def __post_init__(self):
        for name in ("zeta", "eta", "goal_snap_radius"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {value}")
        for name in ("step_size", "repulsion_distance", "attraction_distance", "m"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValueError(f"max_iters must be an integer >= 1, got {self.max_iters}")
        object.__setattr__(self, "max_iters", int(self.max_iters))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "PlannerParams":
        """Build from a settings mapping, ignoring unrelated keys."""
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in values.items() if k in known and v is not None})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class TraceResult:
    route: Route
    terminated_by: Termination
    iterations: int


def attraction_force(x: np.ndarray, goal: np.ndarray, params: PlannerParams) -> np.ndarray:
    """Quadratic-well attraction within d_g, constant magnitude ζ·d_g beyond it."""
    delta = goal - x
    distance = math.hypot(delta[0], delta[1])
    if distance <= params.attraction_distance:
        return params.zeta * delta
    return params.zeta * params.attraction_distance * delta / distance


def pm_step_force(x: ArrayLike, goal: ArrayLike, field: PotentialField,
                  params: PlannerParams) -> np.ndarray:
    """
    Penalty-method force ζ(x_g - x) - η·σ(x)·∇σ(x).

    The penalty is p(σ) = ½σ², so its derivative scales the gradient by σ.
    """
    x = np.asarray(x, dtype=float)
    goal = np.asarray(goal, dtype=float)
    attraction = params.zeta * (goal - x)
    if not len(field):
        return attraction
    sigma = field.potential(x)
    return attraction - params.eta * sigma * field.potential_gradient(x)


def _nearest_distance(x: np.ndarray, field: PotentialField,
                      scaled: bool) -> Tuple[Optional[np.ndarray], Optional[float]]:
    """
    Repulsion vector and distance of the nearest restriction.

    A collection ranks by its closest member but reports the x̄ of its
    scaled-closest one, so collections are descended to the member that
    attains the distance.
    """
    nearest = field.nearest(x, scaled=scaled)
    if nearest is None:
        return None, None
    unit, vector = nearest.unit, nearest.repulsion_vector
    while isinstance(unit, CollectionUnit):
        member = PotentialField(unit.units).nearest(x, scaled=scaled)
        unit, vector = member.unit, member.repulsion_vector
    distance = math.sqrt(nearest.distance_sq)
    if distance == 0.0:
        raise InvalidForceStateError(
            f"Force evaluated on restriction unit {nearest.index} at {tuple(x.tolist())}"
        )
    return vector, distance


def apf_repulsion(x: np.ndarray, field: PotentialField, params: PlannerParams,
                  scaled: bool = False) -> np.ndarray:
    """η(1/d - 1/d_o)(1/d²)·x̄ for the nearest unit when d ≤ d_o, else zero."""
    vector, distance = _nearest_distance(x, field, scaled)
    if vector is None or distance > params.repulsion_distance:
        return np.zeros(2)
    gain = params.eta * (1.0 / distance - 1.0 / params.repulsion_distance) / distance ** 2
    return gain * vector


def apf_forces(x: ArrayLike, goal: ArrayLike, field: PotentialField, params: PlannerParams,
               scaled: bool = False) -> np.ndarray:
    """
    Attraction plus nearest-unit repulsion.

    Args:
        x: Current position
        goal: Goal position
        field: Potential field
        params: Planner hyperparameters
        scaled: Rank and measure units by scaled distance (APF*)

    Returns:
        Force vector

    Raises:
        InvalidForceStateError: If x lies on a restriction
    """
    x = np.asarray(x, dtype=float)
    goal = np.asarray(goal, dtype=float)
    return attraction_force(x, goal, params) + apf_repulsion(x, field, params, scaled)


def mapf_repulsion(x: ArrayLike, goal: ArrayLike, field: PotentialField,
                   params: PlannerParams) -> np.ndarray:
    """
    Goal-distance weighted repulsion.

    With r = ‖x - x_g‖ and k = 1/d - 1/d_o the magnitude is
    η·k·r^(m-3) + η·m·k²·r^m, directed along x̄/‖x̄‖ of the nearest unit, and
    zero beyond d_o. At the goal itself the repulsion is zero.
    """
    x = np.asarray(x, dtype=float)
    goal = np.asarray(goal, dtype=float)
    vector, distance = _nearest_distance(x, field, scaled=False)
    if vector is None or distance > params.repulsion_distance:
        return np.zeros(2)
    r = math.hypot(goal[0] - x[0], goal[1] - x[1])
    if r == 0.0:
        return np.zeros(2)
    k = 1.0 / distance - 1.0 / params.repulsion_distance
    magnitude = params.eta * k * r ** (params.m - 3.0) + params.eta * params.m * k * k * r ** params.m
    direction = vector / distance
    return magnitude * direction


def mapf_forces(x: ArrayLike, goal: ArrayLike, field: PotentialField,
                params: PlannerParams) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    goal = np.asarray(goal, dtype=float)
    return attraction_force(x, goal, params) + mapf_repulsion(x, goal, field, params)


_FORCES: Dict[PlannerKind, Callable[..., np.ndarray]] = {
    PlannerKind.PM: pm_step_force,
    PlannerKind.APF: lambda x, g, f, p: apf_forces(x, g, f, p, scaled=False),
    PlannerKind.APF_STAR: lambda x, g, f, p: apf_forces(x, g, f, p, scaled=True),
    PlannerKind.MAPF: mapf_forces,
}


def _within_goal(x: np.ndarray, goal: np.ndarray) -> bool:
    delta = x - goal
    return delta[0] * delta[0] + delta[1] * delta[1] <= GOAL_TOLERANCE_SQ


class BaselinePlanner:
    """Force-following planner of one kind."""

    def __init__(self, kind: PlannerKind, params: Optional[PlannerParams] = None):
        """
        Initialize the planner.

        Args:
            kind: Any planner kind except Larp
            params: Hyperparameters, defaults when omitted
        """
        kind = PlannerKind(kind)
        if kind not in _FORCES:
            raise ValueError(f"{kind.value} is not a force-following planner")
        self.kind = kind
        self.params = params or PlannerParams()
        self.logger = setup_logger(__name__)

    def force(self, x: ArrayLike, goal: ArrayLike, field: PotentialField) -> np.ndarray:
        return _FORCES[self.kind](np.asarray(x, dtype=float), np.asarray(goal, dtype=float),
                                  field, self.params)

    def follow(self, start: ArrayLike, goal: ArrayLike, field: PotentialField) -> TraceResult:
        """
        Integrate x ← x + γ·F(x)/‖F(x)‖ from start.

        Args:
            start: Start position
            goal: Goal position
            field: Potential field

        Returns:
            TraceResult with the visited positions

        Raises:
            InvalidForceStateError: If the trace lands on a restriction; the
                trace so far is attached as ``partial_route``
        """
        params = self.params
        x = np.asarray(start, dtype=float).copy()
        goal = np.asarray(goal, dtype=float)
        points: List[np.ndarray] = [x]
        terminated_by = Termination.MAX_ITERS
        iterations = 0

        while True:
            if _within_goal(x, goal):
                terminated_by = Termination.GOAL_REACHED
                break
            if iterations >= params.max_iters:
                terminated_by = Termination.MAX_ITERS
                break
            try:
                force = self.force(x, goal, field)
            except InvalidForceStateError as exc:
                exc.partial_route = Route(points)
                raise
            norm = math.hypot(force[0], force[1])
            if norm < STALL_FORCE:
                terminated_by = Termination.STALLED
                break
            x = x + params.step_size * force / norm
            points.append(x)
            iterations += 1
            if len(points) > STALL_WINDOW:
                moved = points[-1] - points[-1 - STALL_WINDOW]
                if math.hypot(moved[0], moved[1]) < params.step_size / 10.0:
                    terminated_by = Termination.STALLED
                    if _within_goal(x, goal):
                        terminated_by = Termination.GOAL_REACHED
                    break

        if self.kind is PlannerKind.PM:
            gap = math.hypot(goal[0] - x[0], goal[1] - x[1])
            if 0.0 < gap <= params.goal_snap_radius:
                points.append(goal.copy())
                terminated_by = Termination.GOAL_REACHED

        self.logger.info(
            f"{self.kind.value} trace terminated: {terminated_by.value} after {iterations} iterations"
        )
        return TraceResult(route=Route(points), terminated_by=terminated_by, iterations=iterations)


def follow(planner: PlannerKind, start: ArrayLike, goal: ArrayLike, field: PotentialField,
           params: Optional[PlannerParams] = None) -> TraceResult:
    """Run one force-following planner from start toward goal."""
    return BaselinePlanner(planner, params).follow(start, goal, field)
