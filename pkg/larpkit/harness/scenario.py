"""
Scenario files: JSON schema, validation and default filling.

A scenario names a square field, the restriction units inside it, the start
and goal of the routing task, and optional overrides for the decomposition,
the search and each baseline planner. Unit entries carry an explicit ``kind``
tag and matrices are written row-major.
"""
import json
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from larpkit.config.config_manager import PLANNER_NAMES, ConfigManager
from larpkit.errors import ArtifactWriteError, ScenarioParseError, ScenarioValidationError
from larpkit.field.potential_field import PotentialField
from larpkit.field.units import (
    CollectionUnit,
    EllipseUnit,
    FieldUnit,
    LineUnit,
    PointUnit,
    RectangleUnit,
)
from larpkit.planning.baselines import PlannerKind, PlannerParams
from larpkit.planning.decomposition import DecompositionParams, ZoneConfig, square_bounds
from larpkit.planning.network import SearchConfig
from larpkit.utils import setup_logger

logger = setup_logger(__name__)

Point = Tuple[float, float]
Matrix = List[List[float]]

BASELINE_NAMES = [name for name in PLANNER_NAMES if name != PlannerKind.LARP.value]


def _identity() -> Matrix:
    return [[1.0, 0.0], [0.0, 1.0]]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class _UnitSpec(_Strict):
    repulsion_matrix: Matrix = Field(default_factory=_identity,
                                     description="Symmetric positive-definite 2x2 matrix")

    @field_validator("repulsion_matrix")
    @classmethod
    def validate_matrix_shape(cls, v: Matrix) -> Matrix:
        if len(v) != 2 or any(len(row) != 2 for row in v):
            raise ValueError("repulsion matrix must be 2x2")
        return v

    @model_validator(mode="after")
    def validate_unit(self):
        # unit constructors enforce every geometric invariant
        self.build()
        return self

    def build(self) -> FieldUnit:
        raise NotImplementedError


class PointSpec(_UnitSpec):
    kind: Literal["point"] = "point"
    location: Point

    def build(self) -> FieldUnit:
        return PointUnit(self.location, self.repulsion_matrix)


class LineSpec(_UnitSpec):
    kind: Literal["line"] = "line"
    start: Point
    end: Point

    def build(self) -> FieldUnit:
        return LineUnit(self.start, self.end, self.repulsion_matrix)


class RectangleSpec(_UnitSpec):
    kind: Literal["rectangle"] = "rectangle"
    corner_1: Point
    corner_2: Point
    allow_degenerate: bool = False

    def build(self) -> FieldUnit:
        return RectangleUnit(self.corner_1, self.corner_2, self.repulsion_matrix,
                             allow_degenerate=self.allow_degenerate)


class EllipseSpec(_UnitSpec):
    kind: Literal["ellipse"] = "ellipse"
    location: Point
    shape_matrix: Matrix

    @field_validator("shape_matrix")
    @classmethod
    def validate_shape(cls, v: Matrix) -> Matrix:
        if len(v) != 2 or any(len(row) != 2 for row in v):
            raise ValueError("ellipse shape matrix must be 2x2")
        return v

    def build(self) -> FieldUnit:
        return EllipseUnit(self.location, self.shape_matrix, self.repulsion_matrix)


class CollectionSpec(_Strict):
    kind: Literal["collection"] = "collection"
    units: List["UnitSpec"]

    @field_validator("units")
    @classmethod
    def validate_non_empty(cls, v):
        if not v:
            raise ValueError("empty collection")
        return v

    def build(self) -> FieldUnit:
        return CollectionUnit([unit.build() for unit in self.units])


UnitSpec = Annotated[
    Union[PointSpec, LineSpec, RectangleSpec, EllipseSpec, CollectionSpec],
    Field(discriminator="kind"),
]
CollectionSpec.model_rebuild()


class FieldSpec(_Strict):
    """Square field given by center and size, or by a rectangular extent."""

    center: Optional[Point] = None
    size: Optional[float] = None
    bounds: Optional[Tuple[float, float, float, float]] = None

    @model_validator(mode="after")
    def resolve_square(self):
        if self.center is None and self.size is None:
            if self.bounds is None:
                raise ValueError("field needs either center and size or bounds")
            self.center, self.size = square_bounds(*self.bounds)
        elif self.center is None or self.size is None:
            raise ValueError("field center and size must be given together")
        if self.size <= 0:
            raise ValueError("field size must be positive")
        return self

    def contains(self, point: Point) -> bool:
        half = self.size / 2.0
        return all(abs(p - c) <= half + 1e-9 for p, c in zip(point, self.center))


class DecompositionSpec(_Strict):
    n_min: Optional[float] = None
    n_max: Optional[float] = None
    boundaries: Optional[List[float]] = None
    max_depth: Optional[int] = None

    @field_validator("boundaries")
    @classmethod
    def validate_boundaries(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None:
            ZoneConfig(tuple(v))
        return v


class SearchSpec(_Strict):
    beta: Optional[float] = None
    corner_adjacency: Optional[bool] = None
    zone_block_threshold: Optional[int] = None
    cost_model: Optional[Literal["integrated", "zone"]] = None
    sample_step: Optional[float] = None


class PlannerOverrides(_Strict):
    zeta: Optional[float] = None
    eta: Optional[float] = None
    step_size: Optional[float] = None
    repulsion_distance: Optional[float] = None
    attraction_distance: Optional[float] = None
    m: Optional[float] = None
    max_iters: Optional[int] = None
    goal_snap_radius: Optional[float] = None


class Scenario(_Strict):
    """
    Routing scenario.

    Attributes:
        name: Scenario identifier
        description: Free text
        field: Square field geometry
        start: Start location
        goal: Goal location
        units: Restriction unit definitions
        decomposition: Cell size and zone overrides
        search: Search overrides
        planner_params: Hyperparameter overrides per baseline planner
    """

    name: str
    description: str = ""
    field: FieldSpec
    start: Point
    goal: Point
    units: List[UnitSpec] = Field(default_factory=list)
    decomposition: DecompositionSpec = Field(default_factory=DecompositionSpec)
    search: SearchSpec = Field(default_factory=SearchSpec)
    planner_params: Dict[str, PlannerOverrides] = Field(default_factory=dict)

    @field_validator("planner_params")
    @classmethod
    def validate_planner_names(cls, v: Dict[str, PlannerOverrides]) -> Dict[str, PlannerOverrides]:
        unknown = [name for name in v if name not in BASELINE_NAMES]
        if unknown:
            raise ValueError(
                f"unknown planner(s) {unknown}; overrides apply to {BASELINE_NAMES}"
            )
        return v

    @model_validator(mode="after")
    def validate_endpoints(self):
        for label, point in (("start", self.start), ("goal", self.goal)):
            if not self.field.contains(point):
                raise ValueError(f"{label} {point} lies outside the field")
        if self.decomposition.n_max is not None and self.decomposition.n_max > self.field.size:
            raise ValueError("n_max exceeds the field size")
        return self

    def build_units(self) -> List[FieldUnit]:
        return [unit.build() for unit in self.units]

    def build_field(self) -> PotentialField:
        return PotentialField(self.build_units())

    def decomposition_params(self) -> DecompositionParams:
        return DecompositionParams.for_field(
            self.field.center, self.field.size,
            n_min=self.decomposition.n_min, n_max=self.decomposition.n_max,
        )

    def zone_config(self) -> ZoneConfig:
        if self.decomposition.boundaries is None:
            return ZoneConfig()
        return ZoneConfig(tuple(self.decomposition.boundaries))

    def search_config(self, beta: Optional[float] = None) -> SearchConfig:
        """Search options; an explicit beta overrides the scenario value."""
        settings = {k: v for k, v in self.search.model_dump().items() if v is not None}
        if beta is not None:
            settings["beta"] = beta
        return SearchConfig(**settings)

    def planner_params_for(self, planner: str) -> PlannerParams:
        overrides = self.planner_params.get(planner)
        values = overrides.model_dump(exclude_none=True) if overrides else {}
        return PlannerParams.from_mapping(values)


def fill_defaults(scenario: Scenario, config: Optional[ConfigManager] = None) -> Scenario:
    """
    Copy of a scenario with every optional setting resolved.

    Scenario values win over the configuration file.
    """
    config = config or ConfigManager()
    size = scenario.field.size
    decomposition = scenario.decomposition.model_copy(update={
        "n_min": scenario.decomposition.n_min
        if scenario.decomposition.n_min is not None
        else size * config.get("decomposition.n_min_fraction", 1 / 64),
        "n_max": scenario.decomposition.n_max
        if scenario.decomposition.n_max is not None
        else size * config.get("decomposition.n_max_fraction", 1 / 8),
        "boundaries": scenario.decomposition.boundaries
        if scenario.decomposition.boundaries is not None
        else list(config.get("decomposition.boundaries", [])),
        "max_depth": scenario.decomposition.max_depth
        if scenario.decomposition.max_depth is not None
        else config.get("decomposition.max_depth", 32),
    })
    search = scenario.search.model_copy(update={
        "beta": scenario.search.beta
        if scenario.search.beta is not None else config.get("search.beta", 5.0),
        "corner_adjacency": scenario.search.corner_adjacency
        if scenario.search.corner_adjacency is not None
        else config.get("search.corner_adjacency", False),
        "zone_block_threshold": scenario.search.zone_block_threshold
        if scenario.search.zone_block_threshold is not None
        else config.get("search.zone_block_threshold"),
        "cost_model": scenario.search.cost_model
        if scenario.search.cost_model is not None
        else config.get("search.cost_model", "integrated"),
        # edge areas use the same quadrature as the route metrics
        "sample_step": scenario.search.sample_step
        if scenario.search.sample_step is not None
        else config.get("metrics.max_step", 0.05),
    })
    data = scenario.model_dump()
    data.update(decomposition=decomposition.model_dump(), search=search.model_dump())
    try:
        planner_params = {}
        for name in BASELINE_NAMES:
            merged = config.planner_settings(name)
            if name in scenario.planner_params:
                merged.update(scenario.planner_params[name].model_dump(exclude_none=True))
            planner_params[name] = PlannerParams.from_mapping(merged).to_dict()
        data["planner_params"] = planner_params
        filled = _validate(data, source=scenario.name)
        # settings that only fail once combined with the defaults
        filled.decomposition_params()
        filled.zone_config()
        filled.search_config()
    except ScenarioValidationError:
        raise
    except ValueError as exc:
        raise ScenarioValidationError(f"{scenario.name}: {exc}") from exc
    return filled


def _validate(data: Any, source: str) -> Scenario:
    try:
        return Scenario.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in error['loc']) or '<root>'}: {error['msg']}"
            for error in exc.errors()
        )
        raise ScenarioValidationError(f"{source}: {problems}") from exc
    except ValueError as exc:
        raise ScenarioValidationError(f"{source}: {exc}") from exc


def load_scenario(path: Union[str, Path], config: Optional[ConfigManager] = None) -> Scenario:
    """
    Load, validate and default-fill a scenario file.

    Args:
        path: Scenario JSON path
        config: Configuration supplying defaults

    Returns:
        Scenario

    Raises:
        ScenarioParseError: If the file is not UTF-8 encoded JSON
        ScenarioValidationError: If the content violates the schema or a unit invariant
        IOError: If the file cannot be read
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(
            f"{path}: not valid UTF-8 at byte {exc.start}: {exc.reason}"
        ) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    scenario = fill_defaults(_validate(data, source=str(path)), config)
    logger.info(f"Loaded scenario '{scenario.name}' from {path}: {len(scenario.units)} units")
    return scenario


def dump_scenario(scenario: Scenario, path: Union[str, Path]) -> None:
    """Write a scenario as indented JSON."""
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(scenario.model_dump(mode="json"), indent=2) + "\n",
                        encoding="utf-8")
    except OSError as exc:
        raise ArtifactWriteError(f"Could not write scenario to {path}: {exc}") from exc
