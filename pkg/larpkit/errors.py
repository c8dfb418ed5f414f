"""Exception types raised across the toolkit."""


class ScenarioParseError(ValueError):
    """Scenario file is not valid JSON."""


class ScenarioValidationError(ValueError):
    """Scenario content violates a schema or unit invariant."""


class DecompositionError(ValueError):
    """Cell decomposition could not terminate within the depth cap."""


class NoPathError(ValueError):
    """Start and goal lie in disconnected parts of the routing network."""


class OutOfFieldError(ValueError):
    """A route endpoint lies outside the decomposed field."""


class BlockedEndpointError(OutOfFieldError):
    """A route endpoint lies in a cell excluded by the zone block threshold."""


class InvalidForceStateError(ValueError):
    """A force planner evaluated its force on a restriction (zero distance)."""

    def __init__(self, message: str, partial_route=None):
        super().__init__(message)
        self.partial_route = partial_route


class ArtifactWriteError(IOError):
    """An output artifact could not be written."""
