"""
Restrictive potential field units and their aggregate field.
"""
from larpkit.field.potential_field import NearestUnit, PotentialField
from larpkit.field.units import (
    CollectionUnit,
    EllipseUnit,
    FieldEvaluation,
    FieldUnit,
    LineUnit,
    PointUnit,
    RectangleUnit,
    RepulsionMatrix,
    UnitKind,
)

__all__ = [
    "CollectionUnit",
    "EllipseUnit",
    "FieldEvaluation",
    "FieldUnit",
    "LineUnit",
    "NearestUnit",
    "PointUnit",
    "PotentialField",
    "RectangleUnit",
    "RepulsionMatrix",
    "UnitKind",
]
