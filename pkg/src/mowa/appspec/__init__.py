"""Declarative application model: types, XML form, validation, bindings."""

from .model import (
    AugmenterInstance,
    Band,
    ConcreteTarget,
    ContextRule,
    DimensionalSpace,
    ExtractSource,
    Layer,
    LiteralSource,
    LOCATION_SPACE_KINDS,
    MobileAppSpec,
    PatternTarget,
    PointInSpace,
    PointOfInterest,
    SCALAR_SPACE_KINDS,
    SENSOR_KINDS,
    SensorDecl,
    CONTEXT_TYPE_KINDS,
    SPACE_KINDS,
    POI_TARGET_TOKEN,
)
from .bindings import (
    Binding,
    ExtractBinding,
    ExtractionFailed,
    LiteralBinding,
    MissingPoiContext,
    PoiFieldBinding,
    PoiPropBinding,
    UnknownProp,
    format_bind,
    parse_bind,
    resolve_binding,
)
from .xmlio import (
    DanglingReference,
    InvalidSpec,
    SchemaViolation,
    XmlSyntax,
    parse_spec,
    serialize_spec,
)
from .validate import Issue, ValidationReport, validate_spec

__all__ = [
    "AugmenterInstance",
    "Band",
    "ConcreteTarget",
    "ContextRule",
    "DimensionalSpace",
    "ExtractSource",
    "Layer",
    "LiteralSource",
    "LOCATION_SPACE_KINDS",
    "MobileAppSpec",
    "PatternTarget",
    "PointInSpace",
    "PointOfInterest",
    "SCALAR_SPACE_KINDS",
    "SENSOR_KINDS",
    "SensorDecl",
    "CONTEXT_TYPE_KINDS",
    "SPACE_KINDS",
    "POI_TARGET_TOKEN",
    "Binding",
    "ExtractBinding",
    "ExtractionFailed",
    "LiteralBinding",
    "MissingPoiContext",
    "PoiFieldBinding",
    "PoiPropBinding",
    "UnknownProp",
    "format_bind",
    "parse_bind",
    "resolve_binding",
    "DanglingReference",
    "InvalidSpec",
    "SchemaViolation",
    "XmlSyntax",
    "parse_spec",
    "serialize_spec",
    "Issue",
    "ValidationReport",
    "validate_spec",
]
