"""Application data model.

All values are plain dataclasses; a spec is an immutable value after parsing
and may be shared freely across sessions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

CONTEXT_TYPE_KINDS = ("location", "orientation", "light", "noise", "time")

# sensor kind → the one context type it observes
SENSOR_KINDS: dict[str, str] = {
    "gps": "location",
    "qr": "location",
    "lux": "light",
    "db": "noise",
    "orientation": "orientation",
    "clock": "time",
}

SPACE_KINDS = ("map2d", "floorplan", "scalar_scale", "angle_scale", "time_scale")
LOCATION_SPACE_KINDS = frozenset({"map2d", "floorplan"})
SCALAR_SPACE_KINDS = frozenset({"scalar_scale", "angle_scale", "time_scale"})

POSITIONS = ("before", "after", "first_child", "last_child", "replace_children")

DEFAULT_GPS_RADIUS_M = 20.0

# A Concrete layer target equal to this token resolves to the matched PoI's
# target_url at fire time, letting one layer serve every PoI.
POI_TARGET_TOKEN = "poi:target-url"


@dataclass(frozen=True)
class PointInSpace:
    x: float
    y: float
    z: float | None = None


@dataclass(frozen=True)
class LiteralSource:
    value: str


@dataclass(frozen=True)
class ExtractSource:
    url: str
    xpath: str
    mode: str  # "text" | "attribute:<name>"


PropertySource = Union[LiteralSource, ExtractSource]


@dataclass(frozen=True)
class SensorDecl:
    id: str
    kind: str
    context_type: str
    radius_m: float = DEFAULT_GPS_RADIUS_M  # only meaningful for gps


@dataclass(frozen=True)
class Band:
    id: str
    label: str
    min: float
    max: float  # exclusive
    units: str


@dataclass
class PointOfInterest:
    id: str
    name: str
    position: PointInSpace
    target_url: str
    order: int | None = None
    code: str | None = None
    props: dict[str, PropertySource] = field(default_factory=dict)


@dataclass
class DimensionalSpace:
    kind: str
    image_url: str | None = None
    width: float | None = None
    height: float | None = None
    pois: list[PointOfInterest] = field(default_factory=list)
    bands: list[Band] = field(default_factory=list)
    links: list[tuple[str, str]] = field(default_factory=list)

    def poi_by_id(self, poi_id: str) -> PointOfInterest | None:
        for poi in self.pois:
            if poi.id == poi_id:
                return poi
        return None

    def band_by_id(self, band_id: str) -> Band | None:
        for band in self.bands:
            if band.id == band_id:
                return band
        return None


@dataclass(frozen=True)
class PatternTarget:
    glob: str  # `*` matches any span, including '/'


@dataclass(frozen=True)
class ConcreteTarget:
    url: str  # absolute URL or POI_TARGET_TOKEN


LayerTarget = Union[PatternTarget, ConcreteTarget]


@dataclass
class AugmenterInstance:
    kind: str
    anchor: str  # XPath source text; validated to parse
    position: str
    params: dict[str, "object"] = field(default_factory=dict)  # name → Binding


@dataclass
class Layer:
    id: str
    target: LayerTarget
    augmenters: list[AugmenterInstance] = field(default_factory=list)


@dataclass(frozen=True)
class ContextRule:
    sensor_id: str
    layer_id: str


@dataclass
class MobileAppSpec:
    name: str
    namespace: str
    filename: str
    version: int = 1
    context_types: set[str] = field(default_factory=set)
    sensors: list[SensorDecl] = field(default_factory=list)
    space: DimensionalSpace = field(default_factory=lambda: DimensionalSpace(kind="map2d"))
    layers: list[Layer] = field(default_factory=list)
    rules: list[ContextRule] = field(default_factory=list)
    locale: str = "en"

    def sensor_by_id(self, sensor_id: str) -> SensorDecl | None:
        for sensor in self.sensors:
            if sensor.id == sensor_id:
                return sensor
        return None

    def layer_by_id(self, layer_id: str) -> Layer | None:
        for layer in self.layers:
            if layer.id == layer_id:
                return layer
        return None


def parse_extract_mode(mode: str) -> tuple[str, str | None]:
    """'text' → ("text", None); 'attribute:<name>' → ("attribute", name)."""
    if mode == "text":
        return ("text", None)
    if mode.startswith("attribute:") and len(mode) > len("attribute:"):
        return ("attribute", mode.split(":", 1)[1])
    raise ValueError(f"bad extract mode {mode!r}")
