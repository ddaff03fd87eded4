"""Sensor trace parsing and semantic context matching.

A trace is JSONL, one reading per line:
    {"t": <ms>, "kind": "nav|gps|qr|scalar|orientation|clock", ...}
with kind-specific fields url, lat/lon, payload, sensor/value,
alpha/beta/gamma, minutes.

step() turns raw readings into deduplicated semantic changes: a change is
emitted only when a sensor's semantic value actually differs from its
previous one. Before any reading a location sensor is "not at any PoI" and
scalar/orientation sensors have no value, so a leading non-match emits
nothing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Union

from .appspec.model import Band, DimensionalSpace, MobileAppSpec, SensorDecl

EARTH_RADIUS_M = 6371000.0


class TraceSyntax(ValueError):
    def __init__(self, line: int, detail: str) -> None:
        super().__init__(f"trace line {line}: {detail}")
        self.line = line


class UnsortedTrace(ValueError):
    def __init__(self, line: int) -> None:
        super().__init__(f"trace line {line}: timestamps must be non-decreasing")
        self.line = line


class UnknownSensor(ValueError):
    def __init__(self, detail: str) -> None:
        super().__init__(detail)


# --- events ----------------------------------------------------------------

@dataclass(frozen=True)
class Nav:
    url: str


@dataclass(frozen=True)
class Gps:
    lat: float
    lon: float


@dataclass(frozen=True)
class Qr:
    payload: str


@dataclass(frozen=True)
class Scalar:
    sensor_id: str
    value: float


@dataclass(frozen=True)
class Orientation:
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class Clock:
    minutes: int


Payload = Union[Nav, Gps, Qr, Scalar, Orientation, Clock]


@dataclass(frozen=True)
class SimEvent:
    t_ms: int
    payload: Payload


# --- semantics ---------------------------------------------------------------

@dataclass(frozen=True)
class AtPoi:
    poi_id: str


@dataclass(frozen=True)
class LeftPois:
    pass


@dataclass(frozen=True)
class InBand:
    band_id: str


@dataclass(frozen=True)
class OrientationMode:
    mode: str  # "portrait" | "landscape"


Semantic = Union[AtPoi, LeftPois, InBand, OrientationMode]


def semantic_str(semantic: Semantic) -> str:
    if isinstance(semantic, AtPoi):
        return f"at-poi:{semantic.poi_id}"
    if isinstance(semantic, LeftPois):
        return "left-pois"
    if isinstance(semantic, InBand):
        return f"in-band:{semantic.band_id}"
    if isinstance(semantic, OrientationMode):
        return f"orientation:{semantic.mode}"
    raise TypeError(f"not a semantic value: {semantic!r}")


@dataclass(frozen=True)
class ContextChange:
    sensor_id: str
    t_ms: int
    semantic: Semantic


@dataclass
class SensorState:
    last: dict[str, "Semantic | None"] = field(default_factory=dict)

    def value(self, sensor: SensorDecl) -> "Semantic | None":
        if sensor.id in self.last:
            return self.last[sensor.id]
        return _baseline(sensor)


def _baseline(sensor: SensorDecl) -> "Semantic | None":
    # location sensors start "not at any PoI"; scalar/orientation start empty
    if sensor.kind in ("gps", "qr"):
        return LeftPois()
    return None


# --- trace parsing -----------------------------------------------------------

def _num(obj: dict, key: str, line: int) -> float:
    value = obj.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise TraceSyntax(line, f"field {key!r} must be a number")
    return float(value)


def _str_field(obj: dict, key: str, line: int) -> str:
    value = obj.get(key)
    if not isinstance(value, str):
        raise TraceSyntax(line, f"field {key!r} must be a string")
    return value


def parse_trace(data: bytes | str) -> list[SimEvent]:
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    events: list[SimEvent] = []
    last_t = -1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise TraceSyntax(line_no, f"bad JSON: {exc.msg}") from None
        if not isinstance(obj, dict):
            raise TraceSyntax(line_no, "line must be a JSON object")
        t = obj.get("t")
        if isinstance(t, bool) or not isinstance(t, int) or t < 0:
            raise TraceSyntax(line_no, "field 't' must be a non-negative integer")
        if t < last_t:
            raise UnsortedTrace(line_no)
        last_t = t
        kind = obj.get("kind")
        if kind == "nav":
            payload: Payload = Nav(_str_field(obj, "url", line_no))
        elif kind == "gps":
            payload = Gps(_num(obj, "lat", line_no), _num(obj, "lon", line_no))
        elif kind == "qr":
            payload = Qr(_str_field(obj, "payload", line_no))
        elif kind == "scalar":
            payload = Scalar(_str_field(obj, "sensor", line_no), _num(obj, "value", line_no))
        elif kind == "orientation":
            payload = Orientation(
                _num(obj, "alpha", line_no), _num(obj, "beta", line_no), _num(obj, "gamma", line_no)
            )
        elif kind == "clock":
            minutes = obj.get("minutes")
            if isinstance(minutes, bool) or not isinstance(minutes, int):
                raise TraceSyntax(line_no, "field 'minutes' must be an integer")
            payload = Clock(minutes)
        else:
            raise TraceSyntax(line_no, f"unknown kind {kind!r}")
        events.append(SimEvent(t, payload))
    return events


# --- matching ----------------------------------------------------------------

def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


def match_location(reading: "Gps | Qr", space: DimensionalSpace, sensor: SensorDecl) -> str | None:
    if isinstance(reading, Qr):
        for poi in space.pois:
            if poi.code is not None and poi.code == reading.payload:
                return poi.id
        return None
    best: tuple[float, float, str] | None = None
    best_id: str | None = None
    for poi in space.pois:
        if space.kind == "map2d":
            # x is longitude, y is latitude
            dist = haversine_m(reading.lat, reading.lon, poi.position.y, poi.position.x)
        else:
            dist = math.hypot(reading.lon - poi.position.x, reading.lat - poi.position.y)
        if dist > sensor.radius_m:
            continue
        order = float(poi.order) if poi.order is not None else math.inf
        key = (dist, order, poi.id)
        if best is None or key < best:
            best = key
            best_id = poi.id
    return best_id


def match_band(value: float, bands: list[Band]) -> str | None:
    for band in bands:
        if band.min <= value < band.max:
            return band.id
    return None


# --- stepping ----------------------------------------------------------------

def _sensor_for_kind(spec: MobileAppSpec, kinds: tuple[str, ...]) -> SensorDecl:
    matches = [s for s in spec.sensors if s.kind in kinds]
    if len(matches) != 1:
        raise UnknownSensor(
            f"event needs exactly one declared sensor of kind {'/'.join(kinds)}, found {len(matches)}"
        )
    return matches[0]


def step(
    state: SensorState, spec: MobileAppSpec, ev: SimEvent
) -> tuple[SensorState, ContextChange | None]:
    """Pure: returns the (possibly new) state and an optional change."""
    payload = ev.payload
    if isinstance(payload, Nav):
        return state, None

    if isinstance(payload, (Gps, Qr)):
        sensor = _sensor_for_kind(spec, ("gps",) if isinstance(payload, Gps) else ("qr",))
        poi_id = match_location(payload, spec.space, sensor)
        semantic: Semantic | None = AtPoi(poi_id) if poi_id is not None else LeftPois()
    elif isinstance(payload, Scalar):
        sensor_opt = spec.sensor_by_id(payload.sensor_id)
        if sensor_opt is None or sensor_opt.kind not in ("lux", "db"):
            raise UnknownSensor(f"no scalar sensor {payload.sensor_id!r}")
        sensor = sensor_opt
        band_id = match_band(payload.value, spec.space.bands)
        semantic = InBand(band_id) if band_id is not None else None
    elif isinstance(payload, Clock):
        sensor = _sensor_for_kind(spec, ("clock",))
        band_id = match_band(float(payload.minutes), spec.space.bands)
        semantic = InBand(band_id) if band_id is not None else None
    elif isinstance(payload, Orientation):
        sensor = _sensor_for_kind(spec, ("orientation",))
        semantic = OrientationMode("landscape" if abs(payload.gamma) > 45.0 else "portrait")
    else:
        raise TypeError(f"not a payload: {payload!r}")

    previous = state.value(sensor)
    if semantic == previous:
        return state, None
    next_state = SensorState(dict(state.last))
    next_state.last[sensor.id] = semantic
    if semantic is None:
        # leaving all bands has no semantic case to announce; silent update
        return next_state, None
    return next_state, ContextChange(sensor.id, ev.t_ms, semantic)
