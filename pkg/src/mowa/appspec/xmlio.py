"""Canonical XML form of application specs.

Parsing is strict: unknown elements or attributes, bad numbers, and dangling
references are rejected outright (the authoring tool is the only producer, so
silent tolerance would just hide drift).

Serialization is canonical: fixed element order, attributes sorted by name,
2-space indent, UTF-8. parse(serialize(spec)) == spec for any spec that
validates, and serialize∘parse∘serialize == serialize.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .bindings import Binding, LiteralBinding, format_bind, parse_bind
from .model import (
    AugmenterInstance,
    Band,
    ConcreteTarget,
    ContextRule,
    CONTEXT_TYPE_KINDS,
    DimensionalSpace,
    ExtractSource,
    Layer,
    LiteralSource,
    MobileAppSpec,
    PatternTarget,
    POSITIONS,
    PointInSpace,
    PointOfInterest,
    SENSOR_KINDS,
    SensorDecl,
    SPACE_KINDS,
    parse_extract_mode,
)


class XmlSyntax(ValueError):
    """Input is not well-formed XML."""

    def __init__(self, position: tuple[int, int], detail: str) -> None:
        super().__init__(f"XML syntax error at line {position[0]}, column {position[1]}: {detail}")
        self.position = position


class SchemaViolation(ValueError):
    """Well-formed XML that is outside the mowa-app schema."""

    def __init__(self, path: str, detail: str) -> None:
        super().__init__(f"{path}: {detail}")
        self.path = path


class DanglingReference(ValueError):
    """A rule or link names an id that does not exist."""

    def __init__(self, ref: str, detail: str = "") -> None:
        super().__init__(f"dangling reference {ref!r}" + (f": {detail}" if detail else ""))
        self.ref = ref


class InvalidSpec(ValueError):
    """Spec has validation errors where a clean one is required."""

    def __init__(self, detail: str, report: object | None = None) -> None:
        super().__init__(detail)
        self.report = report


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _require(el: ET.Element, path: str, name: str) -> str:
    value = el.get(name)
    if value is None:
        raise SchemaViolation(path, f"missing attribute {name!r}")
    return value


def _check_attrs(el: ET.Element, path: str, allowed: set[str]) -> None:
    for name in el.attrib:
        if name not in allowed:
            raise SchemaViolation(path, f"unknown attribute {name!r}")


def _check_no_text(el: ET.Element, path: str) -> None:
    if (el.text and el.text.strip()) or (el.tail and el.tail.strip()):
        raise SchemaViolation(path, "unexpected text content")


def _float(raw: str, path: str, name: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise SchemaViolation(path, f"attribute {name!r} is not a number: {raw!r}") from None
    return value


def _int(raw: str, path: str, name: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise SchemaViolation(path, f"attribute {name!r} is not an integer: {raw!r}") from None


def _parse_prop(el: ET.Element, path: str) -> tuple[str, LiteralSource | ExtractSource]:
    _check_attrs(el, path, {"name", "source", "value", "url", "xpath", "mode"})
    _check_no_text(el, path)
    if len(el) != 0:
        raise SchemaViolation(path, "prop takes no children")
    name = _require(el, path, "name")
    source = _require(el, path, "source")
    if source == "literal":
        value = _require(el, path, "value")
        for banned in ("url", "xpath", "mode"):
            if el.get(banned) is not None:
                raise SchemaViolation(path, f"literal prop cannot carry {banned!r}")
        return name, LiteralSource(value)
    if source == "extract":
        if el.get("value") is not None:
            raise SchemaViolation(path, "extract prop cannot carry 'value'")
        url = _require(el, path, "url")
        xpath = _require(el, path, "xpath")
        mode = el.get("mode", "text")
        try:
            parse_extract_mode(mode)
        except ValueError as exc:
            raise SchemaViolation(path, str(exc)) from None
        return name, ExtractSource(url, xpath, mode)
    raise SchemaViolation(path, f"unknown prop source {source!r}")


def _parse_poi(el: ET.Element, path: str) -> PointOfInterest:
    _check_attrs(el, path, {"id", "name", "x", "y", "z", "order", "target-url", "code"})
    _check_no_text(el, path)
    poi_id = _require(el, path, "id")
    name = _require(el, path, "name")
    x = _float(_require(el, path, "x"), path, "x")
    y = _float(_require(el, path, "y"), path, "y")
    z_raw = el.get("z")
    z = _float(z_raw, path, "z") if z_raw is not None else None
    order_raw = el.get("order")
    order = _int(order_raw, path, "order") if order_raw is not None else None
    if order is not None and order < 1:
        raise SchemaViolation(path, "order must be a positive integer")
    target_url = _require(el, path, "target-url")
    code = el.get("code")
    props: dict[str, LiteralSource | ExtractSource] = {}
    for child in el:
        if child.tag != "prop":
            raise SchemaViolation(f"{path}/{child.tag}", "unknown element")
        prop_name, source = _parse_prop(child, f"{path}/prop[@name={child.get('name')!r}]")
        if prop_name in props:
            raise SchemaViolation(path, f"duplicate prop {prop_name!r}")
        props[prop_name] = source
    return PointOfInterest(poi_id, name, PointInSpace(x, y, z), target_url, order, code, props)


def _parse_space(el: ET.Element, path: str) -> DimensionalSpace:
    _check_attrs(el, path, {"kind", "image", "width", "height"})
    _check_no_text(el, path)
    kind = _require(el, path, "kind")
    if kind not in SPACE_KINDS:
        raise SchemaViolation(path, f"unknown space kind {kind!r}")
    width_raw = el.get("width")
    height_raw = el.get("height")
    space = DimensionalSpace(
        kind=kind,
        image_url=el.get("image"),
        width=_float(width_raw, path, "width") if width_raw is not None else None,
        height=_float(height_raw, path, "height") if height_raw is not None else None,
    )
    for child in el:
        cpath = f"{path}/{child.tag}"
        if child.tag == "poi":
            space.pois.append(_parse_poi(child, f"{path}/poi[@id={child.get('id')!r}]"))
        elif child.tag == "link":
            _check_attrs(child, cpath, {"from", "to"})
            _check_no_text(child, cpath)
            space.links.append((_require(child, cpath, "from"), _require(child, cpath, "to")))
        elif child.tag == "band":
            _check_attrs(child, cpath, {"id", "label", "min", "max", "units"})
            _check_no_text(child, cpath)
            space.bands.append(
                Band(
                    id=_require(child, cpath, "id"),
                    label=_require(child, cpath, "label"),
                    min=_float(_require(child, cpath, "min"), cpath, "min"),
                    max=_float(_require(child, cpath, "max"), cpath, "max"),
                    units=_require(child, cpath, "units"),
                )
            )
        else:
            raise SchemaViolation(cpath, "unknown element")
    for from_id, to_id in space.links:
        for ref in (from_id, to_id):
            if space.poi_by_id(ref) is None:
                raise DanglingReference(ref, "link endpoint is not a PoI")
    return space


def _parse_param(el: ET.Element, path: str) -> tuple[str, Binding]:
    _check_attrs(el, path, {"name", "bind", "value"})
    _check_no_text(el, path)
    if len(el) != 0:
        raise SchemaViolation(path, "param takes no children")
    name = _require(el, path, "name")
    bind = el.get("bind")
    value = el.get("value")
    if bind is not None and value is not None:
        raise SchemaViolation(path, "param takes bind or value, not both")
    if bind is None:
        if value is None:
            raise SchemaViolation(path, "param needs bind or value")
        return name, LiteralBinding(value)
    try:
        return name, parse_bind(bind)
    except ValueError as exc:
        raise SchemaViolation(path, str(exc)) from None


def _parse_augmenter(el: ET.Element, path: str) -> AugmenterInstance:
    _check_attrs(el, path, {"kind", "anchor", "position"})
    _check_no_text(el, path)
    kind = _require(el, path, "kind")
    anchor = _require(el, path, "anchor")
    position = _require(el, path, "position")
    if position not in POSITIONS:
        raise SchemaViolation(path, f"unknown position {position!r}")
    params: dict[str, Binding] = {}
    for child in el:
        if child.tag != "param":
            raise SchemaViolation(f"{path}/{child.tag}", "unknown element")
        pname, binding = _parse_param(child, f"{path}/param[@name={child.get('name')!r}]")
        if pname in params:
            raise SchemaViolation(path, f"duplicate param {pname!r}")
        params[pname] = binding
    return AugmenterInstance(kind, anchor, position, params)


def _parse_layer(el: ET.Element, path: str) -> Layer:
    _check_attrs(el, path, {"id", "target", "value"})
    _check_no_text(el, path)
    layer_id = _require(el, path, "id")
    target_kind = _require(el, path, "target")
    value = _require(el, path, "value")
    if target_kind == "pattern":
        target: PatternTarget | ConcreteTarget = PatternTarget(value)
    elif target_kind == "url":
        target = ConcreteTarget(value)
    else:
        raise SchemaViolation(path, f"unknown target kind {target_kind!r}")
    layer = Layer(layer_id, target)
    for child in el:
        if child.tag != "augmenter":
            raise SchemaViolation(f"{path}/{child.tag}", "unknown element")
        index = len(layer.augmenters) + 1
        layer.augmenters.append(_parse_augmenter(child, f"{path}/augmenter[{index}]"))
    return layer


def parse_spec(data: bytes | str) -> MobileAppSpec:
    """Strict parse of the canonical XML form."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise XmlSyntax(exc.position or (0, 0), str(exc)) from None
    if root.tag != "mowa-app":
        raise SchemaViolation("/", f"root must be <mowa-app>, found <{root.tag}>")
    path = "/mowa-app"
    _check_attrs(root, path, {"name", "ns", "filename", "version", "locale"})
    _check_no_text(root, path)
    name = _require(root, path, "name")
    namespace = _require(root, path, "ns")
    filename = _require(root, path, "filename")
    version = _int(root.get("version", "1"), path, "version")
    if version != 1:
        raise SchemaViolation(path, f"unsupported version {version}")
    locale = root.get("locale", "en")

    spec = MobileAppSpec(name=name, namespace=namespace, filename=filename, version=version, locale=locale)
    seen: set[str] = set()
    for section in root:
        spath = f"{path}/{section.tag}"
        if section.tag in seen:
            raise SchemaViolation(spath, "duplicate section")
        seen.add(section.tag)
        if section.tag == "context-types":
            _check_attrs(section, spath, set())
            _check_no_text(section, spath)
            for child in section:
                if child.tag != "context-type":
                    raise SchemaViolation(f"{spath}/{child.tag}", "unknown element")
                cpath = f"{spath}/context-type"
                _check_attrs(child, cpath, {"kind"})
                kind = _require(child, cpath, "kind")
                if kind not in CONTEXT_TYPE_KINDS:
                    raise SchemaViolation(cpath, f"unknown context type {kind!r}")
                spec.context_types.add(kind)
        elif section.tag == "sensors":
            _check_attrs(section, spath, set())
            _check_no_text(section, spath)
            for child in section:
                if child.tag != "sensor":
                    raise SchemaViolation(f"{spath}/{child.tag}", "unknown element")
                cpath = f"{spath}/sensor[@id={child.get('id')!r}]"
                _check_attrs(child, cpath, {"id", "kind", "context-type", "radius-m"})
                sensor_id = _require(child, cpath, "id")
                kind = _require(child, cpath, "kind")
                if kind not in SENSOR_KINDS:
                    raise SchemaViolation(cpath, f"unknown sensor kind {kind!r}")
                context_type = _require(child, cpath, "context-type")
                if context_type not in CONTEXT_TYPE_KINDS:
                    raise SchemaViolation(cpath, f"unknown context type {context_type!r}")
                radius_raw = child.get("radius-m")
                if radius_raw is not None and kind != "gps":
                    raise SchemaViolation(cpath, "radius-m only applies to gps sensors")
                radius = _float(radius_raw, cpath, "radius-m") if radius_raw is not None else 20.0
                if radius <= 0:
                    raise SchemaViolation(cpath, "radius-m must be positive")
                spec.sensors.append(SensorDecl(sensor_id, kind, context_type, radius))
        elif section.tag == "space":
            spec.space = _parse_space(section, spath)
        elif section.tag == "layers":
            _check_attrs(section, spath, set())
            _check_no_text(section, spath)
            for child in section:
                if child.tag != "layer":
                    raise SchemaViolation(f"{spath}/{child.tag}", "unknown element")
                spec.layers.append(_parse_layer(child, f"{spath}/layer[@id={child.get('id')!r}]"))
        elif section.tag == "rules":
            _check_attrs(section, spath, set())
            _check_no_text(section, spath)
            for child in section:
                if child.tag != "rule":
                    raise SchemaViolation(f"{spath}/{child.tag}", "unknown element")
                cpath = f"{spath}/rule"
                _check_attrs(child, cpath, {"sensor", "layer"})
                spec.rules.append(ContextRule(_require(child, cpath, "sensor"), _require(child, cpath, "layer")))
        else:
            raise SchemaViolation(spath, "unknown element")

    for rule in spec.rules:
        if spec.sensor_by_id(rule.sensor_id) is None:
            raise DanglingReference(rule.sensor_id, "rule names a missing sensor")
        if spec.layer_by_id(rule.layer_id) is None:
            raise DanglingReference(rule.layer_id, "rule names a missing layer")
    return spec


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _esc(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
        .replace("\n", "&#10;")
        .replace("\r", "&#13;")
        .replace("\t", "&#9;")
    )


def _num(value: float) -> str:
    if value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


class _Writer:
    def __init__(self) -> None:
        self.lines: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']

    def emit(self, level: int, tag: str, attrs: dict[str, str], open_el: bool = False) -> None:
        parts = [f"{'  ' * level}<{tag}"]
        for name in sorted(attrs):
            parts.append(f' {name}="{_esc(attrs[name])}"')
        parts.append(">" if open_el else "/>")
        self.lines.append("".join(parts))

    def close(self, level: int, tag: str) -> None:
        self.lines.append(f"{'  ' * level}</{tag}>")

    def bytes(self) -> bytes:
        return ("\n".join(self.lines) + "\n").encode("utf-8")


def serialize_spec(spec: MobileAppSpec) -> bytes:
    """Canonical bytes. Raises InvalidSpec when validation reports errors."""
    from .validate import validate_spec

    report = validate_spec(spec)
    if not report.ok:
        first = next(issue for issue in report.issues if issue.severity == "error")
        raise InvalidSpec(f"{first.key}: {first.message}", report)

    w = _Writer()
    w.emit(
        0,
        "mowa-app",
        {
            "name": spec.name,
            "ns": spec.namespace,
            "filename": spec.filename,
            "version": str(spec.version),
            "locale": spec.locale,
        },
        open_el=True,
    )

    w.emit(1, "context-types", {}, open_el=bool(spec.context_types))
    for kind in sorted(spec.context_types, key=CONTEXT_TYPE_KINDS.index):
        w.emit(2, "context-type", {"kind": kind})
    if spec.context_types:
        w.close(1, "context-types")

    w.emit(1, "sensors", {}, open_el=bool(spec.sensors))
    for sensor in spec.sensors:
        attrs = {"id": sensor.id, "kind": sensor.kind, "context-type": sensor.context_type}
        if sensor.kind == "gps":
            attrs["radius-m"] = _num(sensor.radius_m)
        w.emit(2, "sensor", attrs)
    if spec.sensors:
        w.close(1, "sensors")

    space = spec.space
    sattrs = {"kind": space.kind}
    if space.image_url is not None:
        sattrs["image"] = space.image_url
    if space.width is not None:
        sattrs["width"] = _num(space.width)
    if space.height is not None:
        sattrs["height"] = _num(space.height)
    has_space_children = bool(space.pois or space.links or space.bands)
    w.emit(1, "space", sattrs, open_el=has_space_children)
    for poi in space.pois:
        pattrs = {
            "id": poi.id,
            "name": poi.name,
            "x": _num(poi.position.x),
            "y": _num(poi.position.y),
            "target-url": poi.target_url,
        }
        if poi.position.z is not None:
            pattrs["z"] = _num(poi.position.z)
        if poi.order is not None:
            pattrs["order"] = str(poi.order)
        if poi.code is not None:
            pattrs["code"] = poi.code
        w.emit(2, "poi", pattrs, open_el=bool(poi.props))
        for prop_name in sorted(poi.props):
            source = poi.props[prop_name]
            if isinstance(source, LiteralSource):
                w.emit(3, "prop", {"name": prop_name, "source": "literal", "value": source.value})
            else:
                w.emit(
                    3,
                    "prop",
                    {
                        "name": prop_name,
                        "source": "extract",
                        "url": source.url,
                        "xpath": source.xpath,
                        "mode": source.mode,
                    },
                )
        if poi.props:
            w.close(2, "poi")
    for from_id, to_id in space.links:
        w.emit(2, "link", {"from": from_id, "to": to_id})
    for band in space.bands:
        w.emit(
            2,
            "band",
            {
                "id": band.id,
                "label": band.label,
                "min": _num(band.min),
                "max": _num(band.max),
                "units": band.units,
            },
        )
    if has_space_children:
        w.close(1, "space")

    w.emit(1, "layers", {}, open_el=bool(spec.layers))
    for layer in spec.layers:
        if isinstance(layer.target, PatternTarget):
            lattrs = {"id": layer.id, "target": "pattern", "value": layer.target.glob}
        else:
            lattrs = {"id": layer.id, "target": "url", "value": layer.target.url}
        w.emit(2, "layer", lattrs, open_el=bool(layer.augmenters))
        for aug in layer.augmenters:
            aattrs = {"kind": aug.kind, "anchor": aug.anchor, "position": aug.position}
            w.emit(3, "augmenter", aattrs, open_el=bool(aug.params))
            for pname in sorted(aug.params):
                binding = aug.params[pname]
                bind = format_bind(binding)
                if bind is None:
                    w.emit(4, "param", {"name": pname, "value": binding.value})
                else:
                    w.emit(4, "param", {"name": pname, "bind": bind})
            if aug.params:
                w.close(3, "augmenter")
        if layer.augmenters:
            w.close(2, "layer")
    if spec.layers:
        w.close(1, "layers")

    w.emit(1, "rules", {}, open_el=bool(spec.rules))
    for rule in spec.rules:
        w.emit(2, "rule", {"sensor": rule.sensor_id, "layer": rule.layer_id})
    if spec.rules:
        w.close(1, "rules")

    w.close(0, "mowa-app")
    return w.bytes()
