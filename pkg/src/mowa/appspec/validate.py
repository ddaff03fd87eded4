"""Whole-spec validation.

Pure and total: never raises, same spec → same report. Issue keys double as
i18n catalog keys for the service's localized error bodies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from urllib.parse import urlsplit

from .bindings import ExtractBinding, LiteralBinding, PoiPropBinding
from .model import (
    CONTEXT_TYPE_KINDS,
    ConcreteTarget,
    LOCATION_SPACE_KINDS,
    MobileAppSpec,
    PatternTarget,
    POI_TARGET_TOKEN,
    POSITIONS,
    SCALAR_SPACE_KINDS,
    SENSOR_KINDS,
    ExtractSource,
)


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    path: str
    key: str
    message: str


@dataclass
class ValidationReport:
    ok: bool = True
    issues: list[Issue] = field(default_factory=list)

    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]

    def warnings(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "warning"]


class _Collector:
    def __init__(self) -> None:
        self.issues: list[Issue] = []

    def error(self, path: str, key: str, message: str) -> None:
        self.issues.append(Issue("error", path, key, message))

    def warning(self, path: str, key: str, message: str) -> None:
        self.issues.append(Issue("warning", path, key, message))


def _is_absolute_url(url: str) -> bool:
    parts = urlsplit(url)
    return bool(parts.scheme) and bool(parts.netloc)


def _check_chain(links: list[tuple[str, str]], out: _Collector, path: str) -> None:
    """Non-empty links must form one linear chain (unique root, no cycle)."""
    outgoing: dict[str, str] = {}
    incoming: dict[str, str] = {}
    for from_id, to_id in links:
        if from_id in outgoing or to_id in incoming:
            out.error(path, "links.not-a-chain", "links do not form a single chain")
            return
        outgoing[from_id] = to_id
        incoming[to_id] = from_id
    roots = [poi for poi in outgoing if poi not in incoming]
    if len(roots) != 1:
        out.error(path, "links.not-a-chain", "links do not form a single chain")
        return
    seen = 0
    current: str | None = roots[0]
    while current is not None and seen <= len(links):
        current = outgoing.get(current)
        seen += 1
    if seen != len(links) + 1:
        out.error(path, "links.not-a-chain", "links do not form a single chain")


def validate_spec(spec: MobileAppSpec, known_urls: set[str] | None = None) -> ValidationReport:
    """known_urls: normalized URLs reachable offline (corpus + cache); when
    provided, extract sources pointing elsewhere get a warning."""
    out = _Collector()

    if not spec.name:
        out.error("/mowa-app", "app.name-empty", "application name must not be empty")
    if spec.version != 1:
        out.error("/mowa-app", "app.bad-version", f"unsupported version {spec.version}")

    # sensors
    seen_sensor_ids: set[str] = set()
    for sensor in spec.sensors:
        path = f"/sensors/sensor[@id={sensor.id!r}]"
        if sensor.id in seen_sensor_ids:
            out.error(path, "sensor.duplicate-id", f"duplicate sensor id {sensor.id!r}")
        seen_sensor_ids.add(sensor.id)
        expected = SENSOR_KINDS.get(sensor.kind)
        if expected is None:
            out.error(path, "sensor.unknown-kind", f"unknown sensor kind {sensor.kind!r}")
        elif sensor.context_type != expected:
            out.error(
                path,
                "sensor.kind-mismatch",
                f"sensor kind {sensor.kind!r} observes {expected!r}, not {sensor.context_type!r}",
            )
        if sensor.context_type in CONTEXT_TYPE_KINDS and sensor.context_type not in spec.context_types:
            out.error(
                path,
                "sensor.context-type-undeclared",
                f"context type {sensor.context_type!r} is not declared by the application",
            )
        if sensor.kind == "gps" and not sensor.radius_m > 0:
            out.error(path, "sensor.bad-radius", "gps radius must be positive meters")

    # space
    space = spec.space
    spath = "/space"
    if space.kind in LOCATION_SPACE_KINDS and space.bands:
        out.error(spath, "space.bands-in-location-space", "location spaces take PoIs, not bands")
    if space.kind in SCALAR_SPACE_KINDS and space.pois:
        out.error(spath, "space.pois-in-scalar-space", "scalar spaces take bands, not PoIs")

    seen_poi_ids: set[str] = set()
    seen_orders: set[int] = set()
    seen_codes: set[str] = set()
    for poi in space.pois:
        path = f"/space/poi[@id={poi.id!r}]"
        if poi.id in seen_poi_ids:
            out.error(path, "poi.duplicate-id", f"duplicate PoI id {poi.id!r}")
        seen_poi_ids.add(poi.id)
        if poi.order is not None:
            if poi.order in seen_orders:
                out.error(path, "poi.duplicate-order", f"duplicate PoI order {poi.order}")
            seen_orders.add(poi.order)
        if poi.code is not None:
            if poi.code in seen_codes:
                out.error(path, "poi.duplicate-code", f"duplicate PoI code {poi.code!r}")
            seen_codes.add(poi.code)
        coords = (poi.position.x, poi.position.y) + (() if poi.position.z is None else (poi.position.z,))
        if not all(math.isfinite(c) for c in coords):
            out.error(path, "poi.position-not-finite", "PoI coordinates must be finite")
        elif space.kind == "floorplan" and space.width is not None and space.height is not None:
            if not (0 <= poi.position.x <= space.width and 0 <= poi.position.y <= space.height):
                out.error(path, "poi.out-of-bounds", "PoI lies outside the floor plan")
        if not _is_absolute_url(poi.target_url):
            out.error(path, "poi.target-not-absolute", f"target URL {poi.target_url!r} is not absolute")
        if space.links and poi.order is None:
            out.warning(path, "poi.no-order", f"PoI {poi.id!r} has no order in a linked space")
        for prop_name, source in poi.props.items():
            ppath = f"{path}/prop[@name={prop_name!r}]"
            if isinstance(source, ExtractSource):
                _check_xpath(source.xpath, out, ppath, "prop.xpath-syntax")
                if known_urls is not None:
                    from ..urls import normalize_url

                    if normalize_url(source.url) not in known_urls:
                        out.warning(
                            ppath,
                            "prop.extract-url-unknown",
                            f"extract URL {source.url} is not in any known corpus",
                        )

    seen_band_ids: set[str] = set()
    for band in space.bands:
        path = f"/space/band[@id={band.id!r}]"
        if band.id in seen_band_ids:
            out.error(path, "band.duplicate-id", f"duplicate band id {band.id!r}")
        seen_band_ids.add(band.id)
        if not band.min < band.max:
            out.error(path, "band.empty-range", f"band [{band.min}, {band.max}) is empty")
    for i, a in enumerate(space.bands):
        for b in space.bands[i + 1 :]:
            if a.min < b.max and b.min < a.max:
                out.error(
                    f"/space/band[@id={b.id!r}]",
                    "band.overlap",
                    f"band {b.id!r} overlaps band {a.id!r}",
                )

    for from_id, to_id in space.links:
        for ref in (from_id, to_id):
            if space.poi_by_id(ref) is None:
                out.error("/space", "link.dangling", f"link endpoint {ref!r} is not a PoI")
    if space.links and all(space.poi_by_id(r) is not None for pair in space.links for r in pair):
        _check_chain(space.links, out, "/space")

    # layers
    from ..augmenters import catalog  # late import: augmenters depends on this package

    kinds = {k.id: k for k in catalog()}
    seen_layer_ids: set[str] = set()
    for layer in spec.layers:
        lpath = f"/layers/layer[@id={layer.id!r}]"
        if layer.id in seen_layer_ids:
            out.error(lpath, "layer.duplicate-id", f"duplicate layer id {layer.id!r}")
        seen_layer_ids.add(layer.id)
        if isinstance(layer.target, PatternTarget):
            if not layer.target.glob:
                out.error(lpath, "layer.empty-pattern", "pattern target must not be empty")
        elif isinstance(layer.target, ConcreteTarget):
            if layer.target.url != POI_TARGET_TOKEN and not _is_absolute_url(layer.target.url):
                out.error(lpath, "layer.target-not-absolute", f"target URL {layer.target.url!r} is not absolute")
        for index, aug in enumerate(layer.augmenters, start=1):
            apath = f"{lpath}/augmenter[{index}]"
            kind = kinds.get(aug.kind)
            if kind is None:
                out.error(apath, "augmenter.unknown-kind", f"unknown augmenter kind {aug.kind!r}")
            if aug.position not in POSITIONS:
                out.error(apath, "augmenter.bad-position", f"unknown position {aug.position!r}")
            _check_xpath(aug.anchor, out, apath, "augmenter.anchor-syntax")
            if kind is not None:
                required = [name for name, _ in kind.required_params]
                if kind.id == "media-volume-adapter":
                    required += [f"volume:{band.id}" for band in space.bands]
                for name in required:
                    if name not in aug.params:
                        out.error(apath, "augmenter.missing-param", f"missing required param {name!r}")
                if kind.id == "media-volume-adapter":
                    media_xpath = aug.params.get("media-xpath")
                    if isinstance(media_xpath, LiteralBinding):
                        _check_xpath(media_xpath.value, out, apath, "binding.xpath-syntax")
            for pname, binding in aug.params.items():
                bpath = f"{apath}/param[@name={pname!r}]"
                if isinstance(binding, PoiPropBinding):
                    if not any(binding.prop in poi.props for poi in space.pois):
                        out.error(
                            bpath,
                            "binding.unknown-prop",
                            f"property {binding.prop!r} exists on no PoI",
                        )
                elif isinstance(binding, ExtractBinding):
                    _check_xpath(binding.xpath, out, bpath, "binding.xpath-syntax")
                    if known_urls is not None:
                        from ..urls import normalize_url

                        if normalize_url(binding.url) not in known_urls:
                            out.warning(
                                bpath,
                                "binding.extract-url-unknown",
                                f"extract URL {binding.url} is not in any known corpus",
                            )

    # rules
    for index, rule in enumerate(spec.rules, start=1):
        rpath = f"/rules/rule[{index}]"
        if spec.sensor_by_id(rule.sensor_id) is None:
            out.error(rpath, "rule.dangling-sensor", f"rule names missing sensor {rule.sensor_id!r}")
        if spec.layer_by_id(rule.layer_id) is None:
            out.error(rpath, "rule.dangling-layer", f"rule names missing layer {rule.layer_id!r}")

    report = ValidationReport(issues=out.issues)
    report.ok = not any(issue.severity == "error" for issue in out.issues)
    return report


def _check_xpath(source: str, out: _Collector, path: str, key: str) -> None:
    from ..htmldom import XPathSyntax, parse_xpath

    try:
        parse_xpath(source)
    except XPathSyntax as exc:
        out.error(path, key, str(exc))
