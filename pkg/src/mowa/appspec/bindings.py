"""Augmenter parameter bindings: grammar, resolution.

Bind strings (the `bind` attribute of `<param>`):
- absent           → literal (the `value` attribute)
- poi.name | poi.target_url | poi.code
- poi.prop:<name>
- extract:<url>#<xpath>#<mode>      mode: text | attribute:<name>

Resolution turns any Binding into a plain string or raises one of exactly
three errors: MissingPoiContext, UnknownProp, ExtractionFailed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from .model import ExtractSource, LiteralSource, MobileAppSpec

if TYPE_CHECKING:
    from ..extractor import ExtractCache


class BindingError(Exception):
    """Base for the three binding resolution failures."""


class MissingPoiContext(BindingError):
    def __init__(self, detail: str = "binding needs a matched PoI") -> None:
        super().__init__(detail)


class UnknownProp(BindingError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unknown property {name!r}")
        self.name = name


class ExtractionFailed(BindingError):
    def __init__(self, url: str, xpath: str, detail: str = "") -> None:
        super().__init__(f"extraction failed for {xpath!r} at {url}" + (f": {detail}" if detail else ""))
        self.url = url
        self.xpath = xpath


@dataclass(frozen=True)
class LiteralBinding:
    value: str


@dataclass(frozen=True)
class PoiFieldBinding:
    field: str  # name | target_url | code


@dataclass(frozen=True)
class PoiPropBinding:
    prop: str


@dataclass(frozen=True)
class ExtractBinding:
    url: str
    xpath: str
    mode: str


Binding = Union[LiteralBinding, PoiFieldBinding, PoiPropBinding, ExtractBinding]

POI_FIELDS = ("name", "target_url", "code")


def parse_bind(bind: str) -> Binding:
    """Parse a non-literal bind string. Raises ValueError outside the grammar."""
    if bind in ("poi.name", "poi.target_url", "poi.code"):
        return PoiFieldBinding(bind.split(".", 1)[1])
    if bind.startswith("poi.prop:"):
        prop = bind[len("poi.prop:") :]
        if not prop:
            raise ValueError("empty property name in bind")
        return PoiPropBinding(prop)
    if bind.startswith("extract:"):
        rest = bind[len("extract:") :]
        parts = rest.split("#")
        if len(parts) != 3:
            raise ValueError("extract bind needs url#xpath#mode")
        url, xpath, mode = parts
        if not url or not xpath or not mode:
            raise ValueError("extract bind needs url#xpath#mode")
        return ExtractBinding(url, xpath, mode)
    raise ValueError(f"unknown bind {bind!r}")


def format_bind(binding: Binding) -> str | None:
    """Inverse of parse_bind; None for literals (they use the value attribute)."""
    if isinstance(binding, LiteralBinding):
        return None
    if isinstance(binding, PoiFieldBinding):
        return f"poi.{binding.field}"
    if isinstance(binding, PoiPropBinding):
        return f"poi.prop:{binding.prop}"
    if isinstance(binding, ExtractBinding):
        return f"extract:{binding.url}#{binding.xpath}#{binding.mode}"
    raise TypeError(f"not a binding: {binding!r}")


def _extract(url: str, xpath: str, mode: str, cache: "ExtractCache | None") -> str:
    from ..extractor import ExtractorError, extract
    from ..htmldom import XPathSyntax, parse_xpath

    if cache is None:
        raise ExtractionFailed(url, xpath, "no extraction cache configured")
    try:
        expr = parse_xpath(xpath)
    except XPathSyntax as exc:
        raise ExtractionFailed(url, xpath, str(exc)) from exc
    try:
        return extract(url, expr, mode, cache)
    except ExtractorError as exc:
        raise ExtractionFailed(url, xpath, str(exc)) from exc


def resolve_binding(
    spec: MobileAppSpec,
    binding: Binding,
    poi_id: str | None = None,
    cache: "ExtractCache | None" = None,
) -> str:
    if isinstance(binding, LiteralBinding):
        return binding.value
    if isinstance(binding, ExtractBinding):
        return _extract(binding.url, binding.xpath, binding.mode, cache)
    # the two PoI-dependent variants
    if poi_id is None:
        raise MissingPoiContext()
    poi = spec.space.poi_by_id(poi_id)
    if poi is None:
        raise MissingPoiContext(f"PoI {poi_id!r} is not in the space")
    if isinstance(binding, PoiFieldBinding):
        if binding.field == "name":
            return poi.name
        if binding.field == "target_url":
            return poi.target_url
        if binding.field == "code":
            if poi.code is None:
                raise UnknownProp("code")
            return poi.code
        raise UnknownProp(binding.field)
    if isinstance(binding, PoiPropBinding):
        source = poi.props.get(binding.prop)
        if source is None:
            raise UnknownProp(binding.prop)
        if isinstance(source, LiteralSource):
            return source.value
        assert isinstance(source, ExtractSource)
        return _extract(source.url, source.xpath, source.mode, cache)
    raise TypeError(f"not a binding: {binding!r}")
