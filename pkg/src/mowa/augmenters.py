"""Augmenter catalog, suggestion, rendering, and layer application.

Provides:
- catalog(): the compiled-in augmenter kinds, stable order
- suggest(): tag-based filtering by selected context types
- render(): kind + resolved params → Fragment (pure, deterministic)
- apply_layer(): strip-first, warn-don't-abort application of one layer
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .appspec.bindings import resolve_binding
from .appspec.model import Band, Layer, MobileAppSpec
from .htmldom import (
    Document,
    Element,
    Fragment,
    KIND_ATTR,
    LAYER_ATTR,
    Text,
    eval_xpath,
    insert_fragment,
    parse_xpath,
    strip_augmentations,
)

if TYPE_CHECKING:
    from .extractor import ExtractCache
    from .tour import TourState

logger = logging.getLogger(__name__)


class MissingParam(ValueError):
    def __init__(self, name: str) -> None:
        super().__init__(f"missing required parameter {name!r}")
        self.name = name


class MissingTourState(ValueError):
    def __init__(self) -> None:
        super().__init__("augmenter renders tour state but no tour was provided")


@dataclass(frozen=True)
class AugmenterKind:
    id: str
    required_params: tuple[tuple[str, str], ...]
    optional_params: tuple[tuple[str, str], ...]
    compatible_context_types: frozenset[str]
    renders_tour_state: bool = False


_CATALOG: tuple[AugmenterKind, ...] = (
    AugmenterKind(
        id="poi-info-panel",
        required_params=(
            ("title", "panel heading"),
            ("description", "panel body text"),
            ("image-url", "panel picture source"),
        ),
        optional_params=(),
        compatible_context_types=frozenset({"location"}),
    ),
    AugmenterKind(
        id="hypermedia-nav",
        required_params=(),
        optional_params=(),
        compatible_context_types=frozenset({"location"}),
        renders_tour_state=True,
    ),
    AugmenterKind(
        id="scalar-badge",
        required_params=(("label-prefix", "text before the band label"),),
        optional_params=(),
        compatible_context_types=frozenset({"light", "noise", "time", "orientation"}),
    ),
    AugmenterKind(
        id="media-volume-adapter",
        required_params=(("media-xpath", "where the media elements live"),),
        optional_params=(("volume:<band-id>", "volume value per band"),),
        compatible_context_types=frozenset({"noise"}),
    ),
    AugmenterKind(
        id="text-injector",
        required_params=(("text", "the text to inject"),),
        optional_params=(),
        compatible_context_types=frozenset({"location", "orientation", "light", "noise", "time"}),
    ),
)


def catalog() -> tuple[AugmenterKind, ...]:
    return _CATALOG


def kind_by_id(kind_id: str) -> AugmenterKind | None:
    for kind in _CATALOG:
        if kind.id == kind_id:
            return kind
    return None


def suggest(selected: set[str]) -> list[AugmenterKind]:
    return [k for k in _CATALOG if k.compatible_context_types & selected]


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _el(tag: str, attrs: dict[str, str], *children: "Element | Text") -> Element:
    element = Element(tag, attrs)
    for child in children:
        element.append(child)
    return element


def _require_params(kind: AugmenterKind, params: dict[str, str]) -> None:
    for name, _ in kind.required_params:
        if name not in params:
            raise MissingParam(name)


def render(
    kind: AugmenterKind,
    params: dict[str, str],
    tour: "TourState | None" = None,
    band: Band | None = None,
    orientation: str | None = None,
) -> Fragment:
    """Pure: same inputs produce an identical fragment."""
    _require_params(kind, params)
    if kind.renders_tour_state and tour is None:
        raise MissingTourState()

    if kind.id == "poi-info-panel":
        title = params["title"]
        node = _el(
            "div",
            {"class": "mowa-panel mowa-info-panel", KIND_ATTR: kind.id},
            _el("h2", {"class": "mowa-info-title"}, Text(title)),
            _el("p", {"class": "mowa-info-desc"}, Text(params["description"])),
            _el("img", {"class": "mowa-info-pic", "src": params["image-url"], "alt": title}),
        )
        return Fragment(nodes=[node])

    if kind.id == "hypermedia-nav":
        assert tour is not None
        total = len(tour.ordered_pois)
        if not tour.ordered_pois:
            body: Element | Text = _el("p", {"class": "mowa-nav-empty"}, Text("No tour is defined."))
        elif tour.mode == "complete":
            body = _el("p", {"class": "mowa-complete"}, Text(f"Tour complete. {total} pieces visited."))
        elif tour.mode == "wrong_piece":
            expected = tour.expected_poi()
            assert expected is not None
            name = tour.poi_names.get(expected, expected)
            body = _el(
                "p",
                {"class": "mowa-wrong-piece"},
                Text(f"This is not the piece the tour expects. Please head to: {name}."),
            )
        else:  # not_started | on_track
            expected = tour.expected_poi()
            assert expected is not None
            name = tour.poi_names.get(expected, expected)
            href = tour.poi_urls.get(expected, "")
            body = _el(
                "a",
                {"class": "mowa-walk", "data-mowa-walk": expected, "href": href},
                Text(f"Walk to: {name}"),
            )
        node = _el(
            "div",
            {"class": "mowa-panel mowa-nav", KIND_ATTR: kind.id},
            _el("p", {"class": "mowa-nav-status"}, Text(f"Tour: {len(tour.visited)}/{total} pieces visited.")),
            body,
        )
        return Fragment(nodes=[node])

    if kind.id == "scalar-badge":
        if band is not None:
            label = band.label
        elif orientation is not None:
            label = orientation
        else:
            raise MissingParam("band-or-orientation")
        node = _el(
            "span",
            {"class": "mowa-badge", KIND_ATTR: kind.id},
            Text(f"{params['label-prefix']}{label}"),
        )
        return Fragment(nodes=[node])

    if kind.id == "media-volume-adapter":
        if band is None:
            raise MissingParam("band")
        volume_key = f"volume:{band.id}"
        if volume_key not in params:
            raise MissingParam(volume_key)
        expr = parse_xpath(params["media-xpath"])
        return Fragment(nodes=[], attr_ops=[(expr, "data-mowa-volume", params[volume_key])])

    if kind.id == "text-injector":
        node = _el("div", {"class": "mowa-text", KIND_ATTR: kind.id}, Text(params["text"]))
        return Fragment(nodes=[node])

    raise ValueError(f"unknown augmenter kind {kind.id!r}")


# ---------------------------------------------------------------------------
# layer application
# ---------------------------------------------------------------------------

@dataclass
class BindingContext:
    spec: MobileAppSpec
    cache: "ExtractCache | None" = None
    poi: str | None = None
    band: Band | None = None
    orientation: str | None = None
    tour: "TourState | None" = None
    warnings: list[tuple[str, str]] = field(default_factory=list)
    applied: int = 0  # augmenters applied by the last apply_layer call

    def warn(self, key: str, detail: str) -> None:
        self.warnings.append((key, detail))
        logger.debug("augmentation warning %s: %s", key, detail)


def apply_layer(doc: Document, layer: Layer, ctx: BindingContext) -> Document:
    """Returns a new document; the input is never mutated.

    Strips the layer's previous traces first, so re-application with the
    same context is idempotent. Augmenters whose anchor matches nothing are
    skipped with a warning. Binding failures propagate; the caller keeps
    its original document.
    """
    work = doc.clone()
    strip_augmentations(work, layer.id)
    ctx.applied = 0
    for aug in layer.augmenters:
        kind = kind_by_id(aug.kind)
        if kind is None:
            ctx.warn("augmenter.unknown-kind", f"{layer.id}: {aug.kind}")
            continue
        if kind.id == "media-volume-adapter" and ctx.band is None:
            ctx.warn("augmenter.no-band", f"{layer.id}/{aug.kind} fired without an active band")
            continue
        if kind.id == "scalar-badge" and ctx.band is None and ctx.orientation is None:
            ctx.warn("augmenter.no-band", f"{layer.id}/{aug.kind} fired without a scalar context")
            continue
        params = {
            name: resolve_binding(ctx.spec, binding, ctx.poi, ctx.cache)
            for name, binding in aug.params.items()
        }
        anchors = eval_xpath(work, parse_xpath(aug.anchor))
        if not anchors:
            ctx.warn("augmenter.anchor-miss", f"{layer.id}/{aug.kind}: nothing matches {aug.anchor}")
            continue
        fragment = render(
            kind,
            params,
            tour=ctx.tour if kind.renders_tour_state else None,
            band=ctx.band,
            orientation=ctx.orientation,
        )
        for node in fragment.nodes:
            if isinstance(node, Element):
                node.attrs[LAYER_ATTR] = layer.id
        insert_fragment(work, anchors[0], aug.position, fragment)
        for expr, attr_name, value in fragment.attr_ops:
            matched = [n for n in eval_xpath(work, expr) if isinstance(n, Element)]
            if not matched:
                ctx.warn("augmenter.media-miss", f"{layer.id}/{aug.kind}: nothing matches {expr}")
            for element in matched:
                element.attrs[attr_name] = value
                element.attrs[LAYER_ATTR] = layer.id
        ctx.applied += 1
    return work
