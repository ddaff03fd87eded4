from __future__ import annotations

import pytest

from mowa.appspec.bindings import LiteralBinding, MissingPoiContext, PoiFieldBinding
from mowa.appspec.model import (
    AugmenterInstance,
    Band,
    ConcreteTarget,
    DimensionalSpace,
    Layer,
    MobileAppSpec,
    PatternTarget,
    PointInSpace,
    PointOfInterest,
    SensorDecl,
)
from mowa.augmenters import (
    BindingContext,
    MissingParam,
    MissingTourState,
    apply_layer,
    catalog,
    kind_by_id,
    render,
    suggest,
)
from mowa.htmldom import isomorphic, parse_html, serialize_html
from mowa.tour import TourState, new_tour


def spec_with(layer: Layer) -> MobileAppSpec:
    return MobileAppSpec(
        name="T",
        namespace="t.example",
        filename="t",
        context_types={"location"},
        sensors=[SensorDecl("q1", "qr", "location")],
        space=DimensionalSpace(
            kind="map2d",
            pois=[
                PointOfInterest(
                    "p1", "First Piece", PointInSpace(0.0, 0.0), "https://pages.example/1", order=1
                )
            ],
        ),
        layers=[layer],
    )


def ctx_for(spec: MobileAppSpec, **kw) -> BindingContext:
    return BindingContext(spec=spec, **kw)


BAND = Band("noisy", "Noisy", 70.0, 120.0, "dB")


# ---------------------------------------------------------------------------
# catalog and suggestion
# ---------------------------------------------------------------------------

def test_catalog_lists_five_kinds_in_stable_order():
    ids = [k.id for k in catalog()]
    assert ids == [
        "poi-info-panel",
        "hypermedia-nav",
        "scalar-badge",
        "media-volume-adapter",
        "text-injector",
    ]
    assert [k.id for k in catalog()] == ids  # repeated calls agree


def test_kind_by_id():
    assert kind_by_id("scalar-badge") is catalog()[2]
    assert kind_by_id("nope") is None


def test_suggest_filters_by_context_types():
    assert [k.id for k in suggest({"location"})] == [
        "poi-info-panel",
        "hypermedia-nav",
        "text-injector",
    ]
    assert [k.id for k in suggest({"noise"})] == [
        "scalar-badge",
        "media-volume-adapter",
        "text-injector",
    ]
    assert [k.id for k in suggest({"time"})] == ["scalar-badge", "text-injector"]
    assert suggest(set()) == []


def test_suggest_monotone_in_selection():
    small = {k.id for k in suggest({"light"})}
    large = {k.id for k in suggest({"light", "location", "noise"})}
    assert small <= large


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_into_div(fragment) -> bytes:
    doc = parse_html("<div></div>")
    for node in fragment.nodes:
        doc.root.append(node)
    return serialize_html(doc)


def test_render_info_panel_golden():
    frag = render(
        kind_by_id("poi-info-panel"),
        {"title": "Toxodon", "description": "Big.", "image-url": "https://x.example/t.png"},
    )
    assert render_into_div(frag) == (
        b'<div><div class="mowa-panel mowa-info-panel" data-mowa-kind="poi-info-panel">'
        b'<h2 class="mowa-info-title">Toxodon</h2>'
        b'<p class="mowa-info-desc">Big.</p>'
        b'<img class="mowa-info-pic" src="https://x.example/t.png" alt="Toxodon">'
        b"</div></div>"
    )


def test_render_info_panel_missing_param():
    with pytest.raises(MissingParam):
        render(kind_by_id("poi-info-panel"), {"title": "x", "description": "y"})


def test_render_text_injector_golden():
    frag = render(kind_by_id("text-injector"), {"text": "hi there"})
    assert render_into_div(frag) == (
        b'<div><div class="mowa-text" data-mowa-kind="text-injector">hi there</div></div>'
    )


def test_render_is_deterministic():
    a = render(kind_by_id("text-injector"), {"text": "same"})
    b = render(kind_by_id("text-injector"), {"text": "same"})
    assert render_into_div(a) == render_into_div(b)


def test_render_scalar_badge_with_band():
    frag = render(kind_by_id("scalar-badge"), {"label-prefix": "Noise: "}, band=BAND)
    assert b">Noise: Noisy<" in render_into_div(frag)


def test_render_scalar_badge_with_orientation():
    frag = render(kind_by_id("scalar-badge"), {"label-prefix": "Mode: "}, orientation="landscape")
    assert b">Mode: landscape<" in render_into_div(frag)


def test_render_scalar_badge_needs_scalar_context():
    with pytest.raises(MissingParam):
        render(kind_by_id("scalar-badge"), {"label-prefix": "x"})


def test_render_volume_adapter_emits_attr_ops_only():
    frag = render(
        kind_by_id("media-volume-adapter"),
        {"media-xpath": "//video", "volume:noisy": "0.9"},
        band=BAND,
    )
    assert frag.nodes == []
    [(expr, name, value)] = frag.attr_ops
    assert str(expr) == "//video"
    assert (name, value) == ("data-mowa-volume", "0.9")


def test_render_volume_adapter_needs_band_and_volume_param():
    kind = kind_by_id("media-volume-adapter")
    with pytest.raises(MissingParam):
        render(kind, {"media-xpath": "//video", "volume:noisy": "0.9"})
    with pytest.raises(MissingParam):
        render(kind, {"media-xpath": "//video"}, band=BAND)


def make_tour(**kw) -> TourState:
    base = dict(
        ordered_pois=["p1", "p2"],
        poi_names={"p1": "First", "p2": "Second"},
        poi_urls={"p1": "https://pages.example/1", "p2": "https://pages.example/2"},
    )
    base.update(kw)
    return TourState(**base)


def test_render_nav_not_started_points_at_first():
    frag = render(kind_by_id("hypermedia-nav"), {}, tour=make_tour())
    html = render_into_div(frag).decode("utf-8")
    assert "Tour: 0/2 pieces visited." in html
    assert 'data-mowa-walk="p1"' in html
    assert "Walk to: First" in html


def test_render_nav_on_track_names_next_poi():
    tour = make_tour(expected_index=1, visited={"p1"}, mode="on_track")
    html = render_into_div(render(kind_by_id("hypermedia-nav"), {}, tour=tour)).decode("utf-8")
    assert "Tour: 1/2 pieces visited." in html
    assert "Walk to: Second" in html


def test_render_nav_wrong_piece_names_expected_poi():
    tour = make_tour(expected_index=1, visited={"p1"}, mode="wrong_piece")
    html = render_into_div(render(kind_by_id("hypermedia-nav"), {}, tour=tour)).decode("utf-8")
    assert "This is not the piece the tour expects. Please head to: Second." in html
    assert "mowa-walk" not in html


def test_render_nav_complete():
    tour = make_tour(expected_index=2, visited={"p1", "p2"}, mode="complete")
    html = render_into_div(render(kind_by_id("hypermedia-nav"), {}, tour=tour)).decode("utf-8")
    assert "Tour complete. 2 pieces visited." in html


def test_render_nav_empty_tour():
    tour = TourState(ordered_pois=[], poi_names={}, poi_urls={})
    html = render_into_div(render(kind_by_id("hypermedia-nav"), {}, tour=tour)).decode("utf-8")
    assert "No tour is defined." in html


def test_render_nav_requires_tour():
    with pytest.raises(MissingTourState):
        render(kind_by_id("hypermedia-nav"), {})


# ---------------------------------------------------------------------------
# layer application
# ---------------------------------------------------------------------------

PAGE = "<html><body><p>content</p><video src='clip.mp4'></video></body></html>"


def injector_layer(anchor: str = "//body", position: str = "last_child") -> Layer:
    return Layer(
        id="l1",
        target=PatternTarget("https://pages.example/*"),
        augmenters=[
            AugmenterInstance(
                "text-injector", anchor, position, {"text": LiteralBinding("injected")}
            )
        ],
    )


def test_apply_layer_inserts_marked_nodes():
    layer = injector_layer()
    spec = spec_with(layer)
    ctx = ctx_for(spec)
    woven = apply_layer(parse_html(PAGE), layer, ctx)
    html = serialize_html(woven).decode("utf-8")
    assert 'data-mowa-layer="l1"' in html and "injected" in html
    assert ctx.applied == 1 and ctx.warnings == []


def test_apply_layer_does_not_mutate_input():
    layer = injector_layer()
    doc = parse_html(PAGE)
    before = serialize_html(doc)
    apply_layer(doc, layer, ctx_for(spec_with(layer)))
    assert serialize_html(doc) == before


def test_apply_layer_idempotent():
    layer = injector_layer()
    spec = spec_with(layer)
    doc = parse_html(PAGE)
    once = apply_layer(doc, layer, ctx_for(spec))
    twice = apply_layer(once, layer, ctx_for(spec))
    assert serialize_html(once) == serialize_html(twice)


def test_apply_layer_reversible():
    from mowa.htmldom import strip_augmentations

    layer = injector_layer()
    doc = parse_html(PAGE)
    woven = apply_layer(doc, layer, ctx_for(spec_with(layer)))
    assert isomorphic(strip_augmentations(woven), doc)


def test_apply_layer_attr_mutation_idempotent_and_reversible():
    from mowa.htmldom import strip_augmentations

    layer = Layer(
        id="vol",
        target=PatternTarget("https://videos.example/*"),
        augmenters=[
            AugmenterInstance(
                "media-volume-adapter",
                "/html/body",
                "first_child",
                {
                    "media-xpath": LiteralBinding("//video"),
                    "volume:noisy": LiteralBinding("0.9"),
                },
            )
        ],
    )
    spec = spec_with(layer)
    doc = parse_html(PAGE)
    ctx = ctx_for(spec, band=BAND)
    once = apply_layer(doc, layer, ctx)
    assert b'data-mowa-volume="0.9"' in serialize_html(once)
    twice = apply_layer(once, layer, ctx_for(spec, band=BAND))
    assert serialize_html(once) == serialize_html(twice)
    assert isomorphic(strip_augmentations(twice), doc)


def test_apply_layer_anchor_miss_warns_and_skips():
    layer = injector_layer(anchor="//table")
    ctx = ctx_for(spec_with(layer))
    woven = apply_layer(parse_html(PAGE), layer, ctx)
    assert ctx.applied == 0
    assert [k for k, _ in ctx.warnings] == ["augmenter.anchor-miss"]
    assert isomorphic(woven, parse_html(PAGE))


def test_apply_layer_unknown_kind_warns():
    layer = Layer(
        id="l1",
        target=PatternTarget("*"),
        augmenters=[AugmenterInstance("mystery", "/html", "after", {})],
    )
    ctx = ctx_for(spec_with(layer))
    apply_layer(parse_html(PAGE), layer, ctx)
    assert [k for k, _ in ctx.warnings] == ["augmenter.unknown-kind"]


def test_apply_layer_volume_without_band_warns():
    layer = Layer(
        id="vol",
        target=PatternTarget("*"),
        augmenters=[
            AugmenterInstance(
                "media-volume-adapter",
                "/html/body",
                "first_child",
                {"media-xpath": LiteralBinding("//video"), "volume:noisy": LiteralBinding("0.9")},
            )
        ],
    )
    ctx = ctx_for(spec_with(layer))
    woven = apply_layer(parse_html(PAGE), layer, ctx)
    assert [k for k, _ in ctx.warnings] == ["augmenter.no-band"]
    assert isomorphic(woven, parse_html(PAGE))


def test_apply_layer_media_miss_warns():
    layer = Layer(
        id="vol",
        target=PatternTarget("*"),
        augmenters=[
            AugmenterInstance(
                "media-volume-adapter",
                "/html/body",
                "first_child",
                {"media-xpath": LiteralBinding("//audio"), "volume:noisy": LiteralBinding("0.9")},
            )
        ],
    )
    ctx = ctx_for(spec_with(layer), band=BAND)
    apply_layer(parse_html(PAGE), layer, ctx)
    assert [k for k, _ in ctx.warnings] == ["augmenter.media-miss"]


def test_apply_layer_binding_failure_propagates_keeping_caller_doc():
    layer = Layer(
        id="l1",
        target=ConcreteTarget("https://pages.example/1"),
        augmenters=[
            AugmenterInstance(
                "text-injector", "//body", "last_child", {"text": PoiFieldBinding("name")}
            )
        ],
    )
    doc = parse_html(PAGE)
    before = serialize_html(doc)
    with pytest.raises(MissingPoiContext):
        apply_layer(doc, layer, ctx_for(spec_with(layer)))  # no PoI in context
    assert serialize_html(doc) == before


def test_apply_layer_resolves_poi_bindings():
    layer = Layer(
        id="l1",
        target=ConcreteTarget("https://pages.example/1"),
        augmenters=[
            AugmenterInstance(
                "text-injector", "//body", "last_child", {"text": PoiFieldBinding("name")}
            )
        ],
    )
    ctx = ctx_for(spec_with(layer), poi="p1")
    woven = apply_layer(parse_html(PAGE), layer, ctx)
    assert b"First Piece" in serialize_html(woven)


def test_apply_layer_strips_only_its_own_traces():
    first = injector_layer()
    second = Layer(
        id="l2",
        target=PatternTarget("*"),
        augmenters=[
            AugmenterInstance(
                "text-injector", "//body", "first_child", {"text": LiteralBinding("other")}
            )
        ],
    )
    spec = spec_with(first)
    spec.layers.append(second)
    doc = parse_html(PAGE)
    woven = apply_layer(doc, first, ctx_for(spec))
    woven = apply_layer(woven, second, ctx_for(spec))
    again = apply_layer(woven, first, ctx_for(spec))
    html = serialize_html(again).decode("utf-8")
    assert html.count("injected") == 1 and html.count("other") == 1


def test_nav_tour_rendering_through_apply_layer(museum_spec, museum_corpus, museum_cache):
    tour = new_tour(museum_spec.space)
    layer = museum_spec.layer_by_id("tour")
    page = museum_corpus.load("https://en.wikipedia.org/wiki/Toxodon")
    ctx = BindingContext(spec=museum_spec, cache=museum_cache, poi="p1", tour=tour)
    woven = apply_layer(page, layer, ctx)
    html = serialize_html(woven).decode("utf-8")
    assert "Walk to: Toxodon" in html  # not visited yet: tour still points at p1
    assert ctx.applied == 2
