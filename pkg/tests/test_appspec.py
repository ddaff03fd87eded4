from __future__ import annotations

import pytest

from mowa.appspec.bindings import (
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
from mowa.appspec.model import (
    Band,
    ConcreteTarget,
    ContextRule,
    DimensionalSpace,
    ExtractSource,
    Layer,
    LiteralSource,
    MobileAppSpec,
    PatternTarget,
    PointInSpace,
    PointOfInterest,
    SensorDecl,
    parse_extract_mode,
)
from mowa.appspec.validate import validate_spec
from mowa.appspec.xmlio import (
    DanglingReference,
    SchemaViolation,
    XmlSyntax,
    parse_spec,
    serialize_spec,
)

from propchecks import check_spec_roundtrip


def minimal_spec(**overrides) -> MobileAppSpec:
    base = dict(
        name="Demo",
        namespace="demo.example",
        filename="demo",
        context_types={"location"},
        sensors=[SensorDecl("q1", "qr", "location")],
        space=DimensionalSpace(
            kind="map2d",
            pois=[
                PointOfInterest(
                    id="p1",
                    name="One",
                    position=PointInSpace(10.0, 20.0),
                    target_url="https://pages.example/1",
                    order=1,
                    code="code-1",
                    props={"info": LiteralSource("hello")},
                )
            ],
        ),
        layers=[
            Layer(
                id="l1",
                target=PatternTarget("https://pages.example/*"),
                augmenters=[],
            )
        ],
        rules=[ContextRule("q1", "l1")],
    )
    base.update(overrides)
    return MobileAppSpec(**base)


# ---------------------------------------------------------------------------
# parsing the canonical XML form
# ---------------------------------------------------------------------------

def test_parse_museum_fixture_shape(museum_spec):
    assert museum_spec.name == "Pleistocene Hall Tour"
    assert museum_spec.namespace == "museum.example"
    assert museum_spec.version == 1
    assert museum_spec.context_types == {"location"}
    assert [s.kind for s in museum_spec.sensors] == ["qr"]
    assert museum_spec.space.kind == "floorplan"
    assert len(museum_spec.space.pois) == 12
    assert len(museum_spec.space.links) == 11
    assert [layer.id for layer in museum_spec.layers] == ["tour"]
    assert museum_spec.rules == [ContextRule("qr1", "tour")]


def test_parse_db_media_fixture_shape(db_media_spec):
    assert db_media_spec.space.kind == "scalar_scale"
    assert [b.id for b in db_media_spec.space.bands] == ["quiet", "normal", "noisy"]
    assert db_media_spec.space.bands[0].max == 40.0
    kinds = [a.kind for a in db_media_spec.layers[0].augmenters]
    assert kinds == ["media-volume-adapter", "scalar-badge"]


def test_fixtures_are_canonical(museum_bytes, db_media_bytes):
    assert serialize_spec(parse_spec(museum_bytes)) == museum_bytes
    assert serialize_spec(parse_spec(db_media_bytes)) == db_media_bytes


def test_roundtrip_property_over_generated_specs():
    assert check_spec_roundtrip(seed=2024, count=150) == 150


def test_serialize_is_deterministic():
    spec = minimal_spec()
    assert serialize_spec(spec) == serialize_spec(minimal_spec())


def test_parse_rejects_malformed_xml():
    with pytest.raises(XmlSyntax):
        parse_spec(b"<mowa-app name='x'")


def test_parse_rejects_wrong_root():
    with pytest.raises(SchemaViolation):
        parse_spec(b"<app/>")


def test_parse_rejects_missing_required_attrs():
    with pytest.raises(SchemaViolation, match="missing attribute"):
        parse_spec(b'<mowa-app name="x" ns="y"/>')


def test_parse_rejects_unknown_version():
    with pytest.raises(SchemaViolation, match="version"):
        parse_spec(b'<mowa-app name="x" ns="y" filename="z" version="2"/>')


def test_parse_rejects_unknown_section():
    with pytest.raises(SchemaViolation, match="unknown element"):
        parse_spec(b'<mowa-app name="x" ns="y" filename="z"><stuff/></mowa-app>')


def test_parse_rejects_unknown_attribute(museum_bytes):
    broken = museum_bytes.replace(b'kind="qr"', b'kind="qr" extra="1"', 1)
    with pytest.raises(SchemaViolation, match="unknown attribute"):
        parse_spec(broken)


def test_parse_rejects_duplicate_section():
    data = (
        b'<mowa-app name="x" ns="y" filename="z">'
        b"<context-types/><context-types/></mowa-app>"
    )
    with pytest.raises(SchemaViolation, match="duplicate section"):
        parse_spec(data)


def test_parse_rejects_bad_numbers(museum_bytes):
    broken = museum_bytes.replace(b'x="60"', b'x="sixty"', 1)
    with pytest.raises(SchemaViolation, match="not a number"):
        parse_spec(broken)


def test_parse_rejects_radius_on_non_gps():
    data = (
        b'<mowa-app name="x" ns="y" filename="z"><sensors>'
        b'<sensor id="q" kind="qr" context-type="location" radius-m="5"/>'
        b"</sensors></mowa-app>"
    )
    with pytest.raises(SchemaViolation, match="radius-m"):
        parse_spec(data)


def test_parse_rejects_stray_text():
    data = b'<mowa-app name="x" ns="y" filename="z"><rules>words</rules></mowa-app>'
    with pytest.raises(SchemaViolation, match="text"):
        parse_spec(data)


def test_parse_rejects_dangling_rule_sensor():
    data = (
        b'<mowa-app name="x" ns="y" filename="z">'
        b'<rules><rule sensor="ghost" layer="l"/></rules></mowa-app>'
    )
    with pytest.raises(DanglingReference):
        parse_spec(data)


def test_parse_rejects_dangling_link_endpoint(museum_bytes):
    broken = museum_bytes.replace(b'<link from="p1" to="p2"/>', b'<link from="p1" to="nope"/>', 1)
    with pytest.raises(DanglingReference):
        parse_spec(broken)


def test_parse_rejects_param_with_bind_and_value():
    data = (
        b'<mowa-app name="x" ns="y" filename="z"><layers>'
        b'<layer id="l" target="pattern" value="https://x.example/*">'
        b'<augmenter anchor="/html" kind="text-injector" position="after">'
        b'<param name="text" value="v" bind="poi.name"/>'
        b"</augmenter></layer></layers></mowa-app>"
    )
    with pytest.raises(SchemaViolation, match="bind or value"):
        parse_spec(data)


def test_serialize_escapes_xml_metacharacters():
    spec = minimal_spec(name='Café & <the> "one"')
    data = serialize_spec(spec)
    assert parse_spec(data).name == 'Café & <the> "one"'


def test_parse_extract_mode_grammar():
    assert parse_extract_mode("text") == ("text", None)
    assert parse_extract_mode("attribute:src") == ("attribute", "src")
    with pytest.raises(ValueError):
        parse_extract_mode("attribute:")
    with pytest.raises(ValueError):
        parse_extract_mode("inner-html")


# ---------------------------------------------------------------------------
# binding grammar
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "text,expected",
    [
        ("poi.name", PoiFieldBinding("name")),
        ("poi.target_url", PoiFieldBinding("target_url")),
        ("poi.code", PoiFieldBinding("code")),
        ("poi.prop:poi-desc", PoiPropBinding("poi-desc")),
        ("extract:https://x.example/p#//h1#text", ExtractBinding("https://x.example/p", "//h1", "text")),
    ],
)
def test_parse_bind_grammar(text, expected):
    assert parse_bind(text) == expected


@pytest.mark.parametrize("text", ["poi.", "poi.prop:", "extract:u#x", "extract:##", "name", ""])
def test_parse_bind_rejects_bad_strings(text):
    with pytest.raises(ValueError):
        parse_bind(text)


def test_format_bind_inverts_parse_bind():
    for text in ["poi.name", "poi.code", "poi.prop:p", "extract:https://u.example/#//a#text"]:
        assert format_bind(parse_bind(text)) == text
    assert format_bind(LiteralBinding("x")) is None


# ---------------------------------------------------------------------------
# binding resolution
# ---------------------------------------------------------------------------

def test_resolve_literal():
    assert resolve_binding(minimal_spec(), LiteralBinding("v")) == "v"


def test_resolve_poi_fields():
    spec = minimal_spec()
    assert resolve_binding(spec, PoiFieldBinding("name"), poi_id="p1") == "One"
    assert resolve_binding(spec, PoiFieldBinding("target_url"), poi_id="p1") == "https://pages.example/1"
    assert resolve_binding(spec, PoiFieldBinding("code"), poi_id="p1") == "code-1"


def test_resolve_poi_prop_literal():
    assert resolve_binding(minimal_spec(), PoiPropBinding("info"), poi_id="p1") == "hello"


def test_resolve_requires_poi_context():
    with pytest.raises(MissingPoiContext):
        resolve_binding(minimal_spec(), PoiFieldBinding("name"))
    with pytest.raises(MissingPoiContext):
        resolve_binding(minimal_spec(), PoiFieldBinding("name"), poi_id="ghost")


def test_resolve_unknown_prop():
    with pytest.raises(UnknownProp):
        resolve_binding(minimal_spec(), PoiPropBinding("nope"), poi_id="p1")


def test_resolve_extract_without_cache_fails():
    binding = ExtractBinding("https://x.example/p", "//h1", "text")
    with pytest.raises(ExtractionFailed):
        resolve_binding(minimal_spec(), binding)


def test_resolve_extract_through_cache(museum_spec, museum_cache):
    binding = ExtractBinding(
        "https://museum.example/collection", "//p[@id='desc-toxodon']", "text"
    )
    value = resolve_binding(museum_spec, binding, cache=museum_cache)
    assert value == (
        "A heavily built notoungulate about the size of a rhinoceros, "
        "with high-crowned teeth suited to coarse grasses."
    )


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_validate_accepts_fixtures(museum_spec, db_media_spec):
    assert validate_spec(museum_spec).ok
    assert validate_spec(db_media_spec).ok


def error_keys(spec, known_urls=None) -> set[str]:
    return {issue.key for issue in validate_spec(spec, known_urls).errors()}


def test_validate_name_empty():
    assert "app.name-empty" in error_keys(minimal_spec(name=""))


def test_validate_bad_version():
    assert "app.bad-version" in error_keys(minimal_spec(version=3))


def test_validate_duplicate_sensor_id():
    spec = minimal_spec(
        sensors=[SensorDecl("q1", "qr", "location"), SensorDecl("q1", "qr", "location")]
    )
    assert "sensor.duplicate-id" in error_keys(spec)


def test_validate_sensor_kind_mismatch():
    spec = minimal_spec(sensors=[SensorDecl("q1", "qr", "light")])
    assert "sensor.kind-mismatch" in error_keys(spec)


def test_validate_sensor_context_type_undeclared():
    spec = minimal_spec(context_types={"light"}, sensors=[SensorDecl("q1", "qr", "location")])
    assert "sensor.context-type-undeclared" in error_keys(spec)


def test_validate_gps_radius():
    spec = minimal_spec(sensors=[SensorDecl("g1", "gps", "location", radius_m=0.0)])
    assert "sensor.bad-radius" in error_keys(spec)


def test_validate_bands_in_location_space():
    spec = minimal_spec()
    spec.space.bands.append(Band("b", "B", 0.0, 1.0, "u"))
    assert "space.bands-in-location-space" in error_keys(spec)


def test_validate_pois_in_scalar_space():
    space = DimensionalSpace(
        kind="scalar_scale",
        pois=[PointOfInterest("p", "P", PointInSpace(0, 0), "https://x.example/")],
    )
    spec = minimal_spec(space=space, rules=[], layers=[])
    assert "space.pois-in-scalar-space" in error_keys(spec)


def test_validate_duplicate_poi_attributes():
    spec = minimal_spec()
    spec.space.pois.append(
        PointOfInterest("p1", "Two", PointInSpace(1, 1), "https://x.example/2", order=1, code="code-1")
    )
    keys = error_keys(spec)
    assert {"poi.duplicate-id", "poi.duplicate-order", "poi.duplicate-code"} <= keys


def test_validate_poi_out_of_bounds():
    space = DimensionalSpace(
        kind="floorplan",
        width=100.0,
        height=100.0,
        pois=[PointOfInterest("p1", "P", PointInSpace(150.0, 10.0), "https://x.example/")],
    )
    assert "poi.out-of-bounds" in error_keys(minimal_spec(space=space, rules=[]))


def test_validate_poi_position_not_finite():
    spec = minimal_spec()
    spec.space.pois[0].position = PointInSpace(float("nan"), 0.0)
    assert "poi.position-not-finite" in error_keys(spec)


def test_validate_poi_target_not_absolute():
    spec = minimal_spec()
    spec.space.pois[0].target_url = "/relative"
    assert "poi.target-not-absolute" in error_keys(spec)


def test_validate_poi_without_order_in_linked_space_warns():
    spec = minimal_spec()
    spec.space.pois.append(
        PointOfInterest("p2", "Two", PointInSpace(1, 1), "https://x.example/2")
    )
    spec.space.links.append(("p1", "p2"))
    report = validate_spec(spec)
    assert report.ok
    assert "poi.no-order" in {issue.key for issue in report.warnings()}


def test_validate_band_rules():
    space = DimensionalSpace(
        kind="scalar_scale",
        bands=[
            Band("b1", "A", 0.0, 10.0, "u"),
            Band("b1", "B", 10.0, 10.0, "u"),
            Band("b2", "C", 5.0, 15.0, "u"),
        ],
    )
    keys = error_keys(minimal_spec(space=space, rules=[], layers=[], sensors=[], context_types=set()))
    assert {"band.duplicate-id", "band.empty-range", "band.overlap"} <= keys


def test_validate_link_dangling():
    spec = minimal_spec()
    spec.space.links.append(("p1", "ghost"))
    assert "link.dangling" in error_keys(spec)


def test_validate_links_not_a_chain():
    spec = minimal_spec()
    for i in (2, 3):
        spec.space.pois.append(
            PointOfInterest(f"p{i}", f"P{i}", PointInSpace(i, i), f"https://x.example/{i}", order=i)
        )
    spec.space.links.extend([("p1", "p2"), ("p1", "p3")])  # branch
    assert "links.not-a-chain" in error_keys(spec)

    cyclic = minimal_spec()
    cyclic.space.pois.append(
        PointOfInterest("p2", "P2", PointInSpace(2, 2), "https://x.example/2", order=2)
    )
    cyclic.space.links.extend([("p1", "p2"), ("p2", "p1")])
    assert "links.not-a-chain" in error_keys(cyclic)


def test_validate_layer_errors():
    spec = minimal_spec(
        layers=[
            Layer("l1", PatternTarget("")),
            Layer("l1", ConcreteTarget("not-a-url")),
        ],
        rules=[],
    )
    keys = error_keys(spec)
    assert {"layer.duplicate-id", "layer.empty-pattern", "layer.target-not-absolute"} <= keys


def test_validate_poi_target_token_is_a_valid_concrete_target():
    from mowa.appspec.model import POI_TARGET_TOKEN

    spec = minimal_spec(layers=[Layer("l1", ConcreteTarget(POI_TARGET_TOKEN))])
    assert validate_spec(spec).ok


def test_validate_augmenter_errors():
    from mowa.appspec.model import AugmenterInstance

    spec = minimal_spec()
    spec.layers[0].augmenters = [
        AugmenterInstance("no-such-kind", "/html", "after", {}),
        AugmenterInstance("text-injector", "html", "after", {"text": LiteralBinding("x")}),
        AugmenterInstance("text-injector", "/html", "inside", {"text": LiteralBinding("x")}),
        AugmenterInstance("text-injector", "/html", "after", {}),
    ]
    keys = error_keys(spec)
    assert {
        "augmenter.unknown-kind",
        "augmenter.anchor-syntax",
        "augmenter.bad-position",
        "augmenter.missing-param",
    } <= keys


def test_validate_volume_params_required_per_band(db_media_spec):
    adapter = db_media_spec.layers[0].augmenters[0]
    del adapter.params["volume:noisy"]
    assert "augmenter.missing-param" in error_keys(db_media_spec)


def test_validate_binding_errors():
    from mowa.appspec.model import AugmenterInstance

    spec = minimal_spec()
    spec.layers[0].augmenters = [
        AugmenterInstance(
            "text-injector",
            "/html",
            "after",
            {"text": PoiPropBinding("ghost-prop")},
        ),
        AugmenterInstance(
            "text-injector",
            "/html",
            "before",
            {"text": ExtractBinding("https://x.example/p", "not-an-xpath", "text")},
        ),
    ]
    keys = error_keys(spec)
    assert {"binding.unknown-prop", "binding.xpath-syntax"} <= keys


def test_validate_rule_references():
    spec = minimal_spec(rules=[ContextRule("ghost", "l1"), ContextRule("q1", "ghost")])
    keys = error_keys(spec)
    assert {"rule.dangling-sensor", "rule.dangling-layer"} <= keys


def test_validate_known_urls_warning():
    spec = minimal_spec()
    spec.space.pois[0].props["remote"] = ExtractSource(
        url="https://elsewhere.example/p", xpath="//h1", mode="text"
    )
    report = validate_spec(spec, known_urls={"https://pages.example/1"})
    assert report.ok
    assert "prop.extract-url-unknown" in {issue.key for issue in report.warnings()}
